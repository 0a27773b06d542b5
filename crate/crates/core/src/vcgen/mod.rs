//! Executability of policies: each instruction's precondition must hold in
//! the state produced by the instructions before it.
//!
//! A policy runs as a [`Plan`]:
//!
//! * **setup**: every person the run never creates gets a background account
//!   (a `create-account` with a fresh content id past the named contents);
//! * **steps**: the policy body. A policy `P after Q` runs P's leading
//!   `create-account` instructions, then Q's plan steps, then the rest of P.
//!   A `create-list` of an environment-bound list also adds the list's
//!   members (see [`env`]).
//!
//! Executability is decided two ways. [`reduce`] walks the steps and stops
//! at the first failing guard. [`literal`] builds the nested chain
//! `VC_i = p_i ∧ (q_i ⇒ VC_{i+1})` over explicit poststates and evaluates
//! `⋀ VC_i`, with `q_i` the equality `s_i = S_i(s_{i-1})`.

pub mod env;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{BSet, ElemId};
use crate::operations::{Op, OpCall, OpError};
use crate::policy_lang::{BoundInstr, BoundScenario, Sort, Template};
use crate::snstate::SnState;

pub use env::{BoundExceeded, Env, EnvSpace, ListSource, DEFAULT_MAX_ENVS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VcError {
    #[error(
        "policy `{policy}` needs {needed} content ids for named and background contents \
         but the universe has {n}"
    )]
    BackgroundOverflow {
        policy: String,
        needed: usize,
        n: usize,
    },
}

/// Where a plan step comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "from", rename_all = "snake_case")]
pub enum StepOrigin {
    /// Instruction `index` of the context policy `policy`.
    Context { policy: String, index: usize },
    /// Instruction `index` of the checked policy.
    Body { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub origin: StepOrigin,
    pub instr: BoundInstr,
    /// Members added right after the list is created.
    pub bind: Option<(ElemId, BSet)>,
}

impl Step {
    pub fn call(&self, s: &SnState) -> OpCall {
        self.instr.instantiate(s)
    }

    /// Guards of the step in `s`: the instruction's own, then one
    /// `add-to-list` per bound member.
    pub fn precondition(&self, s: &SnState) -> Result<(), OpError> {
        self.apply(s).map(|_| ())
    }

    /// The step's poststate. `Err` exactly when [`Step::precondition`]
    /// fails; transformers only run on states meeting their guards.
    pub fn apply(&self, s: &SnState) -> Result<SnState, OpError> {
        let call = self.call(s);
        let mut t = call.apply(s)?;
        if let Some((list, members)) = self.bind {
            for p in members.iter() {
                let add = OpCall::new(Op::AddToList { list, person: p }, call.actor);
                t = add.apply(&t)?;
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plan {
    pub policy: String,
    /// `(person, content)` background accounts, ascending by person.
    pub background: Vec<(ElemId, ElemId)>,
    pub steps: Vec<Step>,
}

impl Plan {
    pub fn setup_calls(&self) -> Vec<OpCall> {
        self.background
            .iter()
            .map(|&(person, content)| OpCall::new(Op::CreateAccount { person, content }, person))
            .collect()
    }

    /// The state after the background accounts exist.
    pub fn initial_state(&self) -> SnState {
        self.setup_calls().iter().fold(SnState::empty(), |s, call| {
            call.apply(&s).expect("background accounts use fresh ids")
        })
    }

    /// Contents named by the steps, context included.
    pub fn named_contents(&self) -> BSet {
        self.steps
            .iter()
            .fold(BSet::empty(), |acc, st| acc.union(st.instr.contents()))
    }
}

fn is_create_account(i: &BoundInstr) -> bool {
    matches!(i.template, Template::Op(Op::CreateAccount { .. }))
}

fn context_steps(b: &BoundScenario, policy: usize, top: bool) -> Vec<(StepOrigin, BoundInstr)> {
    let p = &b.policies[policy];
    let origin = |index| {
        if top {
            StepOrigin::Body { index }
        } else {
            StepOrigin::Context {
                policy: p.name.clone(),
                index,
            }
        }
    };
    let tagged = p
        .body
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, instr)| (origin(i), instr));
    match p.after {
        None => tagged.collect(),
        Some(ctx) => {
            let lead = p.body.iter().take_while(|i| is_create_account(i)).count();
            let mut out: Vec<_> = tagged.clone().take(lead).collect();
            out.extend(context_steps(b, ctx, false));
            out.extend(tagged.skip(lead));
            out
        }
    }
}

/// Lays out the run of `policy` under `env`.
pub fn plan(b: &BoundScenario, policy: usize, env: &Env) -> Result<Plan, VcError> {
    let steps: Vec<Step> = context_steps(b, policy, true)
        .into_iter()
        .map(|(origin, instr)| {
            let bind = match instr.template {
                Template::Op(Op::CreateList { list, .. }) => env.get(list).map(|m| (list, m)),
                _ => None,
            };
            Step {
                origin,
                instr,
                bind,
            }
        })
        .collect();
    let created: BSet = steps
        .iter()
        .filter_map(|s| match s.instr.template {
            Template::Op(Op::CreateAccount { person, .. }) => Some(person),
            _ => None,
        })
        .collect();
    let lonely = b.all_persons().difference(created);
    let named = b.names.count(Sort::Content);
    let n = b.universe.size();
    if named + lonely.len() > n {
        return Err(VcError::BackgroundOverflow {
            policy: b.policies[policy].name.clone(),
            needed: named + lonely.len(),
            n,
        });
    }
    let background = lonely
        .iter()
        .enumerate()
        .map(|(k, p)| (p, ElemId::from_index(named + k)))
        .collect();
    Ok(Plan {
        policy: b.policies[policy].name.clone(),
        background,
        steps,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepFailure {
    pub step: usize,
    pub origin: StepOrigin,
    pub instruction: String,
    pub call: String,
    pub error: OpError,
}

/// One entry of a VC chain: the precondition outcome of step `i` and, when
/// it holds, its poststate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainEntry {
    pub step: usize,
    pub call: String,
    pub precondition: bool,
    pub poststate: Option<SnState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VcChain {
    pub initial: SnState,
    pub entries: Vec<ChainEntry>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub executable: bool,
    pub failure: Option<StepFailure>,
    pub final_state: Option<SnState>,
}

impl Verdict {
    pub fn failing_step(&self) -> Option<usize> {
        self.failure.as_ref().map(|f| f.step)
    }
}

fn failure(plan: &Plan, i: usize, s: &SnState, error: OpError) -> StepFailure {
    let step = &plan.steps[i];
    StepFailure {
        step: i,
        origin: step.origin.clone(),
        instruction: step.instr.source.clone(),
        call: step.call(s).to_string(),
        error,
    }
}

/// Sequential reduction: stops at the first step whose guards fail.
pub fn reduce(plan: &Plan) -> VcChain {
    let initial = plan.initial_state();
    let mut s = initial;
    let mut entries = Vec::new();
    for (i, step) in plan.steps.iter().enumerate() {
        let call = step.call(&s).to_string();
        match step.apply(&s) {
            Ok(t) => {
                entries.push(ChainEntry {
                    step: i,
                    call,
                    precondition: true,
                    poststate: Some(t),
                });
                s = t;
            }
            Err(e) => {
                entries.push(ChainEntry {
                    step: i,
                    call,
                    precondition: false,
                    poststate: None,
                });
                return VcChain {
                    initial,
                    entries,
                    verdict: Verdict {
                        executable: false,
                        failure: Some(failure(plan, i, &s, e)),
                        final_state: None,
                    },
                };
            }
        }
    }
    VcChain {
        initial,
        entries,
        verdict: Verdict {
            executable: true,
            failure: None,
            final_state: Some(s),
        },
    }
}

/// A VC formula over the plan's step preconditions `p_i` and poststate
/// equalities `q_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    Pre(usize),
    Post(usize),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// `VC_i` for a chain of `len` steps (0-based `i`).
    pub fn vc(i: usize, len: usize) -> Formula {
        if i >= len {
            return Formula::True;
        }
        Formula::And(
            Box::new(Formula::Pre(i)),
            Box::new(Formula::Implies(
                Box::new(Formula::Post(i)),
                Box::new(Formula::vc(i + 1, len)),
            )),
        )
    }

    /// `⋀ VC_i`.
    pub fn consolidated(len: usize) -> Formula {
        (0..len).rev().fold(Formula::True, |acc, i| {
            Formula::And(Box::new(Formula::vc(i, len)), Box::new(acc))
        })
    }

    /// Evaluates under a model `states[0..=len]`, where `states[i]` is the
    /// prestate of step `i`. Conjunction and implication short-circuit, so
    /// `Post(i)` is only evaluated once `Pre(i)` has held.
    pub fn eval(&self, plan: &Plan, states: &[SnState]) -> bool {
        match self {
            Formula::True => true,
            Formula::Pre(i) => plan.steps[*i].precondition(&states[*i]).is_ok(),
            Formula::Post(i) => match plan.steps[*i].apply(&states[*i]) {
                Ok(t) => states[*i + 1] == t,
                Err(_) => false,
            },
            Formula::And(a, b) => a.eval(plan, states) && b.eval(plan, states),
            Formula::Implies(a, b) => !a.eval(plan, states) || b.eval(plan, states),
        }
    }
}

/// Literal evaluation of `⋀ VC_i`. The model takes `s_{i+1} = S_i(s_i)`
/// where `p_i` holds and leaves the state unchanged elsewhere.
pub fn literal(plan: &Plan) -> Verdict {
    let mut states = vec![plan.initial_state()];
    for step in &plan.steps {
        let s = *states.last().expect("nonempty");
        states.push(step.apply(&s).unwrap_or(s));
    }
    let len = plan.steps.len();
    let executable = Formula::consolidated(len).eval(plan, &states);
    let first_false = (0..len).find(|i| !Formula::Pre(*i).eval(plan, &states));
    let failure = first_false.map(|i| {
        let err = plan.steps[i]
            .precondition(&states[i])
            .expect_err("Pre(i) is false");
        failure(plan, i, &states[i], err)
    });
    Verdict {
        executable,
        failure,
        final_state: executable.then(|| states[len]),
    }
}

/// Executability of `policy` under one environment.
pub fn check_executability(
    b: &BoundScenario,
    policy: usize,
    env: &Env,
) -> Result<VcChain, VcError> {
    Ok(reduce(&plan(b, policy, env)?))
}

/// Verdict over every admissible environment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ExecOutcome {
    /// Executable under each of `envs` admissible environments. `example`
    /// is the least one, with its final state.
    Executable {
        envs: u64,
        example: Env,
        final_state: SnState,
    },
    /// Fails under `env`, the least failing environment.
    Inexecutable {
        env: Env,
        failure: StepFailure,
    },
    /// No environment satisfies the assumptions.
    Vacuous,
    BoundExceeded(BoundExceeded),
}

pub fn check_all(b: &BoundScenario, policy: usize, cap: u64) -> Result<ExecOutcome, VcError> {
    let space = EnvSpace::new(b);
    let envs = match space.iter(cap) {
        Ok(it) => it,
        Err(e) => return Ok(ExecOutcome::BoundExceeded(e)),
    };
    let mut first: Option<(Env, SnState)> = None;
    let mut count = 0;
    for env in envs {
        count += 1;
        let chain = check_executability(b, policy, &env)?;
        match chain.verdict.failure {
            Some(f) => return Ok(ExecOutcome::Inexecutable { env, failure: f }),
            None => {
                if first.is_none() {
                    let s = chain.verdict.final_state.expect("executable");
                    first = Some((env, s));
                }
            }
        }
    }
    Ok(match first {
        Some((example, final_state)) => ExecOutcome::Executable {
            envs: count,
            example,
            final_state,
        },
        None => ExecOutcome::Vacuous,
    })
}
