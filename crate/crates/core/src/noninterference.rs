//! Observations, purging, and the non-interference check
//! `⟦P_t(w)⟧_u = ⟦w⟧_u`.
//!
//! Traces are chronological (earliest first). The observation of `u` folds
//! the per-operation rules from `⟨∅, ∅⟩`, oldest operation first. Each rule's
//! condition is evaluated in the state just before its operation ran; the
//! comment rule's `owner(cmt) ∈ prs` disjunct reads the state just after,
//! since `cmt` has no owner before.
//!
//! Purging removes every operation that `t` owns and keeps going
//! ([`PurgeMode::KeepAndContinue`]). [`PurgeMode::StopAtFirst`] instead walks
//! back from the newest operation and stops at the first one `t` does not
//! own. List operations (`create-list`, `add-to-list`, `declare-policy`)
//! are owned by their actor.

use serde::Serialize;

use crate::kernel::{BRel, BSet, ElemId};
use crate::operations::{Op, OpCall, OpError};
use crate::policy_lang::BoundScenario;
use crate::snstate::SnState;
use crate::vcgen::{self, EnvSpace, VcError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommentOwnership {
    /// `comment` belongs to `owner(c)` and to every member of `prs`.
    #[default]
    PrsMembers,
    /// `comment` belongs to `owner(c)` only.
    OwnerOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PurgeMode {
    #[default]
    KeepAndContinue,
    StopAtFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct NiConfig {
    pub comment_ownership: CommentOwnership,
    pub purge: PurgeMode,
}

/// The view and edit pairs `(c, p)` a user observes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Observation {
    pub view: BRel,
    pub edit: BRel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceOp {
    pub source: String,
    pub call: OpCall,
}

/// A trace with the state before each operation; `states[i]` is the
/// prestate of `ops[i]` and `states[ops.len()]` the final state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExecutedTrace {
    pub ops: Vec<TraceOp>,
    pub states: Vec<SnState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceFailure {
    pub index: usize,
    pub source: String,
    pub call: String,
    pub error: OpError,
}

/// Runs `ops` from `initial`, stopping at the first failing guard.
pub fn execute(initial: SnState, ops: Vec<TraceOp>) -> Result<ExecutedTrace, TraceFailure> {
    let mut states = vec![initial];
    for (i, op) in ops.iter().enumerate() {
        let s = states[i];
        match op.call.apply(&s) {
            Ok(t) => states.push(t),
            Err(error) => {
                return Err(TraceFailure {
                    index: i,
                    source: op.source.clone(),
                    call: op.call.to_string(),
                    error,
                })
            }
        }
    }
    Ok(ExecutedTrace { ops, states })
}

fn owns(s: &SnState, c: ElemId, u: ElemId) -> bool {
    s.owner.apply(c) == BSet::singleton(u)
}

/// Applies one observation rule: `pre` and `post` surround the operation.
pub fn observe_step(
    obs: Observation,
    call: &OpCall,
    pre: &SnState,
    post: &SnState,
    u: ElemId,
) -> Observation {
    let Observation { view: v, edit: d } = obs;
    let cu = |c| BRel::pair(c, u);
    match call.op {
        Op::CreateAccount {
            person: p,
            content: c,
        }
        | Op::Upload {
            content: c,
            person: p,
        } => {
            if p == u {
                return Observation {
                    view: v.union(&cu(c)),
                    edit: d.union(&cu(c)),
                };
            }
        }
        Op::Hide {
            content: c,
            person: p,
        } => {
            if !owns(pre, c, p) && p == u {
                return Observation {
                    view: v.remove(c, p),
                    edit: d.remove(c, p),
                };
            }
        }
        Op::MakeVisible { .. } => {}
        Op::Transmit {
            content: c,
            recipients: prs,
        } => {
            if owns(pre, c, u) && !prs.contains(u) {
                return Observation {
                    view: v.union(&BRel::product(BSet::singleton(c), prs)),
                    edit: d,
                };
            }
        }
        Op::TransmitToList {
            content: c,
            list: l,
        } => {
            let prs = pre.list_members(l);
            if !prs.contains(u) && owns(pre, c, u) && pre.listow.apply(l) == BSet::singleton(u) {
                return Observation {
                    view: v.union(&BRel::product(BSet::singleton(c), prs)),
                    edit: d,
                };
            }
        }
        Op::TransmitToListRestricted {
            content: c,
            list: l1,
            excluded: l2,
        } => {
            let prs = pre.list_members(l1).difference(pre.list_members(l2));
            if !prs.contains(u) && owns(pre, c, u) && pre.listow.apply(l1) == BSet::singleton(u) {
                return Observation {
                    view: v.union(&BRel::product(BSet::singleton(c), prs)),
                    edit: d,
                };
            }
        }
        Op::Delete {
            content: c,
            cascade,
        } => {
            if owns(pre, c, u) {
                let gone = cascade.insert(c);
                return Observation {
                    view: v.dom_subtract(gone),
                    edit: d.dom_subtract(gone),
                };
            }
        }
        Op::Comment {
            content: c,
            comment: cmt,
            recipients: prs,
        } => {
            if owns(pre, c, u) || !post.owner.apply(cmt).is_disjoint(prs) {
                let gained = BRel::product(BSet::singleton(cmt), prs.insert(u));
                return Observation {
                    view: v.union(&gained),
                    edit: d.union(&gained),
                };
            }
        }
        Op::EditOwned {
            content: c,
            new_content: newc,
        } => {
            if owns(pre, c, u) {
                let old = BSet::singleton(c);
                return Observation {
                    view: v
                        .dom_subtract(old)
                        .union(&BRel::product(BSet::singleton(newc), v.image(old))),
                    edit: d.dom_subtract(old).insert(newc, u),
                };
            }
        }
        Op::EditNotOwned {
            content: c,
            new_content: newc,
            editor: p,
        } => {
            if owns(pre, c, u) && p != u && pre.editp.contains(c, p) {
                return Observation {
                    view: v.remove(c, p).insert(newc, p),
                    edit: d.remove(c, p).insert(newc, p),
                };
            }
        }
        Op::GrantView {
            content: c,
            person: p,
        } => {
            if owns(pre, c, u) && p != u {
                return Observation {
                    view: v.insert(c, p),
                    edit: d,
                };
            }
        }
        Op::GrantEdit {
            content: c,
            person: p,
        } => {
            if owns(pre, c, u) && p != u {
                return Observation {
                    view: v,
                    edit: d.insert(c, p),
                };
            }
        }
        Op::CreateList { .. } | Op::AddToList { .. } | Op::DeclarePolicy { .. } => {}
    }
    obs
}

/// `⟦w⟧_u`.
pub fn observe(trace: &ExecutedTrace, u: ElemId) -> Observation {
    trace
        .ops
        .iter()
        .enumerate()
        .fold(Observation::default(), |obs, (i, op)| {
            observe_step(obs, &op.call, &trace.states[i], &trace.states[i + 1], u)
        })
}

/// Whether `t` owns `call`, evaluated in its prestate.
pub fn owned_by(call: &OpCall, s: &SnState, t: ElemId, mode: CommentOwnership) -> bool {
    match call.op {
        Op::CreateAccount { person, .. } | Op::Upload { person, .. } => person == t,
        Op::Hide { content, .. }
        | Op::MakeVisible { content, .. }
        | Op::Transmit { content, .. }
        | Op::TransmitToList { content, .. }
        | Op::TransmitToListRestricted { content, .. }
        | Op::Delete { content, .. }
        | Op::EditOwned { content, .. } => owns(s, content, t),
        Op::Comment {
            content,
            recipients,
            ..
        } => match mode {
            CommentOwnership::PrsMembers => owns(s, content, t) || recipients.contains(t),
            CommentOwnership::OwnerOnly => owns(s, content, t),
        },
        Op::EditNotOwned { content, .. } => !owns(s, content, t),
        Op::GrantView { content, person } | Op::GrantEdit { content, person } => {
            owns(s, content, t) && person != t
        }
        Op::CreateList { .. } | Op::AddToList { .. } | Op::DeclarePolicy { .. } => call.actor == t,
    }
}

/// Indices of the operations `P_t` removes.
pub fn purged_indices(trace: &ExecutedTrace, t: ElemId, cfg: NiConfig) -> Vec<usize> {
    let owned = |i: usize| {
        owned_by(
            &trace.ops[i].call,
            &trace.states[i],
            t,
            cfg.comment_ownership,
        )
    };
    match cfg.purge {
        PurgeMode::KeepAndContinue => (0..trace.ops.len()).filter(|i| owned(*i)).collect(),
        PurgeMode::StopAtFirst => {
            let mut out: Vec<usize> = (0..trace.ops.len())
                .rev()
                .take_while(|i| owned(*i))
                .collect();
            out.reverse();
            out
        }
    }
}

/// `P_t(w)` as the list of remaining operations.
pub fn purge(trace: &ExecutedTrace, t: ElemId, cfg: NiConfig) -> Vec<TraceOp> {
    let removed = purged_indices(trace, t, cfg);
    trace
        .ops
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, op)| op.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NiVerdict {
    Clean {
        observation: Observation,
        purged: Vec<usize>,
    },
    Interferes {
        original: Observation,
        purged_observation: Observation,
        purged: Vec<usize>,
        /// Symmetric differences per component.
        view_diff: BRel,
        edit_diff: BRel,
    },
    /// The trace itself does not run.
    Inexecutable { failure: TraceFailure },
    /// The trace runs but its purged form does not.
    PurgedInexecutable {
        purged: Vec<usize>,
        failure: TraceFailure,
    },
}

impl NiVerdict {
    pub fn interferes(&self) -> bool {
        matches!(self, NiVerdict::Interferes { .. })
    }
}

fn sym_diff(a: &BRel, b: &BRel) -> BRel {
    a.difference(b).union(&b.difference(a))
}

/// Whether `t` interferes with what `u` observes along `ops`.
pub fn check_noninterference(
    initial: SnState,
    ops: Vec<TraceOp>,
    t: ElemId,
    u: ElemId,
    cfg: NiConfig,
) -> NiVerdict {
    let trace = match execute(initial, ops) {
        Ok(tr) => tr,
        Err(failure) => return NiVerdict::Inexecutable { failure },
    };
    let removed = purged_indices(&trace, t, cfg);
    let purged_trace = match execute(initial, purge(&trace, t, cfg)) {
        Ok(tr) => tr,
        Err(failure) => {
            return NiVerdict::PurgedInexecutable {
                purged: removed,
                failure,
            }
        }
    };
    let original = observe(&trace, u);
    let purged_observation = observe(&purged_trace, u);
    if original == purged_observation {
        NiVerdict::Clean {
            observation: original,
            purged: removed,
        }
    } else {
        NiVerdict::Interferes {
            view_diff: sym_diff(&original.view, &purged_observation.view),
            edit_diff: sym_diff(&original.edit, &purged_observation.edit),
            original,
            purged_observation,
            purged: removed,
        }
    }
}

/// A trace's initial state, its operations, and the first operation that
/// fails to run, if any.
pub type TraceSetup = (SnState, Vec<TraceOp>, Option<TraceFailure>);

/// The operations of trace block `policy`, run from its setup state under
/// the least admissible environment. Bound list members become explicit
/// `add-to-list` operations.
pub fn trace_ops(b: &BoundScenario, policy: usize) -> Result<Option<TraceSetup>, VcError> {
    let space = EnvSpace::new(b);
    let Some(env) = space.iter(u64::MAX).ok().and_then(|mut it| it.next()) else {
        return Ok(None);
    };
    let plan = vcgen::plan(b, policy, &env)?;
    let initial = plan.initial_state();
    let mut s = initial;
    let mut ops = Vec::new();
    for step in &plan.steps {
        let call = step.call(&s);
        let mut calls = vec![(step.instr.source.clone(), call)];
        if let Some((list, members)) = step.bind {
            let name = b.names.name(crate::policy_lang::Sort::List, list);
            for p in members.iter() {
                calls.push((
                    format!(
                        "add-to-list({name}, {})",
                        b.names.name(crate::policy_lang::Sort::Person, p)
                    ),
                    OpCall::new(Op::AddToList { list, person: p }, call.actor),
                ));
            }
        }
        for (source, call) in calls {
            match call.apply(&s) {
                Ok(t) => s = t,
                Err(error) => {
                    let failure = TraceFailure {
                        index: ops.len(),
                        source: source.clone(),
                        call: call.to_string(),
                        error,
                    };
                    ops.push(TraceOp { source, call });
                    return Ok(Some((initial, ops, Some(failure))));
                }
            }
            ops.push(TraceOp { source, call });
        }
    }
    Ok(Some((initial, ops, None)))
}
