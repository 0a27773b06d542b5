//! SMT emission: a QF_BV prelude plus one verification-condition script per
//! policy, in SMT-LIB2 or in the Yices 1 surface syntax.
//!
//! A script declares one state symbol per step (`s0` is the background
//! state), defines `p_i` (the step's guards) and `q_i` (`s_i` equals the
//! transformed `s_{i-1}`), chains `VC_i = p_i ∧ (q_i ⇒ VC_{i+1})`, pins every
//! `q_i`, and finally asserts the conjunction of all `VC_i`. With the
//! poststates pinned the script is satisfiable exactly when some admissible
//! environment makes the policy executable.
//!
//! Elements are singleton `bset` constants. Environment-bound lists get a
//! `members-<list>` symbol: defined for fixed and derived lists, declared
//! for free ones.

mod prelude;
pub mod sexpr;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{BSet, ElemId, KernelError, Universe};
use crate::operations::Op;
use crate::policy_lang::{BoundAssumption, BoundScenario, Sort, Template, Term};
use crate::snstate::SnState;
use crate::vcgen::{self, Env, EnvSpace, VcError};

pub use prelude::{field_span, state_width, FIELDS};
use sexpr::{and, app, call, sym, Cmd, SortRef, Sx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    #[default]
    Smtlib2,
    Yices1,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error(transparent)]
    Universe(#[from] KernelError),
    #[error(transparent)]
    Plan(#[from] VcError),
}

/// A script in sections; [`SmtScript::render`] joins them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmtScript {
    pub prelude: Vec<Cmd>,
    pub declarations: Vec<Cmd>,
    pub assertions: Vec<Cmd>,
    pub check: Vec<Cmd>,
}

impl SmtScript {
    pub fn render(&self, d: Dialect) -> String {
        let mut out = String::new();
        for section in [
            &self.prelude,
            &self.declarations,
            &self.assertions,
            &self.check,
        ] {
            out.push_str(&sexpr::render_all(section, d));
        }
        out
    }
}

const BSET: SortRef = SortRef::Named("bset");
const STATE: SortRef = SortRef::Named("state");

/// The prelude alone.
pub fn emit_prelude(n: usize, d: Dialect) -> Result<String, EmitError> {
    let u = Universe::new(n)?;
    Ok(sexpr::render_all(&prelude::prelude(u.size()), d))
}

pub fn emit_vc_script(b: &BoundScenario, policy: usize, d: Dialect) -> Result<String, EmitError> {
    Ok(vc_script(b, policy)?.render(d))
}

fn is_generated(name: &str) -> bool {
    let numbered = |prefix: &str| {
        name.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|c| c.is_ascii_digit()))
    };
    ["s", "p", "q", "VC", "prs", "cts"]
        .iter()
        .any(|p| numbered(p))
        || name.starts_with("members-")
}

/// SMT symbols for scenario names, renamed away from prelude and
/// generated symbols by appending `_`.
struct Symbols {
    persons: Vec<String>,
    contents: Vec<String>,
    lists: Vec<String>,
}

impl Symbols {
    fn new(b: &BoundScenario) -> Self {
        let mut taken: BTreeSet<String> = prelude::defined_names(b.universe.size())
            .into_iter()
            .collect();
        taken.extend(["true", "false", "and", "or", "not", "ite", "if", "actor"].map(String::from));
        let mut pick = |names: &[String]| -> Vec<String> {
            names
                .iter()
                .map(|n| {
                    let mut s = n.clone();
                    while taken.contains(&s) || is_generated(&s) {
                        s.push('_');
                    }
                    taken.insert(s.clone());
                    s
                })
                .collect()
        };
        Symbols {
            persons: pick(&b.names.persons),
            contents: pick(&b.names.contents),
            lists: pick(&b.names.lists),
        }
    }

    fn get(&self, sort: Sort, id: ElemId) -> Sx {
        let table = match sort {
            Sort::Person => &self.persons,
            Sort::Content => &self.contents,
            Sort::List => &self.lists,
        };
        sym(&table[id.index()])
    }

    fn persons(&self, s: BSet) -> Sx {
        let mut xs: Vec<Sx> = s.iter().map(|p| self.get(Sort::Person, p)).collect();
        match xs.len() {
            0 => sym("bset-empty"),
            1 => xs.pop().expect("one element"),
            _ => sexpr::fold_right_call("bset-union", xs),
        }
    }
}

fn bits_of_set(n: usize, s: BSet) -> Sx {
    Sx::Bits((0..n).map(|i| s.bits() >> i & 1 == 1).collect())
}

fn state_literal(u: &Universe, s: &SnState) -> Sx {
    if *s == SnState::empty() {
        return sym("emptystate");
    }
    let n = u.size();
    let rel = |r| Sx::Bits(u.rel_bits(r));
    call(
        "mk-state",
        vec![
            bits_of_set(n, s.persons),
            bits_of_set(n, s.contents),
            rel(&s.owner),
            rel(&s.pages),
            rel(&s.viewp),
            rel(&s.editp),
            rel(&s.listpe),
            rel(&s.listow),
            rel(&s.policies),
            rel(&s.disjointness),
        ],
    )
}

fn eq(a: Sx, b: Sx) -> Sx {
    app("=", vec![a, b])
}

fn members_sym(syms: &Symbols, l: ElemId) -> Sx {
    let Sx::Sym(name) = syms.get(Sort::List, l) else {
        unreachable!("list symbols are plain")
    };
    sym(format!("members-{name}"))
}

fn term(syms: &Symbols, space: &EnvSpace, t: &Term) -> Sx {
    match t {
        Term::List(l) if space.source(*l).is_some() => members_sym(syms, *l),
        Term::List(l) => syms.persons(space.static_members(*l)),
        Term::Person(p) => syms.get(Sort::Person, *p),
        Term::Union(a, b) => call(
            "bset-union",
            vec![term(syms, space, a), term(syms, space, b)],
        ),
    }
}

fn assumption(syms: &Symbols, space: &EnvSpace, a: &BoundAssumption) -> Sx {
    let t = |x| term(syms, space, x);
    match a {
        BoundAssumption::Subset(x, y) => call("bset-is-subset", vec![t(x), t(y)]),
        BoundAssumption::Equal(x, y) => eq(t(x), t(y)),
        BoundAssumption::NotSubset(x, y) => {
            app("not", vec![call("bset-is-subset", vec![t(x), t(y)])])
        }
    }
}

/// The call of one step over symbolic prestate `s`: function name,
/// arguments after the state, actor, and extra definitions.
struct StepCall {
    name: &'static str,
    args: Vec<Sx>,
    /// Guard relating the actor to the arguments, when the actor is explicit
    /// and the prelude function does not take it.
    actor_guard: Option<Sx>,
    actor: Sx,
    defs: Vec<Cmd>,
}

fn step_call(syms: &Symbols, i: usize, s: &Sx, explicit: Option<ElemId>, t: &Template) -> StepCall {
    let c = |x| syms.get(Sort::Content, x);
    let p = |x| syms.get(Sort::Person, x);
    let l = |x| syms.get(Sort::List, x);
    let field = |f: &str| call(f, vec![s.clone()]);
    let owner_of = |x| call("brel-apply", vec![field("owner"), c(x)]);
    let list_owner = |x| call("brel-apply", vec![field("listow"), l(x)]);
    let prs = sym(format!("prs{i}"));
    let def_prs = |body: Sx| vec![Cmd::define(format!("prs{i}"), BSET, body)];
    let actor_sym = explicit.map(p);
    // (name, args, default actor, actor guard rhs, extra definitions)
    let (name, args, default, rhs, defs): (&'static str, Vec<Sx>, Sx, Option<Sx>, Vec<Cmd>) =
        match *t {
            Template::Op(op) => match op {
                Op::CreateAccount { person, content } => (
                    "create-account",
                    vec![c(content), p(person)],
                    p(person),
                    Some(p(person)),
                    vec![],
                ),
                Op::Upload { content, person } => (
                    "upload",
                    vec![c(content), p(person)],
                    p(person),
                    Some(p(person)),
                    vec![],
                ),
                Op::Hide { content, person } => (
                    "hide",
                    vec![c(content), p(person)],
                    p(person),
                    Some(p(person)),
                    vec![],
                ),
                Op::MakeVisible { content, person } => (
                    "make-visible",
                    vec![c(content), p(person)],
                    p(person),
                    Some(p(person)),
                    vec![],
                ),
                Op::Transmit {
                    content,
                    recipients,
                } => (
                    "transmit",
                    vec![c(content), prs.clone()],
                    owner_of(content),
                    Some(owner_of(content)),
                    def_prs(syms.persons(recipients)),
                ),
                Op::TransmitToList { content, list } => (
                    "transmit-to-list",
                    vec![c(content), prs.clone(), l(list)],
                    owner_of(content),
                    Some(owner_of(content)),
                    def_prs(call("brel-apply", vec![field("listpe"), l(list)])),
                ),
                Op::TransmitToListRestricted {
                    content,
                    list,
                    excluded,
                } => (
                    "transmit-to-list-restricted",
                    vec![c(content), prs.clone(), l(list), l(excluded)],
                    owner_of(content),
                    Some(owner_of(content)),
                    def_prs(call(
                        "bset-difference",
                        vec![
                            call("brel-apply", vec![field("listpe"), l(list)]),
                            call("brel-apply", vec![field("listpe"), l(excluded)]),
                        ],
                    )),
                ),
                Op::Delete { content, cascade } => {
                    let cascade_set = if cascade.is_empty() {
                        sym("bset-empty")
                    } else {
                        sexpr::fold_right_call("bset-union", cascade.iter().map(c).collect())
                    };
                    (
                        "delete",
                        vec![c(content), sym(format!("cts{i}"))],
                        owner_of(content),
                        Some(owner_of(content)),
                        vec![Cmd::define(format!("cts{i}"), BSET, cascade_set)],
                    )
                }
                Op::Comment {
                    content,
                    comment,
                    recipients,
                } => (
                    "comment",
                    vec![c(content), c(comment), prs.clone()],
                    sym("bset-0"),
                    None,
                    def_prs(syms.persons(recipients)),
                ),
                Op::EditOwned {
                    content,
                    new_content,
                } => (
                    "edit-owned",
                    vec![c(content), c(new_content)],
                    owner_of(content),
                    None,
                    vec![],
                ),
                Op::EditNotOwned {
                    content,
                    new_content,
                    editor,
                } => (
                    "edit-not-owned",
                    vec![c(content), c(new_content), p(editor)],
                    p(editor),
                    Some(p(editor)),
                    vec![],
                ),
                Op::GrantView { content, person } => (
                    "grant-view",
                    vec![c(content), p(person)],
                    owner_of(content),
                    Some(owner_of(content)),
                    vec![],
                ),
                Op::GrantEdit { content, person } => (
                    "grant-edit",
                    vec![c(content), p(person)],
                    owner_of(content),
                    Some(owner_of(content)),
                    vec![],
                ),
                Op::CreateList { list, owner } => (
                    "create-list",
                    vec![l(list), p(owner)],
                    p(owner),
                    Some(p(owner)),
                    vec![],
                ),
                Op::AddToList { list, person } => (
                    "add-to-list",
                    vec![l(list), p(person)],
                    list_owner(list),
                    Some(list_owner(list)),
                    vec![],
                ),
                Op::DeclarePolicy {
                    first,
                    second,
                    disjoint,
                } => (
                    if disjoint {
                        "declare-disjoint"
                    } else {
                        "declare-policy"
                    },
                    vec![l(first), l(second)],
                    list_owner(first),
                    Some(list_owner(first)),
                    vec![],
                ),
            },
            Template::CommentToList {
                content,
                comment,
                list,
            } => (
                "comment",
                vec![c(content), c(comment), prs.clone()],
                // the list owner, or element 0 when the list does not exist
                app(
                    "ite",
                    vec![
                        call("bset-is-empty", vec![list_owner(list)]),
                        sym("bset-0"),
                        list_owner(list),
                    ],
                ),
                None,
                def_prs(call("brel-apply", vec![field("listpe"), l(list)])),
            ),
        };
    let takes_actor = rhs.is_none();
    let actor = actor_sym.clone().unwrap_or(default);
    let mut args = args;
    if takes_actor {
        args.push(actor.clone());
    }
    let actor_guard = match (actor_sym, rhs) {
        (Some(a), Some(rhs)) => Some(eq(a, rhs)),
        _ => None,
    };
    StepCall {
        name,
        args,
        actor_guard,
        actor,
        defs,
    }
}

/// Builds the VC script of `policy`.
pub fn vc_script(b: &BoundScenario, policy: usize) -> Result<SmtScript, EmitError> {
    let u = b.universe;
    let n = u.size();
    let syms = Symbols::new(b);
    let space = EnvSpace::new(b);
    let plan = vcgen::plan(b, policy, &Env::default())?;
    let len = plan.steps.len();

    let mut decls = vec![
        Cmd::Blank,
        Cmd::Comment(format!("policy {} (universe {n})", plan.policy)),
    ];
    for table in [&syms.persons, &syms.contents, &syms.lists] {
        for (k, name) in table.iter().enumerate() {
            decls.push(Cmd::define(name.clone(), BSET, sym(format!("bset-{k}"))));
        }
    }

    let mut env_asserts = Vec::new();
    let bound: Vec<ElemId> = (0..syms.lists.len())
        .map(ElemId::from_index)
        .filter(|l| space.source(*l).is_some())
        .collect();
    if !bound.is_empty() || !space.filters().is_empty() {
        decls.push(Cmd::Comment("list memberships".into()));
    }
    for (l, m) in space.fixed() {
        let Sx::Sym(name) = members_sym(&syms, *l) else {
            unreachable!()
        };
        decls.push(Cmd::define(name, BSET, syms.persons(*m)));
    }
    for l in space.free_lists() {
        let Sx::Sym(name) = members_sym(&syms, *l) else {
            unreachable!()
        };
        decls.push(Cmd::DeclareConst(name.clone(), BSET));
        env_asserts.push(Cmd::Assert(call(
            "bset-is-subset",
            vec![sym(name), syms.persons(space.persons())],
        )));
    }
    for (l, rhs) in space.derived() {
        let Sx::Sym(name) = members_sym(&syms, *l) else {
            unreachable!()
        };
        decls.push(Cmd::define(name, BSET, term(&syms, &space, rhs)));
    }
    for a in space.filters() {
        env_asserts.push(Cmd::Assert(assumption(&syms, &space, a)));
    }

    decls.push(Cmd::define(
        "s0",
        STATE,
        state_literal(&u, &plan.initial_state()),
    ));
    for i in 1..=len {
        decls.push(Cmd::DeclareConst(format!("s{i}"), STATE));
    }
    for i in 1..=len {
        decls.push(Cmd::DeclareConst(format!("VC{i}"), SortRef::Bool));
    }

    let mut asserts = env_asserts;
    for (k, step) in plan.steps.iter().enumerate() {
        let i = k + 1;
        let s = sym(format!("s{}", i - 1));
        let sc = step_call(&syms, i, &s, step.instr.actor, &step.instr.template);
        asserts.push(Cmd::Comment(step.instr.source.clone()));
        asserts.extend(sc.defs);
        let with_state = |head: String, args: &[Sx], st: Sx| {
            call(
                head,
                std::iter::once(st).chain(args.iter().cloned()).collect(),
            )
        };
        let mut guards = vec![with_state(
            format!("{}-precondition", sc.name),
            &sc.args,
            s.clone(),
        )];
        guards.extend(sc.actor_guard);
        let mut post = with_state(sc.name.to_string(), &sc.args, s.clone());
        if let Template::Op(Op::CreateList { list, .. }) = step.instr.template {
            if space.source(list).is_some() {
                let bind_args = [
                    syms.get(Sort::List, list),
                    members_sym(&syms, list),
                    sc.actor.clone(),
                ];
                guards.push(with_state(
                    "bind-list-precondition".into(),
                    &bind_args,
                    post.clone(),
                ));
                post = with_state("bind-list".into(), &bind_args, post);
            }
        }
        asserts.push(Cmd::define(format!("p{i}"), SortRef::Bool, and(guards)));
        asserts.push(Cmd::define(
            format!("q{i}"),
            SortRef::Bool,
            eq(sym(format!("s{i}")), post),
        ));
        let next = if i == len {
            Sx::Bool(true)
        } else {
            sym(format!("VC{}", i + 1))
        };
        asserts.push(Cmd::Assert(eq(
            sym(format!("VC{i}")),
            and(vec![
                sym(format!("p{i}")),
                app("=>", vec![sym(format!("q{i}")), next]),
            ]),
        )));
    }
    if len > 0 {
        asserts.push(Cmd::Comment("poststates".into()));
        asserts.push(Cmd::Assert(and((1..=len)
            .map(|i| sym(format!("q{i}")))
            .collect())));
    }
    asserts.push(Cmd::Blank);
    asserts.push(Cmd::Assert(and((1..=len)
        .map(|i| sym(format!("VC{i}")))
        .collect())));

    Ok(SmtScript {
        prelude: prelude::prelude(n),
        declarations: decls,
        assertions: asserts,
        check: vec![Cmd::CheckSat],
    })
}
