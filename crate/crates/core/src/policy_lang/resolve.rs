//! Name resolution: assigns element ids per sort in order of first
//! appearance and turns instructions into operation templates.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use super::ast::{self, Arg, Assumption, BlockKind, Check, Scenario, SetExpr, Sort};
use crate::kernel::{BSet, ElemId, KernelError, Universe, DEFAULT_UNIVERSE};
use crate::operations::{Op, OpCall};
use crate::snstate::SnState;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Universe(#[from] KernelError),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("`{name}` is used as a {second} but was introduced as a {first}")]
    SortClash {
        name: String,
        first: &'static str,
        second: &'static str,
    },
    #[error("more than {n} {sort} names do not fit the universe (`{name}`)")]
    UniverseOverflow {
        sort: &'static str,
        n: usize,
        name: String,
    },
    #[error("unknown instruction `{0}`")]
    UnknownInstruction(String),
    #[error("`{instr}` takes {expected} argument(s), got {found}")]
    Arity {
        instr: String,
        expected: &'static str,
        found: usize,
    },
    #[error("argument {position} of `{instr}` must be {expected}")]
    ArgKind {
        instr: String,
        position: usize,
        expected: &'static str,
    },
    #[error("`{0}` is neither a known list nor a known person")]
    UnknownName(String),
    #[error("`{instr}` needs an explicit actor (`who: {instr}(...)`)")]
    ActorRequired { instr: String },
    #[error("`{instr}` names `{named}` as actor but is prefixed by `{prefix}`")]
    ActorConflict {
        instr: String,
        named: String,
        prefix: String,
    },
    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),
    #[error("policy `{0}` appears twice")]
    DuplicatePolicy(String),
    #[error("policy context cycle through `{0}`")]
    ContextCycle(String),
}

/// Names of each sort, indexed by element id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Names {
    pub persons: Vec<String>,
    pub contents: Vec<String>,
    pub lists: Vec<String>,
}

impl Names {
    fn table(&self, sort: Sort) -> &Vec<String> {
        match sort {
            Sort::Person => &self.persons,
            Sort::Content => &self.contents,
            Sort::List => &self.lists,
        }
    }

    pub fn id(&self, sort: Sort, name: &str) -> Option<ElemId> {
        self.table(sort)
            .iter()
            .position(|n| n == name)
            .map(ElemId::from_index)
    }

    /// Name of `id`, or `sort#id` for ids that were never named.
    pub fn name(&self, sort: Sort, id: ElemId) -> String {
        self.table(sort)
            .get(id.index())
            .cloned()
            .unwrap_or_else(|| format!("{}#{}", sort.keyword(), id))
    }

    pub fn render_set(&self, sort: Sort, s: BSet) -> String {
        let names: Vec<String> = s.iter().map(|e| self.name(sort, e)).collect();
        format!("{{{}}}", names.join(", "))
    }

    pub fn count(&self, sort: Sort) -> usize {
        self.table(sort).len()
    }
}

/// A set term of an assumption, over list memberships and persons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Term {
    List(ElemId),
    Person(ElemId),
    Union(Box<Term>, Box<Term>),
}

impl Term {
    /// Evaluates the term with `members` giving each list's membership.
    pub fn eval(&self, members: &impl Fn(ElemId) -> BSet) -> BSet {
        match self {
            Term::List(l) => members(*l),
            Term::Person(p) => BSet::singleton(*p),
            Term::Union(a, b) => a.eval(members).union(b.eval(members)),
        }
    }

    pub fn lists(&self, out: &mut BSet) {
        match self {
            Term::List(l) => *out = out.insert(*l),
            Term::Person(_) => {}
            Term::Union(a, b) => {
                a.lists(out);
                b.lists(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BoundAssumption {
    Subset(Term, Term),
    Equal(Term, Term),
    NotSubset(Term, Term),
}

impl BoundAssumption {
    pub fn holds(&self, members: &impl Fn(ElemId) -> BSet) -> bool {
        match self {
            BoundAssumption::Subset(a, b) => a.eval(members).is_subset(b.eval(members)),
            BoundAssumption::Equal(a, b) => a.eval(members) == b.eval(members),
            BoundAssumption::NotSubset(a, b) => !a.eval(members).is_subset(b.eval(members)),
        }
    }
}

/// An instruction with resolved ids. Recipients that depend on a list are
/// read from the state the instruction runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "template", rename_all = "kebab-case")]
pub enum Template {
    Op(Op),
    /// `comment(c, cmt, l)` with the audience `listpe[{l}]`.
    CommentToList {
        content: ElemId,
        comment: ElemId,
        list: ElemId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundInstr {
    pub actor: Option<ElemId>,
    pub template: Template,
    /// The instruction as written, in canonical layout.
    pub source: String,
}

/// Stand-in actor for calls whose default actor is undefined. Such calls
/// always fail an earlier guard than the actor guard.
const PLACEHOLDER_ACTOR: ElemId = ElemId::from_index(0);

impl BoundInstr {
    pub fn op_in(&self, s: &SnState) -> Op {
        match self.template {
            Template::Op(op) => op,
            Template::CommentToList {
                content,
                comment,
                list,
            } => Op::Comment {
                content,
                comment,
                recipients: s.list_members(list),
            },
        }
    }

    /// The call this instruction makes when run in `s`.
    pub fn instantiate(&self, s: &SnState) -> OpCall {
        let op = self.op_in(s);
        let actor = self
            .actor
            .or_else(|| match self.template {
                Template::CommentToList { list, .. } => s.list_owner(list),
                Template::Op(op) => op.default_actor(s),
            })
            .unwrap_or(PLACEHOLDER_ACTOR);
        OpCall::new(op, actor)
    }

    /// Contents named by this instruction.
    pub fn contents(&self) -> BSet {
        let op = match self.template {
            Template::Op(op) => op,
            Template::CommentToList {
                content, comment, ..
            } => return BSet::singleton(content).insert(comment),
        };
        match op {
            Op::CreateAccount { content, .. }
            | Op::Upload { content, .. }
            | Op::Hide { content, .. }
            | Op::MakeVisible { content, .. }
            | Op::Transmit { content, .. }
            | Op::TransmitToList { content, .. }
            | Op::TransmitToListRestricted { content, .. }
            | Op::GrantView { content, .. }
            | Op::GrantEdit { content, .. } => BSet::singleton(content),
            Op::Delete { content, cascade } => cascade.insert(content),
            Op::Comment {
                content, comment, ..
            } => BSet::singleton(content).insert(comment),
            Op::EditOwned {
                content,
                new_content,
            }
            | Op::EditNotOwned {
                content,
                new_content,
                ..
            } => BSet::singleton(content).insert(new_content),
            Op::CreateList { .. } | Op::AddToList { .. } | Op::DeclarePolicy { .. } => {
                BSet::empty()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundPolicy {
    pub kind: BlockKind,
    pub name: String,
    /// Index of the context policy.
    pub after: Option<usize>,
    pub body: Vec<BoundInstr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundScenario {
    pub universe: Universe,
    pub names: Names,
    /// Lists whose membership is fixed by a `members` fact.
    pub members: Vec<(ElemId, BSet)>,
    pub assumptions: Vec<BoundAssumption>,
    pub policies: Vec<BoundPolicy>,
    pub checks: Vec<Check>,
}

impl BoundScenario {
    pub fn policy_index(&self, name: &str) -> Result<usize, ResolveError> {
        self.policies
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| ResolveError::UnknownPolicy(name.to_string()))
    }

    /// Every person named anywhere in the scenario.
    pub fn all_persons(&self) -> BSet {
        (0..self.names.persons.len())
            .map(ElemId::from_index)
            .collect()
    }

    pub fn fixed_members(&self, list: ElemId) -> Option<BSet> {
        self.members
            .iter()
            .find(|(l, _)| *l == list)
            .map(|(_, m)| *m)
    }
}

struct Resolver {
    n: usize,
    names: Names,
    sorts: HashMap<String, Sort>,
}

impl Resolver {
    fn intern(&mut self, sort: Sort, name: &str) -> Result<ElemId, ResolveError> {
        if let Some(&known) = self.sorts.get(name) {
            if known != sort {
                return Err(ResolveError::SortClash {
                    name: name.to_string(),
                    first: known.keyword(),
                    second: sort.keyword(),
                });
            }
            return Ok(self.names.id(sort, name).expect("interned"));
        }
        let table = match sort {
            Sort::Person => &mut self.names.persons,
            Sort::Content => &mut self.names.contents,
            Sort::List => &mut self.names.lists,
        };
        if table.len() >= self.n {
            return Err(ResolveError::UniverseOverflow {
                sort: sort.keyword(),
                n: self.n,
                name: name.to_string(),
            });
        }
        table.push(name.to_string());
        self.sorts.insert(name.to_string(), sort);
        Ok(ElemId::from_index(table.len() - 1))
    }

    fn known(&self, name: &str) -> Option<(Sort, ElemId)> {
        let sort = *self.sorts.get(name)?;
        Some((sort, self.names.id(sort, name)?))
    }

    fn term(&self, e: &SetExpr) -> Result<Term, ResolveError> {
        match e {
            SetExpr::Name(n) => self.term_name(n),
            SetExpr::Union(a, b) => Ok(Term::Union(
                Box::new(self.term(a)?),
                Box::new(self.term(b)?),
            )),
        }
    }

    fn term_name(&self, name: &str) -> Result<Term, ResolveError> {
        match self.known(name) {
            Some((Sort::List, id)) => Ok(Term::List(id)),
            Some((Sort::Person, id)) => Ok(Term::Person(id)),
            _ => Err(ResolveError::UnknownName(name.to_string())),
        }
    }

    fn instr(&mut self, kind: BlockKind, instr: &ast::Instr) -> Result<BoundInstr, ResolveError> {
        let name = instr.name.as_str();
        let prefix = match &instr.actor {
            Some(a) => Some(self.intern(Sort::Person, a)?),
            None => None,
        };
        let args = &instr.args;
        let arity = |expected: &'static str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(ResolveError::Arity {
                    instr: name.to_string(),
                    expected,
                    found: args.len(),
                })
            }
        };
        match name {
            "transmit-to-list-restricted" | "comment" | "edit" | "edit-not-owned" => {
                arity("3", args.len() == 3)?
            }
            "delete" => arity("1 or 2", (1..=2).contains(&args.len()))?,
            "create-account"
            | "upload"
            | "create-list"
            | "add-to-list"
            | "transmit"
            | "transmit-to-list"
            | "hide"
            | "make-visible"
            | "edit-owned"
            | "grant-view"
            | "grant-view-permission"
            | "grant-edit"
            | "grant-edit-permission"
            | "declare-policy"
            | "declare-disjoint" => arity("2", args.len() == 2)?,
            _ => return Err(ResolveError::UnknownInstruction(name.to_string())),
        }

        let mut actor = prefix;
        let template = match name {
            "create-account" => Template::Op(Op::CreateAccount {
                person: self.name_arg(name, args, 0, Sort::Person)?,
                content: self.name_arg(name, args, 1, Sort::Content)?,
            }),
            "upload" => Template::Op(Op::Upload {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                person: self.name_arg(name, args, 1, Sort::Person)?,
            }),
            "create-list" => Template::Op(Op::CreateList {
                list: self.name_arg(name, args, 0, Sort::List)?,
                owner: self.name_arg(name, args, 1, Sort::Person)?,
            }),
            "add-to-list" => Template::Op(Op::AddToList {
                list: self.name_arg(name, args, 0, Sort::List)?,
                person: self.name_arg(name, args, 1, Sort::Person)?,
            }),
            "transmit" => Template::Op(Op::Transmit {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                recipients: self.set_arg(name, args, 1, Sort::Person)?,
            }),
            "transmit-to-list" => Template::Op(Op::TransmitToList {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                list: self.name_arg(name, args, 1, Sort::List)?,
            }),
            "transmit-to-list-restricted" => Template::Op(Op::TransmitToListRestricted {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                list: self.name_arg(name, args, 1, Sort::List)?,
                excluded: self.name_arg(name, args, 2, Sort::List)?,
            }),
            "comment" => {
                let content = self.name_arg(name, args, 0, Sort::Content)?;
                let comment = self.name_arg(name, args, 1, Sort::Content)?;
                match &args[2] {
                    Arg::Name(n) => match self.known(n) {
                        Some((Sort::List, list)) => Template::CommentToList {
                            content,
                            comment,
                            list,
                        },
                        Some((Sort::Person, p)) => Template::Op(Op::Comment {
                            content,
                            comment,
                            recipients: BSet::singleton(p),
                        }),
                        _ => return Err(ResolveError::UnknownName(n.clone())),
                    },
                    Arg::Set(_) => Template::Op(Op::Comment {
                        content,
                        comment,
                        recipients: self.set_arg(name, args, 2, Sort::Person)?,
                    }),
                }
            }
            "delete" => Template::Op(Op::Delete {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                cascade: if args.len() == 2 {
                    self.set_arg(name, args, 1, Sort::Content)?
                } else {
                    BSet::empty()
                },
            }),
            "hide" => Template::Op(Op::Hide {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                person: self.name_arg(name, args, 1, Sort::Person)?,
            }),
            "make-visible" => Template::Op(Op::MakeVisible {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                person: self.name_arg(name, args, 1, Sort::Person)?,
            }),
            "edit" => {
                let content = self.name_arg(name, args, 0, Sort::Content)?;
                let owner = self.name_arg(name, args, 1, Sort::Person)?;
                let new_content = self.name_arg(name, args, 2, Sort::Content)?;
                if prefix.is_some_and(|p| p != owner) {
                    return Err(ResolveError::ActorConflict {
                        instr: name.to_string(),
                        named: self.names.name(Sort::Person, owner),
                        prefix: instr.actor.clone().unwrap_or_default(),
                    });
                }
                actor = Some(owner);
                Template::Op(Op::EditOwned {
                    content,
                    new_content,
                })
            }
            "edit-owned" => Template::Op(Op::EditOwned {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                new_content: self.name_arg(name, args, 1, Sort::Content)?,
            }),
            "edit-not-owned" => Template::Op(Op::EditNotOwned {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                new_content: self.name_arg(name, args, 1, Sort::Content)?,
                editor: self.name_arg(name, args, 2, Sort::Person)?,
            }),
            "grant-view" | "grant-view-permission" => Template::Op(Op::GrantView {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                person: self.name_arg(name, args, 1, Sort::Person)?,
            }),
            "grant-edit" | "grant-edit-permission" => Template::Op(Op::GrantEdit {
                content: self.name_arg(name, args, 0, Sort::Content)?,
                person: self.name_arg(name, args, 1, Sort::Person)?,
            }),
            "declare-policy" | "declare-disjoint" => Template::Op(Op::DeclarePolicy {
                first: self.name_arg(name, args, 0, Sort::List)?,
                second: self.name_arg(name, args, 1, Sort::List)?,
                disjoint: name == "declare-disjoint",
            }),
            _ => unreachable!("arity table covers every instruction"),
        };
        let needs_actor =
            kind == BlockKind::Trace || matches!(template, Template::Op(Op::Comment { .. }));
        if actor.is_none() && needs_actor {
            return Err(ResolveError::ActorRequired {
                instr: name.to_string(),
            });
        }
        Ok(BoundInstr {
            actor,
            template,
            source: instr.to_string(),
        })
    }

    fn name_arg(
        &mut self,
        instr: &str,
        args: &[Arg],
        i: usize,
        sort: Sort,
    ) -> Result<ElemId, ResolveError> {
        match &args[i] {
            Arg::Name(n) => self.intern(sort, n),
            Arg::Set(_) => Err(ResolveError::ArgKind {
                instr: instr.to_string(),
                position: i + 1,
                expected: match sort {
                    Sort::Person => "a person",
                    Sort::Content => "a content",
                    Sort::List => "a list",
                },
            }),
        }
    }

    /// A set literal, or a single name standing for its singleton.
    fn set_arg(
        &mut self,
        _instr: &str,
        args: &[Arg],
        i: usize,
        sort: Sort,
    ) -> Result<BSet, ResolveError> {
        match &args[i] {
            Arg::Name(n) => Ok(BSet::singleton(self.intern(sort, n)?)),
            Arg::Set(names) => {
                names.iter().try_fold(
                    BSet::empty(),
                    |acc, n| Ok(acc.insert(self.intern(sort, n)?)),
                )
            }
        }
    }
}

/// Resolves a parsed scenario. `universe` overrides the file's header.
pub fn resolve(sc: &Scenario, universe: Option<usize>) -> Result<BoundScenario, ResolveError> {
    let universe = Universe::new(universe.or(sc.universe).unwrap_or(DEFAULT_UNIVERSE))?;
    let mut r = Resolver {
        n: universe.size(),
        names: Names::default(),
        sorts: HashMap::new(),
    };
    for d in &sc.decls {
        for name in &d.names {
            if r.sorts.contains_key(name) {
                return Err(ResolveError::Duplicate(name.clone()));
            }
            r.intern(d.sort, name)?;
        }
    }
    let mut members = Vec::new();
    for m in &sc.members {
        let list = r.intern(Sort::List, &m.list)?;
        if members.iter().any(|(l, _)| *l == list) {
            return Err(ResolveError::Duplicate(format!("members {}", m.list)));
        }
        let persons = m.persons.iter().try_fold(BSet::empty(), |acc, p| {
            Ok::<_, ResolveError>(acc.insert(r.intern(Sort::Person, p)?))
        })?;
        members.push((list, persons));
    }

    let mut policies = Vec::new();
    for p in &sc.policies {
        if sc.policies.iter().filter(|q| q.name == p.name).count() > 1 {
            return Err(ResolveError::DuplicatePolicy(p.name.clone()));
        }
        let body = p
            .body
            .iter()
            .map(|i| r.instr(p.kind, i))
            .collect::<Result<Vec<_>, _>>()?;
        policies.push(BoundPolicy {
            kind: p.kind,
            name: p.name.clone(),
            after: None,
            body,
        });
    }
    for (i, p) in sc.policies.iter().enumerate() {
        if let Some(after) = &p.after {
            let j = sc
                .policies
                .iter()
                .position(|q| &q.name == after)
                .ok_or_else(|| ResolveError::UnknownPolicy(after.clone()))?;
            policies[i].after = Some(j);
        }
    }
    for start in 0..policies.len() {
        let mut seen = vec![start];
        let mut cur = start;
        while let Some(next) = policies[cur].after {
            if seen.contains(&next) {
                return Err(ResolveError::ContextCycle(policies[start].name.clone()));
            }
            seen.push(next);
            cur = next;
        }
    }

    let assumptions = sc
        .assumptions
        .iter()
        .map(|a| {
            Ok(match a {
                Assumption::Subset(x, y) => BoundAssumption::Subset(r.term(x)?, r.term(y)?),
                Assumption::Equal(x, y) => BoundAssumption::Equal(r.term(x)?, r.term(y)?),
                Assumption::NotSubset(x, y) => {
                    BoundAssumption::NotSubset(r.term_name(x)?, r.term_name(y)?)
                }
            })
        })
        .collect::<Result<Vec<_>, ResolveError>>()?;

    for c in &sc.checks {
        let names: Vec<&String> = match c {
            Check::Executable(p) => vec![p],
            Check::Compare { old, new } => vec![old, new],
        };
        for n in names {
            if sc.policy(n).is_none() {
                return Err(ResolveError::UnknownPolicy(n.clone()));
            }
        }
    }

    Ok(BoundScenario {
        universe,
        names: r.names,
        members,
        assumptions,
        policies,
        checks: sc.checks.clone(),
    })
}
