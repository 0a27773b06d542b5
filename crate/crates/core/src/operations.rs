//! Guarded state transformers.
//!
//! Each operation is a precondition over the prestate plus a pure
//! prestate → poststate function. [`OpCall::apply`] runs the guards in order
//! and only calls the transformer when every guard holds.
//!
//! Ownership guards are phrased over images, as in the bit-vector encoding:
//! `owner(c) ∉ prs` means `owner[{c}] ⊄ prs`, and `owner(c) = listow(l)` means
//! `owner[{c}] = listow[{l}]`. On states satisfying the invariants these agree
//! with the functional reading.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{BRel, BSet, ElemId};
use crate::snstate::SnState;

/// An operation with its parameters, without the acting person.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Op {
    CreateAccount {
        person: ElemId,
        content: ElemId,
    },
    Upload {
        content: ElemId,
        person: ElemId,
    },
    Hide {
        content: ElemId,
        person: ElemId,
    },
    MakeVisible {
        content: ElemId,
        person: ElemId,
    },
    Transmit {
        content: ElemId,
        recipients: BSet,
    },
    TransmitToList {
        content: ElemId,
        list: ElemId,
    },
    TransmitToListRestricted {
        content: ElemId,
        list: ElemId,
        excluded: ElemId,
    },
    /// Removes `content` together with the contents in `cascade`.
    Delete {
        content: ElemId,
        cascade: BSet,
    },
    Comment {
        content: ElemId,
        comment: ElemId,
        recipients: BSet,
    },
    EditOwned {
        content: ElemId,
        new_content: ElemId,
    },
    EditNotOwned {
        content: ElemId,
        new_content: ElemId,
        editor: ElemId,
    },
    GrantView {
        content: ElemId,
        person: ElemId,
    },
    GrantEdit {
        content: ElemId,
        person: ElemId,
    },
    CreateList {
        list: ElemId,
        owner: ElemId,
    },
    AddToList {
        list: ElemId,
        person: ElemId,
    },
    DeclarePolicy {
        first: ElemId,
        second: ElemId,
        disjoint: bool,
    },
}

/// An operation attributed to the person performing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OpCall {
    #[serde(flatten)]
    pub op: Op,
    pub actor: ElemId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreconditionFailure {
    pub op: &'static str,
    /// The failed guard, written as its formula.
    pub guard: &'static str,
    pub witness: String,
}

impl fmt::Display for PreconditionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: guard `{}` fails ({})",
            self.op, self.guard, self.witness
        )
    }
}

/// A transmission to `list` would reach members that a disjointness policy
/// `(list, other)` keeps apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointnessViolation {
    pub list: ElemId,
    pub other: ElemId,
    pub shared: BSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpError {
    #[error("{0}")]
    Precondition(PreconditionFailure),
    #[error("transmit-to-list: lists {} and {} are disjoint but share {}", .0.list, .0.other, .0.shared)]
    Disjointness(DisjointnessViolation),
}

impl OpError {
    pub fn guard(&self) -> &'static str {
        match self {
            OpError::Precondition(p) => p.guard,
            OpError::Disjointness(_) => DISJOINTNESS_GUARD,
        }
    }
}

pub const DISJOINTNESS_GUARD: &str = "listpe[{l}] ∩ listpe[disjointness[{l}]] = ∅";

/// Guards are evaluated in their listed order; the first failing one is reported.
struct Guards {
    op: &'static str,
}

impl Guards {
    fn ensure(
        &self,
        holds: bool,
        guard: &'static str,
        witness: impl FnOnce() -> String,
    ) -> Result<(), OpError> {
        if holds {
            Ok(())
        } else {
            Err(OpError::Precondition(PreconditionFailure {
                op: self.op,
                guard,
                witness: witness(),
            }))
        }
    }
}

fn one(e: ElemId) -> BSet {
    BSet::singleton(e)
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::CreateAccount { .. } => "create-account",
            Op::Upload { .. } => "upload",
            Op::Hide { .. } => "hide",
            Op::MakeVisible { .. } => "make-visible",
            Op::Transmit { .. } => "transmit",
            Op::TransmitToList { .. } => "transmit-to-list",
            Op::TransmitToListRestricted { .. } => "transmit-to-list-restricted",
            Op::Delete { .. } => "delete",
            Op::Comment { .. } => "comment",
            Op::EditOwned { .. } => "edit-owned",
            Op::EditNotOwned { .. } => "edit-not-owned",
            Op::GrantView { .. } => "grant-view-permission",
            Op::GrantEdit { .. } => "grant-edit-permission",
            Op::CreateList { .. } => "create-list",
            Op::AddToList { .. } => "add-to-list",
            Op::DeclarePolicy { .. } => "declare-policy",
        }
    }

    /// The person who performs this operation when no actor is given:
    /// account holders act for themselves, content operations are performed
    /// by the content owner, list operations by the list owner. `None` when
    /// that person is undefined in `s`, or for `comment`, whose actor is
    /// always explicit.
    pub fn default_actor(&self, s: &SnState) -> Option<ElemId> {
        match *self {
            Op::CreateAccount { person, .. }
            | Op::Upload { person, .. }
            | Op::Hide { person, .. }
            | Op::MakeVisible { person, .. } => Some(person),
            Op::EditNotOwned { editor, .. } => Some(editor),
            Op::CreateList { owner, .. } => Some(owner),
            Op::Transmit { content, .. }
            | Op::TransmitToList { content, .. }
            | Op::TransmitToListRestricted { content, .. }
            | Op::Delete { content, .. }
            | Op::EditOwned { content, .. }
            | Op::GrantView { content, .. }
            | Op::GrantEdit { content, .. } => s.owner_of(content),
            Op::AddToList { list, .. } => s.list_owner(list),
            Op::DeclarePolicy { first, .. } => s.list_owner(first),
            Op::Comment { .. } => None,
        }
    }

    /// The recipients a transmission reaches in `s`.
    pub fn recipients(&self, s: &SnState) -> Option<BSet> {
        match *self {
            Op::Transmit { recipients, .. } | Op::Comment { recipients, .. } => Some(recipients),
            Op::TransmitToList { list, .. } => Some(s.list_members(list)),
            Op::TransmitToListRestricted { list, excluded, .. } => {
                Some(s.list_members(list).difference(s.list_members(excluded)))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match *self {
            Op::CreateAccount { person, content } => write!(f, "{name}({person}, {content})"),
            Op::Upload { content, person }
            | Op::Hide { content, person }
            | Op::MakeVisible { content, person }
            | Op::GrantView { content, person }
            | Op::GrantEdit { content, person } => write!(f, "{name}({content}, {person})"),
            Op::Transmit {
                content,
                recipients,
            } => write!(f, "{name}({content}, {recipients})"),
            Op::TransmitToList { content, list } => write!(f, "{name}({content}, {list})"),
            Op::TransmitToListRestricted {
                content,
                list,
                excluded,
            } => write!(f, "{name}({content}, {list}, {excluded})"),
            Op::Delete { content, cascade } => write!(f, "{name}({content}, {cascade})"),
            Op::Comment {
                content,
                comment,
                recipients,
            } => write!(f, "{name}({content}, {comment}, {recipients})"),
            Op::EditOwned {
                content,
                new_content,
            } => write!(f, "{name}({content}, {new_content})"),
            Op::EditNotOwned {
                content,
                new_content,
                editor,
            } => write!(f, "{name}({content}, {new_content}, {editor})"),
            Op::CreateList { list, owner } => write!(f, "{name}({list}, {owner})"),
            Op::AddToList { list, person } => write!(f, "{name}({list}, {person})"),
            Op::DeclarePolicy {
                first,
                second,
                disjoint,
            } => write!(f, "{name}({first}, {second}, {disjoint})"),
        }
    }
}

impl fmt::Display for OpCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.actor, self.op)
    }
}

impl OpCall {
    pub fn new(op: Op, actor: ElemId) -> Self {
        OpCall { op, actor }
    }

    /// Attributes `op` to its default actor in `s`, see [`Op::default_actor`].
    pub fn by_default_actor(op: Op, s: &SnState) -> Option<Self> {
        op.default_actor(s).map(|actor| OpCall { op, actor })
    }

    /// Runs the guards, then the transformer.
    pub fn apply(&self, s: &SnState) -> Result<SnState, OpError> {
        self.precondition(s)?;
        Ok(self.transform(s))
    }

    pub fn is_enabled(&self, s: &SnState) -> bool {
        self.precondition(s).is_ok()
    }

    /// Evaluates every guard in order and reports the first that fails.
    pub fn precondition(&self, s: &SnState) -> Result<(), OpError> {
        let g = Guards { op: self.op.name() };
        let actor = self.actor;
        let owner_img = |c: ElemId| s.owner.apply(c);
        match self.op {
            Op::CreateAccount { person, content } => {
                g.ensure(!s.persons.contains(person), "p ∉ persons", || {
                    format!("p = {person}, persons = {}", s.persons)
                })?;
                g.ensure(!s.contents.contains(content), "c ∉ contents", || {
                    format!("c = {content}, contents = {}", s.contents)
                })?;
                g.ensure(actor == person, "actor = p", || {
                    format!("actor = {actor}, p = {person}")
                })
            }
            Op::Upload { content, person } => {
                g.ensure(!s.contents.contains(content), "c ∉ contents", || {
                    format!("c = {content}, contents = {}", s.contents)
                })?;
                g.ensure(s.persons.contains(person), "pe ∈ persons", || {
                    format!("pe = {person}, persons = {}", s.persons)
                })?;
                g.ensure(actor == person, "actor = pe", || {
                    format!("actor = {actor}, pe = {person}")
                })
            }
            Op::Hide { content, person } => {
                self.content_exists(&g, s, content)?;
                g.ensure(s.persons.contains(person), "pe ∈ persons", || {
                    format!("pe = {person}, persons = {}", s.persons)
                })?;
                g.ensure(
                    s.pages.contains(content, person),
                    "c ↦ pe ∈ pages",
                    || format!("pages[{{{content}}}] = {}", s.pages.apply(content)),
                )?;
                g.ensure(owner_img(content) != one(person), "owner(c) ≠ pe", || {
                    format!("owner[{{{content}}}] = {}", owner_img(content))
                })?;
                g.ensure(actor == person, "actor = pe", || {
                    format!("actor = {actor}, pe = {person}")
                })
            }
            Op::MakeVisible { content, person } => {
                self.content_exists(&g, s, content)?;
                g.ensure(s.persons.contains(person), "pe ∈ persons", || {
                    format!("pe = {person}, persons = {}", s.persons)
                })?;
                g.ensure(
                    s.viewp.contains(content, person),
                    "c ↦ pe ∈ viewp",
                    || format!("viewp[{{{content}}}] = {}", s.viewp.apply(content)),
                )?;
                g.ensure(actor == person, "actor = pe", || {
                    format!("actor = {actor}, pe = {person}")
                })
            }
            Op::Transmit {
                content,
                recipients,
            } => {
                self.content_exists(&g, s, content)?;
                self.transmit_guards(&g, s, content, recipients)?;
                self.actor_owns(&g, s, content)
            }
            Op::TransmitToList { content, list } => {
                let prs = s.list_members(list);
                self.content_exists(&g, s, content)?;
                self.transmit_guards(&g, s, content, prs)?;
                g.ensure(s.lists().contains(list), "l ∈ dom(listow)", || {
                    format!("l = {list}, dom(listow) = {}", s.lists())
                })?;
                g.ensure(
                    owner_img(content) == s.listow.apply(list),
                    "owner(c) = listow(l)",
                    || {
                        format!(
                            "owner[{{{content}}}] = {}, listow[{{{list}}}] = {}",
                            owner_img(content),
                            s.listow.apply(list)
                        )
                    },
                )?;
                self.actor_owns(&g, s, content)?;
                for other in s.disjointness.apply(list).iter() {
                    let shared = prs.intersection(s.list_members(other));
                    if !shared.is_empty() {
                        return Err(OpError::Disjointness(DisjointnessViolation {
                            list,
                            other,
                            shared,
                        }));
                    }
                }
                Ok(())
            }
            Op::TransmitToListRestricted {
                content,
                list,
                excluded,
            } => {
                let prs = s.list_members(list).difference(s.list_members(excluded));
                self.content_exists(&g, s, content)?;
                self.transmit_guards(&g, s, content, prs)?;
                g.ensure(s.lists().contains(list), "l1 ∈ dom(listow)", || {
                    format!("l1 = {list}, dom(listow) = {}", s.lists())
                })?;
                g.ensure(s.lists().contains(excluded), "l2 ∈ dom(listow)", || {
                    format!("l2 = {excluded}, dom(listow) = {}", s.lists())
                })?;
                g.ensure(list != excluded, "l1 ≠ l2", || {
                    format!("l1 = l2 = {list}")
                })?;
                g.ensure(
                    owner_img(content) == s.listow.apply(list),
                    "owner(c) = listow(l1)",
                    || {
                        format!(
                            "owner[{{{content}}}] = {}, listow[{{{list}}}] = {}",
                            owner_img(content),
                            s.listow.apply(list)
                        )
                    },
                )?;
                g.ensure(
                    owner_img(content) == s.listow.apply(excluded),
                    "owner(c) = listow(l2)",
                    || {
                        format!(
                            "owner[{{{content}}}] = {}, listow[{{{excluded}}}] = {}",
                            owner_img(content),
                            s.listow.apply(excluded)
                        )
                    },
                )?;
                self.actor_owns(&g, s, content)
            }
            Op::Delete { content, cascade } => {
                self.content_exists(&g, s, content)?;
                let owned = s.owner.ran_restrict(owner_img(content)).domain();
                g.ensure(
                    one(content).is_strict_subset(owned),
                    "{c} ⊂ dom(owner ▷ {owner(c)})",
                    || format!("contents owned by owner({content}) = {owned}"),
                )?;
                g.ensure(cascade.is_subset(s.contents), "cts ⊆ contents", || {
                    format!("cts = {cascade}, contents = {}", s.contents)
                })?;
                g.ensure(!cascade.contains(content), "c ∉ cts", || {
                    format!("c = {content}, cts = {cascade}")
                })?;
                let removed = cascade.insert(content);
                let remaining = s.owner.dom_subtract(removed).range();
                g.ensure(
                    s.persons.is_subset(remaining),
                    "persons ⊆ ran(({c} ∪ cts) ⩤ owner)",
                    || {
                        format!(
                            "persons left without content: {}",
                            s.persons.difference(remaining)
                        )
                    },
                )?;
                self.actor_owns(&g, s, content)
            }
            Op::Comment {
                content,
                comment,
                recipients,
            } => {
                self.content_exists(&g, s, content)?;
                g.ensure(!s.contents.contains(comment), "cmt ∉ contents", || {
                    format!("cmt = {comment}, contents = {}", s.contents)
                })?;
                g.ensure(recipients.is_subset(s.persons), "prs ⊆ persons", || {
                    format!("prs = {recipients}, persons = {}", s.persons)
                })?;
                g.ensure(
                    s.viewp.contains(content, actor),
                    "c ↦ actor ∈ viewp",
                    || {
                        format!(
                            "actor = {actor}, viewp[{{{content}}}] = {}",
                            s.viewp.apply(content)
                        )
                    },
                )
            }
            Op::EditOwned {
                content,
                new_content,
            } => {
                self.content_exists(&g, s, content)?;
                g.ensure(owner_img(content) == one(actor), "owner(c) = actor", || {
                    format!(
                        "actor = {actor}, owner[{{{content}}}] = {}",
                        owner_img(content)
                    )
                })?;
                g.ensure(
                    !s.contents.contains(new_content),
                    "newc ∉ contents",
                    || format!("newc = {new_content}, contents = {}", s.contents),
                )
            }
            Op::EditNotOwned {
                content,
                new_content,
                editor,
            } => {
                self.content_exists(&g, s, content)?;
                g.ensure(owner_img(content) != one(editor), "p ≠ owner(c)", || {
                    format!(
                        "p = {editor}, owner[{{{content}}}] = {}",
                        owner_img(content)
                    )
                })?;
                g.ensure(
                    s.editp.contains(content, editor),
                    "c ↦ p ∈ editp",
                    || format!("editp[{{{content}}}] = {}", s.editp.apply(content)),
                )?;
                g.ensure(
                    !s.contents.contains(new_content),
                    "newc ∉ contents",
                    || format!("newc = {new_content}, contents = {}", s.contents),
                )?;
                g.ensure(actor == editor, "actor = p", || {
                    format!("actor = {actor}, p = {editor}")
                })
            }
            Op::GrantView { content, person } | Op::GrantEdit { content, person } => {
                self.content_exists(&g, s, content)?;
                g.ensure(s.persons.contains(person), "p ∈ persons", || {
                    format!("p = {person}, persons = {}", s.persons)
                })?;
                g.ensure(owner_img(content) != one(person), "p ≠ owner(c)", || {
                    format!(
                        "p = {person}, owner[{{{content}}}] = {}",
                        owner_img(content)
                    )
                })?;
                self.actor_owns(&g, s, content)
            }
            Op::CreateList { list, owner } => {
                g.ensure(!s.lists().contains(list), "l ∉ dom(listow)", || {
                    format!("l = {list}, dom(listow) = {}", s.lists())
                })?;
                g.ensure(s.persons.contains(owner), "ow ∈ persons", || {
                    format!("ow = {owner}, persons = {}", s.persons)
                })?;
                g.ensure(actor == owner, "actor = ow", || {
                    format!("actor = {actor}, ow = {owner}")
                })
            }
            Op::AddToList { list, person } => {
                g.ensure(s.lists().contains(list), "l ∈ dom(listow)", || {
                    format!("l = {list}, dom(listow) = {}", s.lists())
                })?;
                g.ensure(s.persons.contains(person), "p ∈ persons", || {
                    format!("p = {person}, persons = {}", s.persons)
                })?;
                g.ensure(
                    s.listow.apply(list) == one(actor),
                    "actor = listow(l)",
                    || {
                        format!(
                            "actor = {actor}, listow[{{{list}}}] = {}",
                            s.listow.apply(list)
                        )
                    },
                )
            }
            Op::DeclarePolicy { first, second, .. } => {
                g.ensure(s.lists().contains(first), "l1 ∈ dom(listow)", || {
                    format!("l1 = {first}, dom(listow) = {}", s.lists())
                })?;
                g.ensure(s.lists().contains(second), "l2 ∈ dom(listow)", || {
                    format!("l2 = {second}, dom(listow) = {}", s.lists())
                })?;
                g.ensure(first != second, "l1 ≠ l2", || {
                    format!("l1 = l2 = {first}")
                })?;
                g.ensure(
                    s.listow.apply(first) == one(actor),
                    "actor = listow(l1)",
                    || {
                        format!(
                            "actor = {actor}, listow[{{{first}}}] = {}",
                            s.listow.apply(first)
                        )
                    },
                )
            }
        }
    }

    fn content_exists(&self, g: &Guards, s: &SnState, c: ElemId) -> Result<(), OpError> {
        g.ensure(s.contents.contains(c), "c ∈ contents", || {
            format!("c = {c}, contents = {}", s.contents)
        })
    }

    fn transmit_guards(
        &self,
        g: &Guards,
        s: &SnState,
        c: ElemId,
        prs: BSet,
    ) -> Result<(), OpError> {
        g.ensure(prs.is_subset(s.persons), "prs ⊆ persons", || {
            format!("prs = {prs}, persons = {}", s.persons)
        })?;
        g.ensure(!s.owner.apply(c).is_subset(prs), "owner(c) ∉ prs", || {
            format!("owner[{{{c}}}] = {}, prs = {prs}", s.owner.apply(c))
        })
    }

    fn actor_owns(&self, g: &Guards, s: &SnState, c: ElemId) -> Result<(), OpError> {
        let actor = self.actor;
        g.ensure(s.owner.apply(c) == one(actor), "actor = owner(c)", || {
            format!("actor = {actor}, owner[{{{c}}}] = {}", s.owner.apply(c))
        })
    }

    /// The poststate, assuming [`OpCall::precondition`] holds in `s`.
    /// Outside the precondition the result is unspecified.
    pub fn transform(&self, s: &SnState) -> SnState {
        let actor = self.actor;
        let mut t = *s;
        match self.op {
            Op::CreateAccount { person, content } => {
                let pair = BRel::pair(content, person);
                t.persons = s.persons.insert(person);
                t.contents = s.contents.insert(content);
                t.owner = s.owner.union(&pair);
                t.pages = s.pages.union(&pair);
                t.viewp = s.viewp.union(&pair);
                t.editp = s.editp.union(&pair);
            }
            Op::Upload { content, person } => {
                let pair = BRel::pair(content, person);
                t.contents = s.contents.insert(content);
                t.owner = s.owner.union(&pair);
                t.pages = s.pages.union(&pair);
                t.viewp = s.viewp.union(&pair);
                t.editp = s.editp.union(&pair);
            }
            Op::Hide { content, person } => {
                t.pages = s.pages.remove(content, person);
                t.viewp = s.viewp.remove(content, person);
                t.editp = s.editp.remove(content, person);
            }
            Op::MakeVisible { content, person } => {
                t.pages = s.pages.insert(content, person);
            }
            Op::Transmit { content, .. }
            | Op::TransmitToList { content, .. }
            | Op::TransmitToListRestricted { content, .. } => {
                let prs = self
                    .op
                    .recipients(s)
                    .expect("transmissions have recipients");
                let granted = BRel::product(one(content), prs);
                t.pages = s.pages.union(&granted);
                t.viewp = s.viewp.union(&granted);
            }
            Op::Delete { content, cascade } => {
                let removed = cascade.insert(content);
                t.contents = s.contents.difference(removed);
                t.owner = s.owner.dom_subtract(removed);
                t.pages = s.pages.dom_subtract(removed);
                t.viewp = s.viewp.dom_subtract(removed);
                t.editp = s.editp.dom_subtract(removed);
            }
            Op::Comment {
                content,
                comment,
                recipients,
            } => {
                let holders = BRel::product(one(comment), recipients.insert(actor));
                let shared = BRel::product(one(content), recipients);
                t.contents = s.contents.insert(comment);
                t.owner = s.owner.insert(comment, actor);
                t.pages = s.pages.union(&holders).union(&shared);
                t.viewp = s.viewp.union(&holders).union(&shared);
                t.editp = s.editp.union(&holders);
            }
            Op::EditOwned {
                content,
                new_content,
            } => {
                let old = one(content);
                let new = one(new_content);
                t.contents = s.contents.difference(old).union(new);
                t.owner = s.owner.dom_subtract(old).insert(new_content, actor);
                t.pages = s
                    .pages
                    .dom_subtract(old)
                    .union(&BRel::product(new, s.pages.apply(content)));
                t.viewp = s
                    .viewp
                    .dom_subtract(old)
                    .union(&BRel::product(new, s.viewp.apply(content)));
                t.editp = s.editp.dom_subtract(old).insert(new_content, actor);
            }
            Op::EditNotOwned {
                content,
                new_content,
                editor,
            } => {
                let keep = s.owner.apply(content);
                let moved = |r: &BRel| {
                    let away = r.apply(content).difference(keep);
                    r.difference(&BRel::product(one(content), away))
                        .union(&BRel::product(one(new_content), away))
                        .insert(new_content, editor)
                };
                t.contents = s.contents.insert(new_content);
                t.owner = s.owner.insert(new_content, editor);
                t.pages = moved(&s.pages);
                t.viewp = moved(&s.viewp);
                t.editp = moved(&s.editp);
            }
            Op::GrantView { content, person } => {
                t.viewp = s.viewp.insert(content, person);
            }
            Op::GrantEdit { content, person } => {
                t.viewp = s.viewp.insert(content, person);
                t.editp = s.editp.insert(content, person);
            }
            Op::CreateList { list, owner } => {
                t.listow = s.listow.insert(list, owner);
            }
            Op::AddToList { list, person } => {
                t.listpe = s.listpe.insert(list, person);
            }
            Op::DeclarePolicy {
                first,
                second,
                disjoint,
            } => {
                t.policies = s.policies.insert(first, second);
                if disjoint {
                    t.disjointness = s.disjointness.insert(first, second);
                }
            }
        }
        t
    }
}
