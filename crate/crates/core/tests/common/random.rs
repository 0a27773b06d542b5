//! Random states, operation calls and policy texts.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use sncheck::kernel::{BRel, BSet, ElemId, Universe};
use sncheck::operations::{Op, OpCall};
use sncheck::snstate::SnState;

use super::oracle::id;

pub fn set(rng: &mut StdRng, u: &Universe) -> BSet {
    let mask = u.full_set().bits();
    u.set_from_bits(rng.gen::<u16>() & mask).expect("masked")
}

/// A random relation with a random density, so sparse and dense ones both show up.
pub fn rel(rng: &mut StdRng, u: &Universe) -> BRel {
    let density: f64 = rng.gen();
    let bits: Vec<bool> = (0..u.rel_width()).map(|_| rng.gen_bool(density)).collect();
    u.rel_from_bits(&bits).expect("n² bits")
}

fn pick(rng: &mut StdRng, s: BSet, n: usize) -> ElemId {
    let members: Vec<ElemId> = s.iter().collect();
    if !members.is_empty() && rng.gen_bool(0.85) {
        *members.choose(rng).expect("nonempty")
    } else {
        id(rng.gen_range(0..n))
    }
}

fn subset(rng: &mut StdRng, s: BSet) -> BSet {
    s.iter().filter(|_| rng.gen_bool(0.5)).collect()
}

fn fresh(rng: &mut StdRng, used: BSet, n: usize) -> ElemId {
    let free: Vec<ElemId> = (0..n).map(id).filter(|e| !used.contains(*e)).collect();
    match free.choose(rng) {
        Some(e) if rng.gen_bool(0.9) => *e,
        _ => id(rng.gen_range(0..n)),
    }
}

/// Kinds of operation, one per [`Op`] variant.
pub const OP_KINDS: [&str; 16] = [
    "create-account",
    "upload",
    "hide",
    "make-visible",
    "transmit",
    "transmit-to-list",
    "transmit-to-list-restricted",
    "delete",
    "comment",
    "edit-owned",
    "edit-not-owned",
    "grant-view-permission",
    "grant-edit-permission",
    "create-list",
    "add-to-list",
    "declare-policy",
];

/// A call of kind `kind` whose arguments are drawn mostly from what exists
/// in `s`. It may or may not be enabled.
pub fn call(rng: &mut StdRng, n: usize, s: &SnState, kind: &str) -> OpCall {
    let content = pick(rng, s.contents, n);
    let person = pick(rng, s.persons, n);
    let owner = s.owner_of(content).unwrap_or(person);
    let lists = s.lists();
    let owned_lists: BSet = lists
        .iter()
        .filter(|l| s.list_owner(*l) == Some(owner))
        .collect();
    let list = if rng.gen_bool(0.7) {
        pick(rng, owned_lists, n)
    } else {
        pick(rng, lists, n)
    };
    let other_list = if rng.gen_bool(0.7) {
        pick(rng, owned_lists.remove(list), n)
    } else {
        pick(rng, lists, n)
    };
    let others = s.persons.difference(s.owner.apply(content));
    let by_owner = |op: Op| OpCall::new(op, owner);
    match kind {
        "create-account" => {
            let p = fresh(rng, s.persons, n);
            OpCall::new(
                Op::CreateAccount {
                    person: p,
                    content: fresh(rng, s.contents, n),
                },
                p,
            )
        }
        "upload" => OpCall::new(
            Op::Upload {
                content: fresh(rng, s.contents, n),
                person,
            },
            person,
        ),
        "hide" => {
            let p = pick(rng, s.pages.apply(content), n);
            OpCall::new(Op::Hide { content, person: p }, p)
        }
        "make-visible" => {
            let p = pick(rng, s.viewp.apply(content), n);
            OpCall::new(Op::MakeVisible { content, person: p }, p)
        }
        "transmit" => by_owner(Op::Transmit {
            content,
            recipients: subset(rng, others),
        }),
        "transmit-to-list" => by_owner(Op::TransmitToList { content, list }),
        "transmit-to-list-restricted" => by_owner(Op::TransmitToListRestricted {
            content,
            list,
            excluded: other_list,
        }),
        "delete" => {
            let mine = s.owner.ran_restrict(BSet::singleton(owner)).domain();
            let cascade = subset(rng, mine.remove(content));
            by_owner(Op::Delete { content, cascade })
        }
        "comment" => {
            let actor = pick(rng, s.viewp.apply(content), n);
            OpCall::new(
                Op::Comment {
                    content,
                    comment: fresh(rng, s.contents, n),
                    recipients: subset(rng, s.persons),
                },
                actor,
            )
        }
        "edit-owned" => by_owner(Op::EditOwned {
            content,
            new_content: fresh(rng, s.contents, n),
        }),
        "edit-not-owned" => {
            let editor = pick(
                rng,
                s.editp.apply(content).difference(s.owner.apply(content)),
                n,
            );
            OpCall::new(
                Op::EditNotOwned {
                    content,
                    new_content: fresh(rng, s.contents, n),
                    editor,
                },
                editor,
            )
        }
        "grant-view-permission" => by_owner(Op::GrantView {
            content,
            person: pick(rng, others, n),
        }),
        "grant-edit-permission" => by_owner(Op::GrantEdit {
            content,
            person: pick(rng, others, n),
        }),
        "create-list" => OpCall::new(
            Op::CreateList {
                list: fresh(rng, lists, n),
                owner: person,
            },
            person,
        ),
        "add-to-list" => {
            let l = pick(rng, lists, n);
            let actor = s.list_owner(l).unwrap_or(person);
            OpCall::new(Op::AddToList { list: l, person }, actor)
        }
        "declare-policy" => {
            let l = pick(rng, lists, n);
            let actor = s.list_owner(l).unwrap_or(person);
            let mine: BSet = lists
                .iter()
                .filter(|x| s.list_owner(*x) == Some(actor))
                .collect();
            let second = if rng.gen_bool(0.5) {
                pick(rng, mine.remove(l), n)
            } else {
                pick(rng, lists.remove(l), n)
            };
            OpCall::new(
                Op::DeclarePolicy {
                    first: l,
                    second,
                    disjoint: rng.gen_bool(0.5),
                },
                actor,
            )
        }
        other => panic!("unknown operation kind {other}"),
    }
}

/// An enabled call of kind `kind` in `s`, if one turns up within `tries` draws.
pub fn enabled_call(
    rng: &mut StdRng,
    n: usize,
    s: &SnState,
    kind: &str,
    tries: usize,
) -> Option<OpCall> {
    (0..tries)
        .map(|_| call(rng, n, s, kind))
        .find(|c| c.is_enabled(s))
}

/// States reached from the empty state by random enabled calls. Every
/// intermediate state is kept.
pub fn state_pool(rng: &mut StdRng, n: usize, walks: usize, max_len: usize) -> Vec<SnState> {
    let mut pool = vec![SnState::empty()];
    for _ in 0..walks {
        let mut s = SnState::empty();
        let len = rng.gen_range(1..=max_len);
        for _ in 0..len {
            let kind = if s.persons.len() < 2 || rng.gen_bool(0.1) {
                "create-account"
            } else {
                OP_KINDS.choose(rng).expect("nonempty")
            };
            if let Some(c) = enabled_call(rng, n, &s, kind, 8) {
                s = c.apply(&s).expect("enabled");
                pool.push(s);
            }
        }
    }
    pool
}

/// Names used by random policy texts.
pub const PERSONS: [&str; 3] = ["a", "b", "c"];
pub const CONTENTS: [&str; 2] = ["x", "y"];
pub const LISTS: [&str; 2] = ["l", "m"];

fn person_set(rng: &mut StdRng) -> String {
    let members: Vec<&str> = PERSONS
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    format!("{{{}}}", members.join(", "))
}

/// One random instruction over [`PERSONS`], [`CONTENTS`] and [`LISTS`].
pub fn instruction(rng: &mut StdRng) -> String {
    let p = *PERSONS.choose(rng).expect("nonempty");
    let c = *CONTENTS.choose(rng).expect("nonempty");
    let c2 = *CONTENTS.choose(rng).expect("nonempty");
    let l = *LISTS.choose(rng).expect("nonempty");
    let l2 = *LISTS.choose(rng).expect("nonempty");
    match rng.gen_range(0..17) {
        0 | 1 => format!("create-account({p}, {c})"),
        2 => format!("upload({c}, {p})"),
        3 | 4 => format!("create-list({l}, {p})"),
        5 => format!("add-to-list({l}, {p})"),
        6 => format!("transmit({c}, {})", person_set(rng)),
        7 | 8 => format!("transmit-to-list({c}, {l})"),
        9 => format!("transmit-to-list-restricted({c}, {l}, {l2})"),
        10 => format!("hide({c}, {p})"),
        11 => format!("grant-view({c}, {p})"),
        12 => format!("grant-edit({c}, {p})"),
        13 => format!("comment({c}, {c2}, {l})"),
        14 => format!("{p}: comment({c}, {c2}, {})", person_set(rng)),
        15 => format!("edit({c}, {p}, {c2})"),
        _ => format!("declare-disjoint({l}, {l2})"),
    }
}

/// A policy body of 1..=`max_len` instructions.
pub fn policy_body(rng: &mut StdRng, max_len: usize) -> Vec<String> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| instruction(rng)).collect()
}

pub fn render_policy(name: &str, body: &[String]) -> String {
    let lines: Vec<String> = body.iter().map(|i| format!("  {i};\n")).collect();
    format!("policy {name}() {{\n{}}}\n", lines.concat())
}

/// A policy body that usually runs: `a` opens an account with `x`, builds
/// lists and shares `x` with them, others may be granted access, and an
/// edit, if any, comes last.
pub fn plausible_body(rng: &mut StdRng, max_len: usize) -> Vec<String> {
    let mut body = vec!["create-account(a, x)".to_string()];
    let mut lists: Vec<&str> = Vec::new();
    let len = rng.gen_range(2..=max_len);
    while body.len() < len {
        let other = *["b", "c"].choose(rng).expect("nonempty");
        let step = match rng.gen_range(0..10) {
            0 | 1 if lists.len() < LISTS.len() => {
                let l = LISTS[lists.len()];
                lists.push(l);
                format!("create-list({l}, a)")
            }
            2 | 3 if !lists.is_empty() => {
                format!(
                    "transmit-to-list(x, {})",
                    lists.choose(rng).expect("nonempty")
                )
            }
            4 if lists.len() == 2 => {
                let (l1, l2) = if rng.gen_bool(0.5) {
                    ("l", "m")
                } else {
                    ("m", "l")
                };
                format!("transmit-to-list-restricted(x, {l1}, {l2})")
            }
            5 => format!("grant-view(x, {other})"),
            6 => format!("grant-edit(x, {other})"),
            7 => format!("transmit(x, {})", {
                let set: Vec<&str> = ["b", "c"]
                    .into_iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                format!("{{{}}}", set.join(", "))
            }),
            8 if !lists.is_empty() => {
                format!("comment(x, y, {})", lists.choose(rng).expect("nonempty"))
            }
            9 => {
                if rng.gen_bool(0.5) {
                    "edit(x, a, y)".to_string()
                } else {
                    format!("upload(y, {other})")
                }
            }
            _ => continue,
        };
        let ends =
            step.starts_with("edit") || step.starts_with("comment") || step.starts_with("upload");
        body.push(step);
        if ends {
            break;
        }
    }
    body
}
