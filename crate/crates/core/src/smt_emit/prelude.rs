//! The bit-vector prelude: set and relation sorts, kernel operations, the
//! state tuple, and one precondition/transformer pair per operation.
//!
//! Bit `i` of a `bset` is element `i`. A `brel` is `n` slices of `n` bits,
//! slice `d` holding the image of `d` at bits `n·d .. n·d+n`. A `state`
//! concatenates the ten fields with `persons` in the lowest bits.

use super::sexpr::{and, app, call, extract, fold_right, one_hot, sym, zero, Cmd, SortRef, Sx};

const BSET: SortRef = SortRef::Named("bset");
const BREL: SortRef = SortRef::Named("brel");
const STATE: SortRef = SortRef::Named("state");
const BOOL: SortRef = SortRef::Bool;

/// Field names in tuple order.
pub const FIELDS: [&str; 10] = crate::snstate::FIELD_NAMES;

/// Bit offset and width of field `k` in a state of universe `n`.
pub fn field_span(n: usize, k: usize) -> (usize, usize) {
    match k {
        0 => (0, n),
        1 => (n, n),
        _ => (2 * n + (k - 2) * n * n, n * n),
    }
}

pub fn state_width(n: usize) -> usize {
    2 * n + 8 * n * n
}

fn def(name: &str, params: &[(&str, SortRef)], ret: SortRef, body: Sx) -> Cmd {
    Cmd::DefineFun {
        name: name.to_string(),
        params: params
            .iter()
            .map(|(p, s)| (p.to_string(), s.clone()))
            .collect(),
        ret,
        body,
    }
}

fn eq(a: Sx, b: Sx) -> Sx {
    app("=", vec![a, b])
}

fn not(a: Sx) -> Sx {
    app("not", vec![a])
}

fn bit(s: &Sx, i: usize) -> Sx {
    eq(extract(i, i, s.clone()), Sx::Bits(vec![true]))
}

fn ite(c: Sx, a: Sx, b: Sx) -> Sx {
    app("ite", vec![c, a, b])
}

fn empty() -> Sx {
    sym("bset-empty")
}

/// Slice `d` of relation `r`.
fn slice(n: usize, r: &Sx, d: usize) -> Sx {
    extract(n * d + n - 1, n * d, r.clone())
}

/// Relation whose slice `d` is `f(d)`.
fn by_slices(n: usize, f: impl Fn(usize) -> Sx) -> Sx {
    fold_right("concat", (0..n).rev().map(f).collect())
}

fn f1(name: &str, a: Sx) -> Sx {
    call(name, vec![a])
}

fn f2(name: &str, a: Sx, b: Sx) -> Sx {
    call(name, vec![a, b])
}

fn kernel(n: usize) -> Vec<Cmd> {
    let (a, b, r, q, s) = (sym("a"), sym("b"), sym("r"), sym("q"), sym("s"));
    let set2 = [("a", BSET), ("b", BSET)];
    let rel2 = [("r", BREL), ("q", BREL)];
    let mut out = vec![
        Cmd::Comment("sets".into()),
        Cmd::define("bset-empty", BSET, zero(n)),
        Cmd::define("bset-full", BSET, Sx::Bits(vec![true; n])),
    ];
    out.extend((0..n).map(|i| Cmd::define(format!("bset-{i}"), BSET, one_hot(n, i))));
    out.extend([
        def(
            "bset-union",
            &set2,
            BSET,
            app("bvor", vec![a.clone(), b.clone()]),
        ),
        def(
            "bset-intersection",
            &set2,
            BSET,
            app("bvand", vec![a.clone(), b.clone()]),
        ),
        def(
            "bset-difference",
            &set2,
            BSET,
            app("bvand", vec![a.clone(), app("bvnot", vec![b.clone()])]),
        ),
        def(
            "bset-complement",
            &[("a", BSET)],
            BSET,
            app("bvnot", vec![a.clone()]),
        ),
        def(
            "bset-is-subset",
            &set2,
            BOOL,
            eq(a.clone(), app("bvand", vec![a.clone(), b.clone()])),
        ),
        def(
            "bset-is-strict-subset",
            &set2,
            BOOL,
            and(vec![
                f2("bset-is-subset", a.clone(), b.clone()),
                not(eq(a.clone(), b.clone())),
            ]),
        ),
        def("bset-is-equal", &set2, BOOL, eq(a.clone(), b.clone())),
        def(
            "bset-is-empty",
            &[("a", BSET)],
            BOOL,
            eq(a.clone(), empty()),
        ),
        // membership of a singleton `b` in `a`
        def(
            "bset-is-member",
            &set2,
            BOOL,
            and(vec![
                not(eq(b.clone(), empty())),
                f2("bset-is-subset", b.clone(), a.clone()),
            ]),
        ),
        Cmd::Comment("relations".into()),
        Cmd::define("brel-empty", BREL, zero(n * n)),
        def(
            "brel-union",
            &rel2,
            BREL,
            app("bvor", vec![r.clone(), q.clone()]),
        ),
        def(
            "brel-intersection",
            &rel2,
            BREL,
            app("bvand", vec![r.clone(), q.clone()]),
        ),
        def(
            "brel-difference",
            &rel2,
            BREL,
            app("bvand", vec![r.clone(), app("bvnot", vec![q.clone()])]),
        ),
        def(
            "brel-is-subset",
            &rel2,
            BOOL,
            eq(r.clone(), app("bvand", vec![r.clone(), q.clone()])),
        ),
        def("brel-is-equal", &rel2, BOOL, eq(r.clone(), q.clone())),
        def(
            "brel-get-range",
            &[("r", BREL)],
            BSET,
            fold_right("bvor", (0..n).map(|d| slice(n, &r, d)).collect()),
        ),
        def(
            "brel-get-domain",
            &[("r", BREL)],
            BSET,
            fold_right(
                "concat",
                (0..n)
                    .rev()
                    .map(|d| {
                        ite(
                            eq(slice(n, &r, d), empty()),
                            Sx::Bits(vec![false]),
                            Sx::Bits(vec![true]),
                        )
                    })
                    .collect(),
            ),
        ),
        def(
            "brel-apply",
            &[("r", BREL), ("s", BSET)],
            BSET,
            fold_right(
                "bvor",
                (0..n)
                    .map(|d| ite(bit(&s, d), slice(n, &r, d), empty()))
                    .collect(),
            ),
        ),
        def(
            "brel-dom-restriction",
            &[("r", BREL), ("s", BSET)],
            BREL,
            by_slices(n, |d| ite(bit(&s, d), slice(n, &r, d), empty())),
        ),
        def(
            "brel-dom-subtraction",
            &[("r", BREL), ("s", BSET)],
            BREL,
            by_slices(n, |d| ite(bit(&s, d), empty(), slice(n, &r, d))),
        ),
        def(
            "brel-ran-restriction",
            &[("r", BREL), ("s", BSET)],
            BREL,
            by_slices(n, |d| app("bvand", vec![slice(n, &r, d), s.clone()])),
        ),
        def(
            "brel-ran-subtraction",
            &[("r", BREL), ("s", BSET)],
            BREL,
            by_slices(n, |d| {
                app(
                    "bvand",
                    vec![slice(n, &r, d), app("bvnot", vec![s.clone()])],
                )
            }),
        ),
        def(
            "brel-product",
            &set2,
            BREL,
            by_slices(n, |d| ite(bit(&a, d), b.clone(), empty())),
        ),
        def(
            "brel-identity",
            &[("s", BSET)],
            BREL,
            by_slices(n, |d| ite(bit(&s, d), sym(format!("bset-{d}")), empty())),
        ),
        def(
            "brel-inverse",
            &[("r", BREL)],
            BREL,
            by_slices(n, |d| {
                fold_right(
                    "concat",
                    (0..n)
                        .rev()
                        .map(|x| extract(n * x + d, n * x + d, r.clone()))
                        .collect(),
                )
            }),
        ),
        def(
            "brel-compose",
            &rel2,
            BREL,
            by_slices(n, |d| f2("brel-apply", q.clone(), slice(n, &r, d))),
        ),
        def(
            "brel-override",
            &rel2,
            BREL,
            app(
                "bvor",
                vec![
                    f2(
                        "brel-dom-subtraction",
                        r.clone(),
                        f1("brel-get-domain", q.clone()),
                    ),
                    q.clone(),
                ],
            ),
        ),
    ]);
    out
}

fn state_defs(n: usize) -> Vec<Cmd> {
    let mut out = vec![Cmd::Comment(format!("state: {}", FIELDS.join(" ")))];
    for (k, f) in FIELDS.iter().enumerate() {
        let (off, w) = field_span(n, k);
        let ret = if k < 2 { BSET } else { BREL };
        out.push(def(
            f,
            &[("s", STATE)],
            ret,
            extract(off + w - 1, off, sym("s")),
        ));
    }
    let params: Vec<(String, SortRef)> = FIELDS
        .iter()
        .enumerate()
        .map(|(k, f)| (format!("{f}0"), if k < 2 { BSET } else { BREL }))
        .collect();
    out.push(Cmd::DefineFun {
        name: "mk-state".into(),
        params,
        ret: STATE,
        body: fold_right(
            "concat",
            FIELDS.iter().rev().map(|f| sym(format!("{f}0"))).collect(),
        ),
    });
    out.push(Cmd::define("emptystate", STATE, zero(state_width(n))));
    out
}

/// `s` with some fields replaced.
fn update(changes: &[(&str, Sx)]) -> Sx {
    let fields = FIELDS
        .iter()
        .map(|f| {
            changes
                .iter()
                .find(|(g, _)| g == f)
                .map(|(_, x)| x.clone())
                .unwrap_or_else(|| f1(f, sym("s")))
        })
        .collect();
    call("mk-state", fields)
}

fn get(field: &str) -> Sx {
    f1(field, sym("s"))
}

fn member(set: Sx, e: Sx) -> Sx {
    f2("bset-is-member", set, e)
}

fn subset(a: Sx, b: Sx) -> Sx {
    f2("bset-is-subset", a, b)
}

fn apply(r: Sx, x: Sx) -> Sx {
    f2("brel-apply", r, x)
}

fn union(a: Sx, b: Sx) -> Sx {
    f2("bset-union", a, b)
}

fn runion(a: Sx, b: Sx) -> Sx {
    f2("brel-union", a, b)
}

fn product(a: Sx, b: Sx) -> Sx {
    f2("brel-product", a, b)
}

fn owner_of(c: &Sx) -> Sx {
    apply(get("owner"), c.clone())
}

struct OpDef {
    name: &'static str,
    params: Vec<(&'static str, SortRef)>,
    guards: Vec<Sx>,
    changes: Vec<(&'static str, Sx)>,
}

fn op_defs() -> Vec<OpDef> {
    let s = |x: &str| sym(x);
    let (c, p, pe, prs) = (s("c"), s("p"), s("pe"), s("prs"));
    let (l, l1, l2, ow) = (s("l"), s("l1"), s("l2"), s("ow"));
    let (cmt, newc, cts, actor) = (s("cmt"), s("newc"), s("cts"), s("actor"));
    let lists = || f1("brel-get-domain", get("listow"));
    let transmit_guards = |prs: Sx| {
        vec![
            member(get("contents"), c.clone()),
            subset(prs.clone(), get("persons")),
            not(subset(owner_of(&c), prs)),
        ]
    };
    let transmit_changes = |prs: Sx| {
        vec![
            (
                "pages",
                runion(get("pages"), product(c.clone(), prs.clone())),
            ),
            ("viewp", runion(get("viewp"), product(c.clone(), prs))),
        ]
    };
    let new_pair = |x: &Sx, y: &Sx| product(x.clone(), y.clone());
    let account = |rel: &str| runion(get(rel), new_pair(&c, &p));
    let mut defs = vec![
        OpDef {
            name: "create-account",
            params: vec![("c", BSET), ("p", BSET)],
            guards: vec![
                not(member(get("persons"), p.clone())),
                not(member(get("contents"), c.clone())),
            ],
            changes: vec![
                ("persons", union(get("persons"), p.clone())),
                ("contents", union(get("contents"), c.clone())),
                ("owner", account("owner")),
                ("pages", account("pages")),
                ("viewp", account("viewp")),
                ("editp", account("editp")),
            ],
        },
        OpDef {
            name: "upload",
            params: vec![("c", BSET), ("pe", BSET)],
            guards: vec![
                not(member(get("contents"), c.clone())),
                member(get("persons"), pe.clone()),
            ],
            changes: ["owner", "pages", "viewp", "editp"]
                .iter()
                .map(|f| (*f, runion(get(f), new_pair(&c, &pe))))
                .chain([("contents", union(get("contents"), c.clone()))])
                .collect(),
        },
        OpDef {
            name: "hide",
            params: vec![("c", BSET), ("pe", BSET)],
            guards: vec![
                member(get("contents"), c.clone()),
                member(get("persons"), pe.clone()),
                f2("brel-is-subset", new_pair(&c, &pe), get("pages")),
                not(eq(owner_of(&c), pe.clone())),
            ],
            changes: ["pages", "viewp", "editp"]
                .iter()
                .map(|f| (*f, f2("brel-difference", get(f), new_pair(&c, &pe))))
                .collect(),
        },
        OpDef {
            name: "make-visible",
            params: vec![("c", BSET), ("pe", BSET)],
            guards: vec![
                member(get("contents"), c.clone()),
                member(get("persons"), pe.clone()),
                f2("brel-is-subset", new_pair(&c, &pe), get("viewp")),
            ],
            changes: vec![("pages", runion(get("pages"), new_pair(&c, &pe)))],
        },
        OpDef {
            name: "transmit",
            params: vec![("c", BSET), ("prs", BSET)],
            guards: transmit_guards(prs.clone()),
            changes: transmit_changes(prs.clone()),
        },
        OpDef {
            name: "transmit-to-list",
            params: vec![("c", BSET), ("prs", BSET), ("l", BSET)],
            guards: transmit_guards(prs.clone())
                .into_iter()
                .chain([
                    member(lists(), l.clone()),
                    eq(apply(get("listpe"), l.clone()), prs.clone()),
                    eq(owner_of(&c), apply(get("listow"), l.clone())),
                    f1(
                        "bset-is-empty",
                        f2(
                            "bset-intersection",
                            prs.clone(),
                            apply(get("listpe"), apply(get("disjointness"), l.clone())),
                        ),
                    ),
                ])
                .collect(),
            changes: transmit_changes(prs.clone()),
        },
        OpDef {
            name: "transmit-to-list-restricted",
            params: vec![("c", BSET), ("prs", BSET), ("l1", BSET), ("l2", BSET)],
            guards: transmit_guards(prs.clone())
                .into_iter()
                .chain([
                    member(lists(), l1.clone()),
                    member(lists(), l2.clone()),
                    not(eq(l1.clone(), l2.clone())),
                    eq(
                        f2(
                            "bset-difference",
                            apply(get("listpe"), l1.clone()),
                            apply(get("listpe"), l2.clone()),
                        ),
                        prs.clone(),
                    ),
                    eq(owner_of(&c), apply(get("listow"), l1.clone())),
                    eq(owner_of(&c), apply(get("listow"), l2.clone())),
                ])
                .collect(),
            changes: transmit_changes(prs.clone()),
        },
        {
            let gone = union(c.clone(), cts.clone());
            OpDef {
                name: "delete",
                params: vec![("c", BSET), ("cts", BSET)],
                guards: vec![
                    member(get("contents"), c.clone()),
                    f2(
                        "bset-is-strict-subset",
                        c.clone(),
                        f1(
                            "brel-get-domain",
                            f2("brel-ran-restriction", get("owner"), owner_of(&c)),
                        ),
                    ),
                    subset(cts.clone(), get("contents")),
                    not(member(cts.clone(), c.clone())),
                    subset(
                        get("persons"),
                        f1(
                            "brel-get-range",
                            f2("brel-dom-subtraction", get("owner"), gone.clone()),
                        ),
                    ),
                ],
                changes: ["owner", "pages", "viewp", "editp"]
                    .iter()
                    .map(|f| (*f, f2("brel-dom-subtraction", get(f), gone.clone())))
                    .chain([(
                        "contents",
                        f2("bset-difference", get("contents"), gone.clone()),
                    )])
                    .collect(),
            }
        },
        {
            let holders = product(cmt.clone(), union(prs.clone(), actor.clone()));
            let shared = product(c.clone(), prs.clone());
            let spread = |f: &str| runion(runion(get(f), holders.clone()), shared.clone());
            OpDef {
                name: "comment",
                params: vec![("c", BSET), ("cmt", BSET), ("prs", BSET), ("actor", BSET)],
                guards: vec![
                    member(get("contents"), c.clone()),
                    not(member(get("contents"), cmt.clone())),
                    subset(prs.clone(), get("persons")),
                    f2("brel-is-subset", new_pair(&c, &actor), get("viewp")),
                ],
                changes: vec![
                    ("contents", union(get("contents"), cmt.clone())),
                    ("owner", runion(get("owner"), new_pair(&cmt, &actor))),
                    ("pages", spread("pages")),
                    ("viewp", spread("viewp")),
                    ("editp", runion(get("editp"), holders.clone())),
                ],
            }
        },
        {
            let moved = |f: &str| {
                runion(
                    f2("brel-dom-subtraction", get(f), c.clone()),
                    product(newc.clone(), apply(get(f), c.clone())),
                )
            };
            let mine = |f: &str| {
                runion(
                    f2("brel-dom-subtraction", get(f), c.clone()),
                    new_pair(&newc, &actor),
                )
            };
            OpDef {
                name: "edit-owned",
                params: vec![("c", BSET), ("newc", BSET), ("actor", BSET)],
                guards: vec![
                    member(get("contents"), c.clone()),
                    eq(owner_of(&c), actor.clone()),
                    not(member(get("contents"), newc.clone())),
                ],
                changes: vec![
                    (
                        "contents",
                        union(
                            f2("bset-difference", get("contents"), c.clone()),
                            newc.clone(),
                        ),
                    ),
                    ("owner", mine("owner")),
                    ("pages", moved("pages")),
                    ("viewp", moved("viewp")),
                    ("editp", mine("editp")),
                ],
            }
        },
        {
            let away = |f: &str| f2("bset-difference", apply(get(f), c.clone()), owner_of(&c));
            let moved = |f: &str| {
                runion(
                    runion(
                        f2("brel-difference", get(f), product(c.clone(), away(f))),
                        product(newc.clone(), away(f)),
                    ),
                    new_pair(&newc, &p),
                )
            };
            OpDef {
                name: "edit-not-owned",
                params: vec![("c", BSET), ("newc", BSET), ("p", BSET)],
                guards: vec![
                    member(get("contents"), c.clone()),
                    not(eq(owner_of(&c), p.clone())),
                    f2("brel-is-subset", new_pair(&c, &p), get("editp")),
                    not(member(get("contents"), newc.clone())),
                ],
                changes: vec![
                    ("contents", union(get("contents"), newc.clone())),
                    ("owner", runion(get("owner"), new_pair(&newc, &p))),
                    ("pages", moved("pages")),
                    ("viewp", moved("viewp")),
                    ("editp", moved("editp")),
                ],
            }
        },
    ];
    let grant_guards = vec![
        member(get("contents"), c.clone()),
        member(get("persons"), p.clone()),
        not(eq(owner_of(&c), p.clone())),
    ];
    defs.push(OpDef {
        name: "grant-view",
        params: vec![("c", BSET), ("p", BSET)],
        guards: grant_guards.clone(),
        changes: vec![("viewp", runion(get("viewp"), new_pair(&c, &p)))],
    });
    defs.push(OpDef {
        name: "grant-edit",
        params: vec![("c", BSET), ("p", BSET)],
        guards: grant_guards,
        changes: vec![
            ("viewp", runion(get("viewp"), new_pair(&c, &p))),
            ("editp", runion(get("editp"), new_pair(&c, &p))),
        ],
    });
    defs.push(OpDef {
        name: "create-list",
        params: vec![("l", BSET), ("ow", BSET)],
        guards: vec![
            not(member(lists(), l.clone())),
            member(get("persons"), ow.clone()),
        ],
        changes: vec![("listow", runion(get("listow"), new_pair(&l, &ow)))],
    });
    defs.push(OpDef {
        name: "add-to-list",
        params: vec![("l", BSET), ("p", BSET)],
        guards: vec![
            member(lists(), l.clone()),
            member(get("persons"), p.clone()),
        ],
        changes: vec![("listpe", runion(get("listpe"), new_pair(&l, &p)))],
    });
    // every member of `prs` joins `l`; vacuous when `prs` is empty
    defs.push(OpDef {
        name: "bind-list",
        params: vec![("l", BSET), ("prs", BSET), ("actor", BSET)],
        guards: vec![app(
            "or",
            vec![
                f1("bset-is-empty", prs.clone()),
                and(vec![
                    member(lists(), l.clone()),
                    subset(prs.clone(), get("persons")),
                    eq(apply(get("listow"), l.clone()), actor.clone()),
                ]),
            ],
        )],
        changes: vec![(
            "listpe",
            runion(get("listpe"), product(l.clone(), prs.clone())),
        )],
    });
    let declare_guards = vec![
        member(lists(), l1.clone()),
        member(lists(), l2.clone()),
        not(eq(l1.clone(), l2.clone())),
    ];
    defs.push(OpDef {
        name: "declare-policy",
        params: vec![("l1", BSET), ("l2", BSET)],
        guards: declare_guards.clone(),
        changes: vec![("policies", runion(get("policies"), new_pair(&l1, &l2)))],
    });
    defs.push(OpDef {
        name: "declare-disjoint",
        params: vec![("l1", BSET), ("l2", BSET)],
        guards: declare_guards,
        changes: vec![
            ("policies", runion(get("policies"), new_pair(&l1, &l2))),
            (
                "disjointness",
                runion(get("disjointness"), new_pair(&l1, &l2)),
            ),
        ],
    });
    defs
}

fn operations() -> Vec<Cmd> {
    let mut out = vec![Cmd::Comment("operations".into())];
    for d in op_defs() {
        let params: Vec<(&str, SortRef)> = std::iter::once(("s", STATE))
            .chain(d.params.iter().cloned())
            .collect();
        out.push(def(
            &format!("{}-precondition", d.name),
            &params,
            BOOL,
            and(d.guards),
        ));
        out.push(def(d.name, &params, STATE, update(&d.changes)));
    }
    out
}

/// Prelude commands for universe size `n`.
pub fn prelude(n: usize) -> Vec<Cmd> {
    let mut out = vec![
        Cmd::SetLogic,
        Cmd::DefineSort("bset", n),
        Cmd::DefineSort("brel", n * n),
        Cmd::DefineSort("state", state_width(n)),
    ];
    out.extend(kernel(n));
    out.extend(state_defs(n));
    out.extend(operations());
    out
}

/// Names the prelude defines; scenario names must avoid them.
pub fn defined_names(n: usize) -> Vec<String> {
    prelude(n)
        .into_iter()
        .filter_map(|c| match c {
            Cmd::DefineFun { name, .. } => Some(name),
            Cmd::DefineSort(name, _) => Some(name.to_string()),
            _ => None,
        })
        .collect()
}
