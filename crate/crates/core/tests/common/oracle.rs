//! Naive set-of-pairs model of the kernel, written without bit tricks.

use std::collections::BTreeSet;

use sncheck::kernel::{BRel, BSet, ElemId, Universe};
use sncheck::snstate::SnState;

pub type Elems = BTreeSet<usize>;
pub type Pairs = BTreeSet<(usize, usize)>;

pub fn elems(s: BSet) -> Elems {
    (0..16).filter(|i| s.bits() >> i & 1 == 1).collect()
}

pub fn pairs(u: &Universe, r: &BRel) -> Pairs {
    let n = u.size();
    u.rel_bits(r)
        .iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(k, _)| (k / n, k % n))
        .collect()
}

pub fn to_bset(u: &Universe, s: &Elems) -> BSet {
    u.set_of(s.iter().copied()).expect("in range")
}

pub fn to_brel(u: &Universe, p: &Pairs) -> BRel {
    u.rel_of(p.iter().copied()).expect("in range")
}

pub fn id(i: usize) -> ElemId {
    ElemId::new(i).expect("in range")
}

pub fn domain(r: &Pairs) -> Elems {
    r.iter().map(|p| p.0).collect()
}

pub fn range(r: &Pairs) -> Elems {
    r.iter().map(|p| p.1).collect()
}

pub fn dom_restrict(s: &Elems, r: &Pairs) -> Pairs {
    r.iter().filter(|p| s.contains(&p.0)).copied().collect()
}

pub fn dom_subtract(s: &Elems, r: &Pairs) -> Pairs {
    r.iter().filter(|p| !s.contains(&p.0)).copied().collect()
}

pub fn ran_restrict(r: &Pairs, s: &Elems) -> Pairs {
    r.iter().filter(|p| s.contains(&p.1)).copied().collect()
}

pub fn ran_subtract(r: &Pairs, s: &Elems) -> Pairs {
    r.iter().filter(|p| !s.contains(&p.1)).copied().collect()
}

pub fn image(r: &Pairs, s: &Elems) -> Elems {
    r.iter().filter(|p| s.contains(&p.0)).map(|p| p.1).collect()
}

/// Forward composition: `(a, c)` whenever `(a, b) ∈ q` and `(b, c) ∈ r`.
pub fn compose(q: &Pairs, r: &Pairs) -> Pairs {
    let mut out = Pairs::new();
    for &(a, b) in q {
        for &(b2, c) in r {
            if b == b2 {
                out.insert((a, c));
            }
        }
    }
    out
}

pub fn identity(s: &Elems) -> Pairs {
    s.iter().map(|&x| (x, x)).collect()
}

pub fn inverse(r: &Pairs) -> Pairs {
    r.iter().map(|&(a, b)| (b, a)).collect()
}

/// `r <+ q`: pairs of `q`, plus pairs of `r` whose domain element `q` leaves alone.
pub fn override_with(r: &Pairs, q: &Pairs) -> Pairs {
    let dq = domain(q);
    r.iter()
        .filter(|p| !dq.contains(&p.0))
        .chain(q.iter())
        .copied()
        .collect()
}

pub fn product(a: &Elems, b: &Elems) -> Pairs {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| (x, y)))
        .collect()
}

pub fn is_partial_function(r: &Pairs) -> bool {
    domain(r)
        .iter()
        .all(|d| r.iter().filter(|p| p.0 == *d).count() == 1)
}

pub fn is_total_on(r: &Pairs, a: &Elems) -> bool {
    a.iter().all(|d| r.iter().any(|p| p.0 == *d))
}

pub fn is_surjective_onto(r: &Pairs, b: &Elems) -> bool {
    b.iter().all(|x| r.iter().any(|p| p.1 == *x))
}

/// Invariants I1–I7 restated over pair sets. Returns the names of those
/// that fail.
pub fn invariant_failures(u: &Universe, s: &SnState) -> Vec<&'static str> {
    let persons = elems(s.persons);
    let contents = elems(s.contents);
    let owner = pairs(u, &s.owner);
    let pages = pairs(u, &s.pages);
    let viewp = pairs(u, &s.viewp);
    let editp = pairs(u, &s.editp);
    let listpe = pairs(u, &s.listpe);
    let listow = pairs(u, &s.listow);
    let policies = pairs(u, &s.policies);
    let disjointness = pairs(u, &s.disjointness);
    let cp = product(&contents, &persons);
    let lists = domain(&listow);

    let mut out = Vec::new();
    let i1 = is_partial_function(&owner) && domain(&owner) == contents && range(&owner) == persons;
    if !i1 {
        out.push("I1");
    }
    if !(pages.is_subset(&cp) && owner.is_subset(&pages)) {
        out.push("I2");
    }
    let i3 = owner.is_subset(&viewp)
        && owner.is_subset(&editp)
        && editp.is_subset(&viewp)
        && pages.is_subset(&viewp);
    if !i3 {
        out.push("I3");
    }
    if !(viewp.is_subset(&cp) && editp.is_subset(&cp)) {
        out.push("I4");
    }
    let i5 = is_partial_function(&listow)
        && range(&listow).is_subset(&persons)
        && range(&listpe).is_subset(&persons)
        && domain(&listpe).is_subset(&lists);
    if !i5 {
        out.push("I5");
    }
    let i6 = policies
        .iter()
        .all(|&(a, b)| a != b && lists.contains(&a) && lists.contains(&b));
    if !i6 {
        out.push("I6");
    }
    if !disjointness.is_subset(&policies) {
        out.push("I7");
    }
    out
}
