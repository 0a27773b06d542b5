//! The social-network state tuple and its safety invariants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::{BRel, BSet, ElemId};

/// Ten-field network state, in tuple order. Persons, contents and lists share
/// the id space; each relation is read by its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SnState {
    pub persons: BSet,
    pub contents: BSet,
    /// content → person
    pub owner: BRel,
    /// content → person
    pub pages: BRel,
    /// content → person
    pub viewp: BRel,
    /// content → person
    pub editp: BRel,
    /// list → person
    pub listpe: BRel,
    /// list → person
    pub listow: BRel,
    /// list → list
    pub policies: BRel,
    /// list → list, always a subset of `policies`
    pub disjointness: BRel,
}

/// Field names in tuple order.
pub const FIELD_NAMES: [&str; 10] = [
    "persons",
    "contents",
    "owner",
    "pages",
    "viewp",
    "editp",
    "listpe",
    "listow",
    "policies",
    "disjointness",
];

impl SnState {
    /// The initialisation event: every field empty.
    pub fn empty() -> Self {
        SnState::default()
    }

    pub fn owner_of(&self, c: ElemId) -> Option<ElemId> {
        self.owner.image_of(c)
    }

    pub fn list_owner(&self, l: ElemId) -> Option<ElemId> {
        self.listow.image_of(l)
    }

    pub fn list_members(&self, l: ElemId) -> BSet {
        self.listpe.apply(l)
    }

    pub fn lists(&self) -> BSet {
        self.listow.domain()
    }

    /// Contents owned by `p`.
    pub fn owned_by(&self, p: ElemId) -> BSet {
        self.owner.ran_restrict(BSet::singleton(p)).domain()
    }

    /// Names of the fields whose values differ between two states.
    pub fn changed_fields(&self, other: &SnState) -> Vec<&'static str> {
        let sets = [
            (self.persons != other.persons, FIELD_NAMES[0]),
            (self.contents != other.contents, FIELD_NAMES[1]),
        ];
        let rels = [
            (&self.owner, &other.owner),
            (&self.pages, &other.pages),
            (&self.viewp, &other.viewp),
            (&self.editp, &other.editp),
            (&self.listpe, &other.listpe),
            (&self.listow, &other.listow),
            (&self.policies, &other.policies),
            (&self.disjointness, &other.disjointness),
        ];
        sets.into_iter()
            .filter(|(changed, _)| *changed)
            .map(|(_, name)| name)
            .chain(
                rels.into_iter()
                    .zip(&FIELD_NAMES[2..])
                    .filter(|((a, b), _)| a != b)
                    .map(|(_, name)| *name),
            )
            .collect()
    }

    /// Every violated safety invariant, one entry each, with a witness.
    pub fn check_invariants(&self) -> Vec<InvariantViolation> {
        [
            self.check_i1(),
            self.check_i2(),
            self.check_i3(),
            self.check_i4(),
            self.check_i5(),
            self.check_i6(),
            self.check_i7(),
        ]
        .into_iter()
        .flatten()
        .collect()
    }

    pub fn satisfies_invariants(&self) -> bool {
        self.check_invariants().is_empty()
    }

    fn check_i1(&self) -> Option<InvariantViolation> {
        let id = InvariantId::I1;
        if let Some(v) = not_functional(id, "owner", &self.owner) {
            return Some(v);
        }
        if let Some(c) = self.contents.difference(self.owner.domain()).iter().next() {
            return Some(InvariantViolation::element(
                id,
                "owner",
                c,
                format!("content {c} has no owner"),
            ));
        }
        if let Some(v) = outside_product(id, "owner", &self.owner, self.contents, self.persons) {
            return Some(v);
        }
        self.persons
            .difference(self.owner.range())
            .iter()
            .next()
            .map(|p| {
                InvariantViolation::element(id, "owner", p, format!("person {p} owns no content"))
            })
    }

    fn check_i2(&self) -> Option<InvariantViolation> {
        let id = InvariantId::I2;
        outside_product(id, "pages", &self.pages, self.contents, self.persons)
            .or_else(|| not_included(id, "owner", &self.owner, "pages", &self.pages))
    }

    fn check_i3(&self) -> Option<InvariantViolation> {
        let id = InvariantId::I3;
        not_included(id, "owner", &self.owner, "viewp", &self.viewp)
            .or_else(|| not_included(id, "owner", &self.owner, "editp", &self.editp))
            .or_else(|| not_included(id, "editp", &self.editp, "viewp", &self.viewp))
            .or_else(|| not_included(id, "pages", &self.pages, "viewp", &self.viewp))
    }

    fn check_i4(&self) -> Option<InvariantViolation> {
        let id = InvariantId::I4;
        outside_product(id, "viewp", &self.viewp, self.contents, self.persons)
            .or_else(|| outside_product(id, "editp", &self.editp, self.contents, self.persons))
    }

    fn check_i5(&self) -> Option<InvariantViolation> {
        let id = InvariantId::I5;
        let lists = self.lists();
        not_functional(id, "listow", &self.listow)
            .or_else(|| outside_range(id, "listow", &self.listow, self.persons))
            .or_else(|| outside_range(id, "listpe", &self.listpe, self.persons))
            .or_else(|| {
                let orphans = self.listpe.dom_subtract(lists);
                first_pair(&orphans).map(|(l, p)| {
                    InvariantViolation::pair(
                        id,
                        "listpe",
                        l,
                        p,
                        format!("list {l} has members but no owner"),
                    )
                })
            })
    }

    fn check_i6(&self) -> Option<InvariantViolation> {
        let id = InvariantId::I6;
        let lists = self.lists();
        outside_product(id, "policies", &self.policies, lists, lists).or_else(|| {
            let reflexive = self.policies.intersection(&BRel::identity(lists));
            first_pair(&reflexive).map(|(l, _)| {
                InvariantViolation::pair(
                    id,
                    "policies",
                    l,
                    l,
                    format!("list {l} is constrained with itself"),
                )
            })
        })
    }

    fn check_i7(&self) -> Option<InvariantViolation> {
        not_included(
            InvariantId::I7,
            "disjointness",
            &self.disjointness,
            "policies",
            &self.policies,
        )
    }
}

impl fmt::Display for SnState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "persons      = {}", self.persons)?;
        writeln!(f, "contents     = {}", self.contents)?;
        writeln!(f, "owner        = {}", self.owner)?;
        writeln!(f, "pages        = {}", self.pages)?;
        writeln!(f, "viewp        = {}", self.viewp)?;
        writeln!(f, "editp        = {}", self.editp)?;
        writeln!(f, "listpe       = {}", self.listpe)?;
        writeln!(f, "listow       = {}", self.listow)?;
        writeln!(f, "policies     = {}", self.policies)?;
        write!(f, "disjointness = {}", self.disjointness)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InvariantId {
    /// `owner` is a total surjection `contents ↠ persons`.
    I1,
    /// `pages ⊆ contents × persons` and `owner ⊆ pages`.
    I2,
    /// Permission inclusions: `owner ⊆ viewp`, `owner ⊆ editp`,
    /// `editp ⊆ viewp`, `pages ⊆ viewp`.
    I3,
    /// `viewp` and `editp` relate existing contents to existing persons.
    I4,
    /// List ownership is functional, list members and owners are persons,
    /// and only owned lists have members.
    I5,
    /// Policies relate distinct owned lists.
    I6,
    /// `disjointness ⊆ policies`.
    I7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Element(ElemId),
    Pair(ElemId, ElemId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantViolation {
    pub invariant: InvariantId,
    /// State field holding the offending bit.
    pub field: &'static str,
    pub witness: Witness,
    pub message: String,
}

impl InvariantViolation {
    fn element(invariant: InvariantId, field: &'static str, e: ElemId, message: String) -> Self {
        InvariantViolation {
            invariant,
            field,
            witness: Witness::Element(e),
            message,
        }
    }

    fn pair(
        invariant: InvariantId,
        field: &'static str,
        d: ElemId,
        r: ElemId,
        message: String,
    ) -> Self {
        InvariantViolation {
            invariant,
            field,
            witness: Witness::Pair(d, r),
            message,
        }
    }
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.invariant, self.message)
    }
}

fn first_pair(r: &BRel) -> Option<(ElemId, ElemId)> {
    r.pairs().next()
}

fn not_functional(id: InvariantId, field: &'static str, r: &BRel) -> Option<InvariantViolation> {
    r.domain().iter().find_map(|d| {
        let image = r.apply(d);
        (image.len() > 1).then(|| {
            let second = image.iter().nth(1).expect("len > 1");
            InvariantViolation::pair(
                id,
                field,
                d,
                second,
                format!("{field} maps {d} to several elements {image}"),
            )
        })
    })
}

fn not_included(
    id: InvariantId,
    field: &'static str,
    sub: &BRel,
    sup_name: &str,
    sup: &BRel,
) -> Option<InvariantViolation> {
    first_pair(&sub.difference(sup)).map(|(d, r)| {
        InvariantViolation::pair(
            id,
            field,
            d,
            r,
            format!("({d},{r}) is in {field} but not in {sup_name}"),
        )
    })
}

fn outside_product(
    id: InvariantId,
    field: &'static str,
    r: &BRel,
    dom: BSet,
    ran: BSet,
) -> Option<InvariantViolation> {
    first_pair(&r.difference(&BRel::product(dom, ran))).map(|(d, x)| {
        InvariantViolation::pair(
            id,
            field,
            d,
            x,
            format!("({d},{x}) in {field} lies outside {dom} × {ran}"),
        )
    })
}

fn outside_range(
    id: InvariantId,
    field: &'static str,
    r: &BRel,
    ran: BSet,
) -> Option<InvariantViolation> {
    first_pair(&r.ran_subtract(ran)).map(|(d, x)| {
        InvariantViolation::pair(
            id,
            field,
            d,
            x,
            format!("({d},{x}) in {field} targets {x}, which is not a person"),
        )
    })
}
