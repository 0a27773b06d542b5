use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BSet, ElemId, MAX_UNIVERSE};

/// A binary relation over element ids, stored as one image slice per domain
/// element: `slices[d]` is `{ r | (d, r) ∈ self }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BRel {
    slices: [u16; MAX_UNIVERSE],
}

impl BRel {
    pub const fn empty() -> Self {
        BRel {
            slices: [0; MAX_UNIVERSE],
        }
    }

    pub fn pair(d: ElemId, r: ElemId) -> Self {
        let mut rel = BRel::empty();
        rel.slices[d.index()] = 1 << r.index();
        rel
    }

    /// Image slice of a single domain element.
    pub fn slice(&self, d: ElemId) -> BSet {
        BSet::from_bits_unchecked(self.slices[d.index()])
    }

    fn zip_with(&self, other: &BRel, f: impl Fn(u16, u16) -> u16) -> BRel {
        let mut out = BRel::empty();
        for d in 0..MAX_UNIVERSE {
            out.slices[d] = f(self.slices[d], other.slices[d]);
        }
        out
    }

    fn map_slices(&self, f: impl Fn(usize, u16) -> u16) -> BRel {
        let mut out = BRel::empty();
        for d in 0..MAX_UNIVERSE {
            out.slices[d] = f(d, self.slices[d]);
        }
        out
    }

    pub fn contains(&self, d: ElemId, r: ElemId) -> bool {
        self.slice(d).contains(r)
    }

    pub fn union(&self, other: &BRel) -> BRel {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &BRel) -> BRel {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &BRel) -> BRel {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn insert(&self, d: ElemId, r: ElemId) -> BRel {
        self.union(&BRel::pair(d, r))
    }

    pub fn remove(&self, d: ElemId, r: ElemId) -> BRel {
        self.difference(&BRel::pair(d, r))
    }

    pub fn is_subset(&self, other: &BRel) -> bool {
        self.slices
            .iter()
            .zip(other.slices.iter())
            .all(|(a, b)| a & b == *a)
    }

    pub fn is_empty(&self) -> bool {
        self.slices.iter().all(|s| *s == 0)
    }

    pub fn len(&self) -> usize {
        self.slices.iter().map(|s| s.count_ones() as usize).sum()
    }

    /// `dom(r)`: domain elements with a non-empty slice.
    pub fn domain(&self) -> BSet {
        let bits = self
            .slices
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != 0)
            .fold(0u16, |acc, (d, _)| acc | 1 << d);
        BSet::from_bits_unchecked(bits)
    }

    /// `ran(r)`: union of all slices.
    pub fn range(&self) -> BSet {
        BSet::from_bits_unchecked(self.slices.iter().fold(0, |acc, s| acc | s))
    }

    /// `s ◁ r`
    pub fn dom_restrict(&self, s: BSet) -> BRel {
        self.map_slices(|d, slice| if s.bits() >> d & 1 == 1 { slice } else { 0 })
    }

    /// `s ⩤ r`
    pub fn dom_subtract(&self, s: BSet) -> BRel {
        self.map_slices(|d, slice| if s.bits() >> d & 1 == 1 { 0 } else { slice })
    }

    /// `r ▷ s`: intersect every slice with `s`.
    pub fn ran_restrict(&self, s: BSet) -> BRel {
        self.map_slices(|_, slice| slice & s.bits())
    }

    /// `r ⩥ s`
    pub fn ran_subtract(&self, s: BSet) -> BRel {
        self.map_slices(|_, slice| slice & !s.bits())
    }

    /// `r[s]`: union of the slices of the members of `s`.
    pub fn image(&self, s: BSet) -> BSet {
        let bits = self
            .slices
            .iter()
            .enumerate()
            .filter(|(d, _)| s.bits() >> d & 1 == 1)
            .fold(0u16, |acc, (_, slice)| acc | slice);
        BSet::from_bits_unchecked(bits)
    }

    /// `r[{d}]`
    pub fn apply(&self, d: ElemId) -> BSet {
        self.slice(d)
    }

    /// Forward composition `self ; other`.
    pub fn compose(&self, other: &BRel) -> BRel {
        self.map_slices(|_, slice| other.image(BSet::from_bits_unchecked(slice)).bits())
    }

    /// `id(s)`
    pub fn identity(s: BSet) -> BRel {
        BRel::empty().map_slices(|d, _| s.bits() & (1 << d))
    }

    /// `r⁻¹`
    pub fn inverse(&self) -> BRel {
        let mut out = BRel::empty();
        for (d, slice) in self.slices.iter().enumerate() {
            for (r, col) in out.slices.iter_mut().enumerate() {
                *col |= (slice >> r & 1) << d;
            }
        }
        out
    }

    /// `self <+ q`, i.e. `q ∪ (dom(q) ⩤ self)`.
    pub fn override_with(&self, q: &BRel) -> BRel {
        q.union(&self.dom_subtract(q.domain()))
    }

    /// `a × b`
    pub fn product(a: BSet, b: BSet) -> BRel {
        BRel::empty().map_slices(|d, _| if a.bits() >> d & 1 == 1 { b.bits() } else { 0 })
    }

    /// Every slice has at most one member.
    pub fn is_partial_function(&self) -> bool {
        self.slices.iter().all(|s| s.count_ones() <= 1)
    }

    /// `a ⊆ dom(r)`
    pub fn is_total_on(&self, a: BSet) -> bool {
        a.is_subset(self.domain())
    }

    /// `b ⊆ ran(r)`
    pub fn is_surjective_onto(&self, b: BSet) -> bool {
        b.is_subset(self.range())
    }

    /// The unique image of `d` when `r` is functional at `d`.
    pub fn image_of(&self, d: ElemId) -> Option<ElemId> {
        self.slice(d).as_singleton()
    }

    /// Pairs in ascending `(domain, range)` order.
    pub fn pairs(&self) -> impl Iterator<Item = (ElemId, ElemId)> + '_ {
        self.slices.iter().enumerate().flat_map(|(d, slice)| {
            BSet::from_bits_unchecked(*slice)
                .iter()
                .map(move |r| (ElemId::from_index(d), r))
        })
    }
}

impl FromIterator<(ElemId, ElemId)> for BRel {
    fn from_iter<I: IntoIterator<Item = (ElemId, ElemId)>>(iter: I) -> Self {
        iter.into_iter()
            .fold(BRel::empty(), |acc, (d, r)| acc.insert(d, r))
    }
}

impl fmt::Display for BRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, r)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({d},{r})")?;
        }
        f.write_str("}")
    }
}

impl Serialize for BRel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.pairs().map(|(d, r)| [d.index(), r.index()]))
    }
}

impl<'de> Deserialize<'de> for BRel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[usize; 2]>::deserialize(deserializer)?;
        pairs
            .into_iter()
            .map(|[d, r]| {
                Ok((
                    ElemId::new(d).map_err(serde::de::Error::custom)?,
                    ElemId::new(r).map_err(serde::de::Error::custom)?,
                ))
            })
            .collect()
    }
}
