use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ElemId, MAX_UNIVERSE};

/// A set of element ids; bit `j` is set exactly when `j` is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BSet(u16);

impl BSet {
    pub const fn empty() -> Self {
        BSet(0)
    }

    pub const fn singleton(e: ElemId) -> Self {
        BSet(1 << e.index())
    }

    pub(crate) const fn from_bits_unchecked(bits: u16) -> Self {
        BSet(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub const fn union(self, other: BSet) -> BSet {
        BSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: BSet) -> BSet {
        BSet(self.0 & other.0)
    }

    pub const fn difference(self, other: BSet) -> BSet {
        BSet(self.0 & !other.0)
    }

    pub const fn insert(self, e: ElemId) -> BSet {
        self.union(BSet::singleton(e))
    }

    pub const fn remove(self, e: ElemId) -> BSet {
        self.difference(BSet::singleton(e))
    }

    pub const fn contains(self, e: ElemId) -> bool {
        self.0 >> e.index() & 1 == 1
    }

    pub const fn is_subset(self, other: BSet) -> bool {
        self.0 & other.0 == self.0
    }

    pub const fn is_strict_subset(self, other: BSet) -> bool {
        self.is_subset(other) && self.0 != other.0
    }

    pub const fn is_disjoint(self, other: BSet) -> bool {
        self.0 & other.0 == 0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// The single member, if this is a singleton.
    pub fn as_singleton(self) -> Option<ElemId> {
        (self.len() == 1).then(|| ElemId::from_index(self.0.trailing_zeros() as usize))
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = ElemId> {
        (0..MAX_UNIVERSE)
            .filter(move |i| self.0 >> i & 1 == 1)
            .map(ElemId::from_index)
    }
}

impl FromIterator<ElemId> for BSet {
    fn from_iter<I: IntoIterator<Item = ElemId>>(iter: I) -> Self {
        iter.into_iter().fold(BSet::empty(), BSet::insert)
    }
}

impl fmt::Display for BSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for BSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for BSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(deserializer)?;
        ids.into_iter()
            .map(|id| ElemId::new(id).map_err(serde::de::Error::custom))
            .collect()
    }
}
