//! Finite sets and binary relations over a small fixed universe, encoded as
//! bit masks.
//!
//! A [`BSet`] holds one bit per element id. A [`BRel`] holds `n` image slices:
//! slice `d` is the set of elements related to domain element `d`, so pair
//! `(d, r)` lives at bit `n * d + r` of the flat `n²`-bit encoding. That flat
//! layout is the one the SMT emitter writes out, and is normative.
//!
//! Values never carry the universe size. Every operation is closed over
//! in-range masks, so only construction from raw ids or raw bits goes through
//! [`Universe`], which is where range checking happens.

mod rel;
mod set;

pub use rel::BRel;
pub use set::BSet;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported universe; relation slices are stored as `u16`.
pub const MAX_UNIVERSE: usize = 16;

/// Universe size used when nothing else is configured.
pub const DEFAULT_UNIVERSE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("universe size {0} is outside 1..={MAX_UNIVERSE}")]
    UnsupportedUniverse(usize),
    #[error("element id {id} is outside the universe 0..{n}")]
    OutOfRange { id: usize, n: usize },
    #[error("mask has bits set beyond position {limit}")]
    StrayBits { limit: usize },
}

/// An element identifier. Sorts (person, content, list) share the id space;
/// the meaning of an id is decided by the relation it is stored in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemId(u8);

impl ElemId {
    /// Builds an id without checking it against a universe. Ids at or above
    /// [`MAX_UNIVERSE`] are rejected.
    pub fn new(id: usize) -> Result<Self, KernelError> {
        if id < MAX_UNIVERSE {
            Ok(ElemId(id as u8))
        } else {
            Err(KernelError::OutOfRange {
                id,
                n: MAX_UNIVERSE,
            })
        }
    }

    pub(crate) const fn from_index(id: usize) -> Self {
        ElemId(id as u8)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The configured universe `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Universe {
    n: usize,
}

impl Default for Universe {
    fn default() -> Self {
        Universe {
            n: DEFAULT_UNIVERSE,
        }
    }
}

impl Universe {
    pub fn new(n: usize) -> Result<Self, KernelError> {
        if (1..=MAX_UNIVERSE).contains(&n) {
            Ok(Universe { n })
        } else {
            Err(KernelError::UnsupportedUniverse(n))
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Bit width of a relation mask.
    pub fn rel_width(&self) -> usize {
        self.n * self.n
    }

    pub fn elem(&self, id: usize) -> Result<ElemId, KernelError> {
        if id < self.n {
            Ok(ElemId::from_index(id))
        } else {
            Err(KernelError::OutOfRange { id, n: self.n })
        }
    }

    pub fn contains(&self, e: ElemId) -> bool {
        e.index() < self.n
    }

    pub fn elems(&self) -> impl Iterator<Item = ElemId> {
        (0..self.n).map(ElemId::from_index)
    }

    pub fn full_set(&self) -> BSet {
        BSet::from_bits_unchecked(((1u32 << self.n) - 1) as u16)
    }

    pub fn singleton(&self, id: usize) -> Result<BSet, KernelError> {
        Ok(BSet::singleton(self.elem(id)?))
    }

    pub fn set_of<I>(&self, ids: I) -> Result<BSet, KernelError>
    where
        I: IntoIterator<Item = usize>,
    {
        ids.into_iter()
            .try_fold(BSet::empty(), |acc, id| Ok(acc.insert(self.elem(id)?)))
    }

    pub fn set_from_bits(&self, bits: u16) -> Result<BSet, KernelError> {
        if bits & !self.full_set().bits() != 0 {
            return Err(KernelError::StrayBits { limit: self.n - 1 });
        }
        Ok(BSet::from_bits_unchecked(bits))
    }

    pub fn pair(&self, d: usize, r: usize) -> Result<BRel, KernelError> {
        Ok(BRel::pair(self.elem(d)?, self.elem(r)?))
    }

    pub fn rel_of<I>(&self, pairs: I) -> Result<BRel, KernelError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        pairs.into_iter().try_fold(
            BRel::empty(),
            |acc, (d, r)| Ok(acc.union(&self.pair(d, r)?)),
        )
    }

    /// True when no bit of `s` lies outside the universe.
    pub fn set_in_range(&self, s: BSet) -> bool {
        s.is_subset(self.full_set())
    }

    /// True when no pair of `r` mentions an id outside the universe.
    pub fn rel_in_range(&self, r: &BRel) -> bool {
        let full = self.full_set();
        r.domain().is_subset(full) && r.range().is_subset(full)
    }

    /// Flat `n²`-bit encoding of a relation, least significant bit first:
    /// entry `n * d + r` is set exactly when `(d, r)` is in the relation.
    pub fn rel_bits(&self, r: &BRel) -> Vec<bool> {
        let n = self.n;
        let mut bits = vec![false; n * n];
        for (d, x) in r.pairs() {
            bits[n * d.index() + x.index()] = true;
        }
        bits
    }

    /// Inverse of [`Universe::rel_bits`].
    pub fn rel_from_bits(&self, bits: &[bool]) -> Result<BRel, KernelError> {
        let n = self.n;
        if bits.len() > n * n && bits[n * n..].iter().any(|b| *b) {
            return Err(KernelError::StrayBits { limit: n * n - 1 });
        }
        let mut rel = BRel::empty();
        for (pos, _) in bits.iter().enumerate().take(n * n).filter(|(_, b)| **b) {
            rel = rel.union(&BRel::pair(
                ElemId::from_index(pos / n),
                ElemId::from_index(pos % n),
            ));
        }
        Ok(rel)
    }

    /// `0x…` rendering of a set mask, `ceil(n / 4)` hex digits.
    pub fn set_hex(&self, s: BSet) -> String {
        let bits: Vec<bool> = (0..self.n).map(|i| s.bits() >> i & 1 == 1).collect();
        hex_of_bits(&bits)
    }

    /// `0x…` rendering of a relation mask, `ceil(n² / 4)` hex digits.
    pub fn rel_hex(&self, r: &BRel) -> String {
        hex_of_bits(&self.rel_bits(r))
    }
}

fn hex_of_bits(bits: &[bool]) -> String {
    let digits = bits.len().div_ceil(4);
    let mut out = String::with_capacity(digits + 2);
    out.push_str("0x");
    for d in (0..digits).rev() {
        let nibble = (0..4)
            .filter(|k| bits.get(4 * d + k).copied().unwrap_or(false))
            .fold(0u32, |acc, k| acc | 1 << k);
        out.push(char::from_digit(nibble, 16).expect("nibble < 16"));
    }
    out
}
