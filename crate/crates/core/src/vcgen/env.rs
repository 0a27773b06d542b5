//! List-membership environments.
//!
//! A list created by `create-list` and never filled by `add-to-list` gets its
//! members from the environment when it is created. Such a list is *fixed*
//! by a `members` fact, *derived* by an assumption `l = expr`, or *free*.
//! Free lists range over every subset of the scenario's persons; the other
//! assumptions filter the resulting assignments.

use serde::Serialize;

use crate::kernel::{BSet, ElemId};
use crate::operations::Op;
use crate::policy_lang::{BoundAssumption, BoundScenario, Template, Term};

/// Default cap on the number of candidate environments.
pub const DEFAULT_MAX_ENVS: u64 = 1 << 20;

/// Members supplied for each environment-bound list, ascending by list id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Env {
    pub bindings: Vec<(ElemId, BSet)>,
}

impl Env {
    pub fn get(&self, list: ElemId) -> Option<BSet> {
        self.bindings
            .iter()
            .find(|(l, _)| *l == list)
            .map(|(_, m)| *m)
    }

    fn set(&mut self, list: ElemId, members: BSet) {
        match self.bindings.iter_mut().find(|(l, _)| *l == list) {
            Some(slot) => slot.1 = members,
            None => {
                self.bindings.push((list, members));
                self.bindings.sort();
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ListSource {
    Fixed,
    Derived,
    Free,
}

/// The candidate count exceeds the configured cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{candidates} candidate environments exceed the cap of {cap}")]
pub struct BoundExceeded {
    pub candidates: u128,
    pub cap: u64,
}

#[derive(Debug, Clone)]
pub struct EnvSpace {
    persons: BSet,
    fixed: Vec<(ElemId, BSet)>,
    /// In evaluation order.
    derived: Vec<(ElemId, Term)>,
    free: Vec<ElemId>,
    filters: Vec<BoundAssumption>,
    /// Members added by `add-to-list` instructions, per list.
    static_members: [BSet; crate::kernel::MAX_UNIVERSE],
}

impl EnvSpace {
    pub fn new(b: &BoundScenario) -> Self {
        let mut created = BSet::empty();
        let mut filled = BSet::empty();
        let mut static_members = [BSet::empty(); crate::kernel::MAX_UNIVERSE];
        for instr in b.policies.iter().flat_map(|p| &p.body) {
            match instr.template {
                Template::Op(Op::CreateList { list, .. }) => created = created.insert(list),
                Template::Op(Op::AddToList { list, person }) => {
                    filled = filled.insert(list);
                    static_members[list.index()] = static_members[list.index()].insert(person);
                }
                _ => {}
            }
        }
        let bound = created.difference(filled);
        let fixed: Vec<(ElemId, BSet)> = b
            .members
            .iter()
            .filter(|(l, _)| bound.contains(*l))
            .copied()
            .collect();
        let mut settled: BSet = fixed.iter().map(|(l, _)| *l).collect();
        let mut derived = Vec::new();
        let mut derived_set = BSet::empty();
        let mut filters = Vec::new();
        let pending = bound.difference(settled);
        let lhs_at = |a: &BoundAssumption| match a {
            BoundAssumption::Equal(Term::List(l), _) => Some(*l),
            _ => None,
        };
        for (i, a) in b.assumptions.iter().enumerate() {
            if let BoundAssumption::Equal(Term::List(l), rhs) = a {
                let mut used = BSet::empty();
                rhs.lists(&mut used);
                // rhs may not read a list that a later equality defines
                let later: BSet = b.assumptions[i + 1..].iter().filter_map(lhs_at).collect();
                if pending.contains(*l)
                    && !derived_set.contains(*l)
                    && !used.contains(*l)
                    && used.is_disjoint(later)
                {
                    derived.push((*l, rhs.clone()));
                    derived_set = derived_set.insert(*l);
                    continue;
                }
            }
            filters.push(a.clone());
        }
        settled = settled.union(derived_set);
        let free = bound.difference(settled).iter().collect();
        EnvSpace {
            persons: b.all_persons(),
            fixed,
            derived,
            free,
            filters,
            static_members,
        }
    }

    pub fn source(&self, list: ElemId) -> Option<ListSource> {
        if self.fixed.iter().any(|(l, _)| *l == list) {
            Some(ListSource::Fixed)
        } else if self.derived.iter().any(|(l, _)| *l == list) {
            Some(ListSource::Derived)
        } else if self.free.contains(&list) {
            Some(ListSource::Free)
        } else {
            None
        }
    }

    pub fn free_lists(&self) -> &[ElemId] {
        &self.free
    }

    pub fn filters(&self) -> &[BoundAssumption] {
        &self.filters
    }

    pub fn fixed(&self) -> &[(ElemId, BSet)] {
        &self.fixed
    }

    /// Derived lists with their defining terms, in evaluation order.
    pub fn derived(&self) -> &[(ElemId, Term)] {
        &self.derived
    }

    /// Members given to `list` by `add-to-list` instructions.
    pub fn static_members(&self, list: ElemId) -> BSet {
        self.static_members[list.index()]
    }

    pub fn persons(&self) -> BSet {
        self.persons
    }

    pub fn candidates(&self) -> u128 {
        1u128
            .checked_shl((self.persons.len() * self.free.len()) as u32)
            .unwrap_or(u128::MAX)
    }

    /// Membership used when evaluating assumptions.
    pub fn members(&self, env: &Env, list: ElemId) -> BSet {
        env.get(list).unwrap_or(self.static_members[list.index()])
    }

    /// Builds the environment for one assignment of the free lists.
    pub fn complete(&self, free: &[BSet]) -> Env {
        let mut env = Env::default();
        for (l, m) in &self.fixed {
            env.set(*l, *m);
        }
        for (l, m) in self.free.iter().zip(free) {
            env.set(*l, *m);
        }
        for (l, rhs) in &self.derived {
            let v = rhs.eval(&|x| self.members(&env, x));
            env.set(*l, v);
        }
        env
    }

    pub fn admits(&self, env: &Env) -> bool {
        self.filters
            .iter()
            .all(|a| a.holds(&|l| self.members(env, l)))
    }

    /// Admissible environments in lexicographic order of the free lists'
    /// masks, first free list most significant.
    pub fn iter(&self, cap: u64) -> Result<impl Iterator<Item = Env> + '_, BoundExceeded> {
        let candidates = self.candidates();
        if candidates > cap as u128 {
            return Err(BoundExceeded { candidates, cap });
        }
        let width = self.persons.len();
        let persons: Vec<ElemId> = self.persons.iter().collect();
        let k = self.free.len();
        Ok((0..candidates as u64).filter_map(move |index| {
            let masks: Vec<BSet> = (0..k)
                .map(|i| {
                    let shift = width * (k - 1 - i);
                    let bits = (index >> shift) & ((1u64 << width) - 1);
                    persons
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| bits >> j & 1 == 1)
                        .map(|(_, p)| *p)
                        .collect()
                })
                .collect();
            let env = self.complete(&masks);
            self.admits(&env).then_some(env)
        }))
    }
}
