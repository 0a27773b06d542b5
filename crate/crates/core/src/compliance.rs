//! Policy compliance: after running both policies, the new one may grant no
//! view or edit permission on a protected content that the old one withholds.
//!
//! Protected contents are those the old policy names, context included.
//! Compliance is universal over admissible environments; a breach reports
//! the least environment that exhibits one.

use serde::Serialize;

use crate::kernel::{BSet, ElemId};
use crate::policy_lang::BoundScenario;
use crate::snstate::SnState;
use crate::vcgen::{self, BoundExceeded, Env, EnvSpace, StepFailure, VcError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PermKind {
    View,
    Edit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub env: Env,
    pub content: ElemId,
    pub person: ElemId,
    pub kind: PermKind,
}

/// Holders of each permission on one protected content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContentDiff {
    pub content: ElemId,
    pub view_old: BSet,
    pub view_new: BSet,
    pub edit_old: BSet,
    pub edit_new: BSet,
}

impl ContentDiff {
    /// View holders under the new policy only.
    pub fn view_extra(&self) -> BSet {
        self.view_new.difference(self.view_old)
    }

    pub fn edit_extra(&self) -> BSet {
        self.edit_new.difference(self.edit_old)
    }

    pub fn complies(&self) -> bool {
        self.view_extra().is_empty() && self.edit_extra().is_empty()
    }

    /// First leaked permission: view before edit, lowest person first.
    pub fn first_leak(&self) -> Option<(PermKind, ElemId)> {
        self.view_extra()
            .iter()
            .next()
            .map(|p| (PermKind::View, p))
            .or_else(|| self.edit_extra().iter().next().map(|p| (PermKind::Edit, p)))
    }
}

/// Per-content comparison of two final states.
pub fn permission_diff(old: &SnState, new: &SnState, protected: BSet) -> Vec<ContentDiff> {
    protected
        .iter()
        .map(|c| ContentDiff {
            content: c,
            view_old: old.viewp.apply(c),
            view_new: new.viewp.apply(c),
            edit_old: old.editp.apply(c),
            edit_new: new.editp.apply(c),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ComplianceVerdict {
    /// Every admissible environment complies. The diff is taken under the
    /// least environment.
    Compliant {
        envs: u64,
        env: Env,
        diff: Vec<ContentDiff>,
    },
    Breach {
        witness: Witness,
        diff: Vec<ContentDiff>,
    },
    Inexecutable {
        policy: String,
        env: Env,
        failure: StepFailure,
    },
    Vacuous,
    BoundExceeded(BoundExceeded),
}

impl ComplianceVerdict {
    pub fn is_compliant(&self) -> bool {
        matches!(self, ComplianceVerdict::Compliant { .. })
    }
}

fn final_state(
    b: &BoundScenario,
    policy: usize,
    env: &Env,
) -> Result<Result<SnState, StepFailure>, VcError> {
    let v = vcgen::check_executability(b, policy, env)?.verdict;
    Ok(match v.failure {
        Some(f) => Err(f),
        None => Ok(v.final_state.expect("executable")),
    })
}

/// Compares `new` against `old`. Inexecutability of either policy under any
/// admissible environment takes precedence over a breach.
pub fn compare(
    b: &BoundScenario,
    old: usize,
    new: usize,
    cap: u64,
) -> Result<ComplianceVerdict, VcError> {
    let space = EnvSpace::new(b);
    let envs: Vec<Env> = match space.iter(cap) {
        Ok(it) => it.collect(),
        Err(e) => return Ok(ComplianceVerdict::BoundExceeded(e)),
    };
    if envs.is_empty() {
        return Ok(ComplianceVerdict::Vacuous);
    }
    let protected = vcgen::plan(b, old, &envs[0])?.named_contents();

    for env in &envs {
        for p in [old, new] {
            if let Err(failure) = final_state(b, p, env)? {
                return Ok(ComplianceVerdict::Inexecutable {
                    policy: b.policies[p].name.clone(),
                    env: env.clone(),
                    failure,
                });
            }
        }
    }

    let mut least = None;
    for env in &envs {
        let s_old = final_state(b, old, env)?.expect("checked above");
        let s_new = final_state(b, new, env)?.expect("checked above");
        let diff = permission_diff(&s_old, &s_new, protected);
        if let Some(d) = diff.iter().find(|d| !d.complies()) {
            let (kind, person) = d.first_leak().expect("does not comply");
            return Ok(ComplianceVerdict::Breach {
                witness: Witness {
                    env: env.clone(),
                    content: d.content,
                    person,
                    kind,
                },
                diff,
            });
        }
        least.get_or_insert(diff);
    }
    Ok(ComplianceVerdict::Compliant {
        envs: envs.len() as u64,
        env: envs[0].clone(),
        diff: least.expect("envs is nonempty"),
    })
}

/// Whether `l1 ⊆ l2` under every admissible environment.
pub fn list_subset_check(
    b: &BoundScenario,
    l1: ElemId,
    l2: ElemId,
    cap: u64,
) -> Result<bool, BoundExceeded> {
    let space = EnvSpace::new(b);
    let all = space
        .iter(cap)?
        .all(|env| space.members(&env, l1).is_subset(space.members(&env, l2)));
    Ok(all)
}
