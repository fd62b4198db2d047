use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Condition, ExtensionData};
use crate::exactla::fmt_int_vec;
use crate::matgroup::{closure, finite_order, FiniteActionGroup, GroupError};

/// A single structural check with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionStatus {
    Pass,
    Fail,
    Skipped,
}

impl ConditionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionStatus::Pass => "pass",
            ConditionStatus::Fail => "fail",
            ConditionStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionResult {
    pub status: ConditionStatus,
    pub witness: Option<String>,
}

impl ConditionResult {
    pub fn pass(witness: impl Into<String>) -> Self {
        Self {
            status: ConditionStatus::Pass,
            witness: Some(witness.into()),
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Self {
            status: ConditionStatus::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn skipped() -> Self {
        Self {
            status: ConditionStatus::Skipped,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == ConditionStatus::Pass
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub condition_a: ConditionResult,
    pub group: Option<FiniteActionGroup>,
}

impl ValidationReport {
    pub fn structurally_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn image_order(&self) -> Option<usize> {
        self.group.as_ref().map(FiniteActionGroup::order)
    }

    /// First failing structural check or condition (a).
    pub fn failure(&self) -> Option<(Condition, String)> {
        if let Some(c) = self.checks.iter().find(|c| !c.passed) {
            let w = c.witness.clone().unwrap_or_default();
            return Some((Condition::Structural, format!("{}: {w}", c.name)));
        }
        (self.condition_a.status == ConditionStatus::Fail).then(|| {
            (
                Condition::A,
                self.condition_a.witness.clone().unwrap_or_default(),
            )
        })
    }
}

fn check(name: String, witness: Option<String>) -> Check {
    Check {
        name,
        passed: witness.is_none(),
        witness,
    }
}

/// Checks unimodularity, commuting actions and the cocycle identity, then
/// decides condition (a).
pub fn validate(data: &ExtensionData, closure_cap: usize) -> ValidationReport {
    let base = data.base_rank();
    let mut checks = Vec::new();
    for i in 0..base {
        let det = data.action(i).det();
        checks.push(check(
            format!("A{} unimodular", i + 1),
            (!det.abs().is_one()).then(|| format!("det A{} = {det}", i + 1)),
        ));
    }
    for i in 0..base {
        for j in i + 1..base {
            let (a, b) = (data.action(i), data.action(j));
            let comm = a.mul(b).sub(&b.mul(a));
            checks.push(check(
                format!("A{} A{} commute", i + 1, j + 1),
                (!comm.is_zero()).then(|| format!("A{0}A{1} - A{1}A{0} = {comm}", i + 1, j + 1)),
            ));
        }
    }
    for i in 0..base {
        for j in i + 1..base {
            for k in j + 1..base {
                let r = cocycle_residual(data, i, j, k);
                checks.push(check(
                    format!("cocycle ({},{},{})", i + 1, j + 1, k + 1),
                    r.iter()
                        .any(|x| !x.is_zero())
                        .then(|| format!("residual {}", fmt_int_vec(&r))),
                ));
            }
        }
    }
    if !checks.iter().all(|c| c.passed) {
        return ValidationReport {
            checks,
            condition_a: ConditionResult::skipped(),
            group: None,
        };
    }
    for i in 0..base {
        if finite_order(data.action(i)).ok().flatten().is_none() {
            return ValidationReport {
                checks,
                condition_a: ConditionResult::fail(format!("A{} has infinite order", i + 1)),
                group: None,
            };
        }
    }
    match closure(data.actions(), closure_cap) {
        Ok(group) => ValidationReport {
            checks,
            condition_a: ConditionResult::pass(format!("image of order {}", group.order())),
            group: Some(group),
        },
        Err(GroupError::CapExceeded { cap }) => ValidationReport {
            checks,
            condition_a: ConditionResult::fail(format!(
                "image has more than {cap} elements (closure cap)"
            )),
            group: None,
        },
        Err(e) => ValidationReport {
            checks,
            condition_a: ConditionResult::fail(e.to_string()),
            group: None,
        },
    }
}

/// `(Aᵢ − I)c_jk − (Aⱼ − I)c_ik + (A_k − I)c_ij` for `i < j < k`.
pub(crate) fn cocycle_residual(data: &ExtensionData, i: usize, j: usize, k: usize) -> Vec<BigInt> {
    let term =
        |a: usize, p: usize, q: usize| data.action(a).minus_identity().mul_vec(data.tail(p, q));
    let (x, y, z) = (term(i, j, k), term(j, i, k), term(k, i, j));
    x.iter()
        .zip(&y)
        .zip(&z)
        .map(|((x, y), z)| x - y + z)
        .collect()
}
