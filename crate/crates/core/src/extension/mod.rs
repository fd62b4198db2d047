//! The group `Γ` given by an extension `0 → ℤ²ᵐ → Γ → ℤ²ⁿ → 0`.
//!
//! `Γ` is presented by fiber generators `a₁…a₂ₘ` (the image of ℤ²ᵐ) and
//! base lifts `x₁…x₂ₙ` with
//!
//! * `xᵢ·ι(a)·xᵢ⁻¹ = ι(Aᵢ·a)`
//! * `xⱼ·xᵢ = ι(cᵢⱼ)·xᵢ·xⱼ` for `i < j`.
//!
//! Every element has the normal form `ι(v)·x₁^{t₁}⋯x₂ₙ^{t₂ₙ}`.

mod abelian;
mod cohomology;
mod element;
mod validate;
mod word;

pub(crate) use abelian::d_witness;
pub use abelian::{abelian_subgroup, abelianization, AbelianCert, AbelianOutcome, Abelianization};
pub use cohomology::{class_torsion, CohomologyCertificate, SplitElement};
pub use element::{Gamma, GroupElement};
pub use validate::{validate, Check, ConditionResult, ConditionStatus, ValidationReport};
pub use word::{parse_word, Generator, Letter};

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exactla::{IntMatrix, LinAlgError};
use crate::matgroup::GroupError;

/// The conditions an extension must satisfy to define a Kähler solvmanifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Structural,
    /// The action has finite image.
    A,
    /// The action extends to a real one-parameter group.
    B,
    /// An invariant complex structure exists on the fiber.
    C,
    /// The extension class has finite order.
    D,
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::Structural => "structural",
            Condition::A => "(a)",
            Condition::B => "(b)",
            Condition::C => "(c)",
            Condition::D => "(d)",
        }
    }

    pub fn key(&self) -> &'static str {
        match self {
            Condition::Structural => "structural",
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
            Condition::D => "d",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("malformed extension data: {0}")]
    Shape(String),
    #[error("invalid extension data: {0}")]
    InvalidData(String),
    #[error("malformed word at position {position} ({token:?}): {reason}")]
    MalformedWord {
        position: usize,
        token: String,
        reason: String,
    },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Ranks, action matrices and commutator tails of the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionData {
    m: usize,
    n: usize,
    actions: Vec<IntMatrix>,
    /// `c_{ij}` for `i < j`, in lexicographic pair order.
    tails: Vec<Vec<BigInt>>,
    inverses: Vec<Option<IntMatrix>>,
}

impl ExtensionData {
    /// `tails` lists `((i, j), c_ij)` with 0-based `i < j`; omitted pairs are zero.
    pub fn new(
        m: usize,
        n: usize,
        actions: Vec<IntMatrix>,
        tails: Vec<((usize, usize), Vec<BigInt>)>,
    ) -> Result<Self, ExtensionError> {
        if m == 0 || n == 0 {
            return Err(ExtensionError::Shape("m and n must be at least 1".into()));
        }
        let (fiber, base) = (2 * m, 2 * n);
        if actions.len() != base {
            return Err(ExtensionError::Shape(format!(
                "expected {base} action matrices, found {}",
                actions.len()
            )));
        }
        for (i, a) in actions.iter().enumerate() {
            if a.rows() != fiber || a.cols() != fiber {
                return Err(ExtensionError::Shape(format!(
                    "A{} is {}x{}, expected {fiber}x{fiber}",
                    i + 1,
                    a.rows(),
                    a.cols()
                )));
            }
        }
        let mut dense = vec![vec![BigInt::zero(); fiber]; base * (base - 1) / 2];
        let mut seen = vec![false; dense.len()];
        for ((i, j), c) in tails {
            if i >= j || j >= base {
                return Err(ExtensionError::Shape(format!(
                    "tail index c[{},{}] out of range",
                    i + 1,
                    j + 1
                )));
            }
            if c.len() != fiber {
                return Err(ExtensionError::Shape(format!(
                    "c[{},{}] has length {}, expected {fiber}",
                    i + 1,
                    j + 1,
                    c.len()
                )));
            }
            let k = pair_index(base, i, j);
            if seen[k] {
                return Err(ExtensionError::Shape(format!(
                    "c[{},{}] given twice",
                    i + 1,
                    j + 1
                )));
            }
            seen[k] = true;
            dense[k] = c;
        }
        let inverses = actions.iter().map(IntMatrix::inverse).collect();
        Ok(Self {
            m,
            n,
            actions,
            tails: dense,
            inverses,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(
        m: usize,
        n: usize,
        actions: &[&[&[i64]]],
        tails: &[((usize, usize), &[i64])],
    ) -> Result<Self, ExtensionError> {
        Self::new(
            m,
            n,
            actions.iter().map(|a| IntMatrix::from_i64(a)).collect(),
            tails
                .iter()
                .map(|&(ij, c)| (ij, c.iter().map(|&x| BigInt::from(x)).collect()))
                .collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank `2m` of the fiber lattice.
    pub fn fiber_rank(&self) -> usize {
        2 * self.m
    }

    /// Rank `2n` of the base lattice.
    pub fn base_rank(&self) -> usize {
        2 * self.n
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn action(&self, i: usize) -> &IntMatrix {
        &self.actions[i]
    }

    pub(crate) fn action_inverse(&self, i: usize) -> Option<&IntMatrix> {
        self.inverses[i].as_ref()
    }

    /// `c_{ij}` for 0-based `i < j`.
    pub fn tail(&self, i: usize, j: usize) -> &[BigInt] {
        assert!(i < j && j < self.base_rank());
        &self.tails[pair_index(self.base_rank(), i, j)]
    }

    /// All pairs `(i, j)`, `i < j`, with their tails.
    pub fn tails(&self) -> impl Iterator<Item = ((usize, usize), &[BigInt])> + '_ {
        let base = self.base_rank();
        (0..base).flat_map(move |i| (i + 1..base).map(move |j| ((i, j), self.tail(i, j))))
    }

    pub fn has_trivial_action(&self) -> bool {
        self.actions.iter().all(IntMatrix::is_identity)
    }

    pub fn has_zero_tails(&self) -> bool {
        self.tails.iter().all(|c| c.iter().all(Zero::is_zero))
    }

    /// Same actions with every tail multiplied by `k`.
    pub fn with_scaled_tails(&self, k: i64) -> Self {
        let mut out = self.clone();
        let k = BigInt::from(k);
        for c in &mut out.tails {
            c.iter_mut().for_each(|x| *x *= &k);
        }
        out
    }
}

fn pair_index(base: usize, i: usize, j: usize) -> usize {
    // pairs (0,1),(0,2),…,(0,b−1),(1,2),…
    i * base - i * (i + 1) / 2 + (j - i - 1)
}
