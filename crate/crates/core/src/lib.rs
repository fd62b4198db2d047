//! Exact construction of flat compact Kähler solvmanifolds from
//! abelian-by-abelian group extension data
//! `0 → ℤ²ᵐ → Γ → ℤ²ⁿ → 0`.
//!
//! The pipeline lives in [`manifold::build`]: structural validation and
//! finiteness of the action ([`extension`], [`matgroup`]), torsion of the
//! extension class, a real one-parameter extension of the action and an
//! invariant complex structure ([`cxstruct`]), the abelian subgroup of
//! finite index, and finally the affine model of `Γ` acting on
//! `V = ℝ²ᵐ ⊕ ℝ²ⁿ` with its invariant metric and presentations.

pub mod catalog;
pub mod cxstruct;
pub mod exactla;
pub mod extension;
pub mod field;
pub mod format;
pub mod manifold;
pub mod matgroup;
pub mod report;

pub use extension::{Condition, ExtensionData, GroupElement};
pub use manifold::{build, BuildOptions, BuildOutcome, SolvmanifoldModel};
