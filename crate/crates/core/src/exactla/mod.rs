//! Exact integer and rational linear algebra: Smith normal form, solves
//! over ℤ and ℚ, congruences modulo a lattice and cokernel structure.

mod lattice;
mod matrix;
mod snf;
mod solve;

pub use lattice::{lattice_basis, saturation, HermiteBasis};
pub use matrix::fmt_int_vec;
pub use matrix::{IntMatrix, RatVector};
pub use snf::{smith_normal_form, SnfResult};
pub use solve::{
    cokernel_invariants, solve_linear, solve_mod_lattice, Cokernel, LinearSolution, Ring,
    TorusSolutions,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("lattice basis is singular")]
    SingularLattice,
    #[error("map does not preserve the lattice")]
    LatticeNotPreserved,
}
