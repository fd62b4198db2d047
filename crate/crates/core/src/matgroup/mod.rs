//! Finite commuting integer matrix groups: orders, closure, real
//! isotypic decomposition and invariant forms.

mod group;
mod isotypic;
pub mod poly;

pub use group::{closure, cyclotomic_type, finite_order, FiniteActionGroup, DEFAULT_CLOSURE_CAP};
pub use isotypic::{
    certify, isotypic, isotypic_in, rational_entries, ComponentKind, Isotypic, IsotypicComponent,
    IsotypicDecomposition, Turn, RECONSTRUCTION_DENOMINATOR,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::field::{Field, Mat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("generator {index} has size {found}, expected {expected}")]
    SizeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix {index} is not invertible over the integers")]
    NotInvertible { index: usize },
    #[error("generators {i} and {j} do not commute")]
    NonCommuting { i: usize, j: usize },
    #[error("group closure exceeded {cap} elements")]
    CapExceeded { cap: usize },
    #[error("no generators given")]
    NoGenerators,
    #[error("form has size {found}, group acts in dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("seed form is not symmetric positive definite")]
    NotPositiveDefinite,
}

/// `(1/|G|) Σ_g gᵀ·seed·g`, exactly.
pub fn average_form(
    group: &FiniteActionGroup,
    seed: &Mat<BigRational>,
) -> Result<Mat<BigRational>, GroupError> {
    let n = group.dim();
    if seed.rows() != n || seed.cols() != n {
        return Err(GroupError::DimensionMismatch {
            expected: n,
            found: seed.rows(),
        });
    }
    if !seed.is_positive_definite() {
        return Err(GroupError::NotPositiveDefinite);
    }
    let mut acc = Mat::<BigRational>::zeros(n, n);
    for g in group.elements() {
        let g: Mat<BigRational> = g.to_field();
        acc = acc.add(&g.transpose().mul(seed).mul(&g));
    }
    let inv = BigRational::from(BigInt::from(group.order()))
        .inv()
        .unwrap();
    Ok(acc.scale(&inv))
}
