//! Real one-parameter extensions of the action (condition (b)), invariant
//! complex structures on the fiber (condition (c)) and their extension to
//! `V = ℝ²ᵐ ⊕ ℝ²ⁿ`.

mod logs;

pub use logs::{check_real_extension, real_extension, RealExtensionCert};

use std::f64::consts::PI;

use num_rational::BigRational;
use thiserror::Error;

use crate::extension::ExtensionData;
use crate::field::{Field, Mat, QSqrt3};
use crate::matgroup::{
    closure, isotypic, ComponentKind, GroupError, Isotypic, IsotypicComponent,
    IsotypicDecomposition, Turn,
};

/// Residual bound for floating certificates.
pub const CERTIFICATE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CxError {
    #[error("{identity} fails (residual {residual:e})")]
    Invariant { identity: String, residual: f64 },
    #[error("{0}")]
    Dimension(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A condition either holds with a witness object or fails with a reason.
#[derive(Clone, Debug)]
pub enum Decision<T> {
    Holds(T),
    Fails(String),
}

impl<T> Decision<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Decision::Holds(_))
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Decision::Holds(t) => Some(t),
            Decision::Fails(_) => None,
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Decision::Holds(_) => None,
            Decision::Fails(r) => Some(r),
        }
    }
}

/// A matrix known exactly over ℚ(√3) or only in floating point.
#[derive(Clone, Debug)]
pub enum FieldMat {
    Exact(Mat<QSqrt3>),
    Approx(Mat<f64>),
}

impl FieldMat {
    pub fn is_exact(&self) -> bool {
        matches!(self, FieldMat::Exact(_))
    }

    pub fn to_f64(&self) -> Mat<f64> {
        match self {
            FieldMat::Exact(m) => m.to_f64(),
            FieldMat::Approx(m) => m.clone(),
        }
    }
}

/// `[[0, −I], [I, 0]]` of size `d`.
pub fn standard_structure<F: Field>(d: usize) -> Mat<F> {
    assert!(
        d.is_multiple_of(2),
        "complex structures need even dimension"
    );
    let h = d / 2;
    Mat::from_fn(d, d, |i, j| {
        if i < h && j == i + h {
            -F::one()
        } else if i >= h && j + h == i {
            F::one()
        } else {
            F::zero()
        }
    })
}

/// Transports the standard structure onto an even-dimensional real
/// component through its basis, extended by zero on the other components.
pub(crate) fn real_component_structure<F: Field>(c: &IsotypicComponent<F>) -> Option<Mat<F>> {
    if c.dim % 2 == 1 {
        return None;
    }
    let b = &c.basis;
    let bt = b.transpose();
    let coords = bt.mul(b).inverse()?.mul(&bt).mul(&c.projector);
    Some(b.mul(&standard_structure(c.dim)).mul(&coords))
}

pub(crate) fn describe_character(c: &[Turn]) -> String {
    let parts: Vec<String> = c
        .iter()
        .map(|t| match (t.num, t.den) {
            (0, _) => "+1".to_string(),
            (1, 2) => "-1".to_string(),
            _ => format!("exp(2pi i {t})"),
        })
        .collect();
    format!("({})", parts.join(","))
}

fn invariant_j0_in<F: Field>(d: &IsotypicDecomposition<F>, dim: usize) -> Result<Mat<F>, String> {
    let mut j0 = Mat::<F>::zeros(dim, dim);
    for c in &d.components {
        let jc = match c.kind {
            ComponentKind::ComplexPair => c.complex_structure.clone().expect("pairs carry J"),
            ComponentKind::Real => real_component_structure(c).ok_or_else(|| {
                format!(
                    "real component with character {} has odd dimension {}",
                    describe_character(&c.character),
                    c.dim
                )
            })?,
        };
        j0 = j0.add(&jc);
    }
    Ok(j0)
}

/// Invariant `J₀` from a decomposition: `i` on complex pairs, the standard
/// block on each real component. Absent iff some real component is odd.
pub fn invariant_j0(decomposition: &Isotypic) -> Decision<FieldMat> {
    let result = match decomposition {
        Isotypic::Exact(d) => invariant_j0_in(d, d.total_dim()).map(FieldMat::Exact),
        Isotypic::Approx(d) => invariant_j0_in(d, d.total_dim()).map(FieldMat::Approx),
    };
    match result {
        Ok(j) => Decision::Holds(j),
        Err(w) => Decision::Fails(w),
    }
}

/// Condition (c) for the data, from the image of the action.
pub fn find_invariant_j0(
    data: &ExtensionData,
    closure_cap: usize,
) -> Result<Decision<FieldMat>, CxError> {
    let group = closure(data.actions(), closure_cap)?;
    Ok(invariant_j0(&isotypic(&group)))
}

/// Checks `J₀² = −I` and `Aᵢ·J₀ = J₀·Aᵢ`.
pub fn check_j0<F: Field>(actions: &[Mat<F>], j0: &Mat<F>) -> Result<(), CxError> {
    let n = j0.rows();
    let minus = Mat::<F>::identity(n).neg();
    let sq = j0.mul(j0);
    if !sq.same_as(&minus) {
        return Err(CxError::Invariant {
            identity: "J0^2 = -I".into(),
            residual: sq.residual(&minus),
        });
    }
    for (i, a) in actions.iter().enumerate() {
        if a.rows() != n {
            return Err(CxError::Dimension(format!(
                "J0 is {n}x{n}, A{} is {}x{}",
                i + 1,
                a.rows(),
                a.cols()
            )));
        }
        let (aj, ja) = (a.mul(j0), j0.mul(a));
        if !aj.same_as(&ja) {
            return Err(CxError::Invariant {
                identity: format!("A{} J0 = J0 A{}", i + 1, i + 1),
                residual: aj.residual(&ja),
            });
        }
    }
    Ok(())
}

/// `J = [[J₀, B], [0, J₁]]` on `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructureData<F> {
    pub j0: Mat<F>,
    pub j1: Mat<F>,
    pub b: Mat<F>,
    pub j: Mat<F>,
}

impl<F: Field> ComplexStructureData<F> {
    pub fn fiber_dim(&self) -> usize {
        self.j0.rows()
    }

    pub fn base_dim(&self) -> usize {
        self.j1.rows()
    }
}

/// Extends `J₀` by `J₁` (default standard) and `B` (default zero),
/// validating every identity.
pub fn extend_j<F: Field>(
    j0: Mat<F>,
    base_dim: usize,
    j1: Option<Mat<F>>,
    b: Option<Mat<F>>,
) -> Result<ComplexStructureData<F>, CxError> {
    let f = j0.rows();
    if j0.cols() != f {
        return Err(CxError::Dimension(format!("J0 is {}x{}", f, j0.cols())));
    }
    if base_dim % 2 == 1 {
        return Err(CxError::Dimension(format!(
            "base dimension {base_dim} is odd"
        )));
    }
    let j1 = j1.unwrap_or_else(|| standard_structure(base_dim));
    let b = b.unwrap_or_else(|| Mat::zeros(f, base_dim));
    if (j1.rows(), j1.cols()) != (base_dim, base_dim) {
        return Err(CxError::Dimension(format!(
            "J1 is {}x{}, expected {base_dim}x{base_dim}",
            j1.rows(),
            j1.cols()
        )));
    }
    if (b.rows(), b.cols()) != (f, base_dim) {
        return Err(CxError::Dimension(format!(
            "B is {}x{}, expected {f}x{base_dim}",
            b.rows(),
            b.cols()
        )));
    }
    for (name, m) in [("J0^2 = -I", &j0), ("J1^2 = -I", &j1)] {
        let minus = Mat::<F>::identity(m.rows()).neg();
        let sq = m.mul(m);
        if !sq.same_as(&minus) {
            return Err(CxError::Invariant {
                identity: name.into(),
                residual: sq.residual(&minus),
            });
        }
    }
    let anti = j0.mul(&b).add(&b.mul(&j1));
    if !anti.is_zero() {
        let zero = Mat::zeros(f, base_dim);
        return Err(CxError::Invariant {
            identity: "J0 B + B J1 = 0".into(),
            residual: anti.residual(&zero),
        });
    }
    let mut j = Mat::<F>::zeros(f + base_dim, f + base_dim);
    j.set_block(0, 0, &j0);
    j.set_block(0, f, &b);
    j.set_block(f, f, &j1);
    Ok(ComplexStructureData { j0, j1, b, j })
}

/// Embeds a rational matrix in ℚ(√3).
pub fn to_qsqrt3(m: &Mat<BigRational>) -> Mat<QSqrt3> {
    m.map(|x| QSqrt3::rational(x.clone()))
}

pub(crate) fn two_pi_times(turn: f64) -> f64 {
    2.0 * PI * turn
}
