use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::exactla::{solve_mod_lattice, IntMatrix, LinAlgError, RatVector, TorusSolutions};
use crate::field::Mat;

/// `p ↦ L·p + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: IntMatrix,
    pub translation: RatVector,
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        Self {
            linear: IntMatrix::identity(dim),
            translation: RatVector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply(&self, p: &RatVector) -> RatVector {
        self.linear.mul_rat_vec(p).add(&self.translation)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            linear: self.linear.mul(&other.linear),
            translation: self.apply(&other.translation),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }
}

/// Fixed points of an affine map on `V/Λ`.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    solutions: TorusSolutions,
    scale: BigInt,
}

impl FixedPoints {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn is_all_points(&self) -> bool {
        self.solutions.is_all_points()
    }

    /// Dimension of the fixed locus.
    pub fn free_dim(&self) -> usize {
        self.solutions.free_dim()
    }

    /// Number of connected components.
    pub fn component_count(&self) -> BigInt {
        self.solutions.component_count()
    }

    /// The fixed points when there are finitely many (at most `limit`).
    pub fn points(&self, limit: usize) -> Option<Vec<RatVector>> {
        let inv = BigRational::new(BigInt::one(), self.scale.clone());
        self.solutions
            .points(limit)
            .map(|ps| ps.iter().map(|p| p.scale(&inv)).collect())
    }
}

/// Solves `(L − I)·x ≡ −b (mod Λ)` where the columns of `lattice` span `Λ`.
/// `L` must preserve `Λ`.
pub fn fixed_points(
    map: &AffineMap,
    lattice: &Mat<BigRational>,
) -> Result<FixedPoints, LinAlgError> {
    let k = map.dim();
    if lattice.rows() != k || lattice.cols() != k || map.translation.len() != k {
        return Err(LinAlgError::DimensionMismatch {
            expected: format!("{k}x{k} lattice basis"),
            found: format!("{}x{}", lattice.rows(), lattice.cols()),
        });
    }
    // Rescale x = y/N so that NΛ is integral.
    let scale = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .fold(BigInt::one(), |acc, (i, j)| {
            num_integer::Integer::lcm(&acc, lattice.get(i, j).denom())
        });
    let n = BigRational::from(scale.clone());
    let scaled =
        IntMatrix::try_from_rational(&lattice.scale(&n)).expect("scaled lattice is integral");
    let rhs = map.translation.scale(&-n);
    let solutions = solve_mod_lattice(&map.linear.minus_identity(), &rhs, &scaled)?;
    Ok(FixedPoints { solutions, scale })
}
