use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntMatrix, LinAlgError, RatVector};
use crate::field::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Integers,
    Rationals,
}

/// One solution of `A·x = b` and a basis of `ker A` over the chosen ring.
/// For [`Ring::Integers`] the particular solution is integral and the
/// kernel vectors form a ℤ-basis of the integer kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: RatVector,
    pub kernel: Vec<Vec<BigInt>>,
}

pub fn solve_linear(
    a: &IntMatrix,
    b: &RatVector,
    ring: Ring,
) -> Result<Option<LinearSolution>, LinAlgError> {
    if b.len() != a.rows() {
        return Err(LinAlgError::DimensionMismatch {
            expected: format!("right-hand side of length {}", a.rows()),
            found: format!("length {}", b.len()),
        });
    }
    if ring == Ring::Integers && !b.is_integral() {
        return Ok(None);
    }
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = snf.rank();
    let c = snf.u.mul_rat_vec(b);
    let mut y = RatVector::zeros(a.cols());
    for i in 0..a.rows() {
        if i < rank {
            let q = &c.0[i] / BigRational::from(diag[i].clone());
            if ring == Ring::Integers && !q.is_integer() {
                return Ok(None);
            }
            y.0[i] = q;
        } else if !c.0[i].is_zero() {
            return Ok(None);
        }
    }
    let particular = snf.v.mul_rat_vec(&y);
    let kernel = (rank..a.cols()).map(|j| snf.v.column(j)).collect();
    Ok(Some(LinearSolution { particular, kernel }))
}

/// Free rank and torsion invariant factors (> 1) of `ℤ^rows / col(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Cokernel {
    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

pub fn cokernel_invariants(a: &IntMatrix) -> Cokernel {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let torsion = snf
        .diagonal()
        .into_iter()
        .take(rank)
        .filter(|d| !d.is_one())
        .collect();
    Cokernel {
        free_rank: a.rows() - rank,
        torsion,
    }
}

/// Solutions of `A·x ≡ b (mod L)` on the torus `ℝᵏ / Lℤᵏ`.
///
/// In coordinates `x = T·w` with `T = L·V`, the congruence decouples into
/// `dᵢ·wᵢ ≡ βᵢ (mod 1)`: each coordinate with `dᵢ > 0` contributes `dᵢ`
/// discrete values, each with `dᵢ = 0` a full circle (or nothing when
/// `βᵢ ∉ ℤ`).
#[derive(Clone, Debug)]
pub struct TorusSolutions {
    lattice: IntMatrix,
    lattice_inv: Mat<BigRational>,
    transform: Mat<BigRational>,
    transform_inv: Mat<BigRational>,
    moduli: Vec<(BigInt, BigRational)>,
    empty: bool,
}

impl TorusSolutions {
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Number of connected components of the solution set (0 when empty).
    pub fn component_count(&self) -> BigInt {
        if self.empty {
            return BigInt::zero();
        }
        self.moduli
            .iter()
            .filter(|(d, _)| !d.is_zero())
            .map(|(d, _)| d.clone())
            .product()
    }

    /// Dimension of each component (0 for a finite point set).
    pub fn free_dim(&self) -> usize {
        if self.empty {
            return 0;
        }
        self.moduli.iter().filter(|(d, _)| d.is_zero()).count()
    }

    pub fn is_all_points(&self) -> bool {
        !self.empty && self.free_dim() == self.moduli.len()
    }

    /// One solution, reduced into the fundamental domain of `L`.
    pub fn particular(&self) -> Option<RatVector> {
        if self.empty {
            return None;
        }
        let w: Vec<BigRational> = self
            .moduli
            .iter()
            .map(|(d, beta)| {
                if d.is_zero() {
                    BigRational::zero()
                } else {
                    beta / BigRational::from(d.clone())
                }
            })
            .collect();
        Some(self.reduce(&RatVector(self.transform.mul_vec(&w))))
    }

    /// All solutions when the set is finite and has at most `limit` points.
    pub fn points(&self, limit: usize) -> Option<Vec<RatVector>> {
        if self.empty {
            return Some(Vec::new());
        }
        if self.free_dim() > 0 {
            return None;
        }
        let count = self.component_count();
        if count > BigInt::from(limit) {
            return None;
        }
        let mut out = Vec::new();
        let mut idx = vec![BigInt::zero(); self.moduli.len()];
        loop {
            let w: Vec<BigRational> = self
                .moduli
                .iter()
                .zip(&idx)
                .map(|((d, beta), j)| {
                    (beta + BigRational::from(j.clone())) / BigRational::from(d.clone())
                })
                .collect();
            out.push(self.reduce(&RatVector(self.transform.mul_vec(&w))));
            // odometer over j_i ∈ [0, d_i)
            let mut k = 0;
            loop {
                if k == idx.len() {
                    out.sort_by(|a, b| a.0.cmp(&b.0));
                    return Some(out);
                }
                idx[k] += 1;
                if idx[k] < self.moduli[k].0 {
                    break;
                }
                idx[k] = BigInt::zero();
                k += 1;
            }
        }
    }

    /// Membership on the torus, decided in the decoupled coordinates.
    pub fn contains(&self, x: &RatVector) -> bool {
        if self.empty || x.len() != self.moduli.len() {
            return false;
        }
        let w = self.transform_inv.mul_vec(&x.0);
        self.moduli
            .iter()
            .zip(&w)
            .all(|((d, beta), wi)| (BigRational::from(d.clone()) * wi - beta).is_integer())
    }

    /// Canonical representative of `x` modulo `L`: `L·frac(L⁻¹x)`.
    pub fn reduce(&self, x: &RatVector) -> RatVector {
        let c: Vec<BigRational> = self
            .lattice_inv
            .mul_vec(&x.0)
            .into_iter()
            .map(|t| &t - t.floor())
            .collect();
        self.lattice.mul_rat_vec(&RatVector(c))
    }
}

/// Solves `A·x ≡ b (mod L)` for `x` on the torus `ℝᵏ/Lℤᵏ`. `A` must map
/// the lattice into itself (`L⁻¹·A·L` integral) so the congruence is well
/// defined on the torus.
pub fn solve_mod_lattice(
    a: &IntMatrix,
    b: &RatVector,
    lattice: &IntMatrix,
) -> Result<TorusSolutions, LinAlgError> {
    let k = lattice.rows();
    if !lattice.is_square() || !a.is_square() || a.rows() != k || b.len() != k {
        return Err(LinAlgError::DimensionMismatch {
            expected: format!("square {k}x{k} map, lattice and length-{k} offset"),
            found: format!(
                "map {}x{}, lattice {}x{}, offset {}",
                a.rows(),
                a.cols(),
                lattice.rows(),
                lattice.cols(),
                b.len()
            ),
        });
    }
    let l_rat = lattice.to_field::<BigRational>();
    let lattice_inv = l_rat.inverse().ok_or(LinAlgError::SingularLattice)?;
    let a_lat = lattice_inv.mul(&a.to_field()).mul(&l_rat);
    let a_lat = IntMatrix::try_from_rational(&a_lat).ok_or(LinAlgError::LatticeNotPreserved)?;
    let b_lat = lattice_inv.mul_vec(&b.0);

    let snf = smith_normal_form(&a_lat);
    let diag = snf.diagonal();
    let beta = snf.u.mul_rat_vec(&RatVector(b_lat));
    let moduli: Vec<(BigInt, BigRational)> =
        (0..k).map(|i| (diag[i].abs(), beta.0[i].clone())).collect();
    let empty = moduli
        .iter()
        .any(|(d, beta)| d.is_zero() && !beta.is_integer());

    let v_rat = snf.v.to_field::<BigRational>();
    let transform = l_rat.mul(&v_rat);
    let v_inv = snf
        .v
        .inverse()
        .expect("SNF transform is unimodular")
        .to_field::<BigRational>();
    let transform_inv = v_inv.mul(&lattice_inv);
    Ok(TorusSolutions {
        lattice: lattice.clone(),
        lattice_inv,
        transform,
        transform_inv,
        moduli,
        empty,
    })
}
