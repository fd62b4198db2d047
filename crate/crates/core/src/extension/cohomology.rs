//! Torsion of the extension class and real splittings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::element::{Gamma, GroupElement};
use super::{ExtensionData, ExtensionError};
use crate::exactla::{solve_linear, IntMatrix, RatVector, Ring};
use crate::field::Mat;

/// Element `(u, t)` of the semidirect product `ℚ²ᵐ ⋊ ℤ²ⁿ` with
/// `(u,t)·(u',t') = (u + ρ(t)·u', t + t')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitElement {
    pub u: RatVector,
    pub t: Vec<i64>,
}

/// Outcome of the torsion test for the class of `c`.
///
/// When the class is torsion, `splitting[i]` is the minimal-norm `uᵢ` with
/// `(Aⱼ − I)·uᵢ − (Aᵢ − I)·uⱼ = cᵢⱼ` for all `i < j`, so that
/// `xᵢ ↦ (uᵢ, eᵢ)` embeds `Γ` in `ℝ²ᵐ ⋊ ℤ²ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyCertificate {
    pub torsion: bool,
    pub splitting: Option<Vec<RatVector>>,
}

impl CohomologyCertificate {
    /// A multiple of the order of the class: the common denominator of the
    /// splitting vectors.
    pub fn order_bound(&self) -> Option<BigInt> {
        self.splitting.as_ref().map(|s| {
            s.iter()
                .fold(BigInt::one(), |acc, u| acc.lcm(&u.common_denominator()))
        })
    }
}

/// Linear system `M·w = rhs` for vectors `w_l ∈ ℚ²ᵐ` attached to base
/// elements `b_l`, one block row per pair `l < p`:
/// `(ρ(b_p) − I)·w_l − (ρ(b_l) − I)·w_p = rhs_{lp}`.
pub(crate) fn coboundary_system(
    gamma: &Gamma<'_>,
    lifts: &[Vec<i64>],
    rhs: impl Fn(usize, usize) -> Vec<BigInt>,
) -> (IntMatrix, RatVector) {
    let f = gamma.data().fiber_rank();
    let r = lifts.len();
    let rho: Vec<IntMatrix> = lifts
        .iter()
        .map(|b| gamma.rho(b).minus_identity())
        .collect();
    let pairs = r * r.saturating_sub(1) / 2;
    let mut m = IntMatrix::zeros(pairs * f, r * f);
    let mut b = Vec::with_capacity(pairs * f);
    let mut row = 0;
    for l in 0..r {
        for p in l + 1..r {
            for a in 0..f {
                for c in 0..f {
                    m.set(row + a, l * f + c, rho[p].get(a, c).clone());
                    m.set(row + a, p * f + c, -rho[l].get(a, c));
                }
            }
            let v = rhs(l, p);
            b.extend(v.into_iter().map(BigRational::from));
            row += f;
        }
    }
    (m, RatVector(b))
}

/// Removes the kernel component so the solution has minimal Euclidean norm.
pub(crate) fn minimal_norm(particular: &RatVector, kernel: &[Vec<BigInt>]) -> RatVector {
    if kernel.is_empty() {
        return particular.clone();
    }
    let n = particular.len();
    let k = Mat::from_fn(n, kernel.len(), |i, j| {
        BigRational::from(kernel[j][i].clone())
    });
    let kt = k.transpose();
    let gram_inv = kt.mul(&k).inverse().expect("kernel basis is independent");
    let coeff = gram_inv.mul_vec(&kt.mul_vec(&particular.0));
    let proj = k.mul_vec(&coeff);
    RatVector(particular.0.iter().zip(proj).map(|(x, p)| x - p).collect())
}

pub(crate) fn split_blocks(x: &RatVector, f: usize) -> Vec<RatVector> {
    x.0.chunks(f).map(|c| RatVector(c.to_vec())).collect()
}

/// Decides whether the class of `c` in `H²(ℤ²ⁿ; ℤ²ᵐ)` has finite order.
pub fn class_torsion(data: &ExtensionData) -> Result<CohomologyCertificate, ExtensionError> {
    let gamma = data.group()?;
    let base = data.base_rank();
    let lifts: Vec<Vec<i64>> = (0..base).map(|i| unit(base, i)).collect();
    let (m, rhs) = coboundary_system(&gamma, &lifts, |i, j| data.tail(i, j).to_vec());
    let Some(sol) = solve_linear(&m, &rhs, Ring::Rationals)? else {
        return Ok(CohomologyCertificate {
            torsion: false,
            splitting: None,
        });
    };
    let u = minimal_norm(&sol.particular, &sol.kernel);
    Ok(CohomologyCertificate {
        torsion: true,
        splitting: Some(split_blocks(&u, data.fiber_rank())),
    })
}

pub(crate) fn unit(len: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; len];
    e[i] = 1;
    e
}

impl<'a> Gamma<'a> {
    pub fn split_multiply(&self, a: &SplitElement, b: &SplitElement) -> SplitElement {
        SplitElement {
            u: a.u.add(&self.rho(&a.t).mul_rat_vec(&b.u)),
            t: a.t.iter().zip(&b.t).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn split_inverse(&self, a: &SplitElement) -> SplitElement {
        let t: Vec<i64> = a.t.iter().map(|x| -x).collect();
        let u = self.rho(&t).mul_rat_vec(&a.u).scale(&-BigRational::one());
        SplitElement { u, t }
    }

    /// Image of `ι(v)·x₁^{t₁}⋯x₂ₙ^{t₂ₙ}` under `xᵢ ↦ (uᵢ, eᵢ)`.
    pub fn embed(&self, splitting: &[RatVector], g: &GroupElement) -> SplitElement {
        let base = self.data().base_rank();
        let mut out = SplitElement {
            u: RatVector::from_ints(&g.v),
            t: vec![0; base],
        };
        for (j, &tj) in g.t.iter().enumerate() {
            let mut step = SplitElement {
                u: splitting[j].clone(),
                t: unit(base, j),
            };
            if tj < 0 {
                step = self.split_inverse(&step);
            }
            for _ in 0..tj.unsigned_abs() {
                out = self.split_multiply(&out, &step);
            }
        }
        out
    }

    /// Checks the defining relations of `Γ` on the images `(uᵢ, eᵢ)`.
    pub fn is_splitting(&self, splitting: &[RatVector]) -> bool {
        let d = self.data();
        let base = d.base_rank();
        if splitting.len() != base || splitting.iter().any(|u| u.len() != d.fiber_rank()) {
            return false;
        }
        let x = |i: usize| SplitElement {
            u: splitting[i].clone(),
            t: unit(base, i),
        };
        for i in 0..base {
            for j in i + 1..base {
                let lhs = self.split_multiply(&x(j), &x(i));
                let c = SplitElement {
                    u: RatVector::from_ints(d.tail(i, j)),
                    t: vec![0; base],
                };
                let rhs = self.split_multiply(&c, &self.split_multiply(&x(i), &x(j)));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

impl SplitElement {
    pub fn is_identity(&self) -> bool {
        self.u.is_zero() && self.t.iter().all(|&x| x == 0)
    }
}
