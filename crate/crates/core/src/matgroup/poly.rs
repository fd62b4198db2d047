//! Dense integer polynomials, just enough for cyclotomic factorization of
//! characteristic polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactla::IntMatrix;
use crate::field::Mat;

/// Coefficients from the constant term upwards, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigInt>);

impl Poly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self(c)
    }

    pub fn one() -> Self {
        Self(vec![BigInt::one()])
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return Self(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Division by a monic polynomial; returns (quotient, remainder).
    pub fn div_rem_monic(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("nonzero divisor");
        assert!(d.0[dd].is_one(), "divisor must be monic");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self(Vec::new()), self.clone());
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.0.iter().enumerate() {
                r[k + i] -= &c * di;
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    /// Evaluates at a square integer matrix (Horner).
    pub fn eval_matrix(&self, m: &IntMatrix) -> IntMatrix {
        let n = m.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(m).add(&IntMatrix::identity(n).scale(c));
        }
        acc
    }
}

/// The `k`-th cyclotomic polynomial.
pub fn cyclotomic(k: u64) -> Poly {
    assert!(k >= 1);
    // x^k − 1 divided by Φ_d for proper divisors d.
    let mut p = vec![BigInt::zero(); k as usize + 1];
    p[0] = BigInt::from(-1);
    p[k as usize] = BigInt::one();
    let mut p = Poly::new(p);
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = p.div_rem_monic(&cyclotomic(d)).0;
        }
    }
    p
}

/// Characteristic polynomial `det(xI − M)` by Faddeev–LeVerrier.
pub fn char_poly(m: &IntMatrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let a: Mat<BigRational> = m.to_field();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = Mat::<BigRational>::zeros(n, n);
    for k in 1..=n {
        let shifted = mk.add(&Mat::identity(n).scale(&coeffs[n - k + 1]));
        mk = a.mul(&shifted);
        coeffs[n - k] = -mk.trace() / BigRational::from(BigInt::from(k));
    }
    Poly::new(coeffs.into_iter().map(|c| c.to_integer()).collect())
}

/// Cyclotomic indices (with multiplicity) when the polynomial is a
/// product of cyclotomic polynomials; absent otherwise.
pub fn cyclotomic_factors(p: &Poly) -> Option<BTreeMap<u64, usize>> {
    let deg = p.degree()? as u64;
    let mut rest = p.clone();
    let mut factors = BTreeMap::new();
    // φ(k) ≥ √(k/2), so only k ≤ 2·deg² can contribute.
    for k in 1..=(2 * deg * deg).max(2) {
        let phi = cyclotomic(k);
        if phi.degree().unwrap() as u64 > deg {
            continue;
        }
        loop {
            if rest.degree().unwrap_or(0) < phi.degree().unwrap() {
                break;
            }
            let (q, r) = rest.div_rem_monic(&phi);
            if !r.0.is_empty() {
                break;
            }
            rest = q;
            *factors.entry(k).or_insert(0) += 1;
        }
    }
    rest.is_one().then_some(factors)
}

pub fn lcm_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(1, |acc, v| acc.lcm(&v))
}
