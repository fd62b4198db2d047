use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::word::{parse_word, Generator};
use super::{ExtensionData, ExtensionError};
use crate::exactla::{fmt_int_vec, IntMatrix};

/// `ι(v)·x₁^{t₁}⋯x₂ₙ^{t₂ₙ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub v: Vec<BigInt>,
    pub t: Vec<i64>,
}

impl GroupElement {
    pub fn identity(fiber: usize, base: usize) -> Self {
        Self {
            v: vec![BigInt::zero(); fiber],
            t: vec![0; base],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.v.iter().all(Zero::is_zero) && self.t.iter().all(|&x| x == 0)
    }

    /// Whether the element lies in the fiber `ι(ℤ²ᵐ)`.
    pub fn in_fiber(&self) -> bool {
        self.t.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<BigInt> = self.t.iter().map(|&x| BigInt::from(x)).collect();
        write!(f, "({},{})", fmt_int_vec(&self.v), fmt_int_vec(&t))
    }
}

/// Arithmetic in `Γ` for structurally valid data.
#[derive(Clone, Debug)]
pub struct Gamma<'a> {
    data: &'a ExtensionData,
    inverses: Vec<IntMatrix>,
}

impl ExtensionData {
    /// Arithmetic handle; requires unimodular actions.
    pub fn group(&self) -> Result<Gamma<'_>, ExtensionError> {
        let inverses = (0..self.base_rank())
            .map(|i| {
                self.action_inverse(i).cloned().ok_or_else(|| {
                    ExtensionError::InvalidData(format!("A{} is not unimodular", i + 1))
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Gamma {
            data: self,
            inverses,
        })
    }
}

impl<'a> Gamma<'a> {
    pub fn data(&self) -> &'a ExtensionData {
        self.data
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.data.fiber_rank(), self.data.base_rank())
    }

    /// `ι(a)`.
    pub fn fiber(&self, a: Vec<BigInt>) -> GroupElement {
        assert_eq!(a.len(), self.data.fiber_rank());
        GroupElement {
            v: a,
            t: vec![0; self.data.base_rank()],
        }
    }

    /// The fiber generator `a_k` (0-based).
    pub fn fiber_generator(&self, k: usize) -> GroupElement {
        let mut e = self.identity();
        e.v[k] = BigInt::from(1);
        e
    }

    /// The base lift `x_j` (0-based).
    pub fn base_generator(&self, j: usize) -> GroupElement {
        let mut e = self.identity();
        e.t[j] = 1;
        e
    }

    /// `(0, t)`, i.e. `x₁^{t₁}⋯x₂ₙ^{t₂ₙ}`.
    pub fn monomial(&self, t: &[i64]) -> GroupElement {
        assert_eq!(t.len(), self.data.base_rank());
        GroupElement {
            v: vec![BigInt::zero(); self.data.fiber_rank()],
            t: t.to_vec(),
        }
    }

    fn action_power(&self, i: usize, k: i64) -> IntMatrix {
        let mut base = if k >= 0 {
            self.data.action(i).clone()
        } else {
            self.inverses[i].clone()
        };
        let mut out = IntMatrix::identity(self.data.fiber_rank());
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// `Σ_{0≤l<s} A_iˡ` for `s ≥ 0` and `−Σ_{s≤l<0} A_iˡ` for `s < 0`.
    fn geometric(&self, i: usize, s: i64) -> IntMatrix {
        let a = if s >= 0 {
            self.data.action(i)
        } else {
            &self.inverses[i]
        };
        let f = self.data.fiber_rank();
        // (A^m, Σ_{l<m} A^l) by doubling from the top bit
        let (mut power, mut sum) = (IntMatrix::identity(f), IntMatrix::zeros(f, f));
        let e = s.unsigned_abs();
        for bit in (0..u64::BITS - e.leading_zeros()).rev() {
            sum = sum.add(&power.mul(&sum));
            power = power.mul(&power);
            if (e >> bit) & 1 == 1 {
                sum = IntMatrix::identity(f).add(&a.mul(&sum));
                power = a.mul(&power);
            }
        }
        if s >= 0 {
            sum
        } else {
            a.mul(&sum).neg()
        }
    }

    /// The action `ρ(t) = A₁^{t₁}⋯A₂ₙ^{t₂ₙ}` on the fiber.
    pub fn rho(&self, t: &[i64]) -> IntMatrix {
        let mut out = IntMatrix::identity(self.data.fiber_rank());
        for (i, &k) in t.iter().enumerate() {
            if k != 0 {
                out = out.mul(&self.action_power(i, k));
            }
        }
        out
    }

    /// `σ` with `x_k^t·x_j = ι(σ)·x_j·x_k^t` for `j < k`; `σ_{t+1} = A_k σ_t + c_jk`.
    fn shift(&self, j: usize, k: usize, t: i64) -> Vec<BigInt> {
        self.geometric(k, t).mul_vec(self.data.tail(j, k))
    }

    /// `g·x_j^s`. Each `x_k^{t_k}` with `k > j` conjugates `x_j` to
    /// `ι(σ)·x_j`, so `x_k^{t_k} x_j^s = ι(w)·x_j^s x_k^{t_k}` with
    /// `w = Σ_{l<s} A_jˡ σ`.
    fn step(&self, g: &mut GroupElement, j: usize, s: i64) {
        let base = self.data.base_rank();
        let mut prefix = g.t.clone();
        let mut sum = None;
        for k in (j + 1..base).rev() {
            prefix[k] = 0;
            let tk = g.t[k];
            if tk == 0 {
                continue;
            }
            let sigma = self.shift(j, k, tk);
            if sigma.iter().all(Zero::is_zero) {
                continue;
            }
            let sum = sum.get_or_insert_with(|| self.geometric(j, s));
            let w = sum.mul_vec(&sigma);
            // ι(w) has to pass x₁^{t₁}⋯x_{k−1}^{t_{k−1}}
            g.v = add(&g.v, &self.rho(&prefix).mul_vec(&w));
        }
        g.t[j] += s;
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut out = GroupElement {
            v: add(&a.v, &self.rho(&a.t).mul_vec(&b.v)),
            t: a.t.clone(),
        };
        for (j, &s) in b.t.iter().enumerate() {
            if s != 0 {
                self.step(&mut out, j, s);
            }
        }
        out
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let neg_t: Vec<i64> = g.t.iter().map(|x| -x).collect();
        // (0,t)·(0,−t) = ι(κ)
        let kappa = self
            .multiply(&self.monomial(&g.t), &self.monomial(&neg_t))
            .v;
        let w = neg(&self.rho(&neg_t).mul_vec(&add(&g.v, &kappa)));
        GroupElement { v: w, t: neg_t }
    }

    pub fn power(&self, g: &GroupElement, k: i64) -> GroupElement {
        let mut base = if k >= 0 { g.clone() } else { self.inverse(g) };
        let mut out = self.identity();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = self.multiply(&out, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(&base, &base);
            }
        }
        out
    }

    /// `g·h·g⁻¹`.
    pub fn conjugate(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.multiply(&self.multiply(g, h), &self.inverse(g))
    }

    /// `g·h·g⁻¹·h⁻¹`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let gh = self.multiply(g, h);
        let hg = self.multiply(h, g);
        self.multiply(&gh, &self.inverse(&hg))
    }

    /// Normal form of a word such as `x2 * x1^-1 * a1^3`.
    pub fn word_normal_form(&self, word: &str) -> Result<GroupElement, ExtensionError> {
        let mut out = self.identity();
        for letter in parse_word(word)? {
            let (limit, g) = match letter.generator {
                Generator::Fiber(k) => (self.data.fiber_rank(), self.fiber_generator_checked(k)),
                Generator::Base(k) => (self.data.base_rank(), self.base_generator_checked(k)),
            };
            let g = g.ok_or_else(|| ExtensionError::MalformedWord {
                position: letter.position,
                token: letter.token.clone(),
                reason: format!("generator index must be between 1 and {limit}"),
            })?;
            out = self.multiply(&out, &self.power(&g, letter.exponent));
        }
        Ok(out)
    }

    fn fiber_generator_checked(&self, k: usize) -> Option<GroupElement> {
        (k < self.data.fiber_rank()).then(|| self.fiber_generator(k))
    }

    fn base_generator_checked(&self, k: usize) -> Option<GroupElement> {
        (k < self.data.base_rank()).then(|| self.base_generator(k))
    }
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| -x).collect()
}
