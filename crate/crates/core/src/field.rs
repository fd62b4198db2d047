//! Scalar fields and dense matrices over them.
//!
//! Three scalars are used: `BigRational` for forms and solves, [`QSqrt3`]
//! for complex structures of groups whose exponent divides 12 (all of
//! cos/sin at multiples of 30° live there), and `f64` as the tolerance-tagged
//! fallback.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Absolute tolerance used by the floating scalar for zero tests.
pub const FLOAT_TOL: f64 = 1e-9;

pub trait Field:
    Zero
    + One
    + Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_bigint(x: &BigInt) -> Self;
    fn from_rational(x: &BigRational) -> Self;
    /// Zero test; tolerance-aware for floating scalars.
    fn is_negligible(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn approx(&self) -> f64;
    /// Sign with the field's own zero test.
    fn sign(&self) -> i8;
    /// `(cos 2πt, sin 2πt)` for `t = num/den`, if representable.
    fn turn(num: i64, den: u64) -> Option<(Self, Self)>;

    fn from_int(x: i64) -> Self {
        Self::from_bigint(&BigInt::from(x))
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_bigint(x: &BigInt) -> Self {
        BigRational::from(x.clone())
    }
    fn from_rational(x: &BigRational) -> Self {
        x.clone()
    }
    fn is_negligible(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn approx(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn sign(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn turn(num: i64, den: u64) -> Option<(Self, Self)> {
        let (c, s) = QSqrt3::turn(num, den)?;
        (c.b.is_zero() && s.b.is_zero()).then_some((c.a, s.a))
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_bigint(x: &BigInt) -> Self {
        x.to_f64().unwrap_or(f64::NAN)
    }
    fn from_rational(x: &BigRational) -> Self {
        ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
    }
    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_TOL
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_negligible()).then(|| 1.0 / self)
    }
    fn approx(&self) -> f64 {
        *self
    }
    fn sign(&self) -> i8 {
        if self.is_negligible() {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        }
    }
    fn turn(num: i64, den: u64) -> Option<(Self, Self)> {
        let t = 2.0 * std::f64::consts::PI * (num as f64) / (den as f64);
        Some((t.cos(), t.sin()))
    }
}

/// Element `a + b√3` of the real quadratic field ℚ(√3).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QSqrt3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn frac(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }
}

impl Add for QSqrt3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }
}

impl Sub for QSqrt3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            a: self.a - o.a,
            b: self.b - o.b,
        }
    }
}

impl Mul for QSqrt3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let three = BigRational::from(BigInt::from(3));
        Self {
            a: &self.a * &o.a + three * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for QSqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Zero for QSqrt3 {
    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt3 {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt3", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{}-{}*sqrt3", self.a, -&self.b)
                } else {
                    write!(f, "{}+{}*sqrt3", self.a, self.b)
                }
            }
        }
    }
}

impl Field for QSqrt3 {
    const EXACT: bool = true;

    fn from_bigint(x: &BigInt) -> Self {
        Self::rational(BigRational::from(x.clone()))
    }
    fn from_rational(x: &BigRational) -> Self {
        Self::rational(x.clone())
    }
    fn is_negligible(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_negligible() {
            return None;
        }
        // a² − 3b² is nonzero for rational a, b not both zero.
        let norm = &self.a * &self.a - BigRational::from(BigInt::from(3)) * &self.b * &self.b;
        Some(Self {
            a: &self.a / &norm,
            b: -&self.b / &norm,
        })
    }
    fn approx(&self) -> f64 {
        let a = ToPrimitive::to_f64(&self.a).unwrap_or(f64::NAN);
        let b = ToPrimitive::to_f64(&self.b).unwrap_or(f64::NAN);
        a + b * 3f64.sqrt()
    }
    fn sign(&self) -> i8 {
        let sa = Field::sign(&self.a);
        let sb = Field::sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2 = BigRational::from(BigInt::from(3)) * &self.b * &self.b;
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }
    fn turn(num: i64, den: u64) -> Option<(Self, Self)> {
        // Representable iff the angle is a multiple of 30 degrees.
        let den = den as i64;
        if den == 0 || (12 * num) % den != 0 {
            return None;
        }
        let k = (12 * num / den).rem_euclid(12);
        let cos_of = |k: i64| -> QSqrt3 {
            let half = Self::frac(1, 2);
            match k.rem_euclid(12) {
                0 => Self::one(),
                1 | 11 => Self::new(BigRational::zero(), half),
                2 | 10 => Self::rational(half),
                3 | 9 => Self::zero(),
                4 | 8 => Self::rational(-half),
                5 | 7 => Self::new(BigRational::zero(), -half),
                _ => -Self::one(),
            }
        };
        Some((cos_of(k), cos_of(k - 3)))
    }
}

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| F::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(Field::approx)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_negligible() && F::EXACT {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * o.get(k, j).clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(F::zero(), |acc, j| {
                    acc + self.get(i, j).clone() * v[j].clone()
                })
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + o.get(i, j).clone()
        })
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - o.get(i, j).clone()
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, k: &F) -> Self {
        self.map(|x| k.clone() * x.clone())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_negligible)
    }

    /// Equality under the field's zero test.
    pub fn same_as(&self, o: &Self) -> bool {
        (self.rows, self.cols) == (o.rows, o.cols) && self.sub(o).is_zero()
    }

    /// Largest absolute entry of `self − o`.
    pub fn residual(&self, o: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| (a.clone() - b.clone()).approx().abs())
            .fold(0.0, f64::max)
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul(o).same_as(&o.mul(self))
    }

    /// Places `block` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r: usize, c: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r + i, c + j).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    /// Row echelon reduction; returns the reduced matrix and pivot columns.
    fn echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // Largest-magnitude pivot; for exact fields any nonzero works.
            let best = (row..m.rows)
                .filter(|&r| !m.get(r, col).is_negligible())
                .max_by(|&x, &y| {
                    m.get(x, col)
                        .approx()
                        .abs()
                        .partial_cmp(&m.get(y, col).approx().abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = best else { continue };
            for j in 0..m.cols {
                m.data.swap(row * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(row, j).clone() * inv.clone();
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_negligible() {
                    let f = m.get(r, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(r, j).clone() - f.clone() * m.get(row, j).clone();
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Indices of a maximal set of linearly independent columns (leftmost first).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().1
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (red, pivots) = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(red.block(0, n, n, n))
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_negligible()) else {
                return F::zero();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(col * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = det * pivot.clone();
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = m.get(r, col).clone() * inv.clone();
                if f.is_negligible() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(r, j).clone() - f.clone() * m.get(col, j).clone();
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// Positive definiteness via leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        self.rows == self.cols
            && self.same_as(&self.transpose())
            && (1..=self.rows).all(|k| self.block(0, 0, k, k).det().sign() > 0)
    }
}

impl<F: Field> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions). Absent if the value is not finite.
pub fn reconstruct_rational(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    (q1 != 0).then(|| BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}
