use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinAlgError;
use crate::field::{Field, Mat};

/// Dense arbitrary-precision integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LinAlgError> {
        if data.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from small integer rows. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(height: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(height, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), height, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matrix product shape")
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        RatVector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.iter())
                        .fold(BigRational::zero(), |acc, (a, b)| {
                            acc + b * BigRational::from(a.clone())
                        })
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> Self {
        assert!(self.is_square());
        self.sub(&Self::identity(self.rows))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Horizontal concatenation of equal-height blocks.
    pub fn hstack(blocks: &[&IntMatrix], height: usize) -> Self {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(height, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, height, "hstack height");
            for i in 0..height {
                for j in 0..b.cols {
                    out.set(i, offset + j, b.get(i, j).clone());
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Block diagonal `diag(a, b)`.
    pub fn block_diag(a: &IntMatrix, b: &IntMatrix) -> Self {
        let mut out = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += k * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j] * k;
            self.data[target * self.cols + j] += s;
        }
    }

    /// col[target] += k * col[source]
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + source] * k;
            self.data[i * self.cols + target] += s;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.to_field::<BigRational>().rank()
    }

    /// Integer inverse, present iff the matrix is unimodular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() || !self.det().abs().is_one() {
            return None;
        }
        let inv = self.to_field::<BigRational>().inverse()?;
        Self::try_from_rational(&inv)
    }

    /// `self^k` for any integer k (negative powers need a unimodular matrix).
    pub fn pow(&self, k: i64) -> Option<Self> {
        assert!(self.is_square());
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.rows);
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Some(acc)
    }

    pub fn to_field<F: Field>(&self) -> Mat<F> {
        Mat::from_fn(self.rows, self.cols, |i, j| F::from_bigint(self.get(i, j)))
    }

    /// Converts an integral rational matrix; absent if any entry is fractional.
    pub fn try_from_rational(m: &Mat<BigRational>) -> Option<Self> {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let e = m.get(i, j);
                if !e.is_integer() {
                    return None;
                }
                data.push(e.to_integer());
            }
        }
        Some(Self {
            rows: m.rows(),
            cols: m.cols(),
            data,
        })
    }
}

impl fmt::Display for IntMatrix {
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

/// Exact rational vector. `BigRational` keeps every entry in lowest terms
/// with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RatVector(pub Vec<BigRational>);

impl RatVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![BigRational::zero(); len])
    }

    pub fn from_ints(v: &[BigInt]) -> Self {
        Self(v.iter().map(|x| BigRational::from(x.clone())).collect())
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self(
            v.iter()
                .map(|&x| BigRational::from(BigInt::from(x)))
                .collect(),
        )
    }

    /// Parses `num/den` pairs; panics on zero denominators.
    pub fn from_fracs(v: &[(i64, i64)]) -> Self {
        Self(
            v.iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigRational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_integral(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.0.iter().map(|x| x.to_integer()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &Self) -> BigRational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Least common multiple of the denominators.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// `[a,b,…]` without spaces.
pub fn fmt_int_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}
