use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d₁ | d₂ | …`, all `dᵢ ≥ 0`. Only `D` is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The `min(rows, cols)` diagonal entries.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by pivoting on the entry of least absolute value
/// in the trailing submatrix. Desk-scale dimensions only.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_nonzero(&d, t) else {
                // Trailing block is zero: done with the whole matrix.
                return SnfResult { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    d.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    d.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::from(1));
                    u.add_row_multiple(t, i, &BigInt::from(1));
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { u, d, v }
}

fn min_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let e = d.get(i, j);
            if e.is_zero() {
                continue;
            }
            let mag = e.abs();
            if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                best = Some((i, j, mag));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
