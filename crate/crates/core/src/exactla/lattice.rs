use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{smith_normal_form, IntMatrix};

/// ℤ-basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(gens);
    let diag = snf.diagonal();
    let u_inv = snf.u.inverse().expect("SNF transform is unimodular");
    let cols: Vec<Vec<BigInt>> = (0..snf.rank())
        .map(|i| u_inv.column(i).into_iter().map(|x| x * &diag[i]).collect())
        .collect();
    IntMatrix::from_columns(gens.rows(), &cols)
}

/// ℤ-basis of the saturation `(ℚ·col(gens)) ∩ ℤⁿ`.
pub fn saturation(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(gens);
    let u_inv = snf.u.inverse().expect("SNF transform is unimodular");
    let cols: Vec<Vec<BigInt>> = (0..snf.rank()).map(|i| u_inv.column(i)).collect();
    IntMatrix::from_columns(gens.rows(), &cols)
}

/// Incrementally maintained row Hermite basis of a sublattice of ℤⁿ.
#[derive(Clone, Debug)]
pub struct HermiteBasis {
    dim: usize,
    // (pivot column, row) sorted by pivot; pivots positive.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl HermiteBasis {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, v: &[BigInt]) {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        let mut k = 0;
        loop {
            let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
                break;
            };
            while k < self.rows.len() && self.rows[k].0 < lead {
                k += 1;
            }
            if k == self.rows.len() || self.rows[k].0 > lead {
                if v[lead].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                self.rows.insert(k, (lead, v));
                break;
            }
            let row = &self.rows[k].1;
            let e = row[lead].extended_gcd(&v[lead]);
            let (ra, va) = (&row[lead] / &e.gcd, &v[lead] / &e.gcd);
            let new_row: Vec<BigInt> = row
                .iter()
                .zip(&v)
                .map(|(r, x)| &e.x * r + &e.y * x)
                .collect();
            let rest: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &ra * x - &va * r).collect();
            self.rows[k].1 = new_row;
            if self.rows[k].1[lead].is_negative() {
                self.rows[k].1.iter_mut().for_each(|x| *x = -&*x);
            }
            v = rest;
        }
        self.reduce();
    }

    fn reduce(&mut self) {
        for k in 0..self.rows.len() {
            let (p, pivot_row) = (self.rows[k].0, self.rows[k].1.clone());
            for i in 0..k {
                let q = self.rows[i].1[p].div_floor(&pivot_row[p]);
                if !q.is_zero() {
                    for (x, y) in self.rows[i].1.iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
        }
    }

    /// Basis vectors as columns.
    pub fn to_columns(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.rows.iter().map(|(_, r)| r.clone()).collect();
        IntMatrix::from_columns(self.dim, &cols)
    }
}
