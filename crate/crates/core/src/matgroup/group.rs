use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::One;
use num_traits::Signed;

use super::poly::{char_poly, cyclotomic, cyclotomic_factors, lcm_all, Poly};
use super::GroupError;
use crate::exactla::{HermiteBasis, IntMatrix};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Multiplicative order of an integer matrix with `det = ±1`.
///
/// Finite iff the minimal polynomial is a squarefree product of cyclotomic
/// polynomials. The characteristic polynomial must factor into cyclotomics,
/// and then the squarefree product of its distinct factors has to
/// annihilate `m`.
pub fn finite_order(m: &IntMatrix) -> Result<Option<u64>, GroupError> {
    Ok(cyclotomic_type(m)?.map(|f| lcm_all(f.keys().copied())))
}

/// Cyclotomic indices of the eigenvalues (with multiplicities) when `m`
/// has finite order.
pub fn cyclotomic_type(m: &IntMatrix) -> Result<Option<BTreeMap<u64, usize>>, GroupError> {
    if !m.is_square() {
        return Err(GroupError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.det().abs().is_one() {
        return Err(GroupError::NotInvertible { index: 0 });
    }
    let Some(factors) = cyclotomic_factors(&char_poly(m)) else {
        return Ok(None);
    };
    let squarefree = factors
        .keys()
        .fold(Poly::one(), |acc, &k| acc.mul(&cyclotomic(k)));
    Ok(squarefree.eval_matrix(m).is_zero().then_some(factors))
}

/// Finite group generated by pairwise commuting integer matrices.
#[derive(Clone, Debug)]
pub struct FiniteActionGroup {
    dim: usize,
    generators: Vec<IntMatrix>,
    elements: Vec<IntMatrix>,
    /// Exponent vector over the generators reaching each element.
    words: Vec<Vec<i64>>,
    generator_orders: Vec<u64>,
    /// Basis (columns) of the relation lattice `{t : ∏ gᵢ^tᵢ = I}`.
    relations: IntMatrix,
}

impl FiniteActionGroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    /// All elements; the identity comes first.
    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn word(&self, index: usize) -> &[i64] {
        &self.words[index]
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.generator_orders
    }

    pub fn exponent(&self) -> u64 {
        lcm_all(self.generator_orders.iter().copied())
    }

    /// Kernel of `ℤᵏ → G` sending `eᵢ` to the i-th generator, as columns.
    pub fn relation_lattice(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    /// Eigenvalue shadow of an element: its cyclotomic indices with multiplicity.
    pub fn eigen_shadow(&self, index: usize) -> BTreeMap<u64, usize> {
        cyclotomic_type(&self.elements[index])
            .ok()
            .flatten()
            .expect("group elements have finite order")
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// The same abstract group acting as `diag(g, I_extra)`.
    pub fn block_extend(&self, extra: usize) -> Self {
        let pad = IntMatrix::identity(extra);
        let lift = |g: &IntMatrix| IntMatrix::block_diag(g, &pad);
        Self {
            dim: self.dim + extra,
            generators: self.generators.iter().map(lift).collect(),
            elements: self.elements.iter().map(lift).collect(),
            words: self.words.clone(),
            generator_orders: self.generator_orders.clone(),
            relations: self.relations.clone(),
        }
    }
}

/// Breadth-first closure under multiplication by the generators and their
/// inverses. Fails once more than `cap` elements have been found.
pub fn closure(generators: &[IntMatrix], cap: usize) -> Result<FiniteActionGroup, GroupError> {
    let first = generators.first().ok_or(GroupError::NoGenerators)?;
    let dim = first.rows();
    for (i, g) in generators.iter().enumerate() {
        if !g.is_square() {
            return Err(GroupError::NotSquare {
                rows: g.rows(),
                cols: g.cols(),
            });
        }
        if g.rows() != dim {
            return Err(GroupError::SizeMismatch {
                index: i,
                expected: dim,
                found: g.rows(),
            });
        }
        if !g.det().abs().is_one() {
            return Err(GroupError::NotInvertible { index: i });
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if !generators[i].commutes_with(&generators[j]) {
                return Err(GroupError::NonCommuting { i, j });
            }
        }
    }
    let inverses: Vec<IntMatrix> = generators
        .iter()
        .map(|g| g.inverse().expect("unimodular"))
        .collect();

    let k = generators.len();
    let mut elements = vec![IntMatrix::identity(dim)];
    let mut words = vec![vec![0i64; k]];
    let mut index: HashMap<IntMatrix, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut relations = HermiteBasis::new(k);
    let mut queue = VecDeque::from([0usize]);

    while let Some(cur) = queue.pop_front() {
        for j in 0..k {
            for (step, mult) in [(1i64, &generators[j]), (-1i64, &inverses[j])] {
                let next = elements[cur].mul(mult);
                let mut w = words[cur].clone();
                w[j] += step;
                match index.get(&next) {
                    Some(&seen) => {
                        let diff: Vec<BigInt> = w
                            .iter()
                            .zip(&words[seen])
                            .map(|(a, b)| BigInt::from(a - b))
                            .collect();
                        if diff.iter().any(|x| x.sign() != num_bigint::Sign::NoSign) {
                            relations.insert(&diff);
                        }
                    }
                    None => {
                        if elements.len() >= cap {
                            return Err(GroupError::CapExceeded { cap });
                        }
                        index.insert(next.clone(), elements.len());
                        queue.push_back(elements.len());
                        elements.push(next);
                        words.push(w);
                    }
                }
            }
        }
    }

    let generator_orders = generators
        .iter()
        .map(|g| {
            finite_order(g)
                .ok()
                .flatten()
                .expect("generator of a finite group has finite order")
        })
        .collect();
    Ok(FiniteActionGroup {
        dim,
        generators: generators.to_vec(),
        elements,
        words,
        generator_orders,
        relations: relations.to_columns(),
    })
}
