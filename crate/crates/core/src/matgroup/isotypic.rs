//! Joint eigenspace decomposition of a finite abelian matrix group over ℝ.
//!
//! For each generator `g` of order `o`, `P_j = (1/o) Σₖ ζ^{-jk} gᵏ` projects
//! onto the `ζʲ`-eigenspace. Products of these over all generators give
//! the joint eigenprojectors `P_χ`. Real characters give real components;
//! a conjugate pair `{χ, χ̄}` gives the real projector `2·Re P_χ` and the
//! complex structure `−2·Im P_χ`, which is multiplication by `i` on the
//! `χ`-eigenspace.

use num_integer::Integer;
use num_rational::BigRational;

use super::group::FiniteActionGroup;
use crate::field::{reconstruct_rational, Field, Mat, QSqrt3};

/// Denominator bound for rational reconstruction of floating projectors.
pub const RECONSTRUCTION_DENOMINATOR: u64 = 1_000_000;

/// Angle as a fraction of a full turn, reduced, `0 ≤ num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn {
    pub num: u64,
    pub den: u64,
}

impl Turn {
    pub fn new(num: u64, den: u64) -> Self {
        let g = num.gcd(&den).max(1);
        Self {
            num: (num % den) / g,
            den: den / g,
        }
    }

    pub fn is_real(&self) -> bool {
        self.den <= 2
    }

    /// Representative in `(-1/2, 1/2]`, as a signed numerator.
    pub fn signed(&self) -> (i64, u64) {
        let (n, d) = (self.num as i64, self.den);
        if 2 * self.num > self.den {
            (n - d as i64, d)
        } else {
            (n, d)
        }
    }
}

impl std::fmt::Display for Turn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// Every generator acts as `±1`.
    Real,
    /// A pair of complex-conjugate characters.
    ComplexPair,
}

#[derive(Clone, Debug)]
pub struct IsotypicComponent<F> {
    pub kind: ComponentKind,
    /// Per generator, the eigenvalue `e^{2πi·turn}` (the `+i` side of a pair).
    pub character: Vec<Turn>,
    /// Real dimension.
    pub dim: usize,
    pub projector: Mat<F>,
    /// Columns spanning the component.
    pub basis: Mat<F>,
    /// For complex pairs: `i` on the χ-eigenspace, `−i` on its conjugate.
    pub complex_structure: Option<Mat<F>>,
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition<F> {
    pub components: Vec<IsotypicComponent<F>>,
}

impl<F: Field> IsotypicDecomposition<F> {
    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|c| c.dim).sum()
    }

    /// Real components of odd dimension.
    pub fn odd_real_components(&self) -> impl Iterator<Item = &IsotypicComponent<F>> {
        self.components
            .iter()
            .filter(|c| c.kind == ComponentKind::Real && c.dim % 2 == 1)
    }
}

/// Decomposition with an exactness flag.
#[derive(Clone, Debug)]
pub enum Isotypic {
    Exact(IsotypicDecomposition<QSqrt3>),
    Approx(IsotypicDecomposition<f64>),
}

impl Isotypic {
    pub fn is_exact(&self) -> bool {
        matches!(self, Isotypic::Exact(_))
    }

    /// `(kind, character, dim)` per component.
    pub fn summary(&self) -> Vec<(ComponentKind, Vec<Turn>, usize)> {
        match self {
            Isotypic::Exact(d) => d
                .components
                .iter()
                .map(|c| (c.kind, c.character.clone(), c.dim))
                .collect(),
            Isotypic::Approx(d) => d
                .components
                .iter()
                .map(|c| (c.kind, c.character.clone(), c.dim))
                .collect(),
        }
    }
}

/// Isotypic decomposition, exact over ℚ(√3) when the group exponent
/// divides 12; otherwise computed in floating point and certified by
/// rational reconstruction when possible.
pub fn isotypic(group: &FiniteActionGroup) -> Isotypic {
    if let Some(d) = isotypic_in::<QSqrt3>(group) {
        return Isotypic::Exact(d);
    }
    let approx = isotypic_in::<f64>(group).expect("floating characters always exist");
    match rationalize(group, &approx) {
        Some(exact) => Isotypic::Exact(exact),
        None => Isotypic::Approx(approx),
    }
}

/// Decomposition over `F`; absent if the characters are not representable.
pub fn isotypic_in<F: Field>(group: &FiniteActionGroup) -> Option<IsotypicDecomposition<F>> {
    let dim = group.dim();
    let gens: Vec<Mat<F>> = group.generators().iter().map(|g| g.to_field()).collect();
    let orders = group.generator_orders();

    // Eigenprojectors of each generator separately: (j, Re, Im).
    let mut per_gen: Vec<Vec<(u64, Mat<F>, Mat<F>)>> = Vec::new();
    for (g, &o) in gens.iter().zip(orders) {
        let mut powers = vec![Mat::<F>::identity(dim)];
        for _ in 1..o {
            powers.push(powers.last().unwrap().mul(g));
        }
        let inv_o = F::from_int(o as i64).inv().unwrap();
        let mut projs = Vec::new();
        for j in 0..o {
            let mut re = Mat::<F>::zeros(dim, dim);
            let mut im = Mat::<F>::zeros(dim, dim);
            for (k, pk) in powers.iter().enumerate() {
                let (c, s) = F::turn((j * k as u64 % o) as i64, o)?;
                re = re.add(&pk.scale(&c));
                im = im.sub(&pk.scale(&s));
            }
            projs.push((j, re.scale(&inv_o), im.scale(&inv_o)));
        }
        per_gen.push(projs);
    }

    // Joint projectors: depth-first over generators, pruning empty ones.
    let mut leaves: Vec<(Vec<u64>, Mat<F>, Mat<F>)> = Vec::new();
    let mut stack = vec![(
        Vec::new(),
        Mat::<F>::identity(dim),
        Mat::<F>::zeros(dim, dim),
    )];
    while let Some((chars, re, im)) = stack.pop() {
        let depth = chars.len();
        if depth == gens.len() {
            leaves.push((chars, re, im));
            continue;
        }
        for (j, pr, pi) in per_gen[depth].iter().rev() {
            let nre = re.mul(pr).sub(&im.mul(pi));
            let nim = re.mul(pi).add(&im.mul(pr));
            if trace_dim(&nre) == 0 {
                continue;
            }
            let mut c = chars.clone();
            c.push(*j);
            stack.push((c, nre, nim));
        }
    }
    leaves.sort_by(|a, b| a.0.cmp(&b.0));

    let two = F::from_int(2);
    let mut components = Vec::new();
    for (chars, re, im) in &leaves {
        let real = chars.iter().zip(orders).all(|(&j, &o)| (2 * j) % o == 0);
        let turns: Vec<Turn> = chars
            .iter()
            .zip(orders)
            .map(|(&j, &o)| Turn::new(j, o))
            .collect();
        if real {
            let cols = re.independent_columns();
            components.push(IsotypicComponent {
                kind: ComponentKind::Real,
                character: turns,
                dim: trace_dim(re),
                basis: re.select_columns(&cols),
                projector: re.clone(),
                complex_structure: None,
            });
            continue;
        }
        // Keep the member of the pair whose first non-real angle lies in (0, 1/2).
        let lead = chars
            .iter()
            .zip(orders)
            .find(|(&j, &o)| (2 * j) % o != 0)
            .unwrap();
        if 2 * lead.0 > *lead.1 {
            continue;
        }
        let q = re.scale(&two);
        let cols = q.independent_columns();
        components.push(IsotypicComponent {
            kind: ComponentKind::ComplexPair,
            character: turns,
            dim: 2 * trace_dim(re),
            basis: q.select_columns(&cols),
            projector: q,
            complex_structure: Some(im.scale(&two).neg()),
        });
    }
    Some(IsotypicDecomposition { components })
}

fn trace_dim<F: Field>(p: &Mat<F>) -> usize {
    let t = p.trace().approx();
    if t < 0.5 {
        0
    } else {
        t.round() as usize
    }
}

/// Rounds every matrix to nearby rationals and re-checks all defining
/// identities exactly.
fn rationalize(
    group: &FiniteActionGroup,
    approx: &IsotypicDecomposition<f64>,
) -> Option<IsotypicDecomposition<QSqrt3>> {
    let round = |m: &Mat<f64>| -> Option<Mat<QSqrt3>> {
        let mut out = Mat::<QSqrt3>::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let r = reconstruct_rational(*m.get(i, j), RECONSTRUCTION_DENOMINATOR)?;
                if (Field::approx(&r) - m.get(i, j)).abs() > 1e-9 {
                    return None;
                }
                out.set(i, j, QSqrt3::rational(r));
            }
        }
        Some(out)
    };
    let mut components = Vec::new();
    for c in &approx.components {
        components.push(IsotypicComponent {
            kind: c.kind,
            character: c.character.clone(),
            dim: c.dim,
            projector: round(&c.projector)?,
            basis: round(&c.basis)?,
            complex_structure: match &c.complex_structure {
                Some(j) => Some(round(j)?),
                None => None,
            },
        });
    }
    let exact = IsotypicDecomposition { components };
    certify(group, &exact).then_some(exact)
}

/// Exact (or tolerance-level, for floats) verification of every identity
/// the decomposition promises.
pub fn certify<F: Field>(group: &FiniteActionGroup, d: &IsotypicDecomposition<F>) -> bool {
    let dim = group.dim();
    let gens: Vec<Mat<F>> = group.generators().iter().map(|g| g.to_field()).collect();
    let mut sum = Mat::<F>::zeros(dim, dim);
    for c in &d.components {
        let p = &c.projector;
        if !p.mul(p).same_as(p) || p.rank() != c.dim || c.basis.cols() != c.dim {
            return false;
        }
        if !p.mul(&c.basis).same_as(&c.basis) {
            return false;
        }
        for (g, t) in gens.iter().zip(&c.character) {
            if !g.commutes_with(p) {
                return false;
            }
            if c.kind == ComponentKind::Real {
                let sign = if t.num == 0 { F::one() } else { -F::one() };
                if !g.mul(p).same_as(&p.scale(&sign)) {
                    return false;
                }
            }
        }
        if let Some(j) = &c.complex_structure {
            if !j.mul(j).same_as(&p.neg()) || !j.mul(p).same_as(j) {
                return false;
            }
            if !gens.iter().all(|g| g.commutes_with(j)) {
                return false;
            }
        }
        sum = sum.add(p);
    }
    sum.same_as(&Mat::identity(dim))
}

/// Real-coefficient view of a rational matrix, for reporting.
pub fn rational_entries(m: &Mat<QSqrt3>) -> Option<Mat<BigRational>> {
    let mut out = Mat::<BigRational>::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            if !e.is_rational() {
                return None;
            }
            out.set(i, j, e.a.clone());
        }
    }
    Some(out)
}
