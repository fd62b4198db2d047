//! Independent oracles and the random corpus shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use fks_core::field::Mat;
use fks_core::ExtensionData;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type M2 = [[i64; 2]; 2];

pub const I2: M2 = [[1, 0], [0, 1]];
pub const NEG: M2 = [[-1, 0], [0, -1]];
pub const R3: M2 = [[0, -1], [1, -1]];
pub const R4: M2 = [[0, -1], [1, 0]];
pub const R6: M2 = [[1, -1], [1, 0]];
pub const FLIP: M2 = [[-1, 0], [0, 1]];
pub const UNI: M2 = [[1, 1], [0, 1]];

pub const GENERATORS: [M2; 7] = [I2, NEG, R3, R4, R6, FLIP, UNI];

pub fn mul2(a: &M2, b: &M2) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn apply2(a: &M2, v: [i64; 2]) -> [i64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

/// Inverse of a unimodular 2×2 matrix via the adjugate.
pub fn inv2(a: &M2) -> M2 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    assert!(det == 1 || det == -1);
    [
        [a[1][1] * det, -a[0][1] * det],
        [-a[1][0] * det, a[0][0] * det],
    ]
}

pub fn pow2(a: &M2, k: i64) -> M2 {
    let base = if k < 0 { inv2(a) } else { *a };
    (0..k.unsigned_abs()).fold(I2, |acc, _| mul2(&acc, &base))
}

pub fn add2(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

/// Order of `a` if it is at most 12.
pub fn order2(a: &M2) -> Option<u64> {
    let mut p = *a;
    for k in 1..=12 {
        if p == I2 {
            return Some(k);
        }
        p = mul2(&p, a);
    }
    None
}

/// Breadth-first closure of `⟨a, b⟩`, if it has at most `cap` elements.
pub fn image_order(a: &M2, b: &M2, cap: usize) -> Option<usize> {
    let mut seen = HashSet::from([I2]);
    let mut queue = VecDeque::from([I2]);
    while let Some(g) = queue.pop_front() {
        for h in [mul2(&g, a), mul2(&g, b)] {
            if seen.insert(h) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(h);
            }
        }
    }
    Some(seen.len())
}

/// Group law of `m = n = 1` extensions in closed form.
///
/// `x₂^a x₁^b = ι(φ(a,b)) x₁^b x₂^a` with `φ(1,b) = Σ_{0≤k<b} A₁ᵏc`
/// (negated sum over `b ≤ k < 0` for negative `b`) and
/// `φ(a,b) = Σ_{0≤l<a} A₂ˡ φ(1,b)` likewise.
#[derive(Clone, Debug)]
pub struct SmallGroup {
    pub a1: M2,
    pub a2: M2,
    pub c: [i64; 2],
}

pub type Elem = ([i64; 2], [i64; 2]);

impl SmallGroup {
    fn geometric(a: &M2, v: [i64; 2], n: i64) -> [i64; 2] {
        if n >= 0 {
            (0..n).fold([0, 0], |acc, k| add2(acc, apply2(&pow2(a, k), v)))
        } else {
            (n..0).fold([0, 0], |acc, k| {
                let w = apply2(&pow2(a, k), v);
                [acc[0] - w[0], acc[1] - w[1]]
            })
        }
    }

    pub fn phi(&self, a: i64, b: i64) -> [i64; 2] {
        let one = Self::geometric(&self.a1, self.c, b);
        Self::geometric(&self.a2, one, a)
    }

    pub fn mul(&self, (v, t): &Elem, (w, s): &Elem) -> Elem {
        let rho = mul2(&pow2(&self.a1, t[0]), &pow2(&self.a2, t[1]));
        let shift = apply2(&pow2(&self.a1, t[0]), self.phi(t[1], s[0]));
        (
            add2(add2(*v, apply2(&rho, *w)), shift),
            [t[0] + s[0], t[1] + s[1]],
        )
    }

    /// `g⁻¹ = (x^t)⁻¹ ι(−v)` with `(x^t)⁻¹ = x₂^{-t₂} x₁^{-t₁}`.
    pub fn inv(&self, (v, t): &Elem) -> Elem {
        let xinv: Elem = (self.phi(-t[1], -t[0]), [-t[0], -t[1]]);
        self.mul(&xinv, &([-v[0], -v[1]], [0, 0]))
    }

    pub fn commutator(&self, g: &Elem, h: &Elem) -> Elem {
        let gh = self.mul(g, h);
        let gi = self.inv(g);
        let hi = self.inv(h);
        self.mul(&self.mul(&gh, &gi), &hi)
    }
}

/// Rows of an `r×c` integer matrix.
pub type IMat = Vec<Vec<i128>>;

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(m: &IMat) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `d_k`: gcd of all `k×k` minors.
pub fn determinantal_divisor(m: &IMat, k: usize) -> i128 {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mut g = 0;
    for rows in subsets(r, k) {
        for cols in subsets(c, k) {
            let minor: IMat = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| m[i][j]).collect())
                .collect();
            g = gcd(g, bareiss_det(&minor));
        }
    }
    g
}

/// Invariant factors `d_k / d_{k-1}` up to the rank.
pub fn invariant_factors(m: &IMat) -> Vec<i128> {
    let limit = m.len().min(m.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=limit {
        let d = determinantal_divisor(m, k);
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Size of `ℤʳ / (columns of m)` by breadth-first enumeration of the
/// cosets from the unit vectors, each coset named by its Hermite-reduced
/// representative. `None` when the quotient is infinite or exceeds `limit`.
pub fn coset_count(m: &IMat, limit: usize) -> Option<usize> {
    let r = m.len();
    let cols: Vec<Vec<i128>> = (0..m.first().map_or(0, Vec::len))
        .map(|j| (0..r).map(|i| m[i][j]).collect())
        .collect();
    let h = Hermite::new(r, &cols);
    if !h.full_rank(r) {
        return None;
    }
    let zero = vec![0i128; r];
    let mut seen = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for i in 0..r {
            let mut w = v.clone();
            w[i] += 1;
            let w = h.reduce(&w);
            if seen.insert(w.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(w);
            }
        }
    }
    Some(seen.len())
}

/// Column Hermite form of the span of `cols` (vectors of length `r`),
/// used to test lattice membership.
pub struct Hermite {
    pivots: Vec<(usize, Vec<i128>)>,
}

impl Hermite {
    pub fn new(r: usize, cols: &[Vec<i128>]) -> Self {
        let mut work: Vec<Vec<i128>> = cols
            .iter()
            .filter(|c| c.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        let mut pivots = Vec::new();
        for row in 0..r {
            loop {
                work.retain(|c| c.iter().any(|&x| x != 0));
                let mut with: Vec<usize> = (0..work.len()).filter(|&i| work[i][row] != 0).collect();
                if with.len() <= 1 {
                    if let Some(&i) = with.first() {
                        let mut p = work.remove(i);
                        if p[row] < 0 {
                            p.iter_mut().for_each(|x| *x = -*x);
                        }
                        pivots.push((row, p));
                    }
                    break;
                }
                with.sort_by_key(|&i| work[i][row].abs());
                let small = work[with[0]].clone();
                for &i in &with[1..] {
                    let q = work[i][row] / small[row];
                    for k in 0..r {
                        work[i][k] -= q * small[k];
                    }
                }
            }
        }
        Self { pivots }
    }

    pub fn full_rank(&self, r: usize) -> bool {
        self.pivots.len() == r
    }

    /// Representative with pivot entries in `[0, p)`; canonical for a
    /// full-rank lattice.
    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        let mut v = v.to_vec();
        for (row, p) in &self.pivots {
            let q = v[*row].div_euclid(p[*row]);
            for (x, y) in v.iter_mut().zip(p) {
                *x -= q * y;
            }
        }
        v
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        let mut v = v.to_vec();
        for (row, p) in &self.pivots {
            if v[*row] % p[*row] != 0 {
                return false;
            }
            let q = v[*row] / p[*row];
            for (x, y) in v.iter_mut().zip(p) {
                *x -= q * y;
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

/// Whether `k·c` is an integral coboundary for some `1 ≤ k ≤ max_k`,
/// for `m = n = 1`: `(A₂ − I)u₁ − (A₁ − I)u₂ = k·c`.
pub fn torsion_oracle(a1: &M2, a2: &M2, c: [i64; 2], max_k: i64) -> Option<i64> {
    let col = |a: &M2, j: usize, sign: i128| -> Vec<i128> {
        (0..2)
            .map(|i| sign * (a[i][j] - I2[i][j]) as i128)
            .collect()
    };
    let cols = vec![col(a2, 0, 1), col(a2, 1, 1), col(a1, 0, -1), col(a1, 1, -1)];
    let h = Hermite::new(2, &cols);
    (1..=max_k).find(|&k| h.contains(&[(k * c[0]) as i128, (k * c[1]) as i128]))
}

/// `exp(X)` by scaling, Taylor series and squaring.
pub fn expm_taylor(x: &Mat<f64>) -> Mat<f64> {
    let n = x.rows();
    let norm = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| x.get(i, j).abs())
        .sum::<f64>();
    let squarings = norm.max(1.0).log2().ceil() as i32 + 4;
    let y = x.scale(&(0.5f64).powi(squarings));
    let mut term = Mat::identity(n);
    let mut sum = Mat::identity(n);
    for k in 1..30 {
        term = term.mul(&y).scale(&(1.0 / k as f64));
        sum = sum.add(&term);
    }
    (0..squarings).fold(sum, |acc, _| acc.mul(&acc))
}

/// Fixed points of `x ↦ Lx + b/den` on `ℝ²/ℤ²` by scanning the grid
/// `(1/g)ℤ²`, valid when `L − I` is invertible and `g` is a multiple of
/// `|det(L − I)|·den`.
pub fn grid_fixed_points(l: &M2, b: [i64; 2], den: i64, g: i64) -> usize {
    let mut count = 0;
    for p in 0..g {
        for q in 0..g {
            // (L − I)x + b/den ∈ ℤ² with x = (p, q)/g
            let y = apply2(&[[l[0][0] - 1, l[0][1]], [l[1][0], l[1][1] - 1]], [p, q]);
            let ok = (0..2).all(|i| (y[i] * den + b[i] * g) % (g * den) == 0);
            if ok {
                count += 1;
            }
        }
    }
    count
}

/// One `m = n = 1` dataset from the random corpus.
#[derive(Clone, Debug)]
pub struct Sample {
    pub a1: M2,
    pub a2: M2,
    pub c: [i64; 2],
}

impl Sample {
    pub fn data(&self) -> ExtensionData {
        let rows = |m: &M2| -> Vec<Vec<i64>> { m.iter().map(|r| r.to_vec()).collect() };
        let (r1, r2) = (rows(&self.a1), rows(&self.a2));
        let r1: Vec<&[i64]> = r1.iter().map(Vec::as_slice).collect();
        let r2: Vec<&[i64]> = r2.iter().map(Vec::as_slice).collect();
        ExtensionData::from_i64(1, 1, &[&r1, &r2], &[((0, 1), &self.c[..])]).unwrap()
    }

    pub fn group(&self) -> SmallGroup {
        SmallGroup {
            a1: self.a1,
            a2: self.a2,
            c: self.c,
        }
    }

    pub fn commuting(&self) -> bool {
        mul2(&self.a1, &self.a2) == mul2(&self.a2, &self.a1)
    }
}

/// `count` commuting datasets drawn from a fixed seed.
pub fn corpus(seed: u64, count: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a1 = GENERATORS[rng.gen_range(0..GENERATORS.len())];
        let a2 = match rng.gen_range(0..4) {
            0 => GENERATORS[rng.gen_range(0..GENERATORS.len())],
            1 => pow2(&a1, rng.gen_range(-2..=3)),
            2 => mul2(&NEG, &pow2(&a1, rng.gen_range(0..=2))),
            _ => I2,
        };
        let c = [rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
        let s = Sample { a1, a2, c };
        if s.commuting() {
            out.push(s);
        }
    }
    out
}
