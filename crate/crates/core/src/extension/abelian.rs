//! The finite-index normal abelian subgroup and the abelianization.

use num_bigint::BigInt;
use num_traits::Zero;

use super::cohomology::{class_torsion, coboundary_system, split_blocks};
use super::element::{Gamma, GroupElement};
use super::validate::validate;
use super::{Condition, ExtensionData, ExtensionError};
use crate::exactla::{cokernel_invariants, fmt_int_vec, solve_linear, IntMatrix, RatVector, Ring};
use crate::matgroup::FiniteActionGroup;

/// `Δ = ι(ℤ²ᵐ)·⟨h₁,…,h₂ₙ⟩` where the `h_l` lift a basis of `ker ρ ⊂ ℤ²ⁿ`.
#[derive(Clone, Debug)]
pub struct AbelianCert {
    /// Basis of `Δ′ = ker ρ` as columns.
    pub base_lattice: IntMatrix,
    pub lifts: Vec<GroupElement>,
    /// `w_l` with `h_l = ι(w_l)·x^{b_l}`.
    pub integral_splitting: Vec<Vec<BigInt>>,
    /// `[Γ : Δ]`, the order of the action image.
    pub index: usize,
    pub image: FiniteActionGroup,
}

impl AbelianCert {
    /// Fiber generators followed by the lifts.
    pub fn generators(&self, gamma: &Gamma<'_>) -> Vec<GroupElement> {
        (0..gamma.data().fiber_rank())
            .map(|k| gamma.fiber_generator(k))
            .chain(self.lifts.iter().cloned())
            .collect()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        let t = RatVector::from_i64(&g.t);
        matches!(
            solve_linear(&self.base_lattice, &t, Ring::Integers),
            Ok(Some(_))
        )
    }

    /// Generators commute pairwise and conjugates by the generators of `Γ`
    /// stay in `Δ`.
    pub fn verify(&self, gamma: &Gamma<'_>) -> bool {
        let gens = self.generators(gamma);
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if !gamma.commutator(a, b).is_identity() {
                    return false;
                }
            }
        }
        let d = gamma.data();
        let outer: Vec<GroupElement> = (0..d.base_rank())
            .map(|j| gamma.base_generator(j))
            .chain((0..d.fiber_rank()).map(|k| gamma.fiber_generator(k)))
            .collect();
        outer.iter().all(|x| {
            let xi = gamma.inverse(x);
            gens.iter().all(|h| {
                self.contains(&gamma.conjugate(x, h)) && self.contains(&gamma.conjugate(&xi, h))
            })
        })
    }
}

#[derive(Clone, Debug)]
pub enum AbelianOutcome {
    Found(AbelianCert),
    Absent {
        condition: Condition,
        witness: String,
    },
}

impl AbelianOutcome {
    pub fn cert(&self) -> Option<&AbelianCert> {
        match self {
            AbelianOutcome::Found(c) => Some(c),
            AbelianOutcome::Absent { .. } => None,
        }
    }
}

/// Finds `Δ` when conditions (a) and (d) hold; otherwise reports which fails.
pub fn abelian_subgroup(
    data: &ExtensionData,
    closure_cap: usize,
) -> Result<AbelianOutcome, ExtensionError> {
    let report = validate(data, closure_cap);
    if let Some((condition, witness)) = report.failure() {
        if condition == Condition::Structural {
            return Err(ExtensionError::InvalidData(witness));
        }
        return Ok(AbelianOutcome::Absent { condition, witness });
    }
    let image = report.group.expect("condition (a) holds");
    let gamma = data.group()?;
    let base_lattice = image.relation_lattice().clone();
    let basis = relation_basis(&image);
    let raw: Vec<GroupElement> = basis.iter().map(|b| gamma.monomial(b)).collect();
    // g_p·g_l = ι(d_lp)·g_l·g_p
    let defect = |l: usize, p: usize| gamma.commutator(&raw[p], &raw[l]);
    if !class_torsion(data)?.torsion {
        let witness = infinite_order_witness(&gamma, &basis);
        return Ok(AbelianOutcome::Absent {
            condition: Condition::D,
            witness,
        });
    }
    let (system, rhs) = coboundary_system(&gamma, &basis, |l, p| {
        defect(l, p).v.iter().map(|x| -x).collect()
    });
    let solution = solve_linear(&system, &rhs, Ring::Integers)?.ok_or_else(|| {
        ExtensionError::Internal("restricted extension class is not integrally split".into())
    })?;
    let integral_splitting: Vec<Vec<BigInt>> =
        split_blocks(&solution.particular, data.fiber_rank())
            .iter()
            .map(|u| u.to_integral().expect("integer solve"))
            .collect();
    let lifts: Vec<GroupElement> = raw
        .iter()
        .zip(&integral_splitting)
        .map(|(g, w)| gamma.multiply(&gamma.fiber(w.clone()), g))
        .collect();
    let index = image.order();
    let cert = AbelianCert {
        base_lattice,
        lifts,
        integral_splitting,
        index,
        image,
    };
    if !cert.verify(&gamma) {
        return Err(ExtensionError::Internal(
            "subgroup failed the abelian/normal checks".into(),
        ));
    }
    Ok(AbelianOutcome::Found(cert))
}

fn relation_basis(image: &FiniteActionGroup) -> Vec<Vec<i64>> {
    let lattice = image.relation_lattice();
    (0..lattice.cols())
        .map(|l| {
            lattice
                .column(l)
                .iter()
                .map(|x| i64::try_from(x).expect("relation lattice entries are small"))
                .collect()
        })
        .collect()
}

/// A pair of lifts of `ker ρ` that fail to commute, when (d) fails.
pub(crate) fn d_witness(data: &ExtensionData, image: &FiniteActionGroup) -> String {
    match data.group() {
        Ok(gamma) => infinite_order_witness(&gamma, &relation_basis(image)),
        Err(_) => NO_SPLITTING.to_string(),
    }
}

const NO_SPLITTING: &str = "no rational splitting of the extension class";

fn infinite_order_witness(gamma: &Gamma<'_>, basis: &[Vec<i64>]) -> String {
    let raw: Vec<GroupElement> = basis.iter().map(|b| gamma.monomial(b)).collect();
    (0..raw.len())
        .flat_map(|l| (l + 1..raw.len()).map(move |p| (l, p)))
        .map(|(l, p)| (l, p, gamma.commutator(&raw[p], &raw[l])))
        .find(|(_, _, c)| !c.is_identity())
        .map_or_else(
            || NO_SPLITTING.to_string(),
            |(l, p, c)| {
                format!(
                    "lifts of {} and {} in ker rho have commutator iota({})",
                    fmt_t(&basis[l]),
                    fmt_t(&basis[p]),
                    fmt_int_vec(&c.v)
                )
            },
        )
}

fn fmt_t(t: &[i64]) -> String {
    let v: Vec<BigInt> = t.iter().map(|&x| x.into()).collect();
    fmt_int_vec(&v)
}

/// `Γ/[Γ,Γ] ≅ ℤ^{b₁} ⊕ ⊕ ℤ/dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub b1: usize,
    pub torsion: Vec<BigInt>,
}

/// Cokernel of the commutator images `(Aᵢ − I)a` and `cᵢⱼ` in `ℤ²ᵐ⁺²ⁿ`.
pub fn abelianization(data: &ExtensionData) -> Abelianization {
    let (f, b) = (data.fiber_rank(), data.base_rank());
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    let pad = |v: Vec<BigInt>| {
        let mut out = v;
        out.resize(f + b, BigInt::zero());
        out
    };
    for a in data.actions() {
        let m = a.minus_identity();
        for c in 0..f {
            cols.push(pad(m.column(c)));
        }
    }
    for (_, c) in data.tails() {
        cols.push(pad(c.to_vec()));
    }
    let coker = cokernel_invariants(&IntMatrix::from_columns(f + b, &cols));
    Abelianization {
        b1: coker.free_rank,
        torsion: coker.torsion,
    }
}
