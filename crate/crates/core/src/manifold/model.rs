use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::affine::{fixed_points, AffineMap};
use super::{BuildError, BuildOptions, ConditionSummary};
use crate::cxstruct::{extend_j, ComplexStructureData, FieldMat, RealExtensionCert};
use crate::exactla::{saturation, IntMatrix, RatVector};
use crate::extension::{
    AbelianCert, Abelianization, Check, CohomologyCertificate, ExtensionData, GroupElement,
    SplitElement, ValidationReport,
};
use crate::field::{Field, Mat, QSqrt3};
use crate::matgroup::{average_form, FiniteActionGroup, GroupError};

/// Complex structure and invariant metric on `V`.
#[derive(Clone, Debug)]
pub struct GeometryData<F> {
    pub complex: ComplexStructureData<F>,
    /// Seed form averaged over the linear parts of `Γ`.
    pub seed_average: Mat<BigRational>,
    /// `h = S + JᵀSJ`.
    pub metric: Mat<F>,
}

/// Exact over ℚ(√3), or floating when the action's characters require it.
#[derive(Clone, Debug)]
pub enum Geometry {
    Exact(GeometryData<QSqrt3>),
    Approx(GeometryData<f64>),
}

impl Geometry {
    pub fn is_exact(&self) -> bool {
        matches!(self, Geometry::Exact(_))
    }

    pub fn j(&self) -> FieldMat {
        match self {
            Geometry::Exact(g) => FieldMat::Exact(g.complex.j.clone()),
            Geometry::Approx(g) => FieldMat::Approx(g.complex.j.clone()),
        }
    }

    pub fn j0(&self) -> FieldMat {
        match self {
            Geometry::Exact(g) => FieldMat::Exact(g.complex.j0.clone()),
            Geometry::Approx(g) => FieldMat::Approx(g.complex.j0.clone()),
        }
    }

    pub fn metric(&self) -> FieldMat {
        match self {
            Geometry::Exact(g) => FieldMat::Exact(g.metric.clone()),
            Geometry::Approx(g) => FieldMat::Approx(g.metric.clone()),
        }
    }

    /// Group average of the seed form.
    pub fn seed_average(&self) -> &Mat<BigRational> {
        match self {
            Geometry::Exact(g) => &g.seed_average,
            Geometry::Approx(g) => &g.seed_average,
        }
    }

    /// `max |J² + I|`.
    pub fn j_square_residual(&self) -> f64 {
        fn res<F: Field>(j: &Mat<F>) -> f64 {
            j.mul(j).residual(&Mat::identity(j.rows()).neg())
        }
        match self {
            Geometry::Exact(g) => res(&g.complex.j),
            Geometry::Approx(g) => res(&g.complex.j),
        }
    }
}

/// `V/Λ` with the free action of the deck group `Γ/Δ`.
#[derive(Clone, Debug)]
pub struct TorusQuotientPresentation {
    /// Columns: translation vectors of the generators of `Δ`.
    pub lattice: Mat<BigRational>,
    /// Coset representatives of `Γ/Δ`, the identity first.
    pub deck_group: Vec<AffineMap>,
    pub free: bool,
}

/// Lattice data of the canonical torus fibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationPresentation {
    pub fiber_rank: usize,
    pub base_rank: usize,
    /// Saturation of `Σ im(Aᵢ − I)` in `ℤ²ᵐ`, as columns.
    pub fiber_lattice: IntMatrix,
    /// Torsion of `Γ^ab`.
    pub component_torsion: Vec<BigInt>,
}

/// A certified flat Kähler solvmanifold.
#[derive(Clone, Debug)]
pub struct SolvmanifoldModel {
    pub data: ExtensionData,
    pub conditions: ConditionSummary,
    pub validation: ValidationReport,
    pub cohomology: CohomologyCertificate,
    /// `uᵢ` with `xᵢ ↦ (uᵢ, eᵢ)`.
    pub splitting: Vec<RatVector>,
    pub real_extension: RealExtensionCert,
    pub abelian: AbelianCert,
    pub geometry: Geometry,
    pub abelianization: Abelianization,
    pub torus_quotient: TorusQuotientPresentation,
    pub fibration: FibrationPresentation,
    /// Consistency checks run while assembling; all pass for a built model.
    pub checks: Vec<Check>,
}

pub(super) fn geometry_in<F: Field>(
    data: &ExtensionData,
    group: &FiniteActionGroup,
    options: &BuildOptions,
    j0: Mat<F>,
) -> Result<GeometryData<F>, BuildError> {
    geometry_with_seed(data, group, options, j0, options.seed.as_ref())
}

fn geometry_with_seed<F: Field>(
    data: &ExtensionData,
    group: &FiniteActionGroup,
    options: &BuildOptions,
    j0: Mat<F>,
    seed: Option<&Mat<BigRational>>,
) -> Result<GeometryData<F>, BuildError> {
    let (f, b) = (data.fiber_rank(), data.base_rank());
    let j1 = options.j1.as_ref().map(|m| m.map(F::from_rational));
    let off = options.b.as_ref().map(|m| m.map(F::from_rational));
    if let Some(bm) = &off {
        if (bm.rows(), bm.cols()) == (f, b) {
            for (i, a) in data.actions().iter().enumerate() {
                if !a.to_field::<F>().mul(bm).same_as(bm) {
                    return Err(BuildError::InvalidOption(format!(
                        "B must be fixed by every action, A{} B != B",
                        i + 1
                    )));
                }
            }
        }
    }
    let complex = extend_j(j0, b, j1, off).map_err(|e| super::cx_invalid("J", e))?;
    let seed = seed.cloned().unwrap_or_else(|| Mat::identity(f + b));
    let seed_average = average_form(&group.block_extend(b), &seed).map_err(|e| match e {
        GroupError::NotPositiveDefinite | GroupError::DimensionMismatch { .. } => {
            BuildError::InvalidOption(format!("seed metric: {e}"))
        }
        other => BuildError::Internal(other.to_string()),
    })?;
    let s: Mat<F> = seed_average.map(F::from_rational);
    let metric = s.add(&complex.j.transpose().mul(&s).mul(&complex.j));
    Ok(GeometryData {
        complex,
        seed_average,
        metric,
    })
}

/// Recomputes the invariant metric of a model from another seed.
pub fn invariant_metric(
    model: &SolvmanifoldModel,
    seed: &Mat<BigRational>,
) -> Result<FieldMat, BuildError> {
    let group = &model.abelian.image;
    let base = model.data.base_rank();
    let average = average_form(&group.block_extend(base), seed)
        .map_err(|e| BuildError::InvalidOption(format!("seed metric: {e}")))?;
    fn sym<F: Field>(s: &Mat<BigRational>, j: &Mat<F>) -> Mat<F> {
        let s: Mat<F> = s.map(F::from_rational);
        s.add(&j.transpose().mul(&s).mul(j))
    }
    Ok(match &model.geometry {
        Geometry::Exact(g) => FieldMat::Exact(sym(&average, &g.complex.j)),
        Geometry::Approx(g) => FieldMat::Approx(sym(&average, &g.complex.j)),
    })
}

fn check(name: &str, ok: bool, witness: impl FnOnce() -> String) -> Check {
    Check {
        name: name.to_string(),
        passed: ok,
        witness: (!ok).then(witness),
    }
}

fn metric_checks<F: Field>(g: &GeometryData<F>, linear_parts: &[IntMatrix]) -> Vec<Check> {
    let h = &g.metric;
    let j = &g.complex.j;
    let n = h.rows();
    let mut out = Vec::new();
    for (i, l) in linear_parts.iter().enumerate() {
        let l: Mat<F> = l.to_field();
        let pulled = l.transpose().mul(h).mul(&l);
        out.push(check(
            &format!("metric invariant under x{}", i + 1),
            pulled.same_as(h),
            || format!("residual {:e}", pulled.residual(h)),
        ));
    }
    for (i, l) in linear_parts.iter().enumerate() {
        let l: Mat<F> = l.to_field();
        out.push(check(
            &format!("x{} acts J-linearly", i + 1),
            l.commutes_with(j),
            || format!("residual {:e}", l.mul(j).residual(&j.mul(&l))),
        ));
    }
    let jh = j.transpose().mul(h).mul(j);
    out.push(check("metric J-compatible", jh.same_as(h), || {
        format!("residual {:e}", jh.residual(h))
    }));
    let minus = Mat::<F>::identity(n).neg();
    let jj = j.mul(j);
    out.push(check("J^2 = -I", jj.same_as(&minus), || {
        format!("residual {:e}", jj.residual(&minus))
    }));
    out.push(check(
        "metric positive definite",
        h.is_positive_definite(),
        || "leading minor not positive".into(),
    ));
    out
}

impl SolvmanifoldModel {
    #[allow(clippy::too_many_arguments)]
    pub(super) fn assemble(
        data: ExtensionData,
        conditions: ConditionSummary,
        validation: ValidationReport,
        cohomology: CohomologyCertificate,
        splitting: Vec<RatVector>,
        real_extension: RealExtensionCert,
        abelian: AbelianCert,
        geometry: Geometry,
        abelianization: Abelianization,
    ) -> Result<Self, BuildError> {
        let (f, b) = (data.fiber_rank(), data.base_rank());
        let k = f + b;
        let gamma = data.group()?;
        let mut checks = Vec::new();

        checks.push(check(
            "embedding relations",
            gamma.is_splitting(&splitting),
            || "a defining relation fails on (u_i, e_i)".into(),
        ));

        let mut lattice = Mat::<BigRational>::zeros(k, k);
        let translations: Vec<RatVector> = abelian
            .generators(&gamma)
            .iter()
            .map(|h| {
                let s = gamma.embed(&splitting, h);
                let mut v = s.u.0.clone();
                v.extend(s.t.iter().map(|&x| BigRational::from_int(x)));
                RatVector(v)
            })
            .collect();
        for (c, v) in translations.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                lattice.set(r, c, x.clone());
            }
        }
        let full_rank = !lattice.det().is_zero();
        checks.push(check(
            "translation lattice has full rank",
            full_rank,
            || "singular lattice".into(),
        ));

        let image = &abelian.image;
        let deck_group: Vec<AffineMap> = (0..image.order())
            .map(|i| affine_of(&gamma, &splitting, &gamma.monomial(image.word(i))))
            .collect();
        let mut free = full_rank;
        let mut fixed_witness = String::new();
        if full_rank {
            for (i, g) in deck_group.iter().enumerate().skip(1) {
                let fp = fixed_points(g, &lattice)?;
                if !fp.is_empty() {
                    free = false;
                    fixed_witness = format!("deck element {i} has fixed points");
                    break;
                }
            }
        }
        checks.push(check("deck group acts freely", free, || {
            fixed_witness.clone()
        }));
        checks.push(check(
            "deck group order equals index",
            deck_group.len() == abelian.index,
            || format!("{} cosets, index {}", deck_group.len(), abelian.index),
        ));

        let diffs: Vec<IntMatrix> = data
            .actions()
            .iter()
            .map(IntMatrix::minus_identity)
            .collect();
        let refs: Vec<&IntMatrix> = diffs.iter().collect();
        let fiber_lattice = saturation(&IntMatrix::hstack(&refs, f));
        let fiber_rank = fiber_lattice.cols();
        let fibration = FibrationPresentation {
            fiber_rank,
            base_rank: k - fiber_rank,
            fiber_lattice,
            component_torsion: abelianization.torsion.clone(),
        };
        checks.push(check(
            "b1 equals fibration base rank",
            abelianization.b1 == fibration.base_rank,
            || {
                format!(
                    "b1 = {}, base rank = {}",
                    abelianization.b1, fibration.base_rank
                )
            },
        ));
        checks.push(check(
            "b1 even",
            abelianization.b1.is_multiple_of(2),
            || format!("b1 = {}", abelianization.b1),
        ));

        let linear_parts: Vec<IntMatrix> = data
            .actions()
            .iter()
            .map(|a| IntMatrix::block_diag(a, &IntMatrix::identity(b)))
            .collect();
        checks.extend(match &geometry {
            Geometry::Exact(g) => metric_checks(g, &linear_parts),
            Geometry::Approx(g) => metric_checks(g, &linear_parts),
        });
        checks.push(check(
            "exp(X_i) = A_i, logs commute",
            real_extension.pass,
            || {
                format!(
                    "exp residual {:e}, commutator residual {:e}",
                    real_extension.exp_residual, real_extension.commutator_residual
                )
            },
        ));

        if let Some(bad) = checks.iter().find(|c| !c.passed) {
            return Err(BuildError::Internal(format!(
                "{}: {}",
                bad.name,
                bad.witness.clone().unwrap_or_default()
            )));
        }
        let torus_quotient = TorusQuotientPresentation {
            lattice,
            deck_group,
            free,
        };
        Ok(Self {
            data,
            conditions,
            validation,
            cohomology,
            splitting,
            real_extension,
            abelian,
            geometry,
            abelianization,
            torus_quotient,
            fibration,
            checks,
        })
    }

    pub fn b1(&self) -> usize {
        self.abelianization.b1
    }

    pub fn index(&self) -> usize {
        self.abelian.index
    }

    /// Image of `g` in `ℝ²ᵐ ⋊ ℝ²ⁿ`.
    pub fn embedding(&self, g: &GroupElement) -> SplitElement {
        let gamma = self.data.group().expect("validated data");
        gamma.embed(&self.splitting, g)
    }

    /// The affine map of `V` by which `g` acts.
    pub fn affine_map(&self, g: &GroupElement) -> AffineMap {
        let gamma = self.data.group().expect("validated data");
        affine_of(&gamma, &self.splitting, g)
    }

    /// `p = (p_f, p_b) ↦ (u + ρ(t)·p_f, t + p_b)`.
    pub fn affine_action(&self, g: &GroupElement, p: &RatVector) -> Result<RatVector, BuildError> {
        let k = self.data.fiber_rank() + self.data.base_rank();
        if p.len() != k || g.v.len() != self.data.fiber_rank() || g.t.len() != self.data.base_rank()
        {
            return Err(BuildError::InvalidOption(format!(
                "point has length {}, V has dimension {k}",
                p.len()
            )));
        }
        Ok(self.affine_map(g).apply(p))
    }

    pub fn canonical_fibration(&self) -> &FibrationPresentation {
        &self.fibration
    }

    /// Whether `Γ` is abelian, i.e. `X` is a complex torus.
    pub fn is_torus(&self) -> bool {
        self.data.has_trivial_action() && self.data.has_zero_tails()
    }

    /// Whether every log of the action has real spectrum.
    pub fn completely_solvable(&self) -> bool {
        self.real_extension.real_spectrum()
    }
}

fn affine_of(
    gamma: &crate::extension::Gamma<'_>,
    splitting: &[RatVector],
    g: &GroupElement,
) -> AffineMap {
    let s = gamma.embed(splitting, g);
    let base = s.t.len();
    let linear = IntMatrix::block_diag(&gamma.rho(&s.t), &IntMatrix::identity(base));
    let mut t = s.u.0;
    t.extend(s.t.iter().map(|&x| BigRational::from_int(x)));
    AffineMap {
        linear,
        translation: RatVector(t),
    }
}
