//! The model `X = (Γ⊗ℝ)/Γ` and its presentations.

mod affine;
mod model;

pub use affine::{fixed_points, AffineMap, FixedPoints};
pub use model::{
    invariant_metric, FibrationPresentation, Geometry, GeometryData, SolvmanifoldModel,
    TorusQuotientPresentation,
};

use num_rational::BigRational;
use thiserror::Error;

use crate::cxstruct::{self, check_j0, CxError, Decision, FieldMat};
use crate::exactla::LinAlgError;
use crate::extension::d_witness;
use crate::extension::{
    abelian_subgroup, abelianization, class_torsion, validate, AbelianOutcome, Check, Condition,
    ConditionResult, ConditionStatus, ExtensionData, ExtensionError,
};
use crate::field::{Field, Mat, QSqrt3};
use crate::matgroup::{isotypic, GroupError, Isotypic, DEFAULT_CLOSURE_CAP};

/// Choices made along the construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BuildOptions {
    pub closure_cap: usize,
    /// Invariant complex structure on the fiber; computed when absent.
    pub j0: Option<Mat<BigRational>>,
    /// Complex structure on the base; standard when absent.
    pub j1: Option<Mat<BigRational>>,
    /// Off-diagonal block of `J`; zero when absent.
    pub b: Option<Mat<BigRational>>,
    /// Seed form on `V`; identity when absent.
    pub seed: Option<Mat<BigRational>>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            closure_cap: DEFAULT_CLOSURE_CAP,
            j0: None,
            j1: None,
            b: None,
            seed: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

impl From<LinAlgError> for BuildError {
    fn from(e: LinAlgError) -> Self {
        BuildError::Internal(e.to_string())
    }
}

impl From<GroupError> for BuildError {
    fn from(e: GroupError) -> Self {
        BuildError::Internal(e.to_string())
    }
}

/// Status of every check along the pipeline.
#[derive(Clone, Debug)]
pub struct ConditionSummary {
    pub structural: Vec<Check>,
    pub a: ConditionResult,
    pub b: ConditionResult,
    pub c: ConditionResult,
    pub d: ConditionResult,
}

impl ConditionSummary {
    pub fn get(&self, c: Condition) -> Option<&ConditionResult> {
        match c {
            Condition::Structural => None,
            Condition::A => Some(&self.a),
            Condition::B => Some(&self.b),
            Condition::C => Some(&self.c),
            Condition::D => Some(&self.d),
        }
    }

    /// The reported reason: structural, then (a), (d), (c), (b).
    pub fn first_failure(&self) -> Option<(Condition, String)> {
        if let Some(c) = self.structural.iter().find(|c| !c.passed) {
            return Some((
                Condition::Structural,
                format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()),
            ));
        }
        [Condition::A, Condition::D, Condition::C, Condition::B]
            .into_iter()
            .find_map(|c| {
                let r = self.get(c).expect("condition");
                (r.status == ConditionStatus::Fail)
                    .then(|| (c, r.witness.clone().unwrap_or_default()))
            })
    }
}

/// Short description of what a failing condition means.
pub fn failure_message(c: Condition) -> &'static str {
    match c {
        Condition::Structural => "invalid extension data",
        Condition::A => "action has infinite image",
        Condition::B => "action does not extend to a real one-parameter group",
        Condition::C => "no invariant complex structure on the fiber",
        Condition::D => "extension class has infinite order",
    }
}

#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub condition: Condition,
    pub witness: String,
    pub conditions: ConditionSummary,
}

impl Diagnostic {
    pub fn message(&self) -> String {
        format!("{}: {}", self.condition, failure_message(self.condition))
    }
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum BuildOutcome {
    Accepted(Box<SolvmanifoldModel>),
    Rejected(Diagnostic),
}

impl BuildOutcome {
    pub fn model(&self) -> Option<&SolvmanifoldModel> {
        match self {
            BuildOutcome::Accepted(m) => Some(m),
            BuildOutcome::Rejected(_) => None,
        }
    }

    pub fn diagnostic(&self) -> Option<&Diagnostic> {
        match self {
            BuildOutcome::Accepted(_) => None,
            BuildOutcome::Rejected(d) => Some(d),
        }
    }

    pub fn conditions(&self) -> &ConditionSummary {
        match self {
            BuildOutcome::Accepted(m) => &m.conditions,
            BuildOutcome::Rejected(d) => &d.conditions,
        }
    }

    /// `torus`, `torus-quotient(order k)` or `rejected((x): reason)`.
    pub fn classification(&self) -> String {
        match self {
            BuildOutcome::Accepted(m) if m.is_torus() => "torus".to_string(),
            BuildOutcome::Accepted(m) => format!("torus-quotient(order {})", m.abelian.index),
            BuildOutcome::Rejected(d) => format!("rejected({})", d.message()),
        }
    }
}

fn cx_invalid(what: &str, e: CxError) -> BuildError {
    BuildError::InvalidOption(format!("{what}: {e}"))
}

/// Runs every condition, then assembles the model when all hold.
pub fn build(data: &ExtensionData, options: &BuildOptions) -> Result<BuildOutcome, BuildError> {
    let report = validate(data, options.closure_cap);
    let mut summary = ConditionSummary {
        structural: report.checks.clone(),
        a: report.condition_a.clone(),
        b: ConditionResult::skipped(),
        c: ConditionResult::skipped(),
        d: ConditionResult::skipped(),
    };
    if !report.structurally_valid() {
        return Ok(reject(summary));
    }

    let cohomology = class_torsion(data)?;
    summary.d = match cohomology.order_bound() {
        Some(k) => ConditionResult::pass(format!("rational splitting with denominator {k}")),
        None => ConditionResult::fail(match &report.group {
            Some(image) => d_witness(data, image),
            None => "no rational u with (A_j - I)u_i - (A_i - I)u_j = c_ij for all i < j".into(),
        }),
    };

    let Some(group) = report.group.clone() else {
        return Ok(reject(summary));
    };
    let decomposition = isotypic(&group);
    let real = cxstruct::real_extension(data.actions(), &decomposition);
    summary.b = match &real {
        Decision::Holds(cert) if cert.pass => ConditionResult::pass(format!(
            "commuting logs, exp residual {:.1e}",
            cert.exp_residual
        )),
        Decision::Holds(cert) => ConditionResult::fail(format!(
            "logs fail to certify: exp residual {:.1e}, commutator residual {:.1e}",
            cert.exp_residual, cert.commutator_residual
        )),
        Decision::Fails(w) => ConditionResult::fail(w.clone()),
    };
    let j0 = cxstruct::invariant_j0(&decomposition);
    summary.c = match &j0 {
        Decision::Holds(FieldMat::Exact(_)) => ConditionResult::pass("invariant J0 (exact)"),
        Decision::Holds(FieldMat::Approx(_)) => ConditionResult::pass("invariant J0 (approximate)"),
        Decision::Fails(w) => ConditionResult::fail(w.clone()),
    };
    if summary.first_failure().is_some() {
        return Ok(reject(summary));
    }

    let real = match real {
        Decision::Holds(c) => c,
        Decision::Fails(_) => unreachable!("condition (b) holds"),
    };
    let abelian = match abelian_subgroup(data, options.closure_cap)? {
        AbelianOutcome::Found(cert) => cert,
        AbelianOutcome::Absent { condition, witness } => {
            return Err(BuildError::Internal(format!(
                "conditions hold but no abelian subgroup ({condition}: {witness})"
            )))
        }
    };
    let splitting = cohomology.splitting.clone().expect("condition (d) holds");
    let geometry = match (decomposition, j0) {
        (Isotypic::Exact(_), Decision::Holds(FieldMat::Exact(j))) => {
            let j0 = supplied_j0::<QSqrt3>(data, options, j)?;
            Geometry::Exact(model::geometry_in(data, &group, options, j0)?)
        }
        (_, Decision::Holds(j)) => {
            let j0 = supplied_j0::<f64>(data, options, j.to_f64())?;
            Geometry::Approx(model::geometry_in(data, &group, options, j0)?)
        }
        (_, Decision::Fails(_)) => unreachable!("condition (c) holds"),
    };
    let abelianization = abelianization(data);
    let model = SolvmanifoldModel::assemble(
        data.clone(),
        summary,
        report,
        cohomology,
        splitting,
        real,
        abelian,
        geometry,
        abelianization,
    )?;
    Ok(BuildOutcome::Accepted(Box::new(model)))
}

fn supplied_j0<F: Field>(
    data: &ExtensionData,
    options: &BuildOptions,
    computed: Mat<F>,
) -> Result<Mat<F>, BuildError> {
    let Some(j0) = &options.j0 else {
        return Ok(computed);
    };
    let j0: Mat<F> = j0.map(F::from_rational);
    let actions: Vec<Mat<F>> = data.actions().iter().map(|a| a.to_field()).collect();
    check_j0(&actions, &j0).map_err(|e| cx_invalid("J0", e))?;
    Ok(j0)
}

fn reject(summary: ConditionSummary) -> BuildOutcome {
    let (condition, witness) = summary.first_failure().expect("a condition failed");
    BuildOutcome::Rejected(Diagnostic {
        condition,
        witness,
        conditions: summary,
    })
}
