//! JSON reports.
//!
//! Rationals are strings `"p/q"` (integers without a denominator), elements
//! of ℚ(√3) are strings `"a+b*sqrt3"`. Floating-point matrices carry
//! `"approx": true`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::cxstruct::FieldMat;
use crate::exactla::{IntMatrix, RatVector};
use crate::extension::{validate, Abelianization, Check, ConditionResult, ExtensionData};
use crate::field::{Field, Mat};
use crate::manifold::{
    failure_message, AffineMap, BuildOutcome, ConditionSummary, SolvmanifoldModel,
};

pub const REPORT_FORMAT: &str = "fks-report-1";

fn ints(v: &[BigInt]) -> Value {
    v.iter().map(|x| Value::String(x.to_string())).collect()
}

fn rats(v: &RatVector) -> Value {
    v.iter().map(|x| Value::String(x.to_string())).collect()
}

fn int_matrix(m: &IntMatrix) -> Value {
    (0..m.rows()).map(|i| ints(m.row(i))).collect()
}

fn exact_matrix<F: Field>(m: &Mat<F>) -> Value {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| Value::String(m.get(i, j).to_string()))
                .collect::<Value>()
        })
        .collect()
}

fn float_matrix(m: &Mat<f64>) -> Value {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| json!(m.get(i, j))).collect::<Value>())
        .collect()
}

pub fn rational_matrix(m: &Mat<BigRational>) -> Value {
    exact_matrix(m)
}

pub fn field_matrix(m: &FieldMat) -> Value {
    match m {
        FieldMat::Exact(m) => json!({ "exact": true, "entries": exact_matrix(m) }),
        FieldMat::Approx(m) => json!({ "approx": true, "entries": float_matrix(m) }),
    }
}

fn check(c: &Check) -> Value {
    json!({ "check": c.name, "pass": c.passed, "witness": c.witness })
}

fn condition(r: &ConditionResult) -> Value {
    json!({ "status": r.status.as_str(), "witness": r.witness })
}

fn conditions(s: &ConditionSummary) -> Value {
    json!({
        "a": condition(&s.a),
        "b": condition(&s.b),
        "c": condition(&s.c),
        "d": condition(&s.d),
    })
}

fn header(name: Option<&str>, data: &ExtensionData) -> serde_json::Map<String, Value> {
    let mut out = serde_json::Map::new();
    out.insert("format".into(), json!(REPORT_FORMAT));
    out.insert("name".into(), json!(name));
    out.insert("m".into(), json!(data.m()));
    out.insert("n".into(), json!(data.n()));
    out
}

fn abelianization_value(a: &Abelianization) -> Value {
    json!({ "b1": a.b1, "torsion": ints(&a.torsion) })
}

fn affine(map: &AffineMap) -> Value {
    json!({ "linear": int_matrix(&map.linear), "translation": rats(&map.translation) })
}

/// Structural checks and condition (a).
pub fn validation_report(name: Option<&str>, data: &ExtensionData, closure_cap: usize) -> Value {
    let report = validate(data, closure_cap);
    let mut out = header(name, data);
    out.insert("valid".into(), json!(report.structurally_valid()));
    out.insert(
        "structural".into(),
        report.checks.iter().map(check).collect(),
    );
    out.insert("condition_a".into(), condition(&report.condition_a));
    out.insert("image_order".into(), json!(report.image_order()));
    Value::Object(out)
}

pub fn abelianization_report(
    name: Option<&str>,
    data: &ExtensionData,
    a: &Abelianization,
) -> Value {
    let mut out = header(name, data);
    out.insert("abelianization".into(), abelianization_value(a));
    Value::Object(out)
}

fn model_value(model: &SolvmanifoldModel) -> Value {
    let g = &model.geometry;
    json!({
        "invariants": {
            "b1": model.b1(),
            "abelianization": abelianization_value(&model.abelianization),
            "index": model.index(),
            "is_torus": model.is_torus(),
            "completely_solvable": model.completely_solvable(),
            "fibration": {
                "fiber_rank": model.fibration.fiber_rank,
                "base_rank": model.fibration.base_rank,
                "component_torsion": ints(&model.fibration.component_torsion),
            },
        },
        "certificates": {
            "splitting": model.splitting.iter().map(rats).collect::<Value>(),
            "abelian_subgroup": {
                "base_lattice": int_matrix(&model.abelian.base_lattice),
                "lifts": model.abelian.lifts.iter().map(|h| json!({
                    "v": ints(&h.v),
                    "t": h.t,
                })).collect::<Value>(),
            },
            "logs": model.real_extension.logs.iter()
                .map(|x| json!({ "approx": true, "entries": float_matrix(x) }))
                .collect::<Value>(),
            "exp_residual": model.real_extension.exp_residual,
            "commutator_residual": model.real_extension.commutator_residual,
            "J0": field_matrix(&g.j0()),
            "J": field_matrix(&g.j()),
            "metric": field_matrix(&g.metric()),
            "J_square_residual": g.j_square_residual(),
            "checks": model.checks.iter().map(check).collect::<Value>(),
        },
        "torus_quotient": {
            "lattice": rational_matrix(&model.torus_quotient.lattice),
            "deck_group": model.torus_quotient.deck_group.iter().map(affine).collect::<Value>(),
            "free": model.torus_quotient.free,
        },
        "fiber_lattice": int_matrix(&model.fibration.fiber_lattice),
    })
}

/// Full outcome of a build.
pub fn build_report(name: Option<&str>, data: &ExtensionData, outcome: &BuildOutcome) -> Value {
    let mut out = header(name, data);
    let summary = outcome.conditions();
    out.insert(
        "structural".into(),
        summary.structural.iter().map(check).collect(),
    );
    out.insert("conditions".into(), conditions(summary));
    out.insert("classification".into(), json!(outcome.classification()));
    match outcome {
        BuildOutcome::Accepted(model) => {
            out.insert("accepted".into(), json!(true));
            out.insert("rejection".into(), Value::Null);
            out.insert("model".into(), model_value(model));
        }
        BuildOutcome::Rejected(d) => {
            out.insert("accepted".into(), json!(false));
            out.insert(
                "rejection".into(),
                json!({
                    "condition": d.condition.label(),
                    "message": failure_message(d.condition),
                    "witness": d.witness,
                }),
            );
            out.insert("model".into(), Value::Null);
        }
    }
    Value::Object(out)
}
