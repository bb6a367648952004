//! JSON encoding of core results.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! reports round-trip exactly and are byte-stable across runs.

use convdom_core::{
    CharacterizationReport, EquivalenceReport, HhReport, Interval, QuadConfig, SamplingPlan,
    Verdict, Witness,
};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "convdom/1";

/// A float as a JSON number with 17 significant digits; non-finite values
/// become `null`.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    // -0.0 and 0.0 print identically
    let v = if v == 0.0 { 0.0 } else { v };
    let text = format!("{v:.16e}");
    Value::Number(
        text.parse()
            .expect("formatted float is a valid JSON number"),
    )
}

fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

pub fn interval(iv: Interval) -> Value {
    json!([num(iv.a()), num(iv.b())])
}

pub fn plan(p: &SamplingPlan) -> Value {
    json!({
        "n_x": p.n_x,
        "n_lambda": p.n_lambda,
        "lambda_margin": num(p.lambda_margin),
        "tau": num(p.tau),
        "seed": p.seed,
        "refine_rounds": p.refine_rounds,
        "restarts": p.restarts,
    })
}

pub fn quad(q: &QuadConfig) -> Value {
    json!({
        "abs_tol": num(q.abs_tol),
        "rel_tol": num(q.rel_tol),
        "max_subdivisions": q.max_subdivisions,
    })
}

pub fn witness(w: &Witness) -> Value {
    json!({
        "condition": w.condition.name(),
        "x": num(w.x),
        "y": opt_num(w.y),
        "lambda": opt_num(w.lambda),
        "z": opt_num(w.z),
        "lhs": num(w.lhs),
        "rhs": num(w.rhs),
        "gap": num(w.gap),
    })
}

pub fn verdict(v: &Verdict) -> Value {
    match v {
        Verdict::HoldsOnSamples {
            min_margin,
            points_checked,
            tightest,
        } => json!({
            "verdict": v.name(),
            "min_margin": num(*min_margin),
            "points_checked": points_checked,
            "tightest": witness(tightest),
        }),
        Verdict::Violated {
            witness: w,
            points_checked,
        } => json!({
            "verdict": v.name(),
            "points_checked": points_checked,
            "witness": witness(w),
        }),
        Verdict::Inconclusive { reason, at } => json!({
            "verdict": v.name(),
            "reason": reason,
            "at": opt_num(*at),
        }),
    }
}

pub fn hh_report(r: &HhReport) -> Value {
    json!({
        "inequality_id": r.id.name(),
        "lhs": num(r.lhs),
        "rhs": num(r.rhs),
        "margin": num(r.margin),
        "quad_error": num(r.quad_error),
        "verdict": r.verdict.name(),
    })
}

pub fn characterization(r: &CharacterizationReport) -> Value {
    json!({
        "direct": verdict(&r.direct),
        "via_sum": verdict(&r.via_sum),
        "via_diff": verdict(&r.via_diff),
        "consistent": r.consistent,
    })
}

pub fn equivalence(r: &EquivalenceReport) -> Value {
    json!({
        "verdict_eq1": verdict(&r.verdict_eq1),
        "verdict_eq2": verdict(&r.verdict_eq2),
        "agree": r.agree,
    })
}

pub fn error(e: &convdom_core::Error) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(e.kind()));
    obj.insert("message".into(), json!(e.to_string()));
    match e {
        convdom_core::Error::Syntax {
            offset, expected, ..
        } => {
            obj.insert("offset".into(), json!(offset));
            obj.insert("expected".into(), json!(expected));
        }
        convdom_core::Error::UnknownIdentifier { name, offset } => {
            obj.insert("identifier".into(), json!(name));
            obj.insert("offset".into(), json!(offset));
        }
        convdom_core::Error::NonFiniteValue { x } | convdom_core::Error::OutOfDomain { x } => {
            obj.insert("x".into(), num(*x));
        }
        convdom_core::Error::ToleranceNotReached(r) => {
            obj.insert("value".into(), num(r.value));
            obj.insert("error_estimate".into(), num(r.error_estimate));
        }
        _ => {}
    }
    Value::Object(obj)
}
