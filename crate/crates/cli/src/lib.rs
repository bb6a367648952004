//! Command-line front end for `convdom-core`.
//!
//! [`run`] executes one [`RunConfig`] and returns the serialized report, so the
//! binary only has to move bytes to files or standard output.

pub mod args;
pub mod report;

use std::path::PathBuf;

use convdom_core::dominance::prerequisite;
use convdom_core::hh::HhVerdict;
use convdom_core::membership::defect;
use convdom_core::{
    characterization_check, check_membership, decompose, defect_convex, dominance_defect,
    equivalence_crosscheck, recompose, verify_hh_classical, verify_thm1, verify_thm2, verify_thm3,
    verify_thm4, Class, Condition, DominancePair, Error, FunctionExpr, HhOptions, Interval, Kind,
    QuadConfig, SamplingPlan, Verdict,
};
use serde_json::{json, Map, Value};

use crate::report::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    Classical,
    One,
    Two,
    Three,
    Four,
}

impl Theorem {
    fn name(self) -> &'static str {
        match self {
            Theorem::Classical => "classical",
            Theorem::One => "1",
            Theorem::Two => "2",
            Theorem::Three => "3",
            Theorem::Four => "4",
        }
    }

    fn needs_g(self) -> bool {
        matches!(self, Theorem::Three | Theorem::Four)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CheckClass(Class),
    CheckDominated { kind: Kind, waive_prereq: bool },
    VerifyHh(Theorem),
    Decompose(Kind),
    Crosscheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckClass(_) => "check-class",
            Command::CheckDominated { .. } => "check-dominated",
            Command::VerifyHh(_) => "verify-hh",
            Command::Decompose(_) => "decompose",
            Command::Crosscheck => "crosscheck",
        }
    }

    fn needs_g(&self) -> bool {
        match self {
            Command::CheckDominated { .. } | Command::Decompose(_) => true,
            Command::VerifyHh(t) => t.needs_g(),
            _ => false,
        }
    }
}

/// Everything one invocation needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub f_text: String,
    pub g_text: Option<String>,
    pub interval: Interval,
    pub plan: SamplingPlan,
    pub quad: QuadConfig,
    pub output_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> convdom_core::Result<()> {
        if self.command.needs_g() && self.g_text.is_none() {
            return Err(Error::InvalidConfig("--g is required for this command"));
        }
        self.plan.validate()?;
        self.quad.validate()
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Result of [`run`]: exit status, JSON document, and the optional CSV body.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub json: String,
    pub csv: Option<String>,
}

/// Folds verdicts into an exit status: any violation gives 1, otherwise an
/// inconclusive scan gives 2.
#[derive(Debug, Default)]
struct Status {
    violated: bool,
    inconclusive: bool,
}

impl Status {
    fn verdict(&mut self, v: &Verdict) {
        match v {
            Verdict::Violated { .. } => self.violated = true,
            Verdict::Inconclusive { .. } => self.inconclusive = true,
            Verdict::HoldsOnSamples { .. } => {}
        }
    }

    fn hh(&mut self, v: HhVerdict) {
        if v == HhVerdict::Violated {
            self.violated = true;
        }
    }

    fn code(&self) -> i32 {
        if self.violated {
            EXIT_VIOLATED
        } else if self.inconclusive {
            EXIT_ERROR
        } else {
            EXIT_OK
        }
    }
}

/// A `(lambda, defect)` curve at a fixed `(x, y)`.
struct Curve {
    x: f64,
    y: f64,
    rows: Vec<(f64, f64)>,
}

fn lambda_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

fn lambda_range(class: Class, plan: &SamplingPlan) -> (f64, f64) {
    match class {
        Class::Q => (plan.lambda_margin, 1.0 - plan.lambda_margin),
        _ => (0.0, 1.0),
    }
}

/// Samples `defect_at(lambda)` at the worst point of `verdict`. Points where
/// the defect is undefined are skipped.
fn curve_at(
    verdict: &Verdict,
    range: (f64, f64),
    plan: &SamplingPlan,
    defect_at: impl Fn(f64, f64, f64) -> convdom_core::Result<f64>,
) -> Option<Curve> {
    let w = verdict.worst_point()?;
    if w.condition == Condition::TripleProduct {
        return None;
    }
    let (x, y) = (w.x, w.y.unwrap_or(w.x));
    let rows = lambda_grid(range.0, range.1, plan.n_lambda)
        .into_iter()
        .filter_map(|l| defect_at(x, y, l).ok().map(|d| (l, d)))
        .collect();
    Some(Curve { x, y, rows })
}

fn class_curve(
    f: &FunctionExpr,
    class: Class,
    verdict: &Verdict,
    plan: &SamplingPlan,
) -> Option<Curve> {
    let range = lambda_range(class, plan);
    match class {
        Class::Nonnegative => None,
        Class::Convex => curve_at(verdict, range, plan, |x, y, l| defect_convex(f, x, y, l)),
        Class::Q => curve_at(verdict, range, plan, |x, y, l| defect(Kind::Q, f, x, y, l)),
        Class::P => curve_at(verdict, range, plan, |x, y, l| defect(Kind::P, f, x, y, l)),
    }
}

fn dominance_curve(pair: &DominancePair, verdict: &Verdict, plan: &SamplingPlan) -> Option<Curve> {
    let range = lambda_range(pair.kind.class(), plan);
    curve_at(verdict, range, plan, |x, y, l| {
        dominance_defect(pair, x, y, l)
    })
}

fn render_csv(curve: &Curve) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["lambda", "defect"])
        .expect("in-memory write");
    for (l, d) in &curve.rows {
        w.write_record([format!("{l:.16e}"), format!("{d:.16e}")])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

fn parse_g(config: &RunConfig) -> convdom_core::Result<FunctionExpr> {
    let text = config
        .g_text
        .as_deref()
        .ok_or(Error::InvalidConfig("--g is required for this command"))?;
    FunctionExpr::parse(text)
}

/// Command-specific result object, exit status and optional curve.
fn execute(config: &RunConfig) -> convdom_core::Result<(Value, i32, Option<Curve>)> {
    let f = FunctionExpr::parse(&config.f_text)?;
    let iv = config.interval;
    let plan = &config.plan;
    let mut status = Status::default();
    let (result, curve) = match config.command {
        Command::CheckClass(class) => {
            let v = check_membership(&f, iv, class, plan)?;
            status.verdict(&v);
            let curve = class_curve(&f, class, &v, plan);
            (
                json!({ "class": class.name(), "membership": report::verdict(&v) }),
                curve,
            )
        }
        Command::CheckDominated { kind, waive_prereq } => {
            let g = parse_g(config)?;
            let pair = DominancePair {
                waive_prereq,
                ..DominancePair::new(f, g, iv, kind)
            };
            let pre = prerequisite(&pair, plan)?;
            let r = characterization_check(&pair, plan)?;
            status.verdict(&r.direct);
            let curve = dominance_curve(&pair, &r.direct, plan);
            (
                json!({
                    "kind": kind.name(),
                    "prerequisite": report::verdict(&pre),
                    "prerequisite_waived": waive_prereq,
                    "dominance": report::verdict(&r.direct),
                    "characterization": report::characterization(&r),
                }),
                curve,
            )
        }
        Command::VerifyHh(thm) => {
            let opts = HhOptions {
                quad: config.quad,
                tau: plan.tau,
            };
            let mut hypothesis = Map::new();
            let curve;
            let reports = match thm {
                Theorem::Classical => {
                    let v = check_membership(&f, iv, Class::Convex, plan)?;
                    curve = class_curve(&f, Class::Convex, &v, plan);
                    hypothesis.insert("convex".into(), report::verdict(&v));
                    verify_hh_classical(&f, iv, &opts)?
                }
                Theorem::One | Theorem::Two => {
                    let class = if thm == Theorem::One {
                        Class::Q
                    } else {
                        Class::P
                    };
                    let v = check_membership(&f, iv, class, plan)?;
                    curve = class_curve(&f, class, &v, plan);
                    hypothesis.insert(format!("f_in_{}", class.name()), report::verdict(&v));
                    if thm == Theorem::One {
                        verify_thm1(&f, iv, &opts)?
                    } else {
                        verify_thm2(&f, iv, &opts)?
                    }
                }
                Theorem::Three | Theorem::Four => {
                    let g = parse_g(config)?;
                    let kind = if thm == Theorem::Three {
                        Kind::Q
                    } else {
                        Kind::P
                    };
                    let pair = DominancePair {
                        waive_prereq: true,
                        ..DominancePair::new(f.clone(), g.clone(), iv, kind)
                    };
                    let pre = prerequisite(&pair, plan)?;
                    let dom = convdom_core::check_dominated(&pair, plan)?;
                    curve = dominance_curve(&pair, &dom, plan);
                    hypothesis.insert(format!("g_in_{}", kind.name()), report::verdict(&pre));
                    hypothesis.insert("f_dominated".into(), report::verdict(&dom));
                    if thm == Theorem::Three {
                        verify_thm3(&f, &g, iv, &opts)?
                    } else {
                        verify_thm4(&f, &g, iv, &opts)?
                    }
                }
            };
            for r in &reports {
                status.hh(r.verdict);
            }
            (
                json!({
                    "theorem": thm.name(),
                    "hypothesis": Value::Object(hypothesis),
                    "reports": reports.iter().map(report::hh_report).collect::<Vec<_>>(),
                }),
                curve,
            )
        }
        Command::Decompose(kind) => {
            let g = parse_g(config)?;
            let pair = DominancePair::new(f, g, iv, kind);
            let (l, k) = decompose(&pair);
            let (fr, gr) = recompose(&l, &k);
            let mut deviation: f64 = 0.0;
            for x in iv.grid(1000) {
                deviation = deviation
                    .max((fr.evaluate(x)? - pair.f.evaluate(x)?).abs())
                    .max((gr.evaluate(x)? - pair.g.evaluate(x)?).abs());
            }
            let vl = check_membership(&l, iv, kind.class(), plan)?;
            let vk = check_membership(&k, iv, kind.class(), plan)?;
            status.verdict(&vl);
            status.verdict(&vk);
            (
                json!({
                    "kind": kind.name(),
                    "l": l.to_string(),
                    "k": k.to_string(),
                    "l_membership": report::verdict(&vl),
                    "k_membership": report::verdict(&vk),
                    "roundtrip_max_deviation": num(deviation),
                }),
                None,
            )
        }
        Command::Crosscheck => {
            let r = equivalence_crosscheck(&f, iv, plan)?;
            status.verdict(&r.verdict_eq1);
            status.verdict(&r.verdict_eq2);
            let curve = class_curve(&f, Class::Q, &r.verdict_eq1, plan);
            (report::equivalence(&r), curve)
        }
    };
    Ok((result, status.code(), curve))
}

fn envelope(config: &RunConfig) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(report::SCHEMA));
    doc.insert("command".into(), json!(config.command.name()));
    doc.insert(
        "input".into(),
        json!({
            "f": config.f_text,
            "g": config.g_text,
            "interval": report::interval(config.interval),
            "plan": report::plan(&config.plan),
            "quad": report::quad(&config.quad),
        }),
    );
    doc
}

fn to_text(doc: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Runs one command. Never panics on user input; failures become an error
/// object with exit status 2.
pub fn run(config: &RunConfig) -> Outcome {
    let mut doc = envelope(config);
    match config.validate().and_then(|_| execute(config)) {
        Ok((result, exit_code, curve)) => {
            let csv = match (&config.csv_path, curve) {
                (Some(_), Some(c)) => {
                    doc.insert("csv_point".into(), json!({ "x": num(c.x), "y": num(c.y) }));
                    Some(render_csv(&c))
                }
                _ => None,
            };
            doc.insert("result".into(), result);
            doc.insert("exit_status".into(), json!(exit_code));
            Outcome {
                exit_code,
                json: to_text(doc),
                csv,
            }
        }
        Err(e) => error_outcome(doc, &e),
    }
}

fn error_outcome(mut doc: Map<String, Value>, e: &Error) -> Outcome {
    doc.insert("error".into(), report::error(e));
    doc.insert("exit_status".into(), json!(EXIT_ERROR));
    Outcome {
        exit_code: EXIT_ERROR,
        json: to_text(doc),
        csv: None,
    }
}

/// Error document for failures before a [`RunConfig`] exists (bad flags or
/// expressions).
pub fn early_error(
    command: Option<&str>,
    kind: &str,
    message: &str,
    detail: Option<&Error>,
) -> Outcome {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(report::SCHEMA));
    doc.insert("command".into(), json!(command));
    let err = match detail {
        Some(e) => report::error(e),
        None => json!({ "kind": kind, "message": message }),
    };
    doc.insert("error".into(), err);
    doc.insert("exit_status".into(), json!(EXIT_ERROR));
    Outcome {
        exit_code: EXIT_ERROR,
        json: to_text(doc),
        csv: None,
    }
}
