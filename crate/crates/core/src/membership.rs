//! Pointwise class defects and sampled class-membership checks.
//!
//! Every defect is "right-hand side minus left-hand side" of the class
//! inequality, so a function satisfies the condition at a point exactly when
//! the defect there is nonnegative.

use crate::error::{Error, Result};
use crate::expr::{FunctionExpr, Interval};
use crate::sampling::{scan, Condition, PointCheck, SamplingPlan, Tracker, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Convex,
    /// Godunova–Levin class.
    Q,
    P,
    Nonnegative,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Convex => "convex",
            Class::Q => "Q",
            Class::P => "P",
            Class::Nonnegative => "nonneg",
        }
    }
}

/// The two classes that admit a dominance relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Q,
    P,
}

impl Kind {
    pub fn class(self) -> Class {
        match self {
            Kind::Q => Class::Q,
            Kind::P => Class::P,
        }
    }

    pub fn name(self) -> &'static str {
        self.class().name()
    }

    /// Admissible lambda range for grid sampling under `plan`.
    pub(crate) fn lambda_range(self, plan: &SamplingPlan) -> (f64, f64) {
        match self {
            Kind::Q => (plan.lambda_margin, 1.0 - plan.lambda_margin),
            Kind::P => (0.0, 1.0),
        }
    }
}

fn mix(x: f64, y: f64, lambda: f64) -> f64 {
    lambda * x + (1.0 - lambda) * y
}

/// Sides `(f(m), λf(x) + (1-λ)f(y))` of the convexity inequality.
pub(crate) fn convex_sides(f: &FunctionExpr, x: f64, y: f64, lambda: f64) -> Result<(f64, f64)> {
    let (fx, fy, fm) = (
        f.evaluate(x)?,
        f.evaluate(y)?,
        f.evaluate(mix(x, y, lambda))?,
    );
    Ok((fm, lambda * fx + (1.0 - lambda) * fy))
}

/// Sides `(f(m), f(x)/λ + f(y)/(1-λ))`; λ must lie in the open unit interval.
pub(crate) fn q_sides(f: &FunctionExpr, x: f64, y: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::LambdaOutOfRange { lambda });
    }
    let (fx, fy, fm) = (
        f.evaluate(x)?,
        f.evaluate(y)?,
        f.evaluate(mix(x, y, lambda))?,
    );
    Ok((fm, fx / lambda + fy / (1.0 - lambda)))
}

/// Sides `(f(m), f(x) + f(y))`; λ may be any value in `[0, 1]`.
pub(crate) fn p_sides(f: &FunctionExpr, x: f64, y: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange { lambda });
    }
    let (fx, fy, fm) = (
        f.evaluate(x)?,
        f.evaluate(y)?,
        f.evaluate(mix(x, y, lambda))?,
    );
    Ok((fm, fx + fy))
}

pub(crate) fn kind_sides(
    kind: Kind,
    f: &FunctionExpr,
    x: f64,
    y: f64,
    lambda: f64,
) -> Result<(f64, f64)> {
    match kind {
        Kind::Q => q_sides(f, x, y, lambda),
        Kind::P => p_sides(f, x, y, lambda),
    }
}

/// `λf(x) + (1-λ)f(y) - f(λx + (1-λ)y)`.
pub fn defect_convex(f: &FunctionExpr, x: f64, y: f64, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange { lambda });
    }
    convex_sides(f, x, y, lambda).map(|(l, r)| r - l)
}

/// `f(x)/λ + f(y)/(1-λ) - f(λx + (1-λ)y)` for λ in `(0, 1)`.
pub fn defect_q(f: &FunctionExpr, x: f64, y: f64, lambda: f64) -> Result<f64> {
    q_sides(f, x, y, lambda).map(|(l, r)| r - l)
}

/// `f(x) + f(y) - f(λx + (1-λ)y)` for λ in `[0, 1]`.
pub fn defect_p(f: &FunctionExpr, x: f64, y: f64, lambda: f64) -> Result<f64> {
    p_sides(f, x, y, lambda).map(|(l, r)| r - l)
}

/// Class defect of `kind` at a point.
pub fn defect(kind: Kind, f: &FunctionExpr, x: f64, y: f64, lambda: f64) -> Result<f64> {
    kind_sides(kind, f, x, y, lambda).map(|(l, r)| r - l)
}

/// Signed terms of `f(x)(x-y)(x-z) + f(y)(y-x)(y-z) + f(z)(z-x)(z-y)`.
fn triple_terms(f: &FunctionExpr, x: f64, y: f64, z: f64) -> Result<[f64; 3]> {
    Ok([
        f.evaluate(x)? * (x - y) * (x - z),
        f.evaluate(y)? * (y - x) * (y - z),
        f.evaluate(z)? * (z - x) * (z - y),
    ])
}

/// `f(x)(x-y)(x-z) + f(y)(y-x)(y-z) + f(z)(z-x)(z-y)`.
pub fn triple_product_defect(f: &FunctionExpr, x: f64, y: f64, z: f64) -> Result<f64> {
    triple_terms(f, x, y, z).map(|t| t[0] + t[1] + t[2])
}

/// Checks nonnegativity on the `n_x` grid. `Some(verdict)` when the scan
/// stops early (violation or evaluation failure).
fn nonnegativity(
    f: &FunctionExpr,
    iv: Interval,
    plan: &SamplingPlan,
    tracker: &mut Tracker,
) -> Option<Verdict> {
    for x in iv.grid(plan.n_x) {
        match f.evaluate(x) {
            Ok(v) => tracker.push(
                Witness::new(Condition::Nonnegativity, x, None, None, None, 0.0, v),
                plan.tau,
            ),
            Err(e) => return Some(Verdict::inconclusive(&e)),
        }
    }
    if tracker.has_violation() {
        Some(core::mem::take(tracker).verdict())
    } else {
        None
    }
}

/// Sampled membership of `f` in `class` on `iv`.
///
/// Q and P first require nonnegativity on the `n_x` grid; the class defect
/// is then scanned over the full `(x, y, λ)` grid with λ in
/// `[eps, 1 - eps]` for Q and `[0, 1]` otherwise, and refined around the
/// worst sample.
pub fn check_membership(
    f: &FunctionExpr,
    iv: Interval,
    class: Class,
    plan: &SamplingPlan,
) -> Result<Verdict> {
    plan.validate()?;
    let mut tracker = Tracker::default();
    if matches!(class, Class::Q | Class::P | Class::Nonnegative) {
        if let Some(v) = nonnegativity(f, iv, plan, &mut tracker) {
            return Ok(v);
        }
    }
    let sides_convex = |x, y, l| convex_sides(f, x, y, l);
    let sides_q = |x, y, l| q_sides(f, x, y, l);
    let sides_p = |x, y, l| p_sides(f, x, y, l);
    let check = match class {
        Class::Nonnegative => return Ok(tracker.verdict()),
        Class::Convex => PointCheck {
            condition: Condition::Convex,
            lambda_lo: 0.0,
            lambda_hi: 1.0,
            sides: &sides_convex,
        },
        Class::Q => {
            let (lo, hi) = Kind::Q.lambda_range(plan);
            PointCheck {
                condition: Condition::Q,
                lambda_lo: lo,
                lambda_hi: hi,
                sides: &sides_q,
            }
        }
        Class::P => PointCheck {
            condition: Condition::P,
            lambda_lo: 0.0,
            lambda_hi: 1.0,
            sides: &sides_p,
        },
    };
    Ok(scan(&check, iv, plan, tracker))
}

/// Sampled check of the three-point product condition over every grid triple
/// `x <= y <= z` with at least two distinct nodes. Triples with a repeated
/// node reduce to `f(z)(z - x)^2` and so carry the nonnegativity condition.
pub fn check_triple_product(
    f: &FunctionExpr,
    iv: Interval,
    plan: &SamplingPlan,
) -> Result<Verdict> {
    plan.validate()?;
    let xs = iv.grid(plan.n_x);
    let mut vals = alloc::vec::Vec::with_capacity(xs.len());
    for &x in &xs {
        match f.evaluate(x) {
            Ok(v) => vals.push(v),
            Err(e) => return Ok(Verdict::inconclusive(&e)),
        }
    }
    let mut tracker = Tracker::default();
    let n = xs.len();
    for i in 0..n {
        for j in i..n {
            for k in j.max(i + 1)..n {
                let (x, y, z) = (xs[i], xs[j], xs[k]);
                let terms = [
                    vals[i] * (x - y) * (x - z),
                    vals[j] * (y - x) * (y - z),
                    vals[k] * (z - x) * (z - y),
                ];
                let positive: f64 = terms.iter().filter(|t| **t > 0.0).sum();
                let negative: f64 = -terms.iter().filter(|t| **t < 0.0).sum::<f64>();
                tracker.push(
                    Witness::new(
                        Condition::TripleProduct,
                        x,
                        Some(y),
                        None,
                        Some(z),
                        negative,
                        positive,
                    ),
                    plan.tau,
                );
            }
        }
    }
    Ok(tracker.verdict())
}

/// Verdicts of the λ-form and the three-point form of the Q condition.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub verdict_eq1: Verdict,
    pub verdict_eq2: Verdict,
    /// Both hold or both are violated.
    pub agree: bool,
}

pub fn equivalence_crosscheck(
    f: &FunctionExpr,
    iv: Interval,
    plan: &SamplingPlan,
) -> Result<EquivalenceReport> {
    let verdict_eq1 = check_membership(f, iv, Class::Q, plan)?;
    let verdict_eq2 = check_triple_product(f, iv, plan)?;
    let agree = (verdict_eq1.holds() && verdict_eq2.holds())
        || (verdict_eq1.violated() && verdict_eq2.violated());
    Ok(EquivalenceReport {
        verdict_eq1,
        verdict_eq2,
        agree,
    })
}
