//! Both sides of the Hermite–Hadamard inequality and of its Q-, P- and
//! dominated-class analogues, with quadrature error carried into the verdict.
//!
//! Theorem hypotheses are not enforced here: conclusions are evaluated for
//! any integrable input so that non-members can be probed.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::expr::{FunctionExpr, Interval};
use crate::quadrature::{integrate, integrate_weighted, QuadConfig, QuadResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InequalityId {
    ClassicalL,
    ClassicalR,
    T1a,
    T1b,
    T2L,
    T2R,
    T3a,
    T3b,
    T4a,
    T4b,
}

impl InequalityId {
    pub fn name(self) -> &'static str {
        match self {
            InequalityId::ClassicalL => "Classical-L",
            InequalityId::ClassicalR => "Classical-R",
            InequalityId::T1a => "T1-a",
            InequalityId::T1b => "T1-b",
            InequalityId::T2L => "T2-L",
            InequalityId::T2R => "T2-R",
            InequalityId::T3a => "T3-a",
            InequalityId::T3b => "T3-b",
            InequalityId::T4a => "T4-a",
            InequalityId::T4b => "T4-b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HhVerdict {
    Holds,
    Violated,
    /// `|margin|` is inside the error band, so the sign is not resolved.
    WithinError,
}

impl HhVerdict {
    pub fn name(self) -> &'static str {
        match self {
            HhVerdict::Holds => "Holds",
            HhVerdict::Violated => "Violated",
            HhVerdict::WithinError => "WithinError",
        }
    }
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhReport {
    pub id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    /// Quadrature error bound on `margin`.
    pub quad_error: f64,
    pub verdict: HhVerdict,
}

impl HhReport {
    /// The error band is `quad_error + tau * max(1, |lhs|, |rhs|)`; margins
    /// inside it are `WithinError`.
    pub fn new(id: InequalityId, lhs: f64, rhs: f64, quad_error: f64, tau: f64) -> Self {
        let margin = rhs - lhs;
        let scale = 1f64.max(libm::fabs(lhs)).max(libm::fabs(rhs));
        let band = quad_error + tau * scale;
        let verdict = if libm::fabs(margin) <= band {
            HhVerdict::WithinError
        } else if margin > 0.0 {
            HhVerdict::Holds
        } else {
            HhVerdict::Violated
        };
        HhReport {
            id,
            lhs,
            rhs,
            margin,
            quad_error,
            verdict,
        }
    }

    /// Holds or WithinError.
    pub fn acceptable(&self) -> bool {
        self.verdict != HhVerdict::Violated
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhOptions {
    pub quad: QuadConfig,
    pub tau: f64,
}

impl Default for HhOptions {
    fn default() -> Self {
        HhOptions {
            quad: QuadConfig::default(),
            tau: 1e-9,
        }
    }
}

/// Point values and integrals of one function that every inequality uses.
struct Functionals {
    at_a: f64,
    at_b: f64,
    at_mid: f64,
    integral: QuadResult,
    weighted: Option<QuadResult>,
}

impl Functionals {
    fn new(f: &FunctionExpr, iv: Interval, cfg: &QuadConfig, weighted: bool) -> Result<Self> {
        Ok(Functionals {
            at_a: f.evaluate(iv.a())?,
            at_b: f.evaluate(iv.b())?,
            at_mid: f.evaluate(iv.midpoint())?,
            integral: integrate(f, iv, cfg)?,
            weighted: if weighted {
                Some(integrate_weighted(f, iv, cfg)?)
            } else {
                None
            },
        })
    }

    fn endpoint_mean(&self) -> f64 {
        0.5 * (self.at_a + self.at_b)
    }

    fn weighted(&self) -> QuadResult {
        self.weighted.expect("weighted integral requested")
    }
}

/// Classical two-sided bound: `f(mid) <= mean <= (f(a) + f(b)) / 2`.
pub fn verify_hh_classical(
    f: &FunctionExpr,
    iv: Interval,
    opts: &HhOptions,
) -> Result<Vec<HhReport>> {
    let s = Functionals::new(f, iv, &opts.quad, false)?;
    let w = iv.width();
    let mean = s.integral.value / w;
    let err = s.integral.error_estimate / w;
    Ok(vec![
        HhReport::new(InequalityId::ClassicalL, s.at_mid, mean, err, opts.tau),
        HhReport::new(
            InequalityId::ClassicalR,
            mean,
            s.endpoint_mean(),
            err,
            opts.tau,
        ),
    ])
}

/// Q-class bounds: `f(mid) <= 4/(b-a) ∫f` and `1/(b-a) ∫p f <= (f(a) + f(b)) / 2`.
pub fn verify_thm1(f: &FunctionExpr, iv: Interval, opts: &HhOptions) -> Result<Vec<HhReport>> {
    let s = Functionals::new(f, iv, &opts.quad, true)?;
    let w = iv.width();
    let pw = s.weighted();
    Ok(vec![
        HhReport::new(
            InequalityId::T1a,
            s.at_mid,
            4.0 * s.integral.value / w,
            4.0 * s.integral.error_estimate / w,
            opts.tau,
        ),
        HhReport::new(
            InequalityId::T1b,
            pw.value / w,
            s.endpoint_mean(),
            pw.error_estimate / w,
            opts.tau,
        ),
    ])
}

/// P-class chain: `f(mid) <= 2/(b-a) ∫f <= 2 (f(a) + f(b))`.
pub fn verify_thm2(f: &FunctionExpr, iv: Interval, opts: &HhOptions) -> Result<Vec<HhReport>> {
    let s = Functionals::new(f, iv, &opts.quad, false)?;
    let w = iv.width();
    let middle = 2.0 * s.integral.value / w;
    let err = 2.0 * s.integral.error_estimate / w;
    Ok(vec![
        HhReport::new(InequalityId::T2L, s.at_mid, middle, err, opts.tau),
        HhReport::new(
            InequalityId::T2R,
            middle,
            2.0 * (s.at_a + s.at_b),
            err,
            opts.tau,
        ),
    ])
}

/// Bounds for `f` dominated by a Q-class `g`:
/// `|4/(b-a) ∫f - f(mid)| <= 4/(b-a) ∫g - g(mid)` and
/// `|(f(a) + f(b))/2 - 1/(b-a) ∫p f| <= (g(a) + g(b))/2 - 1/(b-a) ∫p g`.
pub fn verify_thm3(
    f: &FunctionExpr,
    g: &FunctionExpr,
    iv: Interval,
    opts: &HhOptions,
) -> Result<Vec<HhReport>> {
    let sf = Functionals::new(f, iv, &opts.quad, true)?;
    let sg = Functionals::new(g, iv, &opts.quad, true)?;
    let w = iv.width();
    let (pf, pg) = (sf.weighted(), sg.weighted());
    Ok(vec![
        HhReport::new(
            InequalityId::T3a,
            libm::fabs(4.0 * sf.integral.value / w - sf.at_mid),
            4.0 * sg.integral.value / w - sg.at_mid,
            4.0 * (sf.integral.error_estimate + sg.integral.error_estimate) / w,
            opts.tau,
        ),
        HhReport::new(
            InequalityId::T3b,
            libm::fabs(sf.endpoint_mean() - pf.value / w),
            sg.endpoint_mean() - pg.value / w,
            (pf.error_estimate + pg.error_estimate) / w,
            opts.tau,
        ),
    ])
}

/// Bounds for `f` dominated by a P-class `g`:
/// `|2/(b-a) ∫f - f(mid)| <= 2/(b-a) ∫g - g(mid)` and
/// `|f(a) + f(b) - 1/(b-a) ∫f| <= g(a) + g(b) - 1/(b-a) ∫g`.
pub fn verify_thm4(
    f: &FunctionExpr,
    g: &FunctionExpr,
    iv: Interval,
    opts: &HhOptions,
) -> Result<Vec<HhReport>> {
    let sf = Functionals::new(f, iv, &opts.quad, false)?;
    let sg = Functionals::new(g, iv, &opts.quad, false)?;
    let w = iv.width();
    let err = sf.integral.error_estimate + sg.integral.error_estimate;
    Ok(vec![
        HhReport::new(
            InequalityId::T4a,
            libm::fabs(2.0 * sf.integral.value / w - sf.at_mid),
            2.0 * sg.integral.value / w - sg.at_mid,
            2.0 * err / w,
            opts.tau,
        ),
        HhReport::new(
            InequalityId::T4b,
            libm::fabs(sf.at_a + sf.at_b - sf.integral.value / w),
            sg.at_a + sg.at_b - sg.integral.value / w,
            err / w,
            opts.tau,
        ),
    ])
}
