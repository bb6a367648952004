//! Grid scan with local refinement, shared by the membership and dominance
//! checks.
//!
//! A check is described by a closure returning the two sides `(lhs, rhs)` of
//! an inequality `lhs <= rhs` at a point `(x, y, lambda)`. The scan visits the
//! full `n_x * n_x * n_lambda` grid, then sharpens the worst grid point with
//! coordinate-wise golden-section ascent on the gap `lhs - rhs` and repeats the
//! ascent from seeded random starts. The reduction (maximum gap, ties broken
//! by the lexicographically smallest point) does not depend on visiting
//! order.

use alloc::string::String;
use core::cmp::Ordering;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{linspace, Interval};

/// Sampling parameters for every pointwise check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingPlan {
    /// Grid points per spatial axis.
    pub n_x: usize,
    /// Grid points on the lambda axis.
    pub n_lambda: usize,
    /// Q-checks sample lambda in `[eps, 1 - eps]`.
    pub lambda_margin: f64,
    /// Relative slack: a point violates when `gap > tau * max(1, |lhs|, |rhs|)`.
    pub tau: f64,
    pub seed: u64,
    pub refine_rounds: usize,
    /// Seeded random starting points for additional refinement runs.
    pub restarts: usize,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            n_x: 41,
            n_lambda: 41,
            lambda_margin: 1e-3,
            tau: 1e-9,
            seed: 0,
            refine_rounds: 3,
            restarts: 8,
        }
    }
}

impl SamplingPlan {
    pub fn validate(&self) -> Result<()> {
        if self.n_x < 2 {
            return Err(Error::InvalidConfig("n_x must be at least 2"));
        }
        if self.n_lambda < 3 {
            return Err(Error::InvalidConfig("n_lambda must be at least 3"));
        }
        if !(self.lambda_margin > 0.0 && self.lambda_margin < 0.5) {
            return Err(Error::InvalidConfig("lambda_margin must lie in (0, 1/2)"));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidConfig("tau must be positive"));
        }
        Ok(())
    }
}

/// Which inequality a witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `0 <= f(x)`.
    Nonnegativity,
    Convex,
    Q,
    P,
    /// `|D_f| <= D_g` with the Q-defect.
    DominanceQ,
    /// `|D_f| <= D_g` with the P-defect.
    DominanceP,
    /// The three-point product sum is nonnegative.
    TripleProduct,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Nonnegativity => "nonnegativity",
            Condition::Convex => "convex",
            Condition::Q => "Q",
            Condition::P => "P",
            Condition::DominanceQ => "dominance-Q",
            Condition::DominanceP => "dominance-P",
            Condition::TripleProduct => "triple-product",
        }
    }
}

/// A sample point with both sides of `lhs <= rhs` evaluated there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub condition: Condition,
    pub x: f64,
    pub y: Option<f64>,
    pub lambda: Option<f64>,
    pub z: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`; positive means the inequality is broken at this point.
    pub gap: f64,
}

impl Witness {
    pub(crate) fn new(
        condition: Condition,
        x: f64,
        y: Option<f64>,
        lambda: Option<f64>,
        z: Option<f64>,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        Witness {
            condition,
            x,
            y,
            lambda,
            z,
            lhs,
            rhs,
            gap: lhs - rhs,
        }
    }

    pub fn scale(&self) -> f64 {
        1f64.max(libm::fabs(self.lhs)).max(libm::fabs(self.rhs))
    }

    pub fn violates(&self, tau: f64) -> bool {
        self.gap > tau * self.scale()
    }

    fn key(&self) -> [f64; 4] {
        [
            self.x,
            self.y.unwrap_or(f64::NEG_INFINITY),
            self.lambda.unwrap_or(f64::NEG_INFINITY),
            self.z.unwrap_or(f64::NEG_INFINITY),
        ]
    }

    /// `Greater` when `self` is the preferred report: larger gap, then the
    /// lexicographically smaller point.
    fn rank(&self, other: &Witness) -> Ordering {
        match self.gap.total_cmp(&other.gap) {
            Ordering::Equal => {
                let (a, b) = (self.key(), other.key());
                for (p, q) in a.iter().zip(b.iter()) {
                    match p.total_cmp(q) {
                        Ordering::Equal => continue,
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }
}

/// Outcome of a sampled check. Holding on samples is evidence, not proof.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    HoldsOnSamples {
        /// Smallest `rhs - lhs` seen.
        min_margin: f64,
        points_checked: usize,
        /// The point attaining `min_margin`.
        tightest: Witness,
    },
    Violated {
        witness: Witness,
        points_checked: usize,
    },
    Inconclusive {
        reason: String,
        at: Option<f64>,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsOnSamples { .. })
    }

    pub fn violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::HoldsOnSamples { .. } => "HoldsOnSamples",
            Verdict::Violated { .. } => "Violated",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Violated { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// The violating witness, or the tightest point when the check held.
    pub fn worst_point(&self) -> Option<&Witness> {
        match self {
            Verdict::Violated { witness, .. } => Some(witness),
            Verdict::HoldsOnSamples { tightest, .. } => Some(tightest),
            Verdict::Inconclusive { .. } => None,
        }
    }

    pub(crate) fn inconclusive(err: &Error) -> Verdict {
        let at = match err {
            Error::NonFiniteValue { x } | Error::OutOfDomain { x } => Some(*x),
            _ => None,
        };
        Verdict::Inconclusive {
            reason: alloc::format!("{err}"),
            at,
        }
    }
}

/// Order-independent reduction over checked points.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tracker {
    worst: Option<Witness>,
    violation: Option<Witness>,
    count: usize,
}

impl Tracker {
    pub(crate) fn push(&mut self, w: Witness, tau: f64) {
        self.count += 1;
        if self
            .worst
            .as_ref()
            .is_none_or(|cur| w.rank(cur) == Ordering::Greater)
        {
            self.worst = Some(w);
        }
        if w.violates(tau)
            && self
                .violation
                .as_ref()
                .is_none_or(|cur| w.rank(cur) == Ordering::Greater)
        {
            self.violation = Some(w);
        }
    }

    pub(crate) fn merge(&mut self, other: Tracker, tau: f64) {
        let count = self.count + other.count;
        for w in [other.worst, other.violation].into_iter().flatten() {
            self.push(w, tau);
        }
        self.count = count;
    }

    pub(crate) fn has_violation(&self) -> bool {
        self.violation.is_some()
    }

    pub(crate) fn worst(&self) -> Option<&Witness> {
        self.worst.as_ref()
    }

    pub(crate) fn verdict(self) -> Verdict {
        match (self.violation, self.worst) {
            (Some(witness), _) => Verdict::Violated {
                witness,
                points_checked: self.count,
            },
            (None, Some(tightest)) => Verdict::HoldsOnSamples {
                min_margin: -tightest.gap,
                points_checked: self.count,
                tightest,
            },
            (None, None) => Verdict::Inconclusive {
                reason: String::from("no points checked"),
                at: None,
            },
        }
    }
}

/// A pointwise condition over `(x, y, lambda)`.
pub(crate) struct PointCheck<'a> {
    pub condition: Condition,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub sides: &'a dyn Fn(f64, f64, f64) -> Result<(f64, f64)>,
}

impl PointCheck<'_> {
    fn witness(&self, x: f64, y: f64, lambda: f64) -> Result<Witness> {
        let (lhs, rhs) = (self.sides)(x, y, lambda)?;
        Ok(Witness::new(
            self.condition,
            x,
            Some(y),
            Some(lambda),
            None,
            lhs,
            rhs,
        ))
    }
}

const GOLDEN_ITERS: usize = 40;

/// Scans the grid, then refines. Grid failures are inconclusive; failures at
/// refinement points only discard that point.
pub(crate) fn scan(
    check: &PointCheck<'_>,
    iv: Interval,
    plan: &SamplingPlan,
    prior: Tracker,
) -> Verdict {
    let mut tracker = Tracker::default();
    let xs = iv.grid(plan.n_x);
    let lams = linspace(check.lambda_lo, check.lambda_hi, plan.n_lambda);
    for &x in &xs {
        for &y in &xs {
            for &lam in &lams {
                match check.witness(x, y, lam) {
                    Ok(w) => tracker.push(w, plan.tau),
                    Err(e) => return Verdict::inconclusive(&e),
                }
            }
        }
    }

    let bounds = [
        (iv.a(), iv.b()),
        (iv.a(), iv.b()),
        (check.lambda_lo, check.lambda_hi),
    ];
    if let Some(start) = tracker.worst().copied() {
        let steps = [
            iv.width() / (plan.n_x - 1) as f64,
            iv.width() / (plan.n_x - 1) as f64,
            (check.lambda_hi - check.lambda_lo) / (plan.n_lambda - 1) as f64,
        ];
        let p = [
            start.x,
            start.y.unwrap_or(start.x),
            start.lambda.unwrap_or(0.5),
        ];
        refine(check, p, steps, bounds, plan, &mut tracker);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    for _ in 0..plan.restarts {
        let mut p = [0.0; 3];
        for (v, (lo, hi)) in p.iter_mut().zip(bounds.iter()) {
            *v = lo + (hi - lo) * unit(&mut rng);
        }
        let steps = bounds.map(|(lo, hi)| 0.5 * (hi - lo));
        refine(check, p, steps, bounds, plan, &mut tracker);
    }
    let mut all = prior;
    all.merge(tracker, plan.tau);
    all.verdict()
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Coordinate-wise golden-section ascent on the gap, one axis at a time,
/// halving the bracket after every round.
fn refine(
    check: &PointCheck<'_>,
    mut p: [f64; 3],
    mut steps: [f64; 3],
    bounds: [(f64, f64); 3],
    plan: &SamplingPlan,
    tracker: &mut Tracker,
) {
    let eval = |q: [f64; 3], tracker: &mut Tracker| -> f64 {
        match check.witness(q[0], q[1], q[2]) {
            Ok(w) => {
                tracker.push(w, plan.tau);
                w.gap
            }
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let mut best = eval(p, tracker);
    for _ in 0..plan.refine_rounds {
        for axis in 0..3 {
            let (lo_b, hi_b) = bounds[axis];
            let lo = (p[axis] - steps[axis]).max(lo_b);
            let hi = (p[axis] + steps[axis]).min(hi_b);
            if !(lo < hi) {
                continue;
            }
            let along = |t: f64, tracker: &mut Tracker| {
                let mut q = p;
                q[axis] = t;
                eval(q, tracker)
            };
            let (t, gap) = golden_max(lo, hi, |t| along(t, tracker));
            if gap > best {
                best = gap;
                p[axis] = t;
            }
        }
        for s in steps.iter_mut() {
            *s *= 0.5;
        }
    }
}

/// Golden-section search for a maximum of `g` on `[lo, hi]`; the bracket
/// endpoints are evaluated as candidates too.
pub(crate) fn golden_max<G: FnMut(f64) -> f64>(lo: f64, hi: f64, mut g: G) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut best = (lo, g(lo));
    let end = (hi, g(hi));
    if end.1 > best.1 {
        best = end;
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..GOLDEN_ITERS {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    for cand in [(c, gc), (d, gd)] {
        if cand.1 > best.1 {
            best = cand;
        }
    }
    best
}
