//! Convex dominance by a Q- or P-class member, its `g ± f` characterization,
//! and the `l, k` decomposition.

use alloc::format;

use crate::error::{Error, Result};
use crate::expr::{FunctionExpr, Interval};
use crate::membership::{check_membership, kind_sides, Kind};
use crate::sampling::{scan, Condition, PointCheck, SamplingPlan, Tracker, Verdict};

/// A candidate `f` and a dominating class member `g` on a common interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DominancePair {
    pub f: FunctionExpr,
    pub g: FunctionExpr,
    pub iv: Interval,
    pub kind: Kind,
    /// Skip the membership check on `g` before issuing a verdict.
    pub waive_prereq: bool,
}

impl DominancePair {
    pub fn new(f: FunctionExpr, g: FunctionExpr, iv: Interval, kind: Kind) -> Self {
        DominancePair {
            f,
            g,
            iv,
            kind,
            waive_prereq: false,
        }
    }

    fn condition(&self) -> Condition {
        match self.kind {
            Kind::Q => Condition::DominanceQ,
            Kind::P => Condition::DominanceP,
        }
    }

    /// Sides `(|D_f|, D_g)` at a point.
    fn sides(&self, x: f64, y: f64, lambda: f64) -> Result<(f64, f64)> {
        let (fl, fr) = kind_sides(self.kind, &self.f, x, y, lambda)?;
        let (gl, gr) = kind_sides(self.kind, &self.g, x, y, lambda)?;
        Ok((libm::fabs(fr - fl), gr - gl))
    }
}

/// `D_g - |D_f|` at `(x, y, λ)`, where `D` is the Q- or P-defect.
pub fn dominance_defect(pair: &DominancePair, x: f64, y: f64, lambda: f64) -> Result<f64> {
    pair.sides(x, y, lambda).map(|(l, r)| r - l)
}

/// Membership verdict of `g` in its class on the pair's interval.
pub fn prerequisite(pair: &DominancePair, plan: &SamplingPlan) -> Result<Verdict> {
    check_membership(&pair.g, pair.iv, pair.kind.class(), plan)
}

/// Sampled dominance check. Fails with `PrereqFailed` when `g` is not shown
/// to be a class member, unless the pair waives that check.
pub fn check_dominated(pair: &DominancePair, plan: &SamplingPlan) -> Result<Verdict> {
    plan.validate()?;
    if !pair.waive_prereq {
        let pre = prerequisite(pair, plan)?;
        if !pre.holds() {
            return Err(Error::PrereqFailed {
                reason: format!(
                    "g = {} is not in {} on [{}, {}]: {}",
                    pair.g,
                    pair.kind.name(),
                    pair.iv.a(),
                    pair.iv.b(),
                    pre.name()
                ),
            });
        }
    }
    let (lo, hi) = pair.kind.lambda_range(plan);
    let sides = |x, y, l| pair.sides(x, y, l);
    let check = PointCheck {
        condition: pair.condition(),
        lambda_lo: lo,
        lambda_hi: hi,
        sides: &sides,
    };
    Ok(scan(&check, pair.iv, plan, Tracker::default()))
}

/// The three verdicts of the dominance characterization on one shared plan.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterizationReport {
    pub direct: Verdict,
    /// Class check of `g + f`.
    pub via_sum: Verdict,
    /// Class check of `g - f`.
    pub via_diff: Verdict,
    /// All three hold, or the direct check and at least one of the others
    /// are violated.
    pub consistent: bool,
}

pub fn characterization_check(
    pair: &DominancePair,
    plan: &SamplingPlan,
) -> Result<CharacterizationReport> {
    let direct = check_dominated(pair, plan)?;
    let (l, k) = decompose(pair);
    let class = pair.kind.class();
    let via_sum = check_membership(&l, pair.iv, class, plan)?;
    let via_diff = check_membership(&k, pair.iv, class, plan)?;
    let consistent = (direct.holds() && via_sum.holds() && via_diff.holds())
        || (direct.violated() && (via_sum.violated() || via_diff.violated()));
    Ok(CharacterizationReport {
        direct,
        via_sum,
        via_diff,
        consistent,
    })
}

/// `l = g + f`, `k = g - f`.
pub fn decompose(pair: &DominancePair) -> (FunctionExpr, FunctionExpr) {
    let l = pair.g.clone() + pair.f.clone();
    let k = pair.g.clone() - pair.f.clone();
    (l, k)
}

/// `f = (l - k) / 2`, `g = (l + k) / 2`.
pub fn recompose(l: &FunctionExpr, k: &FunctionExpr) -> (FunctionExpr, FunctionExpr) {
    let two = FunctionExpr::constant(2.0);
    let f = (l.clone() - k.clone()) / two.clone();
    let g = (l.clone() + k.clone()) / two;
    (f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::{defect_q, Class};

    fn f(text: &str) -> FunctionExpr {
        FunctionExpr::parse(text).unwrap()
    }

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn pair(ft: &str, gt: &str, kind: Kind) -> DominancePair {
        DominancePair::new(f(ft), f(gt), unit(), kind)
    }

    #[test]
    fn defect_examples() {
        let zero = pair("0", "x^2", Kind::Q);
        let dg = defect_q(&zero.g, 0.2, 0.9, 0.3).unwrap();
        assert_eq!(dominance_defect(&zero, 0.2, 0.9, 0.3).unwrap(), dg);

        let same = pair("x^2", "x^2", Kind::P);
        assert_eq!(dominance_defect(&same, 0.2, 0.9, 0.3).unwrap(), 0.0);

        let half = pair("x^2/2", "x^2", Kind::Q);
        assert_eq!(dominance_defect(&half, 0.0, 1.0, 0.5).unwrap(), 0.875);

        assert!(matches!(
            dominance_defect(&half, 0.0, 1.0, 0.0),
            Err(Error::LambdaOutOfRange { .. })
        ));
        assert!(dominance_defect(&pair("x^2/2", "x^2", Kind::P), 0.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn check_examples() {
        let plan = SamplingPlan::default();
        assert!(check_dominated(&pair("x^2/2", "x^2", Kind::Q), &plan)
            .unwrap()
            .holds());

        let v = check_dominated(&pair("2*x^2", "x^2", Kind::Q), &plan).unwrap();
        assert!(v.violated());
        // D_g - 2 D_g at (0, 1, 1/2)
        assert_eq!(
            dominance_defect(&pair("2*x^2", "x^2", Kind::Q), 0.0, 1.0, 0.5).unwrap(),
            -1.75
        );

        let v = check_dominated(&pair("-(x^2)", "x^2", Kind::P), &plan).unwrap();
        match v {
            Verdict::HoldsOnSamples { min_margin, .. } => assert!(min_margin.abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prerequisite_is_enforced() {
        let plan = SamplingPlan::default();
        let bad = DominancePair::new(
            FunctionExpr::constant(0.0),
            f("1 - abs(x)"),
            Interval::new(-1.0, 1.0).unwrap(),
            Kind::P,
        );
        assert!(matches!(
            check_dominated(&bad, &plan),
            Err(Error::PrereqFailed { .. })
        ));
        let waived = DominancePair {
            waive_prereq: true,
            ..bad
        };
        // f = 0 reduces to the P-check of g itself, which fails
        assert!(check_dominated(&waived, &plan).unwrap().violated());
    }

    #[test]
    fn characterization_examples() {
        let plan = SamplingPlan::default();
        let r = characterization_check(&pair("x^2/2", "x^2", Kind::Q), &plan).unwrap();
        assert!(r.direct.holds() && r.via_sum.holds() && r.via_diff.holds() && r.consistent);

        let r = characterization_check(&pair("0", "exp(x)", Kind::P), &plan).unwrap();
        assert!(r.direct.holds() && r.via_sum.holds() && r.via_diff.holds() && r.consistent);

        let r = characterization_check(&pair("2*x^2", "x^2", Kind::Q), &plan).unwrap();
        assert!(r.direct.violated() && r.via_diff.violated() && r.consistent);
    }

    #[test]
    fn decomposition_identities() {
        let g = f("x^2");
        let p0 = pair("0", "x^2", Kind::Q);
        let (l, k) = decompose(&p0);
        let p1 = pair("x^2", "x^2", Kind::Q);
        let (l1, k1) = decompose(&p1);
        let ph = pair("x^2/2", "x^2", Kind::Q);
        let (lh, kh) = decompose(&ph);
        let plan = SamplingPlan::default();
        for x in unit().grid(101) {
            let gx = g.evaluate(x).unwrap();
            assert_eq!(l.evaluate(x).unwrap(), gx);
            assert_eq!(k.evaluate(x).unwrap(), gx);
            assert_eq!(l1.evaluate(x).unwrap(), 2.0 * gx);
            assert_eq!(k1.evaluate(x).unwrap(), 0.0);
            assert!((lh.evaluate(x).unwrap() - 1.5 * gx).abs() <= 1e-15);
            assert!((kh.evaluate(x).unwrap() - 0.5 * gx).abs() <= 1e-15);
        }
        assert!(check_membership(&lh, unit(), Class::Q, &plan)
            .unwrap()
            .holds());
        assert!(check_membership(&kh, unit(), Class::Q, &plan)
            .unwrap()
            .holds());
    }

    #[test]
    fn recomposition_examples() {
        let g = f("exp(x)");
        let zero = FunctionExpr::constant(0.0);
        let (f0, g0) = recompose(&g, &g);
        let (f1, g1) = recompose(&g.scaled(2.0), &zero);
        for x in unit().grid(101) {
            let gx = g.evaluate(x).unwrap();
            assert_eq!(f0.evaluate(x).unwrap(), 0.0);
            assert_eq!(g0.evaluate(x).unwrap(), gx);
            assert_eq!(f1.evaluate(x).unwrap(), gx);
            assert_eq!(g1.evaluate(x).unwrap(), gx);
        }
        let ph = pair("x^2/2", "x^2", Kind::Q);
        let (l, k) = decompose(&ph);
        let (fr, gr) = recompose(&l, &k);
        for x in unit().grid(1000) {
            assert!((fr.evaluate(x).unwrap() - ph.f.evaluate(x).unwrap()).abs() <= 1e-12);
            assert!((gr.evaluate(x).unwrap() - ph.g.evaluate(x).unwrap()).abs() <= 1e-12);
        }
    }
}
