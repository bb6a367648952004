//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic;
use std::process::{Command, ExitCode};
use std::time::Instant;

use convdom_core::membership::defect;
use convdom_core::{
    catalog, characterization_check, check_membership, decompose, dominance_defect,
    equivalence_crosscheck, integrate, recompose, verify_hh_classical, verify_thm3, verify_thm4,
    Class, DominancePair, FunctionExpr, HhOptions, HhVerdict, Interval, Kind, QuadConfig,
    SamplingPlan, FIXTURES,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    lo + u * (hi - lo)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn plan() -> SamplingPlan {
    SamplingPlan {
        n_x: 41,
        n_lambda: 41,
        lambda_margin: 1e-3,
        tau: 1e-9,
        seed: 0,
        ..SamplingPlan::default()
    }
}

fn err(e: convdom_core::Error) -> String {
    e.to_string()
}

/// Pairs of catalog functions sharing a canonical domain.
const PAIRS: [(&str, &str); 10] = [
    ("square", "expx"),
    ("cube", "exp_neg"),
    ("shifted_square", "square"),
    ("const_c", "ramp"),
    ("expx", "cube"),
    ("quartic", "abs_x"),
    ("cosh", "square_plus_one"),
    ("shifted_abs", "line_neg"),
    ("recip", "neg_log"),
    ("xlogx_shift", "recip"),
];

fn quadrature_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let degree = (rng.next_u32() % 9) as usize;
        let coeffs: Vec<f64> = (0..=degree).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
        let (mut a, mut b) = (uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let text = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("({c:?})*x^{i}"))
            .collect::<Vec<_>>()
            .join(" + ");
        let f = FunctionExpr::parse(&text).map_err(err)?;
        let anti = |x: f64| -> f64 {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * x.powi(i as i32 + 1) / (i as f64 + 1.0))
                .sum()
        };
        let exact = anti(b) - anti(a);
        let got = integrate(
            &f,
            Interval::new(a, b).map_err(err)?,
            &QuadConfig::default(),
        )
        .map_err(err)?;
        let rel = (got.value - exact).abs() / exact.abs();
        worst = worst.max(rel);
        ensure(rel <= 1e-10, || {
            format!("degree {degree} on [{a}, {b}]: {} vs {exact}", got.value)
        })?;
    }
    Ok(format!("20 polynomials, max relative error {worst:.1e}"))
}

fn classical_hh() -> Result<String, String> {
    let (f, iv) = catalog("square").map_err(err)?;
    let reports = verify_hh_classical(&f, iv, &HhOptions::default()).map_err(err)?;
    let expected = [(0.25, 1.0 / 3.0), (1.0 / 3.0, 0.5)];
    for (r, (lhs, rhs)) in reports.iter().zip(expected) {
        ensure(r.verdict == HhVerdict::Holds, || {
            format!("{}: {:?}", r.id.name(), r.verdict)
        })?;
        ensure(
            (r.lhs - lhs).abs() <= 1e-10 && (r.rhs - rhs).abs() <= 1e-10,
            || format!("{r:?}"),
        )?;
        ensure((r.margin - (rhs - lhs)).abs() <= 1e-10, || {
            format!("margin {}", r.margin)
        })?;
        ensure(r.quad_error <= 1e-10, || {
            format!("quad error {}", r.quad_error)
        })?;
    }
    Ok(format!(
        "{:.6} <= {:.6} <= {:.6}",
        reports[0].lhs, reports[0].rhs, reports[1].rhs
    ))
}

fn q_membership_suite() -> Result<String, String> {
    let mut n = 0;
    for fix in FIXTURES.iter().filter(|f| f.nonnegative && f.convex) {
        let v = check_membership(&fix.expr(), fix.interval(), Class::Q, &plan()).map_err(err)?;
        ensure(v.holds(), || format!("{}: {}", fix.name, v.name()))?;
        n += 1;
    }
    ensure(n >= 10, || format!("only {n} nonnegative convex fixtures"))?;
    Ok(format!("{n} nonnegative convex fixtures hold for Q"))
}

fn falsifier_sharpness() -> Result<String, String> {
    let (f, iv) = catalog("shifted_abs").map_err(err)?;
    let v = check_membership(&f, iv, Class::P, &plan()).map_err(err)?;
    let w = v
        .witness()
        .filter(|_| v.violated())
        .ok_or_else(|| format!("{v:?}"))?;
    let (y, lambda) = (w.y.unwrap_or(f64::NAN), w.lambda.unwrap_or(f64::NAN));
    let dist = (w.x + 1.0)
        .abs()
        .max((y - 1.0).abs())
        .max((lambda - 0.5).abs());
    ensure(dist <= 1e-3 && w.gap >= 0.999, || format!("{w:?}"))?;
    Ok(format!("witness ({}, {y}, {lambda}), gap {}", w.x, w.gap))
}

fn characterization_equivalence() -> Result<String, String> {
    let members: Vec<&str> = FIXTURES
        .iter()
        .filter(|f| f.a == 0.0 && f.b == 1.0 && f.nonnegative && (f.convex || f.monotone))
        .map(|f| f.name)
        .collect();
    let iv = Interval::new(0.0, 1.0).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut consistent, mut held) = (0, 0);
    for i in 0..100 {
        let gi = (rng.next_u32() as usize) % members.len();
        let hi = (gi + 1 + (rng.next_u32() as usize) % (members.len() - 1)) % members.len();
        let alpha = uniform(&mut rng, -1.5, 1.5);
        let beta = uniform(&mut rng, -1.0, 1.0);
        let kind = if i % 2 == 0 { Kind::Q } else { Kind::P };
        let (g, _) = catalog(members[gi]).map_err(err)?;
        let (h, _) = catalog(members[hi]).map_err(err)?;
        let f = g.scaled(alpha) + h.scaled(beta);
        let r =
            characterization_check(&DominancePair::new(f, g, iv, kind), &plan()).map_err(err)?;
        ensure(r.consistent, || {
            format!(
                "{} g={} h={} alpha={alpha} beta={beta}: {r:?}",
                kind.name(),
                members[gi],
                members[hi]
            )
        })?;
        consistent += 1;
        held += usize::from(r.direct.holds());
    }
    Ok(format!(
        "{consistent}/100 consistent ({held} dominated, {} not)",
        100 - held
    ))
}

fn pointwise_dominance_identity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for (fname, gname) in PAIRS {
        let (f, iv) = catalog(fname).map_err(err)?;
        let (g, _) = catalog(gname).map_err(err)?;
        for kind in [Kind::Q, Kind::P] {
            let pair = DominancePair::new(f.clone(), g.clone(), iv, kind);
            let (l, k) = decompose(&pair);
            for _ in 0..1000 {
                let x = uniform(&mut rng, iv.a(), iv.b());
                let y = uniform(&mut rng, iv.a(), iv.b());
                let lambda = uniform(&mut rng, 1e-3, 1.0 - 1e-3);
                let direct = dominance_defect(&pair, x, y, lambda).map_err(err)?;
                let dl = defect(kind, &l, x, y, lambda).map_err(err)?;
                let dk = defect(kind, &k, x, y, lambda).map_err(err)?;
                let df = defect(kind, &f, x, y, lambda).map_err(err)?;
                let dg = defect(kind, &g, x, y, lambda).map_err(err)?;
                let scale = 1f64.max(df.abs()).max(dg.abs());
                let rel = (direct - dl.min(dk)).abs() / scale;
                worst = worst.max(rel);
                ensure(rel <= 1e-9, || {
                    format!(
                        "{fname}/{gname} at ({x}, {y}, {lambda}): {direct} vs {}",
                        dl.min(dk)
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "10 pairs x 1000 tuples x 2 kinds, max scaled deviation {worst:.1e}"
    ))
}

fn theorem_coupling() -> Result<String, String> {
    let opts = HhOptions::default();
    let iv = Interval::new(0.0, 1.0).map_err(err)?;
    let mut n = 0;
    for gtext in ["x^2", "exp(x)", "2"] {
        let g = FunctionExpr::parse(gtext).map_err(err)?;
        for alpha in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            let f = g.scaled(alpha);
            let reports = verify_thm3(&f, &g, iv, &opts)
                .map_err(err)?
                .into_iter()
                .chain(verify_thm4(&f, &g, iv, &opts).map_err(err)?);
            for r in reports {
                ensure(r.acceptable(), || {
                    format!("g = {gtext}, alpha = {alpha}: {r:?}")
                })?;
                n += 1;
            }
        }
    }
    let f = FunctionExpr::parse("x^2/2").map_err(err)?;
    let g = FunctionExpr::parse("x^2").map_err(err)?;
    let t3a = verify_thm3(&f, &g, iv, &opts).map_err(err)?[0];
    ensure(
        (t3a.lhs - 13.0 / 24.0).abs() <= 1e-9 && (t3a.rhs - 13.0 / 12.0).abs() <= 1e-9,
        || format!("{t3a:?}"),
    )?;
    Ok(format!(
        "{n} reports acceptable; T3-a {:.10} <= {:.10}",
        t3a.lhs, t3a.rhs
    ))
}

fn decomposition_round_trip() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for (fname, gname) in PAIRS {
        let (f, iv) = catalog(fname).map_err(err)?;
        let (g, _) = catalog(gname).map_err(err)?;
        let (l, k) = decompose(&DominancePair::new(f.clone(), g.clone(), iv, Kind::Q));
        let (f2, g2) = recompose(&l, &k);
        for x in iv.grid(1000) {
            let df = (f2.evaluate(x).map_err(err)? - f.evaluate(x).map_err(err)?).abs();
            let dg = (g2.evaluate(x).map_err(err)? - g.evaluate(x).map_err(err)?).abs();
            worst = worst.max(df).max(dg);
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("10 pairs x 1000 points, max deviation {worst:.1e}"))
}

fn crosscheck_agreement() -> Result<String, String> {
    let mut violated = Vec::new();
    for fix in FIXTURES {
        let r = equivalence_crosscheck(&fix.expr(), fix.interval(), &plan()).map_err(err)?;
        ensure(r.agree, || {
            format!(
                "{}: eq1 {} eq2 {}",
                fix.name,
                r.verdict_eq1.name(),
                r.verdict_eq2.name()
            )
        })?;
        if r.verdict_eq1.violated() {
            violated.push(fix.name);
        }
        if fix.name == "shifted_abs" {
            let w1 = r.verdict_eq1.witness().ok_or("no eq1 witness")?;
            let w2 = r.verdict_eq2.witness().ok_or("no eq2 witness")?;
            ensure(
                (w1.x, w1.y, w1.lambda) == (-1.0, Some(1.0), Some(0.5)) && w1.gap == 1.0,
                || format!("eq1 witness {w1:?}"),
            )?;
            ensure(
                (w2.x, w2.y, w2.z) == (-1.0, Some(0.0), Some(1.0)) && w2.gap == 1.0,
                || format!("eq2 witness {w2:?}"),
            )?;
        }
    }
    Ok(format!(
        "{} fixtures agree; both forms violated for {}",
        FIXTURES.len(),
        violated.join(", ")
    ))
}

fn cli_determinism() -> Result<String, String> {
    let dir = std::env::temp_dir().join(format!("convdom-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let csv = dir.join("curve.csv");
    let csv = csv.to_str().ok_or("temp path")?;
    let commands: [&[&str]; 7] = [
        &[
            "check-class",
            "--f",
            "1 - abs(x)",
            "--interval",
            "-1",
            "1",
            "--class",
            "P",
            "--csv",
            csv,
        ],
        &[
            "check-class",
            "--f",
            "x^2",
            "--interval",
            "0",
            "1",
            "--class",
            "Q",
            "--seed",
            "42",
        ],
        &[
            "check-dominated",
            "--f",
            "0.5*x^2 + 0.2*exp(x)",
            "--g",
            "x^2",
            "--interval",
            "0",
            "1",
            "--kind",
            "Q",
            "--csv",
            csv,
        ],
        &[
            "verify-hh",
            "--thm",
            "3",
            "--f",
            "x^2/2",
            "--g",
            "x^2",
            "--interval",
            "0",
            "1",
        ],
        &["verify-hh", "--thm", "classical", "--f", "@recip"],
        &["decompose", "--f", "@cube", "--g", "@square", "--kind", "P"],
        &["crosscheck", "--f", "@sqrt_x", "--csv", csv],
    ];
    for args in commands {
        let run = || -> Result<(Vec<u8>, Vec<u8>), String> {
            let out = Command::new(env!("CARGO_BIN_EXE_convdom"))
                .args(args)
                .output()
                .map_err(|e| e.to_string())?;
            let curve = std::fs::read(csv).unwrap_or_default();
            let _ = std::fs::remove_file(csv);
            Ok((out.stdout, curve))
        };
        let first = run()?;
        let second = run()?;
        ensure(!first.0.is_empty() && first == second, || {
            format!("{} differs between runs", args[0])
        })?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{} invocations byte-identical (JSON and CSV)",
        commands.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("quadrature oracle", quadrature_oracle),
        ("classical Hermite-Hadamard", classical_hh),
        ("Q-membership suite", q_membership_suite),
        ("falsifier sharpness", falsifier_sharpness),
        (
            "dominance characterization equivalence",
            characterization_equivalence,
        ),
        ("pointwise dominance identity", pointwise_dominance_identity),
        ("theorem 3/4 conclusion coupling", theorem_coupling),
        ("decomposition round-trip", decomposition_round_trip),
        ("lambda form vs three-point form", crosscheck_agreement),
        ("CLI determinism", cli_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
