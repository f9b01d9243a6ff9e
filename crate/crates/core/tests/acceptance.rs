//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints exactly one PASS/FAIL line, then exits nonzero if any
//! criterion failed.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use qball::numerics::{
    ball_norm, boundary_norm, circle_value, matrix_norm_level_k, max_principle_report, pbw_rank, MatPoly,
    NormEstimate, Schedule, Side, DEFAULT_TOL, MONOTONE_SLACK,
};
use qball::repr::{
    boundary_generators, certify_compression, fock_generators, relation_residual, rep_apply, BoundaryConfig,
    FockConfig,
};
use qball::rewrite::{normalize, normalize_with, CanonicalMonomial, Strategy};
use qball::sample::random_poly;
use qball::{AlgebraContext, Mode, NCPoly, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: f64 = 0.5;
const FUZZ_SEED: u64 = 20_240_917;
const CATALOG_SEED: u64 = 7;
const FUZZ_COUNT: usize = 500;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn ctx(n: usize) -> AlgebraContext {
    AlgebraContext::ball(n).unwrap()
}

fn z(n: usize, j: usize) -> NCPoly {
    ctx(n).z(j).unwrap()
}

fn zs(n: usize, j: usize) -> NCPoly {
    ctx(n).z_star(j).unwrap()
}

fn q_scalar() -> Scalar {
    Scalar::q_pow(1)
}

fn schedule(n: usize) -> Schedule {
    match n {
        1 => Schedule::doubling(&[10, 20, 40], Some(4096)).unwrap(),
        _ => Schedule::doubling(&[4, 8, 12], Some(64)).unwrap(),
    }
}

fn fuzz_inputs() -> Vec<NCPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(FUZZ_SEED);
    (0..FUZZ_COUNT)
        .map(|_| {
            let n = rng.random_range(1..=3);
            random_poly(&mut rng, n, 4, false)
        })
        .collect()
}

fn random_entries(n: usize, holomorphic: bool, count: usize) -> Vec<(String, NCPoly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(CATALOG_SEED + n as u64 + if holomorphic { 0 } else { 100 });
    let mut out = Vec::new();
    while out.len() < count {
        let p = random_poly(&mut rng, n, 3, holomorphic);
        if p.degree() >= 1 {
            out.push((p.to_string(), p));
        }
    }
    out
}

/// Holomorphic catalog grouped by number of generators.
fn holomorphic_catalog(n: usize) -> Vec<(String, NCPoly)> {
    let mut out = Vec::new();
    match n {
        1 => out.push(("1 + z1".into(), &NCPoly::one(1) + &z(1, 1))),
        _ => {
            out.push(("z1 + z2".into(), &z(2, 1) + &z(2, 2)));
            out.push(("z1*z2 + q*z2^2".into(), &(&z(2, 1) * &z(2, 2)) + &z(2, 2).pow(2).scale(&q_scalar())));
        }
    }
    out.extend(random_entries(n, true, 3));
    out
}

fn full_catalog(n: usize) -> Vec<(String, NCPoly)> {
    let mut out = holomorphic_catalog(n);
    out.push(("1 - z1*z1'".into(), &NCPoly::one(n) - &(&z(n, 1) * &zs(n, 1))));
    out.push(("1 - sum z_k z_k'".into(), ctx(n).defect()));
    out.push(("z1'".into(), zs(n, 1)));
    out.push(("z1*z1' + z1'^2".into(), &(&z(n, 1) * &zs(n, 1)) + &zs(n, 1).pow(2)));
    if n == 2 {
        out.push(("z1*z2' + z2*z1'".into(), &(&z(2, 1) * &zs(2, 2)) + &(&z(2, 2) * &zs(2, 1))));
    }
    out.extend(random_entries(n, false, 3));
    out
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for q in [0.25, 0.5, 0.75] {
        for n in 1..=3 {
            let rep = fock_generators(&FockConfig::new(n, 8, q).unwrap()).unwrap();
            let r = relation_residual(&rep, &ctx(n)).unwrap();
            ensure(r < 1e-12, || format!("Fock n={n} q={q}: residual {r:e}"))?;
            worst = worst.max(r);
        }
        for n in 2..=3 {
            let rep = boundary_generators(&BoundaryConfig::new(n, 8, 8, q).unwrap()).unwrap();
            let r = relation_residual(&rep, &AlgebraContext::sphere(n).unwrap()).unwrap();
            ensure(r < 1e-12, || format!("boundary n={n} q={q}: residual {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("max residual {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for (i, p) in fuzz_inputs().iter().enumerate() {
        let n = p.n();
        let nf = normalize(p, &ctx(n)).unwrap();
        let rep = fock_generators(&FockConfig::new(n, 6, Q).unwrap()).unwrap();
        let cert = certify_compression(&rep, p.degree().max(nf.degree())).unwrap();
        let a = cert.compress_columns(&rep_apply(p, &rep).unwrap());
        let b = cert.compress_columns(&rep_apply(&nf, &rep).unwrap());
        let diff = qball::numerics::operator_norm(&a.add_scaled(&b, Complex64::new(-1.0, 0.0)), 1e-10).unwrap();
        ensure(diff < 1e-10, || format!("input #{i} `{p}`: difference {diff:e}"))?;
        worst = worst.max(diff);
    }
    Ok(format!("{FUZZ_COUNT} inputs, max difference {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let strategies =
        [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(1), Strategy::Random(2), Strategy::Random(3)];
    for (i, p) in fuzz_inputs().iter().enumerate() {
        for mode in [Mode::Ball, Mode::Sphere] {
            let c = AlgebraContext::new(p.n(), mode).unwrap();
            let reference = normalize(p, &c).unwrap();
            for s in strategies {
                let nf = normalize_with(p, &c, s).unwrap();
                ensure(nf == reference, || format!("input #{i} `{p}` ({mode}, {s:?}): `{nf}` vs `{reference}`"))?;
            }
        }
    }
    let (z1, z1s) = (z(1, 1), zs(1, 1));
    let lhs = &(&(&z1s * &z1) * &z1s) * &z1;
    let q2 = Scalar::q_pow(2);
    let omq2 = Scalar::one_minus_q2();
    let rhs = &(&(&z1.pow(2) * &z1s.pow(2)).scale(&Scalar::q_pow(6))
        + &(&z1 * &z1s).scale(&(&omq2 * &(&Scalar::q_pow(4) + &(&q2 + &q2)))))
        + &NCPoly::constant(1, &omq2 * &omq2);
    let got = normalize(&lhs, &ctx(1)).unwrap();
    ensure(got == rhs, || format!("golden: got `{got}`, want `{rhs}`"))?;
    Ok(format!("{FUZZ_COUNT} inputs x 2 modes x {} strategies agree; golden ok", strategies.len()))
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for n in 1..=2 {
        let d = ctx(n).defect();
        let s = schedule(n);
        let b = boundary_norm(&d, Q, &s, DEFAULT_TOL).unwrap().value;
        let a = ball_norm(&d, Q, &s, DEFAULT_TOL).unwrap().value;
        ensure(b < 1e-12, || format!("n={n}: boundary {b:e}"))?;
        ensure((a - 1.0).abs() <= 1e-9, || format!("n={n}: ball {a}"))?;
        parts.push(format!("n={n} ball {a:.12} boundary {b:.1e}"));
    }
    Ok(parts.join("; "))
}

/// Returns the gap and how far the Fock bound alone stays below the boundary.
fn gap_check(label: &str, f: &MatPoly, n: usize, threshold: f64) -> Result<(f64, f64), String> {
    let s = schedule(n);
    let report = max_principle_report(label, f, Q, &s, DEFAULT_TOL).map_err(|e| format!("{label}: {e}"))?;
    ensure(report.gap <= threshold, || format!("{label}: gap {:.3e} > {threshold:e} (gaps {:?})", report.gap, report.gaps))?;
    ensure(report.gaps_nonincreasing(MONOTONE_SLACK), || format!("{label}: gaps increase {:?}", report.gaps))?;
    let last = report.ball.points.last().unwrap();
    let deficit = last.boundary.unwrap() - last.fock.unwrap();
    Ok((report.gap, deficit))
}

fn criterion_5() -> Outcome {
    let mut worst = [0.0f64; 2];
    let mut deficit = [0.0f64; 2];
    for n in 1..=2 {
        let threshold = if n == 1 { 1e-3 } else { 1e-2 };
        for (label, f) in holomorphic_catalog(n) {
            let (g, d) = gap_check(&label, &MatPoly::scalar(f), n, threshold)?;
            worst[n - 1] = worst[n - 1].max(g);
            deficit[n - 1] = deficit[n - 1].max(d);
        }
    }
    Ok(format!(
        "max gap n=1 {:.2e}, n=2 {:.2e}; Fock part below boundary by at most {:.2e} / {:.2e}",
        worst[0], worst[1], deficit[0], deficit[1]
    ))
}

fn criterion_6() -> Outcome {
    let (z1, z2, o) = (z(2, 1), z(2, 2), NCPoly::zero(2));
    let cases = [
        ("[z1, z2; 0, z1]", MatPoly::new(vec![vec![z1.clone(), z2.clone()], vec![o.clone(), z1.clone()]]).unwrap()),
        ("[z1, z2; 0, 0]", MatPoly::new(vec![vec![z1.clone(), z2.clone()], vec![o.clone(), o.clone()]]).unwrap()),
        ("[z1, 0; 0, z2]", MatPoly::new(vec![vec![z1.clone(), o.clone()], vec![o.clone(), z2.clone()]]).unwrap()),
    ];
    let mut worst = 0.0f64;
    let mut deficit = 0.0f64;
    for (label, f) in &cases {
        let (g, d) = gap_check(label, f, 2, 2e-2)?;
        worst = worst.max(g);
        deficit = deficit.max(d);
    }
    // the row matrix has norm 1 on both sides
    let row = &cases[1].1;
    for side in [Side::Ball, Side::Boundary] {
        let v = matrix_norm_level_k(row, side, Q, &schedule(2), DEFAULT_TOL).unwrap().value;
        ensure((v - 1.0).abs() <= 1e-6, || format!("row {side:?}: {v}"))?;
    }
    Ok(format!("max gap {worst:.2e}; Fock part below boundary by at most {deficit:.2e}"))
}

fn criterion_7() -> Outcome {
    let grid = 4096;
    let mut worst = 0.0f64;
    for (label, f) in holomorphic_catalog(1) {
        let b = boundary_norm(&f, Q, &schedule(1), DEFAULT_TOL).unwrap().value;
        let oracle = (0..grid)
            .map(|k| circle_value(&f, Q, 2.0 * std::f64::consts::PI * k as f64 / grid as f64).unwrap().norm())
            .fold(0.0, f64::max);
        let err = (b - oracle).abs();
        ensure(err <= 1e-6, || format!("{label}: boundary {b} vs grid {oracle}"))?;
        worst = worst.max(err);
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    let check = |label: &str, side: &str, e: &NormEstimate| {
        ensure(e.is_monotone(MONOTONE_SLACK), || format!("{label} {side}: not monotone {:?}", e.values()))
    };
    for n in 1..=2 {
        let s = schedule(n);
        for (label, f) in full_catalog(n) {
            let a = ball_norm(&f, Q, &s, DEFAULT_TOL).unwrap();
            let b = boundary_norm(&f, Q, &s, DEFAULT_TOL).unwrap();
            check(&label, "ball", &a)?;
            check(&label, "boundary", &b)?;
            for (pa, pb) in a.points.iter().zip(&b.points) {
                ensure(pa.value >= pb.value - 1e-9, || {
                    format!("{label}: ball {} < boundary {} at N={}", pa.value, pb.value, pa.truncation)
                })?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} catalog entries"))
}

fn criterion_9() -> Outcome {
    let c = ctx(2);
    let s = Schedule::doubling(&[8], None).unwrap();
    let mut smallest = f64::INFINITY;
    for m in CanonicalMonomial::enumerate(&c, 3) {
        let v = ball_norm(&m.to_poly(), Q, &s, DEFAULT_TOL).unwrap().value;
        ensure(v > 1e-6, || format!("{}: ball norm {v:e}", m.to_word()))?;
        smallest = smallest.min(v);
    }
    let r = pbw_rank(&c, 3, 8, None, Q).unwrap();
    ensure(r.min_singular_value > 1e-8, || format!("Gram min singular value {:e}", r.min_singular_value))?;
    Ok(format!(
        "min monomial norm {smallest:.3e}; Gram min singular value {:.3e}, rank {}/{}",
        r.min_singular_value, r.rank, r.monomials
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("representation soundness", criterion_1),
        ("rewrite/representation cross-validation", criterion_2),
        ("confluence", criterion_3),
        ("boundary ideal", criterion_4),
        ("maximum principle, level 1", criterion_5),
        ("complete isometry, level 2", criterion_6),
        ("classical oracle n=1", criterion_7),
        ("monotonicity and domination", criterion_8),
        ("faithfulness probe", criterion_9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
