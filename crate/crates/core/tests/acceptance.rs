//! Acceptance gate. Prints one line per criterion and exits non-zero when
//! any criterion fails. Oracles (Bessel zero, hemisphere mode, random test
//! fields) are computed here, independently of the library.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tonelab::bounds::{barta_bounds, certificate, mckean_report, BartaOptions};
use tonelab::comparison::{
    bracket_positivity, cheng_compare, cheng_corpus, random_warp, stability_check, submanifold_bound_check,
    wronskian_negativity, A2Data, ChengStatus, CorpusSpec, StabilityInput, StabilityVerdict,
};
use tonelab::domain::{
    build_band, build_polar_domain, build_radial_domain, build_weighted_interval, DiscreteDomain, DomainKind,
};
use tonelab::quasilinear::{blowup_solution, solvability_gate, solve_dirichlet, EllipticProblem, Gate, QLStatus};
use tonelab::radial::model_ball_lambda1;
use tonelab::spaceform::ModelBall;
use tonelab::warp::WarpProfile;

const SEED: u64 = 7;

/// `J₀(x) = (1/π) ∫₀^π cos(x sin θ) dθ`; the trapezoid rule is spectrally
/// accurate for this periodic integrand.
fn j0_integral(x: f64) -> f64 {
    let n = 256;
    let s: f64 = (0..n).map(|k| (x * (PI * k as f64 / n as f64).sin()).cos()).sum();
    s / n as f64
}

fn j01_squared() -> f64 {
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if j0_integral(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).powi(2)
}

fn lambda(c: f64, n: usize, r: f64) -> f64 {
    model_ball_lambda1(&ModelBall::new(c, n, r).unwrap(), 1e-10).unwrap().lambda1
}

fn disk(cells: usize, n_theta: usize) -> DiscreteDomain {
    build_polar_domain(&WarpProfile::from_model(0.0, 1.0, cells).unwrap(), cells, n_theta).unwrap()
}

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn c1_hemisphere() -> Outcome {
    // v = cos t solves v'' + (n-1) cot t v' + n v = 0.
    let mut oracle_defect = 0.0f64;
    for n in 2..=5 {
        for k in 1..100 {
            let t = FRAC_PI_2 * k as f64 / 100.0;
            let d = -t.cos() + (n - 1) as f64 * (t.cos() / t.sin()) * -t.sin() + n as f64 * t.cos();
            oracle_defect = oracle_defect.max(d.abs());
        }
    }
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for n in 2..=5 {
        let start = Instant::now();
        let l = lambda(1.0, n, FRAC_PI_2);
        slowest = slowest.max(start.elapsed());
        worst = worst.max((l - n as f64).abs());
    }
    (
        oracle_defect < 1e-12 && worst < 1e-6 && slowest < Duration::from_secs(1),
        format!("max |lambda1 - n| = {worst:.2e}, slowest solve {:.3} s", slowest.as_secs_f64()),
    )
}

fn c2_bessel() -> Outcome {
    let oracle = j01_squared();
    let l = lambda(0.0, 2, 1.0);
    ((l - oracle).abs() < 1e-5, format!("lambda1 = {l:.9}, j01^2 = {oracle:.9}"))
}

fn c3_scaling() -> Outcome {
    let l1 = lambda(0.0, 2, 1.0);
    let worst = [0.5, 2.0, 4.0].iter().map(|&r| (lambda(0.0, 2, r) - l1 / (r * r)).abs()).fold(0.0, f64::max);
    (worst < 1e-8 * l1, format!("max |lambda1(r) - lambda1(1)/r^2| = {worst:.2e}"))
}

fn c4_mckean() -> Outcome {
    let (two, _) = mckean_report(2, 50.0, 1e-10).unwrap();
    let (three, _) = mckean_report(3, 50.0, 1e-10).unwrap();
    let ok2 = two.lambda1 > 0.25 && two.lambda1 < 0.251;
    let ok3 = three.lambda1 > 1.0 && three.lambda1 < 1.004;
    (ok2 && ok3, format!("n=2: {:.7} (want (0.25, 0.251)), n=3: {:.7} (want (1.0, 1.004))", two.lambda1, three.lambda1))
}

/// Positive field vanishing on the boundary: a power of a boundary
/// distance times a random positive trigonometric factor.
fn test_field(d: &DiscreteDomain, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let p: f64 = rng.random_range(0.3..3.0);
    let modes: Vec<(f64, f64, f64)> =
        (1..=5).map(|k| (rng.random_range(0.0..0.9) / k as f64, rng.random_range(0.0..TAU), k as f64)).collect();
    let norm: f64 = modes.iter().map(|m| m.0).sum::<f64>().max(1.0);
    let theta_mode = (rng.random_range(0.0..0.5), rng.random_range(1..4) as f64);
    let (lo, hi) = d.coords().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, c| (a.0.min(c.0), a.1.max(c.0)));
    let radial = matches!(d.kind(), DomainKind::Radial1D | DomainKind::Polar2D);
    d.sample(|t, th| {
        let s = (t - lo) / (hi - lo);
        let dist = if radial { 1.0 - s } else { s * (1.0 - s) };
        let wave: f64 = modes.iter().map(|&(a, ph, k)| a * (k * s * PI + ph).sin()).sum::<f64>() / norm;
        dist.max(0.0).powf(p) * (1.0 + 0.95 * wave) * (1.0 + theta_mode.0 * s * (theta_mode.1 * th).cos())
    })
}

fn c5_barta() -> Outcome {
    let domains = [
        build_radial_domain(&WarpProfile::from_model(0.0, 1.0, 200).unwrap(), 2, 200).unwrap(),
        build_radial_domain(&WarpProfile::from_model(1.0, 1.2, 200).unwrap(), 4, 200).unwrap(),
        disk(48, 12),
        build_weighted_interval(-0.8, 0.8, 200, |x| 1.0 + x * x, |u| u.cosh().powi(2)).unwrap(),
        build_band(-0.9, 0.9, 48, 12, f64::cosh).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut ok, mut total) = (0, 0);
    for d in &domains {
        let l = d.ground_state().unwrap().lambda;
        for _ in 0..100 {
            let f = test_field(d, &mut rng);
            let b = barta_bounds(d, &f, &BartaOptions::default()).unwrap();
            let slack = 1e-9 * l;
            total += 1;
            ok += (b.lower <= l + slack && b.upper.is_none_or(|u| l <= u + slack)) as usize;
        }
    }
    (ok == 500 && total == 500, format!("{ok}/{total} sandwiched"))
}

fn c6_certificate() -> Outcome {
    let oracle = j01_squared();
    let gap = |cells| (certificate(&disk(cells, 16), 1).unwrap().lower - oracle).abs();
    let (g1, g2) = (gap(256), gap(512));
    (g1 <= 0.3 && g1 / g2 >= 1.8, format!("gap {g1:.3e} (N=256) -> {g2:.3e} (N=512), ratio {:.2}", g1 / g2))
}

fn corpus(c: f64) -> CorpusSpec {
    CorpusSpec { c, n: 2, r: 1.0, roughness: 1.0, trials: 50, cells: 1024, tol: 1e-8 }
}

fn c7_cheng() -> Outcome {
    let mut holds = 0;
    let mut equality = 0.0f64;
    for c in [-1.0, 0.0, 1.0] {
        let rows = cheng_corpus(&corpus(c), SEED).unwrap();
        holds += rows.iter().filter(|r| r.status == ChengStatus::Holds && r.cheng_margin >= -1e-8).count();
        let model = cheng_compare(&random_warp(c, 1.0, SEED, 0.0).unwrap(), c, 2, 1e-8).unwrap();
        equality = equality.max(model.margin.unwrap().abs());
    }
    (holds == 150 && equality <= 1e-8, format!("{holds}/150 hold, roughness-0 |margin| = {equality:.1e}"))
}

fn c8_bishop() -> Outcome {
    let mut ok = 0;
    let mut worst = f64::INFINITY;
    for c in [-1.0, 0.0, 1.0] {
        for row in cheng_corpus(&corpus(c), SEED).unwrap() {
            ok += (row.bishop_slope >= -1e-8) as usize;
            worst = worst.min(row.bishop_slope);
        }
    }
    (ok == 150, format!("{ok}/150 monotone, min (f/S_c)' = {worst:.3e}"))
}

fn c9_wronskian() -> Outcome {
    let mut cases = 0;
    let mut ok = 0;
    let mut worst = f64::NEG_INFINITY;
    for c in [-1.0, 0.0, 1.0] {
        for m in 2..=4 {
            let radii: &[f64] = if c <= 0.0 { &[0.3, 0.7, 1.2, 2.0, 5.0] } else { &[0.3, 0.7, 1.2] };
            for &r in radii {
                let w = wronskian_negativity(c, m, r, 4096, 1e-12).unwrap();
                let negative = w.w[1..w.w.len() - 1].iter().all(|&x| x < 0.0);
                let bracket = c == 0.0 || bracket_positivity(c, m, w.lambda1, r, 4096).unwrap().min > 0.0;
                cases += 1;
                ok += (negative && bracket) as usize;
                worst = worst.max(w.max_w);
            }
        }
    }
    (ok == cases, format!("{ok}/{cases} lattice points, max W = {worst:.3e}"))
}

fn c10_catenoid() -> Outcome {
    let j2 = j01_squared();
    let mut ok = true;
    let mut msg = Vec::new();
    for r in [1.2, 1.5, 2.0] {
        let rep = submanifold_bound_check(r, 1024, Some(16)).unwrap();
        let bound_ok = (rep.bound - j2 / (r * r)).abs() < 1e-6;
        let gap = rep.discretization_gap.unwrap();
        ok &= bound_ok && rep.lambda_surface - j2 / (r * r) > 0.0 && gap < 1e-3;
        msg.push(format!("r={r}: {:.4} >= {:.4}", rep.lambda_surface, j2 / (r * r)));
    }
    (ok, msg.join(", "))
}

fn c11_stability() -> Outcome {
    let run = |r| stability_check(&StabilityInput { n: 2, r, a2: A2Data::Sup(2.0) }, 512).unwrap();
    let (a, b) = (run(1.5), run(1.75));
    (
        a.verdict == StabilityVerdict::Stable
            && b.verdict == StabilityVerdict::Inconclusive
            && a.operator_min_eigenvalue > 0.0,
        format!("r=1.5 {:?} (min eig {:.4}), r=1.75 {:?}", a.verdict, a.operator_min_eigenvalue, b.verdict),
    )
}

fn c12_quasilinear() -> Outcome {
    let d = disk(256, 16);
    let l = d.ground_state().unwrap().lambda;
    let mut ok = true;
    let mut worst = 0.0f64;
    for frac in [0.0, 0.5, 0.9] {
        let p = EllipticProblem::constant(&d, frac * l, 0.0).unwrap();
        ok &= solvability_gate(&p, 1e-6).unwrap().gate == Gate::Solvable;
        let s = solve_dirichlet(&p, 1e-4).unwrap();
        ok &= s.status == QLStatus::Converged && s.residual < 1e-4 && s.min_f > 0.0;
        worst = worst.max(s.residual);
    }
    let over = solvability_gate(&EllipticProblem::constant(&d, 1.1 * l, 0.0).unwrap(), 1e-6).unwrap().gate;
    ok &= over == Gate::NoSolutionCertificate;
    let (blow, lb) = blowup_solution(&d, 1, 1e-2).unwrap();
    ok &= blow.residual < 1e-2 && lb == l;
    (ok, format!("max residual {worst:.2e}, F=1.1 lambda1 -> {over:?}, blow-up defect {:.2e}", blow.residual))
}

fn c13_suite() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tonelab"))
        .args(["accept", "--seed", "7"])
        .env_remove("TONELAB_OUT_DIR")
        .output()
        .expect("run tonelab accept");
    let secs = start.elapsed().as_secs_f64();
    let code = out.status.code().unwrap_or(-1);
    (code == 0 && secs < 300.0, format!("accept finished in {secs:.1} s with exit code {code}"))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("hemisphere eigenvalue", c1_hemisphere),
        ("flat disk vs Bessel oracle", c2_bessel),
        ("euclidean scaling", c3_scaling),
        ("hyperbolic limit", c4_mckean),
        ("barta sandwich", c5_barta),
        ("vector-field equality", c6_certificate),
        ("cheng comparison", c7_cheng),
        ("bishop monotonicity", c8_bishop),
        ("wronskian negativity", c9_wronskian),
        ("catenoid submanifold bound", c10_catenoid),
        ("stability threshold", c11_stability),
        ("quasilinear gate and solve", c12_quasilinear),
        ("accept suite", c13_suite),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = run();
        println!("criterion {:>2} [{}] {name}: {detail}", k + 1, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 13 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
