//! The acceptance suite: thirteen end-to-end checks with fixed tolerances.
//!
//! Criteria 1 to 12 are independent numerical checks; criterion 13 is the
//! wall-clock and exit-status contract of the whole suite and is settled by
//! [`run_suite`].

use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{barta_bounds, certificate, mckean_report, random_test_field, BartaOptions};
use crate::comparison::{
    cheng_compare, cheng_corpus, random_warp, stability_check, submanifold_bound_check, trial_seed,
    wronskian_negativity, A2Data, ChengStatus, CorpusSpec, StabilityInput, StabilityVerdict, DEFAULT_MU_CELLS,
    DEFAULT_WARP_CELLS,
};
use crate::domain::{build_band, build_polar_domain, build_radial_domain, build_weighted_interval, DiscreteDomain};
use crate::error::Result;
use crate::quasilinear::{
    blowup_solution, solvability_gate, solve_dirichlet, EllipticProblem, Gate, QLStatus, DEFAULT_GATE_TOL,
};
use crate::radial::{model_ball_lambda1, DEFAULT_TOL};
use crate::report::{Params, Report, Verdict};
use crate::spaceform::ModelBall;
use crate::warp::WarpProfile;

pub const SUITE_TIME_LIMIT: Duration = Duration::from_secs(300);

/// Criterion ids and short names.
pub const CRITERIA: [(u8, &str); 13] = [
    (1, "hemisphere_eigenvalue"),
    (2, "flat_disk_bessel"),
    (3, "euclidean_scaling"),
    (4, "mckean_limit"),
    (5, "barta_sandwich"),
    (6, "vector_field_equality"),
    (7, "cheng_comparison"),
    (8, "bishop_monotonicity"),
    (9, "wronskian_negativity"),
    (10, "catenoid_submanifold_bound"),
    (11, "stability_threshold"),
    (12, "quasilinear_gate_and_solve"),
    (13, "suite_runtime_and_exit"),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcceptConfig {
    pub seed: u64,
    /// Warps per curvature in criteria 7 and 8.
    pub trials: usize,
    /// Random fields per domain in criterion 5.
    pub fields: usize,
}

impl Default for AcceptConfig {
    fn default() -> Self {
        Self { seed: 7, trials: 50, fields: 100 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub verdict: Verdict,
    pub summary: String,
    pub seconds: f64,
    pub detail: Value,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!("criterion {:>2} {:<28} {}  {}", self.id, self.name, self.verdict, self.summary)
    }

    /// Report envelope; timings are left out so the bytes depend only on
    /// the configuration.
    pub fn report(&self, config: &AcceptConfig) -> Report {
        let params = Params::new().with("criterion", self.id);
        let margin = if self.verdict.passed() { 1.0 } else { -1.0 };
        Report::new(&format!("accept_{:02}_{}", self.id, self.name), self.name, params, margin, self.verdict)
            .with_seed(config.seed)
            .with_detail(&self.detail)
            .with_config(config)
    }
}

/// `J₀(x)` from its power series; accurate to round-off for `x < 10`.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -x * x / 4.0;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..60 {
        term *= q / (k * k) as f64;
        sum += term;
    }
    sum
}

/// First positive zero of `J₀` by bisection on `[2, 3]`.
pub fn bessel_j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0, 3.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

type Check = (bool, String, Value);

fn hemisphere() -> Result<Check> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 2..=5usize {
        let start = Instant::now();
        let l = model_ball_lambda1(&ModelBall::new(1.0, n, FRAC_PI_2)?, DEFAULT_TOL)?.lambda1;
        let secs = start.elapsed().as_secs_f64();
        let err = (l - n as f64).abs();
        ok &= err < 1e-6 && secs < 1.0;
        rows.push(json!({"n": n, "lambda1": l, "error": err, "under_one_second": secs < 1.0}));
    }
    let worst = rows.iter().filter_map(|r| r["error"].as_f64()).fold(0.0, f64::max);
    Ok((ok, format!("max |lambda1 - n| = {worst:.2e}"), Value::Array(rows)))
}

fn flat_disk() -> Result<Check> {
    let oracle = bessel_j0_first_zero().powi(2);
    let l = model_ball_lambda1(&ModelBall::new(0.0, 2, 1.0)?, DEFAULT_TOL)?.lambda1;
    let err = (l - oracle).abs();
    Ok((
        err < 1e-5,
        format!("lambda1 = {l:.9}, oracle = {oracle:.9}"),
        json!({"lambda1": l, "oracle": oracle, "error": err}),
    ))
}

fn scaling() -> Result<Check> {
    let l1 = model_ball_lambda1(&ModelBall::new(0.0, 2, 1.0)?, DEFAULT_TOL)?.lambda1;
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for r in [0.5, 2.0, 4.0] {
        let lr = model_ball_lambda1(&ModelBall::new(0.0, 2, r)?, DEFAULT_TOL)?.lambda1;
        let rel = (lr - l1 / (r * r)).abs() / l1;
        worst = worst.max(rel);
        rows.push(json!({"r": r, "lambda1": lr, "relative_error": rel}));
    }
    Ok((worst < 1e-8, format!("max relative deviation {worst:.2e}"), Value::Array(rows)))
}

fn mckean() -> Result<Check> {
    let (two, _) = mckean_report(2, 50.0, DEFAULT_TOL)?;
    let (three, _) = mckean_report(3, 50.0, DEFAULT_TOL)?;
    let ok2 = two.lambda1 > 0.25 && two.lambda1 < 0.251;
    let ok3 = three.lambda1 > 1.0 && three.lambda1 < 1.004;
    Ok((
        ok2 && ok3,
        format!(
            "n=2: {:.7} {} (0.25, 0.251); n=3: {:.7} {} (1.0, 1.004)",
            two.lambda1,
            if ok2 { "in" } else { "outside" },
            three.lambda1,
            if ok3 { "in" } else { "outside" }
        ),
        json!({"n2": two, "n3": three}),
    ))
}

/// The five domains of the Barta sandwich.
pub fn barta_domains() -> Result<Vec<(&'static str, DiscreteDomain)>> {
    Ok(vec![
        ("flat_disk_radial", build_radial_domain(&WarpProfile::from_model(0.0, 1.0, 256)?, 2, 256)?),
        ("flat_disk_polar", build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 64)?, 64, 16)?),
        ("hyperbolic_ball_3d", build_radial_domain(&WarpProfile::from_model(-1.0, 2.0, 256)?, 3, 256)?),
        ("catenoid_profile", build_weighted_interval(-1.0, 1.0, 256, |_| 1.0, |u| u.cosh().powi(2))?),
        ("catenoid_band", build_band(-1.0, 1.0, 64, 16, f64::cosh)?),
    ])
}

fn barta(cfg: &AcceptConfig) -> Result<Check> {
    let domains = barta_domains()?;
    let (mut total, mut passed) = (0usize, 0usize);
    let mut rows = Vec::new();
    for (k, (name, d)) in domains.iter().enumerate() {
        let mut ok = 0usize;
        let mut tightest = f64::INFINITY;
        for j in 0..cfg.fields {
            let f = random_test_field(d, trial_seed(cfg.seed, (k * 1000 + j) as u64));
            let b = barta_bounds(d, &f, &BartaOptions::default())?;
            ok += b.verdict.passed() as usize;
            tightest = tightest.min(b.margin());
        }
        total += cfg.fields;
        passed += ok;
        rows.push(json!({"domain": name, "passed": ok, "trials": cfg.fields, "min_margin": tightest}));
    }
    Ok((passed == total, format!("{passed}/{total} fields sandwiched"), Value::Array(rows)))
}

fn vfield_equality() -> Result<Check> {
    let j2 = bessel_j0_first_zero().powi(2);
    let gap = |cells: usize| -> Result<f64> {
        let d = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, cells)?, cells, 16)?;
        Ok((certificate(&d, 1)?.lower - j2).abs())
    };
    let (g1, g2) = (gap(256)?, gap(512)?);
    let ratio = g1 / g2;
    Ok((
        g1 <= 0.3 && ratio >= 1.8,
        format!("gap {g1:.3e} (N=256), {g2:.3e} (N=512), ratio {ratio:.2}"),
        json!({"gap_256": g1, "gap_512": g2, "ratio": ratio, "oracle": j2}),
    ))
}

const CORPUS_R: f64 = 1.0;
const CORPUS_ROUGHNESS: f64 = 1.0;
const CORPUS_TOL: f64 = 1e-8;

/// The seeded warp corpus shared by criteria 7 and 8.
pub fn corpus_spec(c: f64, trials: usize) -> CorpusSpec {
    CorpusSpec { c, n: 2, r: CORPUS_R, roughness: CORPUS_ROUGHNESS, trials, cells: DEFAULT_WARP_CELLS, tol: CORPUS_TOL }
}

fn cheng(cfg: &AcceptConfig) -> Result<Check> {
    let (mut holds, mut total) = (0usize, 0usize);
    let mut rows = Vec::new();
    let mut equality = 0.0f64;
    for c in [-1.0, 0.0, 1.0] {
        let corpus = cheng_corpus(&corpus_spec(c, cfg.trials), cfg.seed)?;
        let ok = corpus.iter().filter(|r| r.status == ChengStatus::Holds).count();
        let min_margin = corpus.iter().map(|r| r.cheng_margin).fold(f64::INFINITY, f64::min);
        holds += ok;
        total += corpus.len();
        let smooth = cheng_compare(&random_warp(c, CORPUS_R, cfg.seed, 0.0)?, c, 2, CORPUS_TOL)?;
        let eq = smooth.margin.map_or(f64::INFINITY, f64::abs);
        equality = equality.max(eq);
        rows.push(
            json!({"c": c, "holds": ok, "trials": corpus.len(), "min_margin": min_margin, "equality_defect": eq}),
        );
    }
    Ok((
        holds == total && equality <= CORPUS_TOL,
        format!("{holds}/{total} warps satisfy the comparison; roughness-0 defect {equality:.1e}"),
        Value::Array(rows),
    ))
}

fn bishop(cfg: &AcceptConfig) -> Result<Check> {
    let (mut ok, mut total) = (0usize, 0usize);
    let mut worst = f64::INFINITY;
    for c in [-1.0, 0.0, 1.0] {
        for row in cheng_corpus(&corpus_spec(c, cfg.trials), cfg.seed)? {
            total += 1;
            ok += (row.bishop_slope >= -1e-8) as usize;
            worst = worst.min(row.bishop_slope);
        }
    }
    Ok((ok == total, format!("{ok}/{total} warps monotone, min slope {worst:.3e}"), json!({"min_slope": worst})))
}

/// The `(c, m, r)` lattice of criterion 9.
pub fn wronskian_lattice() -> Vec<(f64, usize, f64)> {
    let mut out = Vec::new();
    for c in [-1.0, 0.0, 1.0] {
        for m in 2..=4 {
            let radii: &[f64] = if c <= 0.0 { &[0.3, 0.7, 1.2, 2.0, 5.0] } else { &[0.3, 0.7, 1.2] };
            out.extend(radii.iter().map(|&r| (c, m, r)));
        }
    }
    out
}

fn wronskian() -> Result<Check> {
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;
    let mut rows = Vec::new();
    for (c, m, r) in wronskian_lattice() {
        let rep = wronskian_negativity(c, m, r, DEFAULT_MU_CELLS, 1e-12)?;
        ok &= rep.verdict.passed();
        worst = worst.max(rep.max_w);
        rows.push(
            json!({"c": c, "m": m, "r": r, "max_w": rep.max_w, "max_key": rep.max_key, "bracket_min": rep.bracket_min}),
        );
    }
    let n = rows.len();
    Ok((ok, format!("{n} lattice points, max W = {worst:.3e}"), Value::Array(rows)))
}

fn catenoid() -> Result<Check> {
    let mut ok = true;
    let mut rows = Vec::new();
    let mut min_margin = f64::INFINITY;
    for r in [1.2, 1.5, 2.0] {
        let rep = submanifold_bound_check(r, 1024, Some(16))?;
        ok &= rep.verdict.passed();
        min_margin = min_margin.min(rep.margin);
        rows.push(serde_json::to_value(&rep).unwrap_or(Value::Null));
    }
    Ok((ok, format!("min margin {min_margin:.4}"), Value::Array(rows)))
}

fn stability() -> Result<Check> {
    let run = |r| stability_check(&StabilityInput { n: 2, r, a2: A2Data::Sup(2.0) }, 512);
    let (a, b) = (run(1.5)?, run(1.75)?);
    let ok = a.verdict == StabilityVerdict::Stable
        && b.verdict == StabilityVerdict::Inconclusive
        && a.operator_min_eigenvalue > 0.0;
    Ok((
        ok,
        format!("r=1.5 {:?} (min eig {:.4}), r=1.75 {:?}", a.verdict, a.operator_min_eigenvalue, b.verdict),
        json!({"r_1_5": a, "r_1_75": b}),
    ))
}

fn quasilinear() -> Result<Check> {
    let d = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 256)?, 256, 16)?;
    let l = d.ground_state()?.lambda;
    let mut ok = true;
    let mut rows = Vec::new();
    for frac in [0.0, 0.5, 0.9] {
        let p = EllipticProblem::constant(&d, frac * l, 0.0)?;
        let gate = solvability_gate(&p, DEFAULT_GATE_TOL)?.gate;
        let s = solve_dirichlet(&p, 1e-4)?;
        ok &= gate == Gate::Solvable && s.status == QLStatus::Converged && s.residual < 1e-4;
        rows.push(json!({"F_over_lambda1": frac, "gate": gate, "residual": s.residual, "status": s.status}));
    }
    let over = solvability_gate(&EllipticProblem::constant(&d, 1.1 * l, 0.0)?, DEFAULT_GATE_TOL)?.gate;
    ok &= over == Gate::NoSolutionCertificate;
    let (blow, _) = blowup_solution(&d, 1, 1e-2)?;
    ok &= blow.residual < 1e-2;
    Ok((
        ok,
        format!("F = 1.1 lambda1 -> {over:?}; blow-up defect {:.2e}", blow.residual),
        json!({"sweep": rows, "supercritical_gate": over, "blowup_defect": blow.residual, "lambda1": l}),
    ))
}

/// Runs one of criteria 1 to 12.
pub fn run_criterion(id: u8, cfg: &AcceptConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let (ok, summary, detail) = match id {
        1 => hemisphere()?,
        2 => flat_disk()?,
        3 => scaling()?,
        4 => mckean()?,
        5 => barta(cfg)?,
        6 => vfield_equality()?,
        7 => cheng(cfg)?,
        8 => bishop(cfg)?,
        9 => wronskian()?,
        10 => catenoid()?,
        11 => stability()?,
        12 => quasilinear()?,
        _ => return Err(crate::Error::InvalidInput(format!("criterion {id} is not a standalone check (1..=12)"))),
    };
    let name = CRITERIA[id as usize - 1].1;
    Ok(CriterionOutcome {
        id,
        name,
        verdict: Verdict::from_bool(ok),
        summary,
        seconds: start.elapsed().as_secs_f64(),
        detail,
    })
}

/// Runs criteria 1 to 12 in order, then records criterion 13: the suite
/// finished within [`SUITE_TIME_LIMIT`] and every other criterion passed
/// (the condition for exit code 0). A criterion that errors counts as a
/// failure.
pub fn run_suite(cfg: &AcceptConfig, mut progress: impl FnMut(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    let start = Instant::now();
    let mut out = Vec::with_capacity(13);
    for &(id, name) in &CRITERIA[..12] {
        let outcome = run_criterion(id, cfg).unwrap_or_else(|e| CriterionOutcome {
            id,
            name,
            verdict: Verdict::Fail,
            summary: format!("error: {e}"),
            seconds: 0.0,
            detail: Value::Null,
        });
        progress(&outcome);
        out.push(outcome);
    }
    let elapsed = start.elapsed();
    let failed: Vec<u8> = out.iter().filter(|o| !o.verdict.passed()).map(|o| o.id).collect();
    let in_time = elapsed < SUITE_TIME_LIMIT;
    let summary = if failed.is_empty() {
        format!("{:.1} s, exit 0", elapsed.as_secs_f64())
    } else {
        format!("{:.1} s (within limit: {in_time}), exit 1 because of {failed:?}", elapsed.as_secs_f64())
    };
    let last = CriterionOutcome {
        id: 13,
        name: CRITERIA[12].1,
        verdict: Verdict::from_bool(in_time && failed.is_empty()),
        summary,
        seconds: elapsed.as_secs_f64(),
        detail: json!({"within_time_limit": in_time, "failed": failed}),
    };
    progress(&last);
    out.push(last);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_zero() {
        assert!((bessel_j0(0.0) - 1.0).abs() < 1e-16);
        assert!((bessel_j0_first_zero() - 2.404825557695773).abs() < 1e-13);
    }

    #[test]
    fn lattice_size() {
        assert_eq!(wronskian_lattice().len(), 9 + 15 + 15);
    }

    #[test]
    fn criterion_ids_in_order() {
        assert!(CRITERIA.iter().enumerate().all(|(k, c)| c.0 as usize == k + 1));
        assert!(run_criterion(13, &AcceptConfig::default()).is_err());
    }
}
