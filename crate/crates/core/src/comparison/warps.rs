//! Random warps satisfying `K ≤ c`, the eigenvalue comparison against the
//! model ball, and volume-density monotonicity.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::radial::{warped_ball_lambda1, RadialOperator, ShootingSolver};
use crate::report::{Params, Verdict};
use crate::spaceform::{validate_ball, BallContext, ComparisonFunctions, ModelBall};
use crate::warp::{radial_curvature, WarpProfile};

pub const DEFAULT_WARP_CELLS: usize = 1024;
/// Allowed excess of the sampled radial curvature over `c`.
pub const CURVATURE_TOL: f64 = 1e-8;
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of trial `index` under master seed `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    master ^ index.wrapping_mul(GOLDEN_GAMMA)
}

/// Nonnegative forcing `q(t) = ρ (t/r)² Σ_{k=1}^{4} a_k (1 + sin(kπt/r + φ_k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forcing {
    pub roughness: f64,
    pub r: f64,
    pub amp: [f64; 4],
    pub phase: [f64; 4],
}

impl Forcing {
    pub fn draw(r: f64, roughness: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amp = [0.0; 4];
        let mut phase = [0.0; 4];
        for k in 0..4 {
            amp[k] = rng.random::<f64>() / (k + 1) as f64;
            phase[k] = rng.random_range(0.0..2.0 * PI);
        }
        Self { roughness, r, amp, phase }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = t / self.r;
        let wave: f64 = (0..4).map(|k| self.amp[k] * (1.0 + ((k + 1) as f64 * PI * s + self.phase[k]).sin())).sum();
        self.roughness * s * s * wave
    }
}

/// Warp solving `f'' = -c f + q`, `f(0) = 0`, `f'(0) = 1` for a seeded
/// nonnegative `q`, so `-f''/f ≤ c`. Zero roughness returns `S_c`.
pub fn random_warp(c: f64, r: f64, seed: u64, roughness: f64) -> Result<WarpProfile> {
    random_warp_on(c, r, seed, roughness, DEFAULT_WARP_CELLS)
}

pub fn random_warp_on(c: f64, r: f64, seed: u64, roughness: f64, cells: usize) -> Result<WarpProfile> {
    if !(roughness >= 0.0) || !roughness.is_finite() {
        return Err(Error::InvalidInput(format!("roughness {roughness} must be a non-negative number")));
    }
    validate_ball(&ModelBall { c, n: 2, r }, BallContext::Cheng).map_err(|v| Error::InvalidBall(v.to_string()))?;
    if roughness == 0.0 {
        return WarpProfile::from_model(c, r, cells);
    }
    let q = Forcing::draw(r, roughness, seed);
    let h = r / cells as f64;
    const SUB: usize = 4;
    let dt = h / SUB as f64;
    let rhs = |t: f64, y: (f64, f64)| (y.1, -c * y.0 + q.eval(t));
    let mut f = Vec::with_capacity(cells + 1);
    let mut df = Vec::with_capacity(cells + 1);
    let mut y = (0.0, 1.0);
    f.push(y.0);
    df.push(y.1);
    for i in 0..cells {
        for j in 0..SUB {
            let t = i as f64 * h + j as f64 * dt;
            let k1 = rhs(t, y);
            let k2 = rhs(t + 0.5 * dt, (y.0 + 0.5 * dt * k1.0, y.1 + 0.5 * dt * k1.1));
            let k3 = rhs(t + 0.5 * dt, (y.0 + 0.5 * dt * k2.0, y.1 + 0.5 * dt * k2.1));
            let k4 = rhs(t + dt, (y.0 + dt * k3.0, y.1 + dt * k3.1));
            y.0 += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            y.1 += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        f.push(y.0);
        df.push(y.1);
    }
    let d2f = (0..=cells).map(|i| -c * f[i] + q.eval(i as f64 * h)).collect();
    WarpProfile::from_samples(r, f, df, d2f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChengStatus {
    Holds,
    Violated,
    HypothesisViolated,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChengReport {
    pub status: ChengStatus,
    pub c: f64,
    pub n: usize,
    pub r: f64,
    /// `max_i (K_i - c)`.
    pub curvature_excess: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_warp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_model: Option<f64>,
    /// `λ₁(warp) - λ₁(model)`, absent when the hypothesis fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub tol: f64,
}

impl ChengReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.status != ChengStatus::Violated)
    }
}

/// Compares `λ₁` of the warped ball with the model ball of curvature `c`
/// and the same radius, when the radial curvature of the warp is `≤ c`.
pub fn cheng_compare(warp: &WarpProfile, c: f64, n: usize, tol: f64) -> Result<ChengReport> {
    let r = warp.radius();
    let ball = ModelBall::new(c, n, r)?;
    let excess = radial_curvature(warp).iter().map(|k| k - c).fold(f64::NEG_INFINITY, f64::max);
    let mut report = ChengReport {
        status: ChengStatus::HypothesisViolated,
        c,
        n,
        r,
        curvature_excess: excess,
        lambda_warp: None,
        lambda_model: None,
        margin: None,
        tol,
    };
    if excess > CURVATURE_TOL {
        return Ok(report);
    }
    let solve_tol = (tol * 1e-2).max(1e-13);
    let lw = warped_ball_lambda1(warp, n, solve_tol)?.lambda1;
    let lm = ShootingSolver::default().solve(&RadialOperator::model(&ball, warp.n_cells()), solve_tol)?.lambda1;
    report.lambda_warp = Some(lw);
    report.lambda_model = Some(lm);
    report.margin = Some(lw - lm);
    report.status = if lw >= lm - tol { ChengStatus::Holds } else { ChengStatus::Violated };
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct BishopReport {
    pub c: f64,
    pub n: usize,
    /// `min_i (f/S_c)'(t_i)` over `(0, r]`.
    pub min_ratio_slope: f64,
    /// `min_i (f^{n-1} - S_c^{n-1})(t_i)`.
    pub min_density_excess: f64,
    /// Nodes where `f/S_c = 1` within `tol`.
    pub rigid_nodes: usize,
    /// `f = S_c` within `tol` at every node up to the last rigid one.
    pub rigidity_consistent: bool,
    pub tol: f64,
    pub verdict: Verdict,
}

/// Checks that `f/S_c` and `f^{n-1}/S_c^{n-1}` are nondecreasing and
/// that `f^{n-1} ≥ S_c^{n-1}`.
pub fn bishop_check(warp: &WarpProfile, c: f64, n: usize, tol: f64) -> Result<BishopReport> {
    ModelBall::new(c, n, warp.radius())?;
    let cf = ComparisonFunctions::new(c);
    let p = (n - 1) as i32;
    let (mut slope, mut excess) = (f64::INFINITY, f64::INFINITY);
    let mut last_rigid = None;
    let mut rigid_nodes = 0;
    for i in 1..=warp.n_cells() {
        let t = warp.t(i);
        let (s, ds) = (cf.sn(t), cf.cn(t));
        let (f, df) = (warp.f()[i], warp.df()[i]);
        slope = slope.min((df * s - f * ds) / (s * s));
        excess = excess.min(f.powi(p) - s.powi(p));
        if (f / s - 1.0).abs() <= tol {
            rigid_nodes += 1;
            last_rigid = Some(i);
        }
    }
    let rigidity_consistent =
        last_rigid.is_none_or(|k| (1..=k).all(|i| (warp.f()[i] - cf.sn(warp.t(i))).abs() <= tol * cf.sn(warp.t(i))));
    let verdict = Verdict::from_bool(slope >= -tol && excess >= -tol && rigidity_consistent);
    Ok(BishopReport {
        c,
        n,
        min_ratio_slope: slope,
        min_density_excess: excess,
        rigid_nodes,
        rigidity_consistent,
        tol,
        verdict,
    })
}

/// One row of a seeded corpus sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusRow {
    pub trial: usize,
    pub seed: u64,
    pub c: f64,
    pub cheng_margin: f64,
    pub bishop_slope: f64,
    pub status: ChengStatus,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusSpec {
    pub c: f64,
    pub n: usize,
    pub r: f64,
    pub roughness: f64,
    pub trials: usize,
    pub cells: usize,
    pub tol: f64,
}

/// Runs Cheng and Bishop on `trials` seeded warps in parallel; rows come
/// back in trial order and depend only on `(spec, master)`.
pub fn cheng_corpus(spec: &CorpusSpec, master: u64) -> Result<Vec<CorpusRow>> {
    (0..spec.trials)
        .into_par_iter()
        .map(|k| {
            let seed = trial_seed(master, k as u64);
            let warp = random_warp_on(spec.c, spec.r, seed, spec.roughness, spec.cells)?;
            let ch = cheng_compare(&warp, spec.c, spec.n, spec.tol)?;
            let bi = bishop_check(&warp, spec.c, spec.n, spec.tol)?;
            Ok(CorpusRow {
                trial: k,
                seed,
                c: spec.c,
                cheng_margin: ch.margin.unwrap_or(f64::NAN),
                bishop_slope: bi.min_ratio_slope,
                status: ch.status,
                verdict: ch.verdict().and(Verdict::from_bool(ch.status == ChengStatus::Holds)).and(bi.verdict),
            })
        })
        .collect()
}

/// Writes corpus rows as CSV with columns `seed, c, margin, verdict`.
pub fn write_corpus_csv<W: std::io::Write>(rows: &[CorpusRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["seed", "c", "margin", "verdict"])?;
    for r in rows {
        w.write_record([r.seed.to_string(), r.c.to_string(), format!("{:e}", r.cheng_margin), r.verdict.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn corpus_params(spec: &CorpusSpec, master: u64) -> Params {
    Params::new()
        .with("c", spec.c)
        .with("n", spec.n)
        .with("r", spec.r)
        .with("roughness", spec.roughness)
        .with("trials", spec.trials)
        .with("cells", spec.cells)
        .with("tol", spec.tol)
        .with("master_seed", master)
}
