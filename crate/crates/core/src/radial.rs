//! Shooting solver for the first Dirichlet eigenvalue of the radial
//! operator `v'' + (n-1)(f'/f) v' + λ v` on `[0, r]`.
//!
//! The solution is launched at `t = h` from its power series about the
//! regular singular point, integrated with classical RK4 (sub-stepped in
//! the first cells where the coefficient `(n-1)/t` is stiff) and `λ` is
//! bisected on the presence of a zero of `v` in `(0, r]`. By Sturm
//! oscillation that predicate is false exactly below the first eigenvalue.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaceform::{ComparisonFunctions, ModelBall};
use crate::warp::WarpProfile;

pub const DEFAULT_CELLS: usize = 4096;
pub const DEFAULT_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;
const OVERFLOW: f64 = 1e12;
// Cell k (counting from the pole) is split into ceil(ORIGIN_SUBSTEPS / k) RK4 steps.
const ORIGIN_SUBSTEPS: usize = 32;

/// Source of the warping function behind the radial operator.
#[derive(Debug, Clone, Copy)]
pub enum RadialProfile<'a> {
    Model(ComparisonFunctions),
    Warp(&'a WarpProfile),
}

impl RadialProfile<'_> {
    /// `f'/f` at `t > 0`.
    pub fn log_slope(&self, t: f64) -> f64 {
        match self {
            RadialProfile::Model(cf) => cf.cn(t) / cf.sn(t),
            RadialProfile::Warp(w) => {
                let (f, df) = w.eval(t);
                df / f
            }
        }
    }

    fn pole_second(&self) -> f64 {
        match self {
            RadialProfile::Model(_) => 0.0,
            RadialProfile::Warp(w) => w.d2f()[0],
        }
    }

    fn pole_third(&self) -> f64 {
        match self {
            RadialProfile::Model(cf) => cf.sn3(0.0),
            RadialProfile::Warp(w) => w.third_derivative_at_pole(),
        }
    }
}

/// The radial operator on a uniform grid of `n_cells` cells over `[0, r]`.
#[derive(Debug, Clone, Copy)]
pub struct RadialOperator<'a> {
    pub profile: RadialProfile<'a>,
    pub dim: usize,
    pub r: f64,
    pub n_cells: usize,
}

impl<'a> RadialOperator<'a> {
    pub fn model(ball: &ModelBall, n_cells: usize) -> Self {
        Self { profile: RadialProfile::Model(ball.comparison()), dim: ball.n, r: ball.r, n_cells }
    }

    pub fn warped(warp: &'a WarpProfile, dim: usize) -> Self {
        Self { profile: RadialProfile::Warp(warp), dim, r: warp.radius(), n_cells: warp.n_cells() }
    }

    pub fn h(&self) -> f64 {
        self.r / self.n_cells as f64
    }

    /// `(n-1) f'/f`.
    pub fn coefficient(&self, t: f64) -> f64 {
        (self.dim - 1) as f64 * self.profile.log_slope(t)
    }
}

/// Sampled solution of the radial initial value problem.
#[derive(Debug, Clone)]
pub struct Shot {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub dv: Vec<f64>,
}

impl Shot {
    pub fn end_value(&self) -> f64 {
        *self.v.last().unwrap()
    }

    /// True when `v ≤ 0` at some node in `(0, r]`.
    pub fn has_zero(&self) -> bool {
        self.v[1..].iter().any(|&x| x <= 0.0)
    }
}

/// Integrates `v'' + (n-1)(f'/f) v' + λ v = 0`, `v(0) = 1`, `v'(0) = 0`.
pub fn integrate_radial(op: &RadialOperator, lambda: f64) -> Result<Shot> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidInput(format!("lambda = {lambda} must be non-negative")));
    }
    let n = op.n_cells;
    if n < 2 {
        return Err(Error::InvalidInput("radial grid needs at least two cells".into()));
    }
    let h = op.h();
    let dim = op.dim as f64;
    let mut t = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    let mut dv = Vec::with_capacity(n + 1);
    t.push(0.0);
    v.push(1.0);
    dv.push(0.0);

    // f = t + α t² + β t³ gives (n-1) f'/f = (n-1)(1/t + α + (2β - α²) t) + ...
    let alpha = 0.5 * op.profile.pole_second();
    let beta = op.profile.pole_third() / 6.0;
    let p0 = (dim - 1.0) * alpha;
    let p1 = (dim - 1.0) * (2.0 * beta - alpha * alpha);
    let a2 = -lambda / (2.0 * dim);
    let a3 = -2.0 * p0 * a2 / (3.0 * (dim + 1.0));
    let a4 = -a2 * (2.0 * p1 + lambda) / (4.0 * (dim + 2.0));
    t.push(h);
    v.push(1.0 + h * h * (a2 + h * (a3 + h * a4)));
    dv.push(h * (2.0 * a2 + h * (3.0 * a3 + h * 4.0 * a4)));

    let rhs = |s: f64, y: (f64, f64)| (y.1, -op.coefficient(s) * y.1 - lambda * y.0);
    for k in 1..n {
        let steps = ORIGIN_SUBSTEPS.div_ceil(k).max(1);
        let dt = h / steps as f64;
        let mut y = (v[k], dv[k]);
        let t0 = k as f64 * h;
        for j in 0..steps {
            let s = t0 + j as f64 * dt;
            let k1 = rhs(s, y);
            let k2 = rhs(s + 0.5 * dt, (y.0 + 0.5 * dt * k1.0, y.1 + 0.5 * dt * k1.1));
            let k3 = rhs(s + 0.5 * dt, (y.0 + 0.5 * dt * k2.0, y.1 + 0.5 * dt * k2.1));
            let k4 = rhs(s + dt, (y.0 + dt * k3.0, y.1 + dt * k3.1));
            y.0 += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            y.1 += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        let tk = (k + 1) as f64 * h;
        if !(y.0.abs() <= OVERFLOW) {
            return Err(Error::Overflow { t: tk, value: y.0.abs() });
        }
        t.push(tk);
        v.push(y.0);
        dv.push(y.1);
    }
    Ok(Shot { t, v, dv })
}

/// First Dirichlet eigenpair of a radial operator.
#[derive(Debug, Clone, Serialize)]
pub struct RadialEigenResult {
    pub lambda1: f64,
    #[serde(skip)]
    pub t: Vec<f64>,
    /// Eigenfunction normalized by `v(0) = 1`.
    #[serde(skip)]
    pub v: Vec<f64>,
    #[serde(skip)]
    pub dv: Vec<f64>,
    /// Largest ODE defect over interior nodes, central differences.
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
    pub n_cells: usize,
    pub tol: f64,
    /// `v' < 0` at every node of `(0, r]`.
    pub monotone: bool,
}

impl RadialEigenResult {
    /// Writes the profile as CSV with columns `t, v, dv`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "v", "dv"])?;
        for i in 0..self.t.len() {
            w.serialize((self.t[i], self.v[i], self.dv[i]))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Bisection driver for the radial eigenvalue.
#[derive(Debug, Clone, Copy)]
pub struct ShootingSolver {
    pub max_bisections: usize,
}

impl Default for ShootingSolver {
    fn default() -> Self {
        Self { max_bisections: MAX_BISECTIONS }
    }
}

impl ShootingSolver {
    pub fn solve(&self, op: &RadialOperator, tol: f64) -> Result<RadialEigenResult> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
        }
        let mut iterations = 0;
        let mut lo = 0.0;
        let mut hi = 1.0 / (op.r * op.r);
        loop {
            iterations += 1;
            if integrate_radial(op, hi)?.has_zero() {
                break;
            }
            lo = hi;
            hi *= 2.0;
            if iterations > self.max_bisections {
                return Err(Error::NoConvergence { iterations, lo, hi });
            }
        }
        let mut steps = 0;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            steps += 1;
            iterations += 1;
            if steps > self.max_bisections {
                return Err(Error::NoConvergence { iterations, lo, hi });
            }
            if integrate_radial(op, mid)?.has_zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lambda1 = 0.5 * (lo + hi);
        let shot = integrate_radial(op, lambda1)?;
        let n = op.n_cells;
        if let Some(i) = (0..n).find(|&i| shot.v[i] <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "eigenfunction changes sign at t = {} before the boundary; higher mode captured",
                shot.t[i]
            )));
        }
        let residual = ode_defect(op, &shot, lambda1);
        let monotone = shot.dv[1..].iter().all(|&d| d < 0.0);
        Ok(RadialEigenResult {
            lambda1,
            t: shot.t,
            v: shot.v,
            dv: shot.dv,
            residual,
            iterations,
            bracket: (lo, hi),
            n_cells: n,
            tol,
            monotone,
        })
    }
}

/// Max over interior nodes of `|v'' + (n-1)(f'/f) v' + λ v|` with both
/// derivatives from central differences.
pub fn ode_defect(op: &RadialOperator, shot: &Shot, lambda: f64) -> f64 {
    let h = op.h();
    let v = &shot.v;
    (1..op.n_cells)
        .map(|i| {
            let d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
            let d1 = (v[i + 1] - v[i - 1]) / (2.0 * h);
            (d2 + op.coefficient(shot.t[i]) * d1 + lambda * v[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// First Dirichlet eigenvalue of a model ball on the default grid.
pub fn model_ball_lambda1(ball: &ModelBall, tol: f64) -> Result<RadialEigenResult> {
    let ball = ModelBall::new(ball.c, ball.n, ball.r)?;
    ShootingSolver::default().solve(&RadialOperator::model(&ball, DEFAULT_CELLS), tol)
}

/// First Dirichlet eigenvalue of a model ball on a grid of `n_cells` cells.
pub fn model_ball_lambda1_on(ball: &ModelBall, n_cells: usize, tol: f64) -> Result<RadialEigenResult> {
    let ball = ModelBall::new(ball.c, ball.n, ball.r)?;
    ShootingSolver::default().solve(&RadialOperator::model(&ball, n_cells), tol)
}

/// First Dirichlet eigenvalue of the ball `dt² + f² g_{S^{n-1}}` on the
/// warp's own grid.
pub fn warped_ball_lambda1(warp: &WarpProfile, n: usize, tol: f64) -> Result<RadialEigenResult> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension {n} < 2")));
    }
    ShootingSolver::default().solve(&RadialOperator::warped(warp, n), tol)
}

/// `λ₁(c, n, r)` recomputed as `|c| λ₁(sign c, n, √|c| r)`.
pub fn model_lambda1_rescaled(ball: &ModelBall, tol: f64) -> Result<f64> {
    if ball.c == 0.0 {
        return Ok(model_ball_lambda1(ball, tol)?.lambda1);
    }
    let k = ball.c.abs();
    let unit = ModelBall::new(ball.c.signum(), ball.n, k.sqrt() * ball.r)?;
    Ok(k * model_ball_lambda1(&unit, tol / k)?.lambda1)
}
