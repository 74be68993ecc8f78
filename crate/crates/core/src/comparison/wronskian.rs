//! The comparison function `μ` and the Wronskian `W = v'μ - μ'v` behind the
//! eigenvalue bound for minimal submanifolds.
//!
//! With `v` the radial ground state of the `m`-dimensional model ball of
//! curvature `c ∈ {-1, 0, 1}` and
//!
//! ```text
//! μ(t) = exp(-λ t² / 2m)   (c = 0),      μ(t) = C_c(t)^{-λ/m}   (c = ±1),
//! ```
//!
//! `W` satisfies `(S^{m-1} W)' = -λ S^{m-1} μ v B(t)` with `B > 0`, hence
//! `W < 0` on `(0, r)`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::radial::{model_ball_lambda1_on, RadialEigenResult};
use crate::report::Verdict;
use crate::spaceform::{ComparisonFunctions, ModelBall};

pub const DEFAULT_MU_CELLS: usize = 4096;

fn check_normalized(c: f64, r: f64) -> Result<()> {
    if c != 0.0 && c != 1.0 && c != -1.0 {
        return Err(Error::InvalidInput(format!("curvature {c} must be normalized to -1, 0 or 1")));
    }
    if c == 1.0 && !(r < FRAC_PI_2) {
        return Err(Error::InvalidBall(format!("r = {r} must be below pi/2 for c = 1")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct MuProfile {
    pub c: f64,
    pub m: usize,
    pub lambda1: f64,
    #[serde(skip)]
    pub t: Vec<f64>,
    #[serde(skip)]
    pub mu: Vec<f64>,
    #[serde(skip)]
    pub dmu: Vec<f64>,
}

/// `μ` and `μ'` in closed form.
pub fn mu_value(c: f64, m: usize, lambda1: f64, t: f64) -> (f64, f64) {
    let m = m as f64;
    if c == 0.0 {
        let mu = (-lambda1 * t * t / (2.0 * m)).exp();
        (mu, -lambda1 * t / m * mu)
    } else {
        let cf = ComparisonFunctions::new(c);
        let (s, cc) = (cf.sn(t), cf.cn(t));
        let mu = cc.powf(-lambda1 / m);
        // C' = -c S
        (mu, lambda1 / m * c * s / cc * mu)
    }
}

/// Samples `μ` on `cells + 1` nodes of `[0, r]`.
pub fn mu_profile(c: f64, m: usize, lambda1: f64, r: f64, cells: usize) -> Result<MuProfile> {
    check_normalized(c, r)?;
    if m < 2 || !(lambda1 >= 0.0) || cells < 2 {
        return Err(Error::InvalidInput(format!("need m >= 2, lambda >= 0 and a grid (m = {m}, lambda = {lambda1})")));
    }
    let h = r / cells as f64;
    let t: Vec<f64> = (0..=cells).map(|i| i as f64 * h).collect();
    let (mu, dmu) = t.iter().map(|&s| mu_value(c, m, lambda1, s)).unzip();
    Ok(MuProfile { c, m, lambda1, t, mu, dmu })
}

/// The factor `B(t)` of the weighted identity.
pub fn bracket(c: f64, m: usize, lambda1: f64, t: f64) -> f64 {
    let m = m as f64;
    let cf = ComparisonFunctions::new(c);
    let (s, cc) = (cf.sn(t), cf.cn(t));
    let tail = lambda1 / (m * m) * (s * s) / (cc * cc);
    if c == 0.0 {
        lambda1 * t * t / (m * m)
    } else if c < 0.0 {
        // 1/m - 1/(m C²) = tanh²/m avoids cancellation near t = 0.
        (s / cc).powi(2) / m + tail
    } else {
        2.0 - 1.0 / m + 1.0 / (m * cc * cc) + tail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketReport {
    pub c: f64,
    pub m: usize,
    pub lambda1: f64,
    pub r: f64,
    pub min: f64,
    pub argmin: f64,
    pub verdict: Verdict,
}

/// Minimum of `B` over the interior nodes of `(0, r)`.
pub fn bracket_positivity(c: f64, m: usize, lambda1: f64, r: f64, cells: usize) -> Result<BracketReport> {
    check_normalized(c, r)?;
    let h = r / cells as f64;
    let (argmin, min) = (1..cells)
        .map(|i| {
            let t = i as f64 * h;
            (t, bracket(c, m, lambda1, t))
        })
        .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    Ok(BracketReport { c, m, lambda1, r, min, argmin, verdict: Verdict::from_bool(min > 0.0) })
}

#[derive(Debug, Clone, Serialize)]
pub struct WronskianReport {
    pub c: f64,
    pub m: usize,
    pub r: f64,
    pub lambda1: f64,
    /// `max W` over interior nodes; negative when the claim holds.
    pub max_w: f64,
    pub argmax_w: f64,
    /// `max m (C/S) v' + λ v` over interior nodes.
    pub max_key: f64,
    /// Relative defect of `(S^{m-1} W)' = -λ S^{m-1} μ v B` under central differences.
    pub identity_defect: f64,
    pub bracket_min: f64,
    pub cells: usize,
    pub verdict: Verdict,
    #[serde(skip)]
    pub w: Vec<f64>,
    #[serde(skip)]
    pub eigen: Option<RadialEigenResult>,
}

impl WronskianReport {
    /// `-max W`: positive when the Wronskian is negative everywhere.
    pub fn margin(&self) -> f64 {
        -self.max_w.max(self.max_key)
    }
}

/// Computes `v` on the model ball, `μ` in closed form and checks `W < 0`
/// and `m (C/S) v' + λ v < 0` at every interior node.
pub fn wronskian_negativity(c: f64, m: usize, r: f64, cells: usize, tol: f64) -> Result<WronskianReport> {
    check_normalized(c, r)?;
    let eig = model_ball_lambda1_on(&ModelBall::new(c, m, r)?, cells, tol)?;
    let lambda = eig.lambda1;
    let cf = ComparisonFunctions::new(c);
    let mf = m as f64;
    let h = r / cells as f64;

    let mut w = vec![0.0; cells + 1];
    let mut weighted = vec![0.0; cells + 1];
    for i in 0..=cells {
        let t = eig.t[i];
        let (mu, dmu) = mu_value(c, m, lambda, t);
        w[i] = eig.dv[i] * mu - dmu * eig.v[i];
        weighted[i] = cf.sn(t).powi(m as i32 - 1) * w[i];
    }
    let (argmax_w, max_w) =
        (1..cells).map(|i| (eig.t[i], w[i])).fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let max_key = (1..cells)
        .map(|i| {
            let t = eig.t[i];
            mf * cf.cn(t) / cf.sn(t) * eig.dv[i] + lambda * eig.v[i]
        })
        .fold(f64::NEG_INFINITY, f64::max);

    let (mut defect, mut scale) = (0.0f64, 0.0f64);
    for i in 1..cells {
        let t = eig.t[i];
        let lhs = (weighted[i + 1] - weighted[i - 1]) / (2.0 * h);
        let (mu, _) = mu_value(c, m, lambda, t);
        let rhs = -lambda * cf.sn(t).powi(m as i32 - 1) * mu * eig.v[i] * bracket(c, m, lambda, t);
        defect = defect.max((lhs - rhs).abs());
        scale = scale.max(rhs.abs());
    }
    let bracket_min = bracket_positivity(c, m, lambda, r, cells)?.min;
    let verdict = Verdict::from_bool(max_w < 0.0 && max_key < 0.0 && bracket_min > 0.0);
    Ok(WronskianReport {
        c,
        m,
        r,
        lambda1: lambda,
        max_w,
        argmax_w,
        max_key,
        identity_defect: defect / scale.max(f64::MIN_POSITIVE),
        bracket_min,
        cells,
        verdict,
        w,
        eigen: Some(eig),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_closed_forms() {
        assert_eq!(mu_value(0.0, 3, 5.0, 0.0), (1.0, 0.0));
        let (mu, _) = mu_value(-1.0, 2, 3.0, 1.0);
        assert!((mu - 1f64.cosh().powf(-1.5)).abs() < 1e-15);
        let p = mu_profile(1.0, 2, 3.0, 1.5, 300).unwrap();
        assert!(p.mu.windows(2).all(|w| w[1] > w[0]));
        assert!(mu_profile(0.5, 2, 1.0, 1.0, 10).is_err());
        assert!(mu_profile(1.0, 2, 1.0, 1.6, 10).is_err());
    }

    #[test]
    fn bracket_signs() {
        assert!(bracket(-1.0, 2, 3.0, 1e-6) > 0.0 && bracket(-1.0, 2, 3.0, 1e-6) < 1e-10);
        assert!(bracket(-1.0, 2, 3.0, 1.0) > 0.0);
        for i in 0..100 {
            let t = 1.5 * i as f64 / 100.0;
            assert!(bracket(1.0, 3, 4.0, t) >= 2.0 - 1.0 / 3.0);
        }
    }

    #[test]
    fn flat_wronskian_negative() {
        let rep = wronskian_negativity(0.0, 2, 1.0, 1024, 1e-11).unwrap();
        assert!(rep.verdict.passed(), "{rep:?}");
        assert!(rep.w[0] == 0.0);
    }

    #[test]
    fn weighted_identity_is_second_order() {
        let coarse = wronskian_negativity(-1.0, 3, 1.2, 256, 1e-12).unwrap().identity_defect;
        let fine = wronskian_negativity(-1.0, 3, 1.2, 512, 1e-12).unwrap().identity_defect;
        assert!(coarse / fine > 3.0, "{coarse} {fine}");
    }
}
