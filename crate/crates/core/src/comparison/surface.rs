//! The catenoid as a minimal surface in a Euclidean ball, and the
//! stability criterion `sup ‖A‖² ≤ λ₁(flat ball)`.
//!
//! The catenoid `(cosh u cos θ, cosh u sin θ, u)` has conformal metric
//! `cosh²u (du² + dθ²)` and `‖A‖² = 2 / cosh⁴u`. Its intersection with the
//! ball of radius `r` about the centre of the neck is `|u| < u_r` with
//! `cosh²u_r + u_r² = r²`.

use serde::Serialize;

use crate::domain::{
    build_band, build_radial_domain, build_weighted_interval, smallest_eigenpair, smallest_eigenpair_with_potential,
    DEFAULT_EIG_TOL,
};
use crate::error::{Error, Result};
use crate::radial::{model_ball_lambda1, DEFAULT_TOL};
use crate::report::Verdict;
use crate::spaceform::ModelBall;
use crate::warp::WarpProfile;

/// Squared norm of the second fundamental form at conformal height `u`.
pub fn catenoid_a2(u: f64) -> f64 {
    2.0 / u.cosh().powi(4)
}

/// Distance from the centre of the neck to the catenoid point at height `u`.
pub fn catenoid_distance(u: f64) -> f64 {
    (u.cosh().powi(2) + u * u).sqrt()
}

/// `u_r` with `cosh²u_r + u_r² = r²`.
pub fn catenoid_extent(r: f64) -> Result<f64> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("ball of radius {r} <= 1 misses the catenoid")));
    }
    let (mut lo, mut hi) = (0.0, r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if catenoid_distance(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Serialize)]
pub struct SubmanifoldReport {
    pub r: f64,
    pub u_r: f64,
    /// Lowest Dirichlet eigenvalue of the catenoid piece (1-D reduction).
    pub lambda_surface: f64,
    /// Same eigenvalue from the 2-D band discretization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_band: Option<f64>,
    /// `λ₁` of the flat disk of radius `r`.
    pub bound: f64,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discretization_gap: Option<f64>,
    pub cells: usize,
    pub verdict: Verdict,
}

/// Checks `λ₁(catenoid ∩ B(r)) ≥ λ₁(flat disk of radius r)`. With
/// `n_theta` set, the 1-D value is cross-checked on a 2-D band grid
/// (agreement within `1e-3`).
pub fn submanifold_bound_check(r: f64, cells: usize, n_theta: Option<usize>) -> Result<SubmanifoldReport> {
    let u_r = catenoid_extent(r)?;
    let q = |u: f64| u.cosh().powi(2);
    let line = build_weighted_interval(-u_r, u_r, cells, |_| 1.0, q)?;
    let lambda_surface = smallest_eigenpair(&line, DEFAULT_EIG_TOL)?.lambda;
    let lambda_band = match n_theta {
        Some(nt) => {
            let band = build_band(-u_r, u_r, cells, nt, f64::cosh)?;
            Some(smallest_eigenpair(&band, DEFAULT_EIG_TOL)?.lambda)
        }
        None => None,
    };
    let bound = model_ball_lambda1(&ModelBall::new(0.0, 2, r)?, DEFAULT_TOL)?.lambda1;
    let margin = lambda_surface - bound;
    let gap = lambda_band.map(|b| (b - lambda_surface).abs());
    let verdict = Verdict::from_bool(margin > 0.0 && gap.is_none_or(|g| g < 1e-3));
    Ok(SubmanifoldReport {
        r,
        u_r,
        lambda_surface,
        lambda_band,
        bound,
        margin,
        discretization_gap: gap,
        cells,
        verdict,
    })
}

/// `‖A‖²` data over a ball: a bound, or samples on `t_i = i r / N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum A2Data {
    Sup(f64),
    Profile(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityInput {
    pub n: usize,
    pub r: f64,
    pub a2: A2Data,
}

impl StabilityInput {
    pub fn sup_a2(&self) -> f64 {
        match &self.a2 {
            A2Data::Sup(s) => *s,
            A2Data::Profile(p) => p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVerdict {
    Stable,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub n: usize,
    pub r: f64,
    pub sup_a2: f64,
    /// `λ₁` of the flat `n`-ball of radius `r`.
    pub threshold: f64,
    pub margin: f64,
    pub verdict: StabilityVerdict,
    /// Smallest eigenvalue of `-Δ - ‖A‖²` on the flat ball grid.
    pub operator_min_eigenvalue: f64,
    pub cells: usize,
}

/// Stable when `sup ‖A‖² ≤ λ₁(flat n-ball of radius r)`.
pub fn stability_check(input: &StabilityInput, cells: usize) -> Result<StabilityReport> {
    let sup = input.sup_a2();
    if !(sup >= 0.0) || !sup.is_finite() {
        return Err(Error::InvalidInput(format!("sup |A|^2 = {sup} must be finite and non-negative")));
    }
    let ball = ModelBall::new(0.0, input.n, input.r)?;
    let threshold = model_ball_lambda1(&ball, DEFAULT_TOL)?.lambda1;
    let (cells, potential) = match &input.a2 {
        A2Data::Sup(s) => (cells, vec![*s; cells + 1]),
        A2Data::Profile(p) => (p.len().saturating_sub(1), p.clone()),
    };
    let warp = WarpProfile::from_model(0.0, input.r, cells)?;
    let domain = build_radial_domain(&warp, input.n, cells)?;
    let low = smallest_eigenpair_with_potential(&domain, &potential, DEFAULT_EIG_TOL)?.lambda;
    let verdict = if sup <= threshold { StabilityVerdict::Stable } else { StabilityVerdict::Inconclusive };
    Ok(StabilityReport {
        n: input.n,
        r: input.r,
        sup_a2: sup,
        threshold,
        margin: threshold - sup,
        verdict,
        operator_min_eigenvalue: low,
        cells,
    })
}

/// `‖A‖²` of the catenoid as a function of distance from the neck centre,
/// sampled on `t_i = i r / cells`; inside the neck radius the neck value 2
/// is used.
pub fn catenoid_a2_profile(r: f64, cells: usize) -> Result<Vec<f64>> {
    (0..=cells)
        .map(|i| {
            let t = r * i as f64 / cells as f64;
            if t <= 1.0 {
                Ok(2.0)
            } else {
                catenoid_extent(t).map(catenoid_a2)
            }
        })
        .collect()
}

/// Smallest eigenvalue of the Jacobi operator `-Δ_Σ - ‖A‖²` on the
/// catenoid piece inside the ball of radius `r`.
pub fn catenoid_jacobi_eigenvalue(r: f64, cells: usize) -> Result<f64> {
    let u_r = catenoid_extent(r)?;
    let line = build_weighted_interval(-u_r, u_r, cells, |_| 1.0, |u| u.cosh().powi(2))?;
    let p = line.sample(|u, _| catenoid_a2(u));
    Ok(smallest_eigenpair_with_potential(&line, &p, DEFAULT_EIG_TOL)?.lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extent_solves_distance() {
        let u = catenoid_extent(1.5).unwrap();
        assert!((catenoid_distance(u) - 1.5).abs() < 1e-12);
        assert!(catenoid_extent(1.0).is_err());
    }

    #[test]
    fn catenoid_beats_disk() {
        let rep = submanifold_bound_check(1.5, 512, None).unwrap();
        assert!(rep.bound > 2.5703 && rep.bound < 2.5704);
        assert!(rep.margin > 0.0);
        let thin = submanifold_bound_check(1.0001, 256, None).unwrap();
        assert!(thin.lambda_surface > 1e3 * thin.bound);
    }

    #[test]
    fn stability_threshold() {
        let at = |r: f64, s: f64| stability_check(&StabilityInput { n: 2, r, a2: A2Data::Sup(s) }, 256).unwrap();
        assert_eq!(at(1.5, 2.0).verdict, StabilityVerdict::Stable);
        assert!(at(1.5, 2.0).operator_min_eigenvalue > 0.0);
        assert_eq!(at(1.71, 2.0).verdict, StabilityVerdict::Inconclusive);
        assert_eq!(at(40.0, 0.0).verdict, StabilityVerdict::Stable);
    }

    #[test]
    fn neck_piece_is_jacobi_stable() {
        assert!(catenoid_jacobi_eigenvalue(1.5, 512).unwrap() > 0.0);
    }
}
