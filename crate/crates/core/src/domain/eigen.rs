//! Smallest eigenpair of `-L` (optionally `-L - P`) by shifted inverse
//! iteration on the generalized problem `A x = λ M x`.

use serde::Serialize;

use super::{DiscreteDomain, ScalarField};
use crate::error::{Error, Result};
use crate::linalg::BandLdl;

/// Relative residual target. Round-off in `u` alone produces residuals of
/// order `ε / (h² λ)`, so much tighter targets stall on fine grids.
pub const DEFAULT_EIG_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 2000;

#[derive(Debug, Clone, Serialize)]
pub struct GroundState {
    pub lambda: f64,
    /// Positive at interior nodes, zero on the boundary, `max u = 1`.
    #[serde(skip)]
    pub u: ScalarField,
    pub iterations: usize,
    /// `‖(-L - P - λ) u‖_M / (|λ - σ| ‖u‖_M)` with `σ` the shift.
    pub residual: f64,
}

/// Smallest Dirichlet eigenvalue of `-L` and its positive eigenvector.
pub fn smallest_eigenpair(domain: &DiscreteDomain, tol: f64) -> Result<GroundState> {
    solve(domain, None, tol)
}

/// Smallest eigenvalue of `-L - P` for a potential `P` given per node.
pub fn smallest_eigenpair_with_potential(domain: &DiscreteDomain, potential: &[f64], tol: f64) -> Result<GroundState> {
    domain.check_len(potential, "potential")?;
    solve(domain, Some(potential), tol)
}

fn solve(domain: &DiscreteDomain, potential: Option<&[f64]>, tol: f64) -> Result<GroundState> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let n = domain.interior().len();
    if n == 0 {
        return Err(Error::InvalidInput("domain has no interior nodes".into()));
    }
    let m = domain.interior_mass();
    let p: Vec<f64> = match potential {
        Some(p) => domain.gather(p),
        None => vec![0.0; n],
    };
    if p.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("potential must be finite at interior nodes".into()));
    }
    let a = domain.stiffness();
    // -L - P ≥ -sup P, so this shift keeps the factored matrix positive definite.
    let sigma = if potential.is_some() { -p.iter().fold(0.0f64, |s, &x| s.max(x)) - 1.0 } else { 0.0 };
    let mut k = a.clone();
    k.add_diagonal(&p.iter().zip(&m).map(|(pi, mi)| -(pi + sigma) * mi).collect::<Vec<_>>());
    let ldl = BandLdl::factor(&k)?;

    let op = |x: &[f64]| -> Vec<f64> {
        let mut y = a.mul_vec(x);
        for i in 0..n {
            y[i] -= p[i] * m[i] * x[i];
        }
        y
    };
    let mnorm = |x: &[f64]| x.iter().zip(&m).map(|(a, b)| a * a * b).sum::<f64>().sqrt();

    let mut x = vec![1.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let rhs: Vec<f64> = x.iter().zip(&m).map(|(a, b)| a * b).collect();
        x = ldl.solve(&rhs);
        let s = mnorm(&x);
        x.iter_mut().for_each(|v| *v /= s);
        let ax = op(&x);
        let lambda = x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>();
        let r2: f64 = (0..n).map(|i| (ax[i] - lambda * m[i] * x[i]).powi(2) / m[i]).sum();
        residual = r2.sqrt() / (lambda - sigma).abs();
        if residual < tol {
            let peak = x.iter().fold(0.0f64, |s, &v| if v.abs() > s.abs() { v } else { s });
            let u = domain.scatter(&x.iter().map(|v| v / peak).collect::<Vec<_>>());
            return Ok(GroundState { lambda, u, iterations: it, residual });
        }
    }
    Err(Error::IterationCap { iterations: MAX_ITERATIONS, residual, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_interval, build_polar_domain, build_radial_domain, rayleigh_quotient};
    use crate::warp::WarpProfile;
    use std::f64::consts::PI;

    #[test]
    fn interval_sine_mode() {
        let d = build_interval(1.0, 2048).unwrap();
        let g = smallest_eigenpair(&d, DEFAULT_EIG_TOL).unwrap();
        assert!((g.lambda - PI * PI).abs() < 1e-3);
        let h = 1.0 / 2048.0;
        let exact = 4.0 / (h * h) * (0.5 * PI * h).sin().powi(2);
        assert!((g.lambda - exact).abs() < 1e-9 * exact);
        assert!((rayleigh_quotient(&d, &g.u).unwrap() - g.lambda).abs() < 1e-12 * g.lambda);
        assert!(d.interior().iter().all(|&i| g.u[i] > 0.0));
    }

    #[test]
    fn polar_matches_radial() {
        let w = WarpProfile::from_model(0.0, 1.0, 64).unwrap();
        let radial = build_radial_domain(&w, 2, 64).unwrap();
        let polar = build_polar_domain(&w, 64, 16).unwrap();
        let a = radial.ground_state().unwrap().lambda;
        let b = polar.ground_state().unwrap();
        assert!((a - b.lambda).abs() < 1e-9 * a, "{a} {}", b.lambda);
        // θ-independence of the ground mode
        for i in 1..=63 {
            let ring = &b.u[1 + (i - 1) * 16..1 + i * 16];
            let (lo, hi) = ring.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
            assert!(hi - lo <= 1e-6 * hi);
        }
    }

    #[test]
    fn constant_potential_shifts_spectrum() {
        let d = build_interval(1.0, 256).unwrap();
        let base = smallest_eigenpair(&d, 1e-10).unwrap().lambda;
        let shifted = smallest_eigenpair_with_potential(&d, &vec![3.0; d.len()], 1e-10).unwrap().lambda;
        assert!((base - 3.0 - shifted).abs() < 1e-9);
        let deep = smallest_eigenpair_with_potential(&d, &vec![20.0; d.len()], 1e-10).unwrap().lambda;
        assert!(deep < 0.0);
    }
}
