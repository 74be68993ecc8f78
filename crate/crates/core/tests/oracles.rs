//! Cross-checks against independent oracles: a dense eigensolver, the
//! shooting solver, closed forms and scaling laws.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};

use tonelab::bounds::{barta_bounds, certificate, vfield_lower_bound, BartaOptions};
use tonelab::comparison::{stability_check, A2Data, StabilityInput};
use tonelab::domain::{
    build_interval, build_polar_domain, build_radial_domain, grad_log, rayleigh_quotient, DiscreteDomain,
};
use tonelab::quasilinear::{blowup_solution, solvability_gate, solve_linear, EllipticProblem, Gate, QLStatus};
use tonelab::radial::{
    integrate_radial, model_ball_lambda1, model_ball_lambda1_on, ode_defect, warped_ball_lambda1, RadialOperator,
};
use tonelab::spaceform::ModelBall;
use tonelab::warp::WarpProfile;

fn lambda(c: f64, n: usize, r: f64) -> f64 {
    model_ball_lambda1(&ModelBall::new(c, n, r).unwrap(), 1e-11).unwrap().lambda1
}

fn radial(c: f64, n: usize, r: f64, cells: usize) -> DiscreteDomain {
    build_radial_domain(&WarpProfile::from_model(c, r, cells).unwrap(), n, cells).unwrap()
}

fn cubic_warp(cells: usize) -> WarpProfile {
    WarpProfile::from_fn(1.0, cells, |t| t.sinh() + 0.1 * t.powi(3), |t| t.cosh() + 0.3 * t * t, |t| t.sinh() + 0.6 * t)
        .unwrap()
}

/// Smallest generalized eigenvalue of `K x = λ M x` by dense symmetric
/// diagonalization of `M^{-1/2} K M^{-1/2}`.
fn dense_lambda(d: &DiscreteDomain) -> f64 {
    let k = d.stiffness();
    let m = d.interior_mass();
    let n = k.dim();
    let a = DMatrix::from_fn(n, n, |i, j| k.get(i, j) / (m[i] * m[j]).sqrt());
    SymmetricEigen::new(a).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[test]
fn dense_solver_agrees_with_inverse_iteration() {
    let d = build_radial_domain(&cubic_warp(200), 2, 200).unwrap();
    let dense = dense_lambda(&d);
    let sparse = d.ground_state().unwrap().lambda;
    assert!((dense - sparse).abs() < 1e-9 * dense, "{dense} {sparse}");
    let polar = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 24).unwrap(), 24, 8).unwrap();
    let (dense, sparse) = (dense_lambda(&polar), polar.ground_state().unwrap().lambda);
    assert!((dense - sparse).abs() < 1e-9 * dense, "{dense} {sparse}");
}

#[test]
fn cubic_warp_dominates_hyperbolic_disk() {
    // f'' - f = 0.6 t >= 0, so the radial curvature is at most -1.
    let shoot = warped_ball_lambda1(&cubic_warp(4096), 2, 1e-11).unwrap().lambda1;
    let model = lambda(-1.0, 2, 1.0);
    assert!(shoot >= model, "{shoot} {model}");
    let dense = dense_lambda(&build_radial_domain(&cubic_warp(256), 2, 256).unwrap());
    let dense_model = dense_lambda(&radial(-1.0, 2, 1.0, 256));
    assert!(dense >= dense_model);
    assert!((dense - shoot).abs() < 1e-3 * shoot);
}

#[test]
fn sampled_model_warps_match_model_balls() {
    let flat = warped_ball_lambda1(&WarpProfile::from_model(0.0, 1.0, 4096).unwrap(), 2, 1e-11).unwrap().lambda1;
    assert!((flat - lambda(0.0, 2, 1.0)).abs() < 1e-6);
    let hyp = warped_ball_lambda1(&WarpProfile::from_model(-1.0, 2.0, 4096).unwrap(), 3, 1e-11).unwrap().lambda1;
    assert!((hyp - lambda(-1.0, 3, 2.0)).abs() < 1e-6);
}

#[test]
fn discrete_converges_to_shooting_at_second_order() {
    let exact = lambda(0.0, 2, 1.0);
    let err = |cells| (radial(0.0, 2, 1.0, cells).ground_state().unwrap().lambda - exact).abs();
    let (e1, e2, e4) = (err(1024), err(2048), err(4096));
    assert!(e4 < 5e-4, "{e4}");
    assert!(e1 / e2 >= 3.5 && e2 / e4 >= 3.5, "{e1} {e2} {e4}");
}

#[test]
fn rescaling_identity() {
    for &c in &[0.5f64, -0.5, 2.0, -2.0] {
        let direct = lambda(c, 3, 1.0);
        let scaled = c.abs() * lambda(c.signum(), 3, c.abs().sqrt());
        assert!((direct - scaled).abs() < 1e-6, "c={c}: {direct} {scaled}");
    }
}

#[test]
fn eigenvalue_decreases_with_radius() {
    for &c in &[-1.0, 0.0, 1.0] {
        let values: Vec<f64> = (1..=10).map(|k| lambda(c, 2, 0.3 * k as f64)).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "c={c}: {values:?}");
    }
}

#[test]
fn returned_eigenpair_has_small_ode_defect() {
    for &(c, n, r) in &[(0.0, 2, 1.0), (1.0, 3, 1.2), (-1.0, 2, 2.0), (-1.0, 4, 3.0)] {
        let ball = ModelBall::new(c, n, r).unwrap();
        let res = model_ball_lambda1(&ball, 1e-11).unwrap();
        let op = RadialOperator::model(&ball, res.n_cells);
        let shot = integrate_radial(&op, res.lambda1).unwrap();
        let defect = ode_defect(&op, &shot, res.lambda1);
        assert!(defect < 1e-6 * (1.0 + res.lambda1), "{c} {n} {r}: {defect}");
        assert_eq!(res.v[0], 1.0);
        assert!(res.v[..res.v.len() - 1].iter().all(|&v| v > 0.0));
        assert!(res.monotone);
    }
}

#[test]
fn shooting_below_eigenvalue_stays_positive() {
    let ball = ModelBall::new(0.0, 2, 1.0).unwrap();
    let op = RadialOperator::model(&ball, 1024);
    let l = model_ball_lambda1_on(&ball, 1024, 1e-11).unwrap().lambda1;
    assert!(integrate_radial(&op, 0.99 * l).unwrap().end_value() > 0.0);
    assert!(integrate_radial(&op, 1.01 * l).unwrap().end_value() < 0.0);
}

#[test]
fn discrete_domain_reference_values() {
    let flat = radial(0.0, 2, 1.0, 1024).ground_state().unwrap().lambda;
    assert!((flat - 5.7832).abs() < 5e-3);
    let hemi = radial(1.0, 2, FRAC_PI_2, 1024).ground_state().unwrap().lambda;
    assert!((hemi - 2.0).abs() < 5e-3);
    let polar = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 256).unwrap(), 256, 16).unwrap();
    let lp = polar.ground_state().unwrap().lambda;
    assert!((lp - radial(0.0, 2, 1.0, 256).ground_state().unwrap().lambda).abs() < 1e-3);
    let line = build_interval(1.0, 2048).unwrap().ground_state().unwrap().lambda;
    assert!((line - PI * PI).abs() < 1e-3);
}

#[test]
fn ground_state_is_positive_and_its_rayleigh_quotient_is_exact() {
    for d in [
        radial(-1.0, 3, 1.5, 300),
        build_polar_domain(&WarpProfile::from_model(1.0, 1.0, 64).unwrap(), 64, 12).unwrap(),
    ] {
        let g = d.ground_state().unwrap();
        assert!(d.interior().iter().all(|&i| g.u[i] > 0.0));
        let q = rayleigh_quotient(&d, &g.u).unwrap();
        assert!((q - g.lambda).abs() < 1e-12 * g.lambda, "{q} {}", g.lambda);
        let trial = d.sample(|t, th| (1.0 - t).max(0.0) * (2.0 + th.cos() * t));
        assert!(rayleigh_quotient(&d, &trial).unwrap() >= g.lambda - 1e-8);
    }
}

#[test]
fn certificates_reproduce_reference_eigenvalues() {
    let hemi = certificate(&radial(1.0, 2, FRAC_PI_2, 512), 1).unwrap().lower;
    assert!((hemi - 2.0).abs() < 5e-2, "{hemi}");
    let line = certificate(&build_interval(1.0, 512).unwrap(), 1).unwrap().lower;
    assert!((line - PI * PI).abs() < 5e-2, "{line}");
    let d = radial(0.0, 2, 1.0, 256);
    let f = d.sample(|t, _| 1.0 - t * t);
    let x = grad_log(&d, &f).unwrap().negated();
    let v = vfield_lower_bound(&d, &x, 0).unwrap().lower;
    assert!((v - 4.0).abs() < 1e-2);
    let b = barta_bounds(&d, &f, &BartaOptions::default()).unwrap().lower;
    assert!((v - b).abs() < 1e-10 * b.abs().max(1.0));
}

#[test]
fn gate_soundness_sweep() {
    let d = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 64).unwrap(), 64, 16).unwrap();
    let l = d.ground_state().unwrap().lambda;
    let mut solvable = 0;
    for k in 0..20 {
        // 0.1 λ₁ to 2 λ₁, geometric so no case lands on λ₁ itself.
        let f = 0.1 * 20f64.powf(k as f64 / 19.0) * l;
        let p = EllipticProblem::constant(&d, f, 0.0).unwrap();
        let gate = solvability_gate(&p, 1e-6).unwrap().gate;
        let s = solve_linear(&p, 1e-6).unwrap();
        let positive = s.status != QLStatus::PositivityFailure;
        assert_eq!(gate == Gate::Solvable, positive, "F = {f}: gate {gate:?}, min f {}", s.min_f);
        if positive {
            assert_eq!(s.status, QLStatus::Converged);
            assert!(s.linear_residual < 1e-8);
            solvable += 1;
        }
    }
    assert!(solvable > 0 && solvable < 20);
}

#[test]
fn blowup_grows_toward_the_boundary() {
    let d = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 256).unwrap(), 256, 16).unwrap();
    let (s, _) = blowup_solution(&d, 1, 1e-2).unwrap();
    let center = s.u[0];
    let next_to_boundary = d.interior().iter().filter(|&&i| d.depth(i) == 1).map(|&i| s.u[i]);
    assert!(next_to_boundary.into_iter().all(|u| u > center + 10f64.ln()));
    let line = build_interval(1.0, 2048).unwrap();
    let (s, l) = blowup_solution(&line, 1, 1e-3).unwrap();
    assert!(s.residual < 1e-3);
    assert!((l - PI * PI).abs() < 1e-3);
    // u = -log sin(π t) up to the max-normalization.
    let mid = line.coords().iter().position(|c| (c.0 - 0.25).abs() < 1e-12).unwrap();
    assert!((s.u[mid] + (PI * 0.25).sin().ln()).abs() < 1e-4);
}

#[test]
fn stability_verdict_is_scale_invariant() {
    for &(r, a2) in &[(1.5, 2.0), (1.75, 2.0), (1.0, 5.0), (2.0, 0.5)] {
        let base = stability_check(&StabilityInput { n: 2, r, a2: A2Data::Sup(a2) }, 256).unwrap().verdict;
        for s in [0.5, 2.0, 3.0] {
            let scaled =
                stability_check(&StabilityInput { n: 2, r: s * r, a2: A2Data::Sup(a2 / (s * s)) }, 256).unwrap();
            assert_eq!(scaled.verdict, base, "r={r} a2={a2} s={s}");
        }
    }
}
