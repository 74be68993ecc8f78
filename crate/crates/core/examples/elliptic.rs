//! Solvability gate, Dirichlet solve and boundary blow-up for
//! Δu = |∇u|² - F on the unit disk.

use tonelab::domain::build_polar_domain;
use tonelab::quasilinear::{blowup_solution, solvability_gate, solve_dirichlet, EllipticProblem, Gate};
use tonelab::warp::WarpProfile;

fn main() -> tonelab::Result<()> {
    let disk = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 128)?, 128, 16)?;
    let lambda1 = disk.ground_state()?.lambda;
    for s in [0.0, 0.5, 0.9, 1.1] {
        let p = EllipticProblem::constant(&disk, s * lambda1, 0.0)?;
        let gate = solvability_gate(&p, 1e-6)?;
        if gate.gate == Gate::Solvable {
            let sol = solve_dirichlet(&p, 1e-4)?;
            println!("F = {s} lambda1: {:?}, residual {:.2e}, u(0) = {:.6}", sol.status, sol.residual, sol.u[0]);
        } else {
            println!("F = {s} lambda1: {:?}", gate.gate);
        }
    }
    let (blow, l) = blowup_solution(&disk, 1, 1e-2)?;
    println!("blow-up: lambda1 = {l:.6}, defect {:.2e}", blow.residual);
    Ok(())
}
