//! Lower bounds from vector fields; `-grad log v` of the ground state is
//! sharp and converges at second order.

use tonelab::bounds::{certificate, vfield_lower_bound};
use tonelab::domain::{build_polar_domain, grad_log};
use tonelab::warp::WarpProfile;

fn main() -> tonelab::Result<()> {
    for cells in [64, 128, 256] {
        let d = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, cells)?, cells, 16)?;
        let cert = certificate(&d, 1)?;
        println!(
            "N = {cells:>3}: certificate {:.8}, lambda1 {:.8}, gap {:.3e}",
            cert.lower,
            cert.lambda1,
            cert.margin_lower.abs()
        );
    }
    let d = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 128)?, 128, 16)?;
    let x = grad_log(&d, &d.sample(|t, _| 1.0 - t * t))?.negated();
    println!("X = -grad log(1 - t^2): lower bound {:.6}", vfield_lower_bound(&d, &x, 1)?.lower);
    Ok(())
}
