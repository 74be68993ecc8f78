//! Catenoid pieces have larger first eigenvalue than flat disks of the
//! same extrinsic radius.

use tonelab::comparison::submanifold_bound_check;

fn main() -> tonelab::Result<()> {
    for r in [1.2, 1.5, 2.0] {
        let rep = submanifold_bound_check(r, 1024, Some(16))?;
        println!(
            "r = {r}: catenoid {:.6} (band {:.6}) >= disk {:.6} [{}]",
            rep.lambda_surface,
            rep.lambda_band.unwrap_or(f64::NAN),
            rep.bound,
            rep.verdict
        );
    }
    Ok(())
}
