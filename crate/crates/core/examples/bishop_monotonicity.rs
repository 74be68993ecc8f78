//! The ratio f / S_c is non-decreasing for warps with curvature <= c.

use tonelab::comparison::{bishop_check, random_warp_on, trial_seed};

fn main() -> tonelab::Result<()> {
    for k in 0..5 {
        let warp = random_warp_on(-1.0, 2.0, trial_seed(1, k), 2.0, 1024)?;
        let rep = bishop_check(&warp, -1.0, 2, 1e-8)?;
        println!("trial {k}: min (f/S)' = {:.3e} [{}]", rep.min_ratio_slope, rep.verdict);
    }
    Ok(())
}
