//! A rotationally symmetric ball given by a warping function, compared
//! with the model ball it dominates.

use tonelab::comparison::cheng_compare;
use tonelab::radial::warped_ball_lambda1;
use tonelab::warp::{radial_curvature, WarpProfile};

fn main() -> tonelab::Result<()> {
    // f(t) = sinh t + 0.1 t³ has radial curvature -f''/f <= -1.
    let warp = WarpProfile::from_fn(
        1.0,
        2048,
        |t| t.sinh() + 0.1 * t.powi(3),
        |t| t.cosh() + 0.3 * t * t,
        |t| t.sinh() + 0.6 * t,
    )?;
    let kmax = radial_curvature(&warp).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let res = warped_ball_lambda1(&warp, 2, 1e-10)?;
    println!("max radial curvature {kmax:.6}, lambda1 = {:.8}", res.lambda1);
    let cmp = cheng_compare(&warp, -1.0, 2, 1e-8)?;
    println!("model lambda1 = {:.8}, status {:?}", cmp.lambda_model.unwrap_or(f64::NAN), cmp.status);
    Ok(())
}
