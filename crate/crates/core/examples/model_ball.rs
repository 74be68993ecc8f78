//! First Dirichlet eigenvalue of geodesic balls in the three space forms.

use std::f64::consts::FRAC_PI_2;

use tonelab::radial::model_ball_lambda1;
use tonelab::spaceform::ModelBall;

fn main() -> tonelab::Result<()> {
    for (c, n, r) in [(1.0, 2, FRAC_PI_2), (1.0, 3, FRAC_PI_2), (0.0, 2, 1.0), (-1.0, 2, 1.0), (-1.0, 3, 5.0)] {
        let res = model_ball_lambda1(&ModelBall::new(c, n, r)?, 1e-10)?;
        println!("c = {c:>4}, n = {n}, r = {r:.4}: lambda1 = {:.10} ({} bisections)", res.lambda1, res.iterations);
    }
    Ok(())
}
