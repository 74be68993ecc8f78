//! Two-sided eigenvalue bounds from positive test fields.

use tonelab::bounds::{barta_bounds, random_test_field, BartaOptions};
use tonelab::domain::build_polar_domain;
use tonelab::warp::WarpProfile;

fn main() -> tonelab::Result<()> {
    let disk = build_polar_domain(&WarpProfile::from_model(0.0, 1.0, 64)?, 64, 16)?;
    let cone = disk.sample(|t, _| 1.0 - t);
    let parabola = disk.sample(|t, _| 1.0 - t * t);
    let fields = [("1 - t", cone), ("1 - t^2", parabola), ("random", random_test_field(&disk, 11))];
    for (name, f) in &fields {
        let b = barta_bounds(&disk, f, &BartaOptions::default())?;
        let upper = b.upper.map_or("inf".to_string(), |u| format!("{u:.4}"));
        println!("{name:>8}: {:.4} <= {:.4} <= {upper} [{}]", b.lower, b.lambda1, b.verdict);
    }
    Ok(())
}
