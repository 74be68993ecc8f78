//! Sign of the Wronskian between the ground state and the comparison
//! profile on model balls.

use tonelab::comparison::{bracket_positivity, wronskian_negativity};

fn main() -> tonelab::Result<()> {
    for (c, m, r) in [(0.0, 2, 1.0), (1.0, 3, 1.2), (-1.0, 4, 5.0)] {
        let w = wronskian_negativity(c, m, r, 2048, 1e-12)?;
        let b = bracket_positivity(c, m, w.lambda1, r, 2048)?;
        println!(
            "c = {c:>4}, m = {m}, r = {r}: max W = {:.3e}, bracket min = {:.3e} [{}]",
            w.max_w,
            b.min,
            w.verdict.and(b.verdict)
        );
    }
    Ok(())
}
