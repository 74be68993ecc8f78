//! Hyperbolic balls approach McKean's floor (n - 1)² / 4 as r grows.

use tonelab::bounds::mckean_report;

fn main() -> tonelab::Result<()> {
    for n in [2, 3] {
        for r in [2.0, 10.0, 50.0] {
            let (rep, _) = mckean_report(n, r, 1e-10)?;
            println!("n = {n}, r = {r:>4}: lambda1 = {:.7} > {:.2} [{}]", rep.lambda1, rep.lower, rep.verdict);
        }
    }
    Ok(())
}
