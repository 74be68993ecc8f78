//! Stability of a minimal surface piece from a bound on |A|².

use tonelab::comparison::{stability_check, A2Data, StabilityInput};

fn main() -> tonelab::Result<()> {
    for r in [1.0, 1.5, 1.75, 2.5] {
        let rep = stability_check(&StabilityInput { n: 2, r, a2: A2Data::Sup(2.0) }, 512)?;
        println!(
            "r = {r}: {:?}, threshold {:.4}, operator min eigenvalue {:.4}",
            rep.verdict, rep.threshold, rep.operator_min_eigenvalue
        );
    }
    Ok(())
}
