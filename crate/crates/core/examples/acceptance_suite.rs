//! Runs a single acceptance criterion, or all of them.
//!
//! `cargo run --release --example acceptance_suite -- [id]`

use tonelab::acceptance::{run_criterion, run_suite, AcceptConfig};

fn main() -> tonelab::Result<()> {
    let cfg = AcceptConfig::default();
    match std::env::args().nth(1).and_then(|a| a.parse::<u8>().ok()) {
        Some(id) => println!("{}", run_criterion(id, &cfg)?.line()),
        None => {
            run_suite(&cfg, |o| println!("{}", o.line()));
        }
    }
    Ok(())
}
