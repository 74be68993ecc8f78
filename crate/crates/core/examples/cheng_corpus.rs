//! Seeded corpus of warps with curvature bounded by c, checked against the
//! model ball and written as CSV to stdout.

use tonelab::comparison::{cheng_corpus, write_corpus_csv, CorpusSpec};

fn main() -> tonelab::Result<()> {
    let spec = CorpusSpec { c: 1.0, n: 3, r: 1.0, roughness: 1.0, trials: 10, cells: 512, tol: 1e-8 };
    let rows = cheng_corpus(&spec, 7)?;
    write_corpus_csv(&rows, std::io::stdout())
}
