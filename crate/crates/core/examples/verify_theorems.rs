//! Run every named check over a small exhaustive range plus a seeded sample.

use picker_chooser::verify::{verify, Theorem, VerifyRange, DEFAULT_SEED};
use picker_chooser::Solver;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solver = Solver::new();
    for t in Theorem::ALL {
        let range = match t {
            Theorem::Football => VerifyRange::sampled(2, 8, 200, DEFAULT_SEED),
            Theorem::Duality => VerifyRange::exhaustive(1, 4),
            _ => VerifyRange::exhaustive(1, 5),
        };
        let report = verify(&solver, t, range)?;
        println!("{}", report.summary());
    }
    Ok(())
}
