//! Solve the bundled fixture families and print their verdicts and margins.

use picker_chooser::{fixtures, Solver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solver = Solver::new();
    for (name, f) in [("G", fixtures::g()?), ("H", fixtures::h()?)] {
        let status = solver.status(&f)?;
        let margins = solver.margin_profile(&f)?;
        println!("{name}: n={} k={} |F|={} increasing={}", f.n(), f.k(), f.len(), f.is_increasing());
        println!("  Alice wins {}, Bob wins {}", status.alice, status.bob);
        println!("  Alice's winning first offers {:?}", margins.alice_margin());
    }
    Ok(())
}
