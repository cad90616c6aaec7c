//! Enumerate every increasing family for small n and tally who wins.

use picker_chooser::verify::enumerate_increasing;
use picker_chooser::Solver;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solver = Solver::new();
    for n in 1..=6 {
        for k in 0..=n {
            let (mut total, mut alice, mut bob) = (0, 0, 0);
            for f in enumerate_increasing(n, k)? {
                let s = solver.status(&f)?;
                total += 1;
                alice += usize::from(s.alice);
                bob += usize::from(s.bob);
            }
            println!("n={n} k={k}: {total} families, Alice wins {alice}, Bob wins {bob}");
        }
    }
    Ok(())
}
