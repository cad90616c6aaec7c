//! Search for a Bob-win family whose two margins are disjoint.

use picker_chooser::verify::{find_empty_margin_bob_win, find_interior_empty_margin_bob_win};
use picker_chooser::Solver;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solver = Solver::new();
    for (label, found) in [
        ("smallest", find_empty_margin_bob_win(&solver, 6)?),
        ("with 2 <= k <= n-2", find_interior_empty_margin_bob_win(&solver, 6)?),
    ] {
        match found {
            Some(f) => {
                let m = solver.margin_profile(&f)?;
                println!("{label}: {f}  U_A={:?} L_A={:?}", m.u_a, m.l_a);
            }
            None => println!("{label}: none found"),
        }
    }
    Ok(())
}
