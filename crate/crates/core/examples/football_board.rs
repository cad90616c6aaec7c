//! Analyse football boards: the natural board and one with fractional scores.

use picker_chooser::football::{analyze, Board};
use picker_chooser::Solver;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solver = Solver::new();
    for board in [Board::natural(3)?, Board::parse("1/2,1,2.5,3,7,7")?] {
        let a = analyze(&solver, &board)?;
        println!(
            "board {board}: alice_wins={} bob_wins={} draw_possible={} tie_capable={}",
            a.alice_wins, a.bob_wins, a.draw_possible, a.tie_capable
        );
    }
    Ok(())
}
