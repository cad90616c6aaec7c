//! Extract the winner's strategy and play it against a greedy opponent.

use picker_chooser::solver::Game;
use picker_chooser::{fixtures, Player, Solver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solver = Solver::new();
    let f = fixtures::h()?;
    let owner = if solver.status(&f)?.alice { Player::Alice } else { Player::Bob };
    let strategy = solver.extract_strategy(&f, Player::Alice, owner)?;
    let game: Game = strategy.game().clone();
    let mut pos = game.start();
    while !game.is_finished(&pos) {
        let picker = Player::picker_at(pos.turn);
        let (x, to) = if picker == owner {
            let x = strategy.pick(&pos)?;
            // opponent keeps whatever is offered
            (x, owner.other())
        } else {
            let x = game.middle_out_remaining(&pos)[0];
            (x, strategy.choose(&pos, x)?)
        };
        println!("turn {}: {picker} offers {x}, it goes to {to}", pos.turn);
        pos = game.assign(&pos, x, to)?;
    }
    println!("Alice holds {:?}, Bob holds {:?}", game.holdings_of(&pos, Player::Alice), game.holdings_of(&pos, Player::Bob));
    println!("protagonist won: {}", game.protagonist_won(&pos));
    Ok(())
}
