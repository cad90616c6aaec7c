//! Drive a football session in memory: a human Alice against the engine.

use picker_chooser::service::{BoardInput, GameSetup, GameSession};
use picker_chooser::{Player, Solver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let solver = Solver::new();
    let setup = GameSetup::Football { board: BoardInput::Text("1,2,3,4,5,6".into()), human: Player::Alice };
    let mut session = GameSession::create("demo".into(), setup, 16)?;
    while let Some(actor) = session.to_act() {
        if session.is_engine_turn() {
            let note = session.engine_move(&solver)?;
            println!("engine: {note:?}");
        } else if session.turn() % 2 == 0 {
            // Alice picks her smallest remaining element
            let x = session.remaining().iter().next().expect("element left");
            println!("{actor} offers {x}");
            session.apply_pick(x)?;
        } else {
            session.apply_choice(Player::Alice)?;
            println!("{actor} keeps the offer");
        }
    }
    println!("{:?}", session.outcome());
    Ok(())
}
