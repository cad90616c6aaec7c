//! Exact solver, strategy extractor and verification workbench for
//! alternating picker-chooser games on uniform set families, with the game
//! of football on exact-rational boards as the main specialisation.

pub mod cli;
pub mod family;
pub mod fixtures;
pub mod football;
pub mod service;
pub mod solver;
pub mod verify;

pub use family::{ElementSet, Family, FamilyError, KSet, Sign};
pub use solver::{GameStatus, MarginProfile, Player, Solver, SolverConfig, SolverError};
