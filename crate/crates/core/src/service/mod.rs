//! Interactive play over HTTP.

pub mod http;
pub mod session;

pub use http::{router, serve, AppState, ServiceError, SessionSnapshot};
pub use session::{
    Action, Analysis, BoardInput, EngineNote, GameSession, GameSetup, MoveRecord, MoveVerdict, Outcome, Phase,
    SessionError,
};
