//! JSON-over-HTTP front end for [`GameSession`]s.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::session::{GameSession, GameSetup, MoveRecord, SessionError};
use crate::solver::{Player, Solver};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("no game with id {0}")]
    NotFound(String),
    #[error("malformed request: {0}")]
    BadRequest(String),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("snapshot {path}: {message}")]
    Snapshot { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::NotFound(_) => "not_found",
            ServiceError::BadRequest(_) => "invalid_input",
            ServiceError::Session(e) => e.code(),
            ServiceError::Snapshot { .. } | ServiceError::Io(_) => "internal",
        }
    }

    fn status(&self) -> StatusCode {
        match self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Session(e) => match e {
                SessionError::InvalidInput(_) => StatusCode::BAD_REQUEST,
                SessionError::Oversized { .. } => StatusCode::UNPROCESSABLE_ENTITY,
                SessionError::WrongPhase { .. }
                | SessionError::OutOfTurn { .. }
                | SessionError::ElementUnavailable(_)
                | SessionError::Finished => StatusCode::CONFLICT,
                SessionError::Solver(_) => StatusCode::INTERNAL_SERVER_ERROR,
            },
            ServiceError::Snapshot { .. } | ServiceError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            code: self.code(),
            message: self.to_string(),
        };
        (self.status(), Json(body)).into_response()
    }
}

impl From<JsonRejection> for ServiceError {
    fn from(e: JsonRejection) -> Self {
        ServiceError::BadRequest(e.body_text())
    }
}

/// A saved session: enough to replay it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionSnapshot {
    pub id: String,
    pub setup: GameSetup,
    pub log: Vec<MoveRecord>,
}

/// All live sessions plus the shared solver.
pub struct AppState {
    solver: Arc<Solver>,
    sessions: RwLock<HashMap<String, Arc<Mutex<GameSession>>>>,
}

impl AppState {
    pub fn new(solver: Arc<Solver>) -> Self {
        AppState {
            solver,
            sessions: RwLock::new(HashMap::new()),
        }
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    pub fn create(&self, setup: GameSetup) -> Result<GameSession, SessionError> {
        let id = uuid::Uuid::new_v4().to_string();
        let session = GameSession::create(id.clone(), setup, self.solver.config().ground_cap)?;
        self.sessions
            .write()
            .expect("session table poisoned")
            .insert(id, Arc::new(Mutex::new(session.clone())));
        Ok(session)
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, ServiceError> {
        self.sessions
            .read()
            .expect("session table poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    /// Runs `f` with exclusive access to one session.
    pub fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut GameSession, &Solver) -> Result<T, SessionError>,
    ) -> Result<T, ServiceError> {
        let cell = self.get(id)?;
        let mut guard = cell.lock().unwrap_or_else(|p| p.into_inner());
        Ok(f(&mut guard, &self.solver)?)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Vec<SessionSnapshot> {
        let table = self.sessions.read().expect("session table poisoned");
        let mut out: Vec<SessionSnapshot> = table
            .values()
            .map(|cell| {
                let s = cell.lock().unwrap_or_else(|p| p.into_inner());
                SessionSnapshot {
                    id: s.id.clone(),
                    setup: s.setup().clone(),
                    log: s.log().to_vec(),
                }
            })
            .collect();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }

    pub fn restore(&self, snapshots: Vec<SessionSnapshot>) -> Result<(), SessionError> {
        let cap = self.solver.config().ground_cap;
        let mut table = self.sessions.write().expect("session table poisoned");
        for snap in snapshots {
            let s = GameSession::replay(snap.id.clone(), snap.setup, &snap.log, cap)?;
            table.insert(snap.id, Arc::new(Mutex::new(s)));
        }
        Ok(())
    }

    pub fn save_snapshot(&self, path: &Path) -> Result<(), ServiceError> {
        let text = serde_json::to_string_pretty(&self.snapshot()).map_err(|e| ServiceError::Snapshot {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Loads sessions from `path` if it exists.
    pub fn load_snapshot(&self, path: &Path) -> Result<usize, ServiceError> {
        if !path.exists() {
            return Ok(0);
        }
        let text = std::fs::read_to_string(path)?;
        let snaps: Vec<SessionSnapshot> = serde_json::from_str(&text).map_err(|e| ServiceError::Snapshot {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let count = snaps.len();
        self.restore(snaps)?;
        Ok(count)
    }
}

type Shared = Arc<AppState>;

#[derive(Deserialize)]
struct PickBody {
    element: usize,
}

#[derive(Deserialize)]
struct ChooseBody {
    recipient: Player,
}

async fn create_game(
    State(app): State<Shared>,
    body: Result<Json<GameSetup>, JsonRejection>,
) -> Result<impl IntoResponse, ServiceError> {
    let Json(setup) = body?;
    let session = app.create(setup)?;
    tracing::info!(id = %session.id, "game created");
    Ok((StatusCode::CREATED, Json(session.view())))
}

async fn get_game(State(app): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<Response, ServiceError> {
    let view = app.with_session(&id, |s, _| Ok(s.view()))?;
    Ok(Json(view).into_response())
}

async fn pick(
    State(app): State<Shared>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<PickBody>, JsonRejection>,
) -> Result<Response, ServiceError> {
    let Json(body) = body?;
    let view = app.with_session(&id, |s, _| {
        s.apply_pick(body.element)?;
        Ok(s.view())
    })?;
    Ok(Json(view).into_response())
}

async fn choose(
    State(app): State<Shared>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<ChooseBody>, JsonRejection>,
) -> Result<Response, ServiceError> {
    let Json(body) = body?;
    let view = app.with_session(&id, |s, _| {
        s.apply_choice(body.recipient)?;
        Ok(s.view())
    })?;
    Ok(Json(view).into_response())
}

async fn engine_move(State(app): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<Response, ServiceError> {
    let app2 = app.clone();
    let view = tokio::task::spawn_blocking(move || {
        app2.with_session(&id, |s, solver| {
            s.engine_move(solver)?;
            Ok(s.view())
        })
    })
    .await
    .map_err(|e| ServiceError::Io(std::io::Error::other(e)))??;
    Ok(Json(view).into_response())
}

async fn analysis(State(app): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<Response, ServiceError> {
    let app2 = app.clone();
    let a = tokio::task::spawn_blocking(move || app2.with_session(&id, |s, solver| s.analysis(solver)))
        .await
        .map_err(|e| ServiceError::Io(std::io::Error::other(e)))??;
    Ok(Json(a).into_response())
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/pick", post(pick))
        .route("/games/{id}/choose", post(choose))
        .route("/games/{id}/engine-move", post(engine_move))
        .route("/games/{id}/analysis", get(analysis))
        .with_state(app)
}

/// Serves until Ctrl-C, then writes the snapshot if one was requested.
pub async fn serve(addr: SocketAddr, solver: Arc<Solver>, snapshot: Option<PathBuf>) -> Result<(), ServiceError> {
    let app = Arc::new(AppState::new(solver));
    if let Some(path) = &snapshot {
        let n = app.load_snapshot(path)?;
        tracing::info!(sessions = n, path = %path.display(), "snapshot loaded");
    }
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(app.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(path) = &snapshot {
        app.save_snapshot(path)?;
        tracing::info!(sessions = app.len(), path = %path.display(), "snapshot saved");
    }
    Ok(())
}
