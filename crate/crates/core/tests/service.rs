use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use picker_chooser::service::{
    router, Action, AppState, BoardInput, GameSession, GameSetup, MoveVerdict, Phase, SessionError,
};
use picker_chooser::solver::reduce_state;
use picker_chooser::verify::{enumerate_increasing, random_board};
use picker_chooser::{fixtures, Family, Player, Solver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

const CAP: usize = 24;

fn football(board: &str, human: Player) -> GameSession {
    let setup = GameSetup::Football {
        board: BoardInput::Text(board.into()),
        human,
    };
    GameSession::create("t".into(), setup, CAP).unwrap()
}

fn family(f: Family, protagonist: Player, human: Player) -> GameSession {
    let setup = GameSetup::Family {
        family: f,
        protagonist,
        human,
    };
    GameSession::create("t".into(), setup, CAP).unwrap()
}

fn human_options(s: &GameSession) -> Vec<Action> {
    match s.phase() {
        Phase::AwaitingPick => s.remaining().iter().map(|element| Action::Pick { element }).collect(),
        Phase::AwaitingChoice => [Player::Alice, Player::Bob]
            .map(|recipient| Action::Choose { recipient })
            .to_vec(),
        Phase::Finished => vec![],
    }
}

/// Plays every human line; the engine answers whenever it is to act.
fn all_lines(solver: &Solver, mut s: GameSession, finals: &mut Vec<GameSession>) {
    while s.is_engine_turn() {
        s.engine_move(solver).unwrap();
    }
    if s.phase() == Phase::Finished {
        finals.push(s);
        return;
    }
    for a in human_options(&s) {
        let mut next = s.clone();
        match a {
            Action::Pick { element } => next.apply_pick(element).unwrap(),
            Action::Choose { recipient } => next.apply_choice(recipient).unwrap(),
        }
        all_lines(solver, next, finals);
    }
}

#[test]
fn engine_bob_never_loses_football() {
    let solver = Solver::new();
    let mut boards: Vec<String> = vec!["1,2,3,4".into(), "1,2,3,4,5,6".into(), "0,0,0,1".into()];
    for i in 0..12 {
        boards.push(random_board(4 + 2 * (i % 2) as usize, 7, i).unwrap().to_string());
    }
    for b in boards {
        let mut finals = Vec::new();
        all_lines(&solver, football(&b, Player::Alice), &mut finals);
        assert!(!finals.is_empty());
        for s in finals {
            let o = s.outcome().unwrap();
            assert_ne!(o.winner, Some(Player::Alice), "board {b}, log {:?}", s.log());
        }
    }
}

#[test]
fn winning_engine_wins_family_games() {
    let solver = Solver::new();
    // G: Bob wins his game. Engine plays Bob against every human line.
    let mut finals = Vec::new();
    all_lines(
        &solver,
        family(fixtures::g().unwrap(), Player::Bob, Player::Alice),
        &mut finals,
    );
    assert!(finals.iter().all(|s| s.outcome().unwrap().winner == Some(Player::Bob)));
    for f in enumerate_increasing(5, 2).unwrap() {
        let st = solver.status(&f).unwrap();
        for (prot, wins) in [(Player::Alice, st.alice), (Player::Bob, st.bob)] {
            let winner = if wins { prot } else { prot.other() };
            let mut finals = Vec::new();
            all_lines(&solver, family(f.clone(), prot, winner.other()), &mut finals);
            for s in finals {
                assert_eq!(s.outcome().unwrap().winner, Some(winner), "{f}");
            }
        }
    }
}

#[test]
fn analysis_of_g_names_bob() {
    let s = family(fixtures::g().unwrap(), Player::Bob, Player::Alice);
    let a = s.analysis(&Solver::new()).unwrap();
    assert_eq!(a.summary, "Bob wins under optimal play");
    assert_eq!(a.games[0].winner, Player::Bob);
}

#[test]
fn middle_opening_flagged_on_odd_boards() {
    let solver = Solver::new();
    let mut seen = 0;
    for n in [3, 5] {
        let mid = n / 2 + 1;
        for k in 1..n {
            for f in enumerate_increasing(n, k).unwrap() {
                if !solver.status(&f).unwrap().bob {
                    continue;
                }
                let a = family(f.clone(), Player::Alice, Player::Bob).analysis(&solver).unwrap();
                let flagged = a.games[0].moves.iter().any(|m| {
                    matches!(m, MoveVerdict::Pick { element, winning_for_picker: true, .. } if *element == mid)
                });
                assert!(flagged, "{f}");
                seen += 1;
            }
        }
    }
    assert!(seen > 10);
}

fn random_play(seed: u64, mut s: GameSession, solver: &Solver, mut check: impl FnMut(&GameSession)) -> GameSession {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        check(&s);
        if s.phase() == Phase::Finished {
            return s;
        }
        if s.is_engine_turn() && rng.random_bool(0.5) {
            s.engine_move(solver).unwrap();
            continue;
        }
        let actor = s.to_act().unwrap();
        match s.phase() {
            Phase::AwaitingPick => {
                let r: Vec<usize> = s.remaining().iter().collect();
                s.pick_as(actor, r[rng.random_range(0..r.len())]).unwrap();
            }
            _ => {
                let to = if rng.random_bool(0.5) { Player::Alice } else { Player::Bob };
                s.choose_as(actor, to).unwrap();
            }
        }
    }
}

#[test]
fn analysis_agrees_with_reduced_positions() {
    let solver = Solver::new();
    for seed in 0..40 {
        let f = picker_chooser::verify::sample_arbitrary_indexed(6, 5, seed).unwrap();
        let prot = if seed % 2 == 0 { Player::Alice } else { Player::Bob };
        let s = family(f.clone(), prot, Player::Alice);
        random_play(seed, s, &solver, |s| {
            if s.phase() != Phase::AwaitingPick {
                return;
            }
            let a = s.analysis(&solver).unwrap();
            let r = reduce_state(&f, prot, s.holdings(prot), s.holdings(prot.other()), s.turn()).unwrap();
            assert_eq!(a.games[0].protagonist_wins, solver.evaluate_state(&r).unwrap());
        });
    }
}

#[test]
fn replay_reproduces_final_state() {
    let solver = Solver::new();
    for seed in 0..30 {
        let b = random_board(6, 3, seed).unwrap().to_string();
        let s = random_play(seed, football(&b, Player::Bob), &solver, |_| {});
        let r = GameSession::replay("t".into(), s.setup().clone(), s.log(), CAP).unwrap();
        assert_eq!(r.log(), s.log());
        assert_eq!(r.outcome(), s.outcome());
        assert_eq!(r.holdings(Player::Alice), s.holdings(Player::Alice));
        assert_eq!(r.phase(), Phase::Finished);
    }
}

#[test]
fn lost_engine_is_labelled_heuristic() {
    let solver = Solver::new();
    // Alice loses her G-game; the engine plays her
    let mut s = family(fixtures::g().unwrap(), Player::Alice, Player::Bob);
    let note = s.engine_move(&solver).unwrap();
    assert!(note.heuristic);
    let mut s = family(fixtures::h().unwrap(), Player::Alice, Player::Bob);
    let note = s.engine_move(&solver).unwrap();
    assert!(!note.heuristic);
}

#[test]
fn engine_errors() {
    let solver = Solver::new();
    let mut s = football("1,2,3,4", Player::Alice);
    assert!(matches!(s.engine_move(&solver), Err(SessionError::OutOfTurn { .. })));
    let mut s = family(Family::full(3, 3).unwrap(), Player::Alice, Player::Bob);
    assert!(matches!(s.engine_move(&solver), Err(SessionError::Finished)));
}

#[test]
fn quota_completion_assigns_the_rest() {
    let mut s = football("1,2,3,4", Player::Alice);
    s.apply_pick(1).unwrap();
    s.choose_as(Player::Bob, Player::Alice).unwrap();
    s.pick_as(Player::Bob, 2).unwrap();
    s.apply_choice(Player::Alice).unwrap();
    assert_eq!(s.phase(), Phase::Finished);
    assert_eq!(s.holdings(Player::Bob).iter().collect::<Vec<_>>(), vec![3, 4]);
    assert_eq!(s.outcome().unwrap().winner, Some(Player::Bob));
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, v)
}

fn app() -> (Arc<AppState>, axum::Router) {
    let state = Arc::new(AppState::new(Arc::new(Solver::new())));
    (state.clone(), router(state))
}

#[tokio::test]
async fn http_football_round() {
    let (_, app) = app();
    let (st, v) = call(&app, "POST", "/games", Some(json!({"mode": "football", "board": [1, 2, 3, 4], "human": "alice"}))).await;
    assert_eq!(st, StatusCode::CREATED);
    assert_eq!(v["turn"], 0);
    assert_eq!(v["phase"], "awaiting-pick");
    assert_eq!(v["to_act"], "alice");
    let id = v["id"].as_str().unwrap().to_string();

    let (st, v) = call(&app, "POST", &format!("/games/{id}/pick"), Some(json!({"element": 4}))).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["phase"], "awaiting-choice");
    assert_eq!(v["to_act"], "bob");

    let (st, v) = call(&app, "POST", &format!("/games/{id}/choose"), Some(json!({"recipient": "alice"}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["code"], "out_of_turn");

    let (st, v) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["turn"], 1);
    assert_eq!(v["last_engine_note"]["heuristic"], false);
    // the engine keeps the 4 from Alice
    assert_eq!(v["holdings"]["bob"], json!([4]));

    let (st, v) = call(&app, "GET", &format!("/games/{id}/analysis"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["games"].as_array().unwrap().len(), 2);
    assert_eq!(v["games"][0]["protagonist_wins"], false);

    let (st, v) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["log"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn http_family_game_with_fixture() {
    let (_, app) = app();
    let g: Value = serde_json::from_str(fixtures::G_JSON).unwrap();
    let (st, v) = call(&app, "POST", "/games", Some(json!({"mode": "family", "family": g, "protagonist": "bob", "human": "bob"}))).await;
    assert_eq!(st, StatusCode::CREATED);
    let id = v["id"].as_str().unwrap();
    let (_, a) = call(&app, "GET", &format!("/games/{id}/analysis"), None).await;
    assert_eq!(a["summary"], "Bob wins under optimal play");
    assert!(a["margins"]["u_b"].is_array());
}

#[tokio::test]
async fn http_errors() {
    let (_, app) = app();
    let (st, v) = call(&app, "POST", "/games", Some(json!({"mode": "football", "board": "1,2,3", "human": "alice"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "invalid_input");
    assert!(v["message"].as_str().unwrap().contains('3'));

    let (st, v) = call(&app, "POST", "/games", Some(json!({"mode": "chess"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "invalid_input");

    let big: Vec<i64> = (1..=26).collect();
    let (st, v) = call(&app, "POST", "/games", Some(json!({"mode": "football", "board": big, "human": "alice"}))).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["code"], "oversized");

    let (st, v) = call(&app, "GET", "/games/nope", None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    assert_eq!(v["code"], "not_found");

    let (_, v) = call(&app, "POST", "/games", Some(json!({"mode": "football", "board": "1,2,3,4", "human": "alice"}))).await;
    let id = v["id"].as_str().unwrap();
    let (st, v) = call(&app, "POST", &format!("/games/{id}/choose"), Some(json!({"recipient": "bob"}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["code"], "wrong_phase");
    let (st, v) = call(&app, "POST", &format!("/games/{id}/pick"), Some(json!({"element": 9}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["code"], "element_unavailable");
    let (st, v) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["code"], "out_of_turn");
}

#[tokio::test]
async fn snapshot_round_trip() {
    let (state, app) = app();
    let (_, v) = call(&app, "POST", "/games", Some(json!({"mode": "football", "board": "1,2,3,4,5,6", "human": "bob"}))).await;
    let id = v["id"].as_str().unwrap().to_string();
    call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
    call(&app, "POST", &format!("/games/{id}/choose"), Some(json!({"recipient": "bob"}))).await;
    let (_, before) = call(&app, "GET", &format!("/games/{id}"), None).await;

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sessions.json");
    state.save_snapshot(&path).unwrap();

    let fresh = Arc::new(AppState::new(Arc::new(Solver::new())));
    assert_eq!(fresh.load_snapshot(&path).unwrap(), 1);
    let (_, after) = call(&router(fresh), "GET", &format!("/games/{id}"), None).await;
    for key in ["holdings", "turn", "phase", "log", "remaining"] {
        assert_eq!(before[key], after[key], "{key}");
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_sessions() {
    let (state, app) = app();
    let mut handles = Vec::new();
    for i in 0..16 {
        let app = app.clone();
        handles.push(tokio::spawn(async move {
            let human = if i % 2 == 0 { "alice" } else { "bob" };
            let (_, v) = call(&app, "POST", "/games", Some(json!({"mode": "football", "board": "1,2,3,4,5,6", "human": human}))).await;
            let id = v["id"].as_str().unwrap().to_string();
            // the human offers the lowest element and keeps every offer
            loop {
                let (_, v) = call(&app, "GET", &format!("/games/{id}"), None).await;
                if v["phase"] == "finished" {
                    return v;
                }
                if v["to_act"] == human {
                    if v["phase"] == "awaiting-pick" {
                        let e = v["remaining"][0].clone();
                        call(&app, "POST", &format!("/games/{id}/pick"), Some(json!({"element": e}))).await;
                    } else {
                        call(&app, "POST", &format!("/games/{id}/choose"), Some(json!({"recipient": human}))).await;
                    }
                } else {
                    let (st, _) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
                    assert_eq!(st, StatusCode::OK);
                }
            }
        }));
    }
    for h in handles {
        let v = h.await.unwrap();
        assert_eq!(v["phase"], "finished");
        if v["engine"] == "bob" {
            assert_ne!(v["outcome"]["winner"], "alice");
        }
    }
    assert_eq!(state.len(), 16);
}
