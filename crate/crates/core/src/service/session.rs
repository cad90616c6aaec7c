//! Live game sessions: the pick/choose state machine, the engine, and
//! per-position analysis.
//!
//! A session is event-sourced: its setup plus the move log determine every
//! other field, and [`GameSession::replay`] rebuilds it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{ElementSet, Family, FamilyError};
use crate::football::{Board, BoardError};
use crate::solver::{reduce_state, Game, MarginProfile, Player, Position, Solver, SolverError};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("instance too large: n = {n}, cap = {cap}")]
    Oversized { n: usize, cap: usize },
    #[error("expected phase {expected}, session is {actual}")]
    WrongPhase { expected: Phase, actual: Phase },
    #[error("{actor} cannot act now, it is {expected}'s move")]
    OutOfTurn { actor: Player, expected: Player },
    #[error("element {0} is not on the board")]
    ElementUnavailable(usize),
    #[error("the game is finished")]
    Finished,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::InvalidInput(_) => "invalid_input",
            SessionError::Oversized { .. } => "oversized",
            SessionError::WrongPhase { .. } => "wrong_phase",
            SessionError::OutOfTurn { .. } => "out_of_turn",
            SessionError::ElementUnavailable(_) => "element_unavailable",
            SessionError::Finished => "finished",
            SessionError::Solver(_) => "solver_error",
        }
    }
}

impl From<BoardError> for SessionError {
    fn from(e: BoardError) -> Self {
        SessionError::InvalidInput(e.to_string())
    }
}

impl From<FamilyError> for SessionError {
    fn from(e: FamilyError) -> Self {
        SessionError::InvalidInput(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    AwaitingPick,
    AwaitingChoice,
    Finished,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::AwaitingPick => "awaiting-pick",
            Phase::AwaitingChoice => "awaiting-choice",
            Phase::Finished => "finished",
        })
    }
}

/// A board as text (`"1,2,3,4"`) or as a JSON array of numbers or strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoardInput {
    Text(String),
    List(Vec<serde_json::Value>),
}

impl BoardInput {
    pub fn parse(&self) -> Result<Board, BoardError> {
        match self {
            BoardInput::Text(t) => Board::parse(t),
            BoardInput::List(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                Board::parse(&parts.join(","))
            }
        }
    }
}

/// Body of `POST /games`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum GameSetup {
    Football {
        board: BoardInput,
        human: Player,
    },
    Family {
        family: Family,
        protagonist: Player,
        human: Player,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub turn: usize,
    pub picker: Player,
    pub element: usize,
    pub chooser: Player,
    pub recipient: Player,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub alice: ElementSet,
    pub bob: ElementSet,
    /// `None` is a level football game.
    pub winner: Option<Player>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alice_sum: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bob_sum: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum Action {
    Pick { element: usize },
    Choose { recipient: Player },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EngineNote {
    pub action: Action,
    /// `false`: the move preserves the objective named in `objective`.
    /// `true`: no objective is attainable and the move came from the
    /// maximal-resistance heuristic, which carries no optimality guarantee.
    pub heuristic: bool,
    pub objective: String,
}

fn idx(p: Player) -> usize {
    match p {
        Player::Alice => 0,
        Player::Bob => 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Node {
    holdings: [ElementSet; 2],
    turn: usize,
    pending: Option<usize>,
}

/// What a player is trying to achieve in one of the session's games.
#[derive(Clone, Copy, Debug)]
struct Goal {
    game: usize,
    player: Player,
}

#[derive(Clone, Debug)]
struct Rules {
    family: Family,
    board: Option<Board>,
    protagonist: Option<Player>,
    games: Vec<Game>,
}

impl Rules {
    fn n(&self) -> usize {
        self.family.n()
    }

    fn quota(&self, p: Player) -> usize {
        match self.protagonist {
            None => self.family.k(),
            Some(prot) if prot == p => self.family.k(),
            Some(_) => self.n() - self.family.k(),
        }
    }

    fn complete(&self, mut node: Node) -> Node {
        let taken = node.holdings[0].union(node.holdings[1]);
        let rest = taken.complement();
        for p in [Player::Alice, Player::Bob] {
            if node.holdings[idx(p)].len() == self.quota(p) {
                let o = idx(p.other());
                node.holdings[o] = node.holdings[o].union(rest);
                break;
            }
        }
        node
    }

    fn finished(&self, node: &Node) -> bool {
        node.holdings[0].len() + node.holdings[1].len() == self.n()
    }

    fn remaining(&self, node: &Node) -> ElementSet {
        node.holdings[0].union(node.holdings[1]).complement()
    }

    fn options(&self, node: &Node) -> Vec<Action> {
        match node.pending {
            Some(_) => vec![
                Action::Choose {
                    recipient: Player::Alice,
                },
                Action::Choose {
                    recipient: Player::Bob,
                },
            ],
            None => self
                .remaining(node)
                .iter()
                .map(|element| Action::Pick { element })
                .collect(),
        }
    }

    fn actor(&self, node: &Node) -> Player {
        match node.pending {
            Some(_) => Player::chooser_at(node.turn),
            None => Player::picker_at(node.turn),
        }
    }

    fn apply(&self, node: &Node, action: Action) -> Node {
        match action {
            Action::Pick { element } => Node {
                pending: Some(element),
                ..*node
            },
            Action::Choose { recipient } => {
                let x = node.pending.expect("choice needs a pending offer");
                let mut next = *node;
                next.holdings[idx(recipient)] = next.holdings[idx(recipient)].with(x);
                next.turn += 1;
                next.pending = None;
                self.complete(next)
            }
        }
    }

    fn position(&self, game: &Game, node: &Node) -> Position {
        let p = game.protagonist();
        Position {
            protagonist: node.holdings[idx(p)],
            antagonist: node.holdings[idx(p.other())],
            turn: node.turn,
        }
    }

    /// Protagonist of `game` wins from `node` (no pending offer) under optimal play.
    fn protagonist_wins(&self, solver: &Solver, game: &Game, node: &Node) -> Result<bool, SolverError> {
        debug_assert!(node.pending.is_none());
        let pos = self.position(game, node);
        if self.finished(node) {
            Ok(game.protagonist_won(&pos))
        } else {
            let r = reduce_state(game.root(), game.protagonist(), pos.protagonist, pos.antagonist, pos.turn)?;
            solver.evaluate_state(&r)
        }
    }

    fn goal_holds(&self, solver: &Solver, goal: Goal, node: &Node) -> Result<bool, SolverError> {
        let game = &self.games[goal.game];
        if node.pending.is_some() {
            let chooser = Player::chooser_at(node.turn);
            let mut any = false;
            let mut all = true;
            for a in self.options(node) {
                let v = self.goal_holds(solver, goal, &self.apply(node, a))?;
                any |= v;
                all &= v;
            }
            return Ok(if chooser == goal.player { any } else { all });
        }
        let pw = self.protagonist_wins(solver, game, node)?;
        Ok(pw == (goal.player == game.protagonist()))
    }

    /// Opponent replies that keep `goal` out of reach, looking through the
    /// goal player's own intermediate decisions (which minimise it).
    fn resistance(&self, solver: &Solver, goal: Goal, node: &Node) -> Result<usize, SolverError> {
        if self.finished(node) {
            return Ok(if self.goal_holds(solver, goal, node)? { 0 } else { usize::MAX });
        }
        let options = self.options(node);
        if self.actor(node) == goal.player {
            let mut best = usize::MAX;
            for a in options {
                best = best.min(self.resistance(solver, goal, &self.apply(node, a))?);
            }
            Ok(best)
        } else {
            let mut count = 0;
            for a in options {
                if !self.goal_holds(solver, goal, &self.apply(node, a))? {
                    count += 1;
                }
            }
            Ok(count)
        }
    }

    /// Objectives of `player` in priority order.
    fn goals(&self, player: Player) -> Vec<(Goal, String)> {
        match self.protagonist {
            None => vec![
                (
                    Goal { game: idx(player), player },
                    format!("{player} forces a strictly larger sum"),
                ),
                (
                    Goal {
                        game: idx(player.other()),
                        player,
                    },
                    format!("{player} avoids losing"),
                ),
            ],
            Some(_) => vec![(
                Goal { game: 0, player },
                format!("{player} wins the family game"),
            )],
        }
    }
}

#[derive(Clone, Debug)]
pub struct GameSession {
    pub id: String,
    setup: GameSetup,
    rules: Rules,
    human: Player,
    node: Node,
    log: Vec<MoveRecord>,
    last_engine_note: Option<EngineNote>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlayerHoldings {
    pub alice: ElementSet,
    pub bob: ElementSet,
}

/// Wire view of a session.
#[derive(Clone, Debug, Serialize)]
pub struct SessionView {
    pub id: String,
    pub mode: &'static str,
    pub human: Player,
    pub engine: Player,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protagonist: Option<Player>,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub board: Option<Board>,
    pub family: Family,
    pub remaining: ElementSet,
    pub holdings: PlayerHoldings,
    pub quotas: PlayerQuotas,
    pub turn: usize,
    pub phase: Phase,
    pub picker: Player,
    pub chooser: Player,
    pub pending: Option<usize>,
    /// Whose action the session is waiting for.
    pub to_act: Option<Player>,
    pub log: Vec<MoveRecord>,
    pub outcome: Option<Outcome>,
    pub last_engine_note: Option<EngineNote>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PlayerQuotas {
    pub alice: usize,
    pub bob: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MoveVerdict {
    Pick {
        element: usize,
        /// Protagonist wins if the element goes to Alice / to Bob.
        protagonist_wins_if_alice: bool,
        protagonist_wins_if_bob: bool,
        winning_for_picker: bool,
    },
    Choose {
        recipient: Player,
        protagonist_wins: bool,
        winning_for_chooser: bool,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct GameAnalysis {
    pub protagonist: Player,
    pub protagonist_wins: bool,
    pub winner: Player,
    pub moves: Vec<MoveVerdict>,
}

/// Margins of the residual family in the first game, with both the
/// standardised labels and the original board labels.
#[derive(Clone, Debug, Serialize)]
pub struct MarginView {
    pub protagonist: Player,
    pub protagonist_picks_next: bool,
    pub residual: Family,
    pub standardised: MarginProfile,
    pub u_a: Vec<usize>,
    pub l_a: Vec<usize>,
    pub u_b: Vec<usize>,
    pub l_b: Vec<usize>,
    pub alice_margin: Vec<usize>,
    pub bob_margin: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub turn: usize,
    pub phase: Phase,
    pub pending: Option<usize>,
    pub summary: String,
    pub games: Vec<GameAnalysis>,
    pub margins: Option<MarginView>,
    pub outcome: Option<Outcome>,
}

impl GameSession {
    pub fn create(id: String, setup: GameSetup, ground_cap: usize) -> Result<Self, SessionError> {
        let (rules, human) = match &setup {
            GameSetup::Football { board, human } => {
                let board = board.parse()?;
                if board.len() > ground_cap {
                    return Err(SessionError::Oversized {
                        n: board.len(),
                        cap: ground_cap,
                    });
                }
                let family = board.winning_family()?;
                let games = vec![
                    Game::new(family.clone(), Player::Alice),
                    Game::new(family.clone(), Player::Bob),
                ];
                (
                    Rules {
                        family,
                        board: Some(board),
                        protagonist: None,
                        games,
                    },
                    *human,
                )
            }
            GameSetup::Family {
                family,
                protagonist,
                human,
            } => {
                if family.n() > ground_cap {
                    return Err(SessionError::Oversized {
                        n: family.n(),
                        cap: ground_cap,
                    });
                }
                if family.n() == 0 {
                    return Err(SessionError::InvalidInput("empty board".into()));
                }
                (
                    Rules {
                        family: family.clone(),
                        board: None,
                        protagonist: Some(*protagonist),
                        games: vec![Game::new(family.clone(), *protagonist)],
                    },
                    *human,
                )
            }
        };
        let n = rules.n();
        let node = rules.complete(Node {
            holdings: [ElementSet::empty(n), ElementSet::empty(n)],
            turn: 0,
            pending: None,
        });
        Ok(GameSession {
            id,
            setup,
            rules,
            human,
            node,
            log: Vec::new(),
            last_engine_note: None,
        })
    }

    /// Rebuilds a session from its setup and move log.
    pub fn replay(
        id: String,
        setup: GameSetup,
        log: &[MoveRecord],
        ground_cap: usize,
    ) -> Result<Self, SessionError> {
        let mut s = GameSession::create(id, setup, ground_cap)?;
        for m in log {
            s.pick_as(m.picker, m.element)?;
            s.choose_as(m.chooser, m.recipient)?;
        }
        Ok(s)
    }

    pub fn setup(&self) -> &GameSetup {
        &self.setup
    }

    pub fn log(&self) -> &[MoveRecord] {
        &self.log
    }

    pub fn human(&self) -> Player {
        self.human
    }

    pub fn engine(&self) -> Player {
        self.human.other()
    }

    pub fn phase(&self) -> Phase {
        if self.rules.finished(&self.node) {
            Phase::Finished
        } else if self.node.pending.is_some() {
            Phase::AwaitingChoice
        } else {
            Phase::AwaitingPick
        }
    }

    pub fn turn(&self) -> usize {
        self.node.turn
    }

    pub fn holdings(&self, p: Player) -> ElementSet {
        self.node.holdings[idx(p)]
    }

    pub fn remaining(&self) -> ElementSet {
        self.rules.remaining(&self.node)
    }

    /// The player whose action the session is waiting for.
    pub fn to_act(&self) -> Option<Player> {
        match self.phase() {
            Phase::Finished => None,
            _ => Some(self.rules.actor(&self.node)),
        }
    }

    pub fn is_engine_turn(&self) -> bool {
        self.to_act() == Some(self.engine())
    }

    fn expect_phase(&self, expected: Phase) -> Result<(), SessionError> {
        let actual = self.phase();
        if actual == Phase::Finished {
            return Err(SessionError::Finished);
        }
        if actual != expected {
            return Err(SessionError::WrongPhase { expected, actual });
        }
        Ok(())
    }

    /// `actor` names `element` as the picker.
    pub fn pick_as(&mut self, actor: Player, element: usize) -> Result<(), SessionError> {
        self.expect_phase(Phase::AwaitingPick)?;
        let picker = Player::picker_at(self.node.turn);
        if actor != picker {
            return Err(SessionError::OutOfTurn {
                actor,
                expected: picker,
            });
        }
        if !self.remaining().contains(element) {
            return Err(SessionError::ElementUnavailable(element));
        }
        self.node.pending = Some(element);
        Ok(())
    }

    /// `actor` hands the pending element to `recipient` as the chooser.
    pub fn choose_as(&mut self, actor: Player, recipient: Player) -> Result<(), SessionError> {
        self.expect_phase(Phase::AwaitingChoice)?;
        let chooser = Player::chooser_at(self.node.turn);
        if actor != chooser {
            return Err(SessionError::OutOfTurn {
                actor,
                expected: chooser,
            });
        }
        let element = self.node.pending.expect("awaiting choice");
        self.log.push(MoveRecord {
            turn: self.node.turn,
            picker: Player::picker_at(self.node.turn),
            element,
            chooser,
            recipient,
        });
        self.node = self.rules.apply(&self.node, Action::Choose { recipient });
        Ok(())
    }

    pub fn apply_pick(&mut self, element: usize) -> Result<(), SessionError> {
        self.pick_as(self.human, element)
    }

    pub fn apply_choice(&mut self, recipient: Player) -> Result<(), SessionError> {
        self.choose_as(self.human, recipient)
    }

    fn perform(&mut self, actor: Player, action: Action) -> Result<(), SessionError> {
        match action {
            Action::Pick { element } => self.pick_as(actor, element),
            Action::Choose { recipient } => self.choose_as(actor, recipient),
        }
    }

    /// The engine's preferred action without playing it.
    ///
    /// Objectives are tried in priority order; the first attainable one is
    /// kept with the lowest-index preserving move (Alice before Bob for
    /// choices). When none is attainable the move minimises the number of
    /// opponent replies that keep the engine lost.
    pub fn engine_decision(&self, solver: &Solver) -> Result<EngineNote, SessionError> {
        if self.phase() == Phase::Finished {
            return Err(SessionError::Finished);
        }
        let engine = self.engine();
        let actor = self.rules.actor(&self.node);
        if actor != engine {
            return Err(SessionError::OutOfTurn {
                actor: engine,
                expected: actor,
            });
        }
        let options = self.rules.options(&self.node);
        let goals = self.rules.goals(engine);
        for (goal, label) in &goals {
            if self.rules.goal_holds(solver, *goal, &self.node)? {
                for &a in &options {
                    if self.rules.goal_holds(solver, *goal, &self.rules.apply(&self.node, a))? {
                        return Ok(EngineNote {
                            action: a,
                            heuristic: false,
                            objective: label.clone(),
                        });
                    }
                }
            }
        }
        let (goal, label) = goals.last().expect("at least one goal");
        let mut best: Option<(usize, Action)> = None;
        for &a in &options {
            let r = self.rules.resistance(solver, *goal, &self.rules.apply(&self.node, a))?;
            if best.is_none_or(|(b, _)| r < b) {
                best = Some((r, a));
            }
        }
        let (_, action) = best.expect("a live position has options");
        Ok(EngineNote {
            action,
            heuristic: true,
            objective: format!("{label} (unattainable; maximal-resistance heuristic)"),
        })
    }

    pub fn engine_move(&mut self, solver: &Solver) -> Result<EngineNote, SessionError> {
        let note = self.engine_decision(solver)?;
        self.perform(self.engine(), note.action)?;
        self.last_engine_note = Some(note.clone());
        Ok(note)
    }

    pub fn outcome(&self) -> Option<Outcome> {
        if !self.rules.finished(&self.node) {
            return None;
        }
        let alice = self.holdings(Player::Alice);
        let bob = self.holdings(Player::Bob);
        match (&self.rules.board, self.rules.protagonist) {
            (Some(board), _) => {
                let a = board.sum_of(alice.iter());
                let b = board.sum_of(bob.iter());
                let winner = match a.cmp(&b) {
                    std::cmp::Ordering::Greater => Some(Player::Alice),
                    std::cmp::Ordering::Less => Some(Player::Bob),
                    std::cmp::Ordering::Equal => None,
                };
                Some(Outcome {
                    alice,
                    bob,
                    winner,
                    alice_sum: Some(a.to_string()),
                    bob_sum: Some(b.to_string()),
                })
            }
            (None, Some(prot)) => {
                let won = self.rules.family.contains_mask(self.holdings(prot).mask());
                Some(Outcome {
                    alice,
                    bob,
                    winner: Some(if won { prot } else { prot.other() }),
                    alice_sum: None,
                    bob_sum: None,
                })
            }
            (None, None) => unreachable!("football sessions carry a board"),
        }
    }

    /// Optimal-play verdicts from the current position of `game`.
    fn game_analysis(&self, solver: &Solver, gi: usize) -> Result<GameAnalysis, SessionError> {
        let game = &self.rules.games[gi];
        let prot = game.protagonist();
        let goal = Goal { game: gi, player: prot };
        let protagonist_wins = self.rules.goal_holds(solver, goal, &self.node)?;
        let mut moves = Vec::new();
        if !self.rules.finished(&self.node) {
            match self.node.pending {
                None => {
                    let picker = Player::picker_at(self.node.turn);
                    for x in self.remaining().iter() {
                        let offered = self.rules.apply(&self.node, Action::Pick { element: x });
                        let to = |r| {
                            self.rules.protagonist_wins(
                                solver,
                                game,
                                &self.rules.apply(&offered, Action::Choose { recipient: r }),
                            )
                        };
                        let if_alice = to(Player::Alice)?;
                        let if_bob = to(Player::Bob)?;
                        let picker_is_prot = picker == prot;
                        let winning_for_picker = if picker_is_prot {
                            if_alice && if_bob
                        } else {
                            !if_alice && !if_bob
                        };
                        moves.push(MoveVerdict::Pick {
                            element: x,
                            protagonist_wins_if_alice: if_alice,
                            protagonist_wins_if_bob: if_bob,
                            winning_for_picker,
                        });
                    }
                }
                Some(_) => {
                    let chooser = Player::chooser_at(self.node.turn);
                    for r in [Player::Alice, Player::Bob] {
                        let next = self.rules.apply(&self.node, Action::Choose { recipient: r });
                        let pw = self.rules.protagonist_wins(solver, game, &next)?;
                        moves.push(MoveVerdict::Choose {
                            recipient: r,
                            protagonist_wins: pw,
                            winning_for_chooser: pw == (chooser == prot),
                        });
                    }
                }
            }
        }
        Ok(GameAnalysis {
            protagonist: prot,
            protagonist_wins,
            winner: if protagonist_wins { prot } else { prot.other() },
            moves,
        })
    }

    fn margin_view(&self, solver: &Solver) -> Result<Option<MarginView>, SessionError> {
        if self.phase() != Phase::AwaitingPick {
            return Ok(None);
        }
        let game = &self.rules.games[0];
        let pos = self.rules.position(game, &self.node);
        let r = reduce_state(game.root(), game.protagonist(), pos.protagonist, pos.antagonist, pos.turn)?;
        if r.residual.is_terminal() {
            return Ok(None);
        }
        let p = solver.margin_profile(&r.residual)?;
        let labels: Vec<usize> = self.remaining().iter().collect();
        let map = |s: ElementSet| s.iter().map(|i| labels[i - 1]).collect::<Vec<_>>();
        Ok(Some(MarginView {
            protagonist: game.protagonist(),
            protagonist_picks_next: r.protagonist_picks_next,
            residual: r.residual.clone(),
            standardised: p,
            u_a: map(p.u_a),
            l_a: map(p.l_a),
            u_b: map(p.u_b),
            l_b: map(p.l_b),
            alice_margin: map(p.alice_margin()),
            bob_margin: map(p.bob_margin()),
        }))
    }

    pub fn analysis(&self, solver: &Solver) -> Result<Analysis, SessionError> {
        let games = (0..self.rules.games.len())
            .map(|gi| self.game_analysis(solver, gi))
            .collect::<Result<Vec<_>, _>>()?;
        let summary = match self.rules.protagonist {
            Some(_) => format!("{} wins under optimal play", games[0].winner),
            None => {
                if games[0].protagonist_wins {
                    "Alice wins under optimal play".to_string()
                } else if games[1].protagonist_wins {
                    "Bob wins under optimal play".to_string()
                } else {
                    "neither side can force a strictly larger sum".to_string()
                }
            }
        };
        Ok(Analysis {
            turn: self.node.turn,
            phase: self.phase(),
            pending: self.node.pending,
            summary,
            games,
            margins: self.margin_view(solver)?,
            outcome: self.outcome(),
        })
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id.clone(),
            mode: if self.rules.board.is_some() { "football" } else { "family" },
            human: self.human,
            engine: self.engine(),
            protagonist: self.rules.protagonist,
            n: self.rules.n(),
            k: self.rules.family.k(),
            board: self.rules.board.clone(),
            family: self.rules.family.clone(),
            remaining: self.remaining(),
            holdings: PlayerHoldings {
                alice: self.holdings(Player::Alice),
                bob: self.holdings(Player::Bob),
            },
            quotas: PlayerQuotas {
                alice: self.rules.quota(Player::Alice),
                bob: self.rules.quota(Player::Bob),
            },
            turn: self.node.turn,
            phase: self.phase(),
            picker: Player::picker_at(self.node.turn),
            chooser: Player::chooser_at(self.node.turn),
            pending: self.node.pending,
            to_act: self.to_act(),
            log: self.log.clone(),
            outcome: self.outcome(),
            last_engine_note: self.last_engine_note.clone(),
        }
    }
}
