//! Exact evaluation of picker-chooser games.
//!
//! For a family `F ⊂ C([n], k)` there are two games on the board `[n]`. In
//! both, Alice picks first and Bob chooses first; they differ in who is the
//! protagonist (the player whose final `k`-set is tested against `F`). The
//! solver evaluates one predicate, "the protagonist wins", for the two cases
//! where the protagonist or the antagonist picks next:
//!
//! ```text
//! wins(F, picks)   = ∃x ∀σ: wins(F_x^σ, !picks)
//! wins(F, !picks)  = ∀x ∃σ: wins(F_x^σ, picks)
//! ```
//!
//! `Alice(F)` is `wins(F, true)` and `Bob(F)` is `wins(F, false)`. Terminal
//! families (`k = 0` or `k = n`) are won iff they are nonempty.
//!
//! Results are memoised on the standardised residual family, so transposed
//! move orders share entries. The table is a concurrent write-once cache and
//! can be shared by worker threads.

use std::fmt;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{ElementSet, Family, FamilyError, Sign, DEFAULT_GROUND_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("ground set of size {n} exceeds the solver cap of {cap}")]
    GroundCap { n: usize, cap: usize },
    #[error("family on C([{n}],{k}) is terminal and has no first offers")]
    Terminal { n: usize, k: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("holdings overlap at {0}")]
    OverlappingHoldings(ElementSet),
    #[error("{who} holds {held} elements but the quota is below {quota}")]
    QuotaExceeded {
        who: &'static str,
        held: usize,
        quota: usize,
    },
    #[error("turn index {turn} does not match the {assigned} elements assigned")]
    TurnMismatch { turn: usize, assigned: usize },
    #[error("{owner} does not win this game, no winning strategy exists")]
    LosingSide { owner: Player },
    #[error("illegal move: {0}")]
    IllegalMove(String),
}

/// One of the two named players. Alice picks on even turns (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }

    pub fn picker_at(turn: usize) -> Player {
        if turn.is_multiple_of(2) {
            Player::Alice
        } else {
            Player::Bob
        }
    }

    pub fn chooser_at(turn: usize) -> Player {
        Player::picker_at(turn).other()
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "Alice",
            Player::Bob => "Bob",
        })
    }
}

/// Verdicts of Alice's and Bob's `F`-games.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameStatus {
    pub alice: bool,
    pub bob: bool,
}

/// First-offer sets `U_A, L_A, U_B, L_B` of a nonterminal family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarginProfile {
    /// `{x : Bob(F_x^+)}`
    pub u_a: ElementSet,
    /// `{x : Bob(F_x^-)}`
    pub l_a: ElementSet,
    /// `{x : Alice(F_x^+)}`
    pub u_b: ElementSet,
    /// `{x : Alice(F_x^-)}`
    pub l_b: ElementSet,
}

impl MarginProfile {
    /// Alice's winning first offers.
    pub fn alice_margin(&self) -> ElementSet {
        self.u_a.intersection(self.l_a)
    }

    /// Offers Bob can answer either way and still win.
    pub fn bob_margin(&self) -> ElementSet {
        self.u_b.intersection(self.l_b)
    }

    pub fn alice_wins(&self) -> bool {
        !self.alice_margin().is_empty()
    }

    pub fn bob_wins(&self) -> bool {
        self.u_b.union(self.l_b) == ElementSet::full(self.u_b.n())
    }

    /// All four sets have the interval shape an increasing family forces.
    pub fn has_interval_structure(&self) -> bool {
        self.u_a.is_upper_interval()
            && self.u_b.is_upper_interval()
            && self.l_a.is_lower_interval()
            && self.l_b.is_lower_interval()
    }
}

impl Serialize for MarginProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MarginProfile", 6)?;
        st.serialize_field("u_a", &self.u_a)?;
        st.serialize_field("l_a", &self.l_a)?;
        st.serialize_field("u_b", &self.u_b)?;
        st.serialize_field("l_b", &self.l_b)?;
        st.serialize_field("alice_margin", &self.alice_margin())?;
        st.serialize_field("bob_margin", &self.bob_margin())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest ground set the solver accepts.
    pub ground_cap: usize,
    /// Maximum number of memo entries; once reached, new results are not cached.
    pub memo_capacity: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            ground_cap: DEFAULT_GROUND_CAP,
            memo_capacity: 1 << 26,
        }
    }
}

/// First offers in the order the solver tries them: `c, c-1, c+1, c-2, ...`
/// with `c = n/2 + 1`.
pub fn middle_out(n: usize) -> impl Iterator<Item = usize> {
    let c = n / 2 + 1;
    (0..2 * n + 2)
        .map(move |i| {
            let d = i.div_ceil(2);
            if i % 2 == 1 {
                c as isize - d as isize
            } else {
                (c + d) as isize
            }
        })
        .filter(move |&x| x >= 1 && x <= n as isize)
        .map(|x| x as usize)
        .take(n)
}

/// A mid-game position reduced to its standardised residual family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateReduction {
    pub residual: Family,
    pub protagonist_picks_next: bool,
}

pub struct Solver {
    config: SolverConfig,
    // [antagonist picks next, protagonist picks next]
    memo: [DashMap<Family, bool>; 2],
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver::with_config(SolverConfig::default())
    }

    pub fn with_config(config: SolverConfig) -> Self {
        Solver {
            config,
            memo: [DashMap::new(), DashMap::new()],
        }
    }

    pub fn config(&self) -> SolverConfig {
        self.config
    }

    pub fn memo_len(&self) -> usize {
        self.memo[0].len() + self.memo[1].len()
    }

    pub fn clear(&self) {
        self.memo[0].clear();
        self.memo[1].clear();
    }

    fn check_cap(&self, f: &Family) -> Result<(), SolverError> {
        if f.n() > self.config.ground_cap {
            Err(SolverError::GroundCap {
                n: f.n(),
                cap: self.config.ground_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Whether the protagonist wins when it (`true`) or the antagonist picks next.
    pub fn wins(&self, f: &Family, protagonist_picks: bool) -> Result<bool, SolverError> {
        self.check_cap(f)?;
        Ok(self.eval(f, protagonist_picks))
    }

    pub fn status(&self, f: &Family) -> Result<GameStatus, SolverError> {
        self.check_cap(f)?;
        Ok(GameStatus {
            alice: self.eval(f, true),
            bob: self.eval(f, false),
        })
    }

    fn eval(&self, f: &Family, picks: bool) -> bool {
        if f.is_empty() {
            return false;
        }
        if f.is_terminal() || f.is_full() {
            return true;
        }
        let table = &self.memo[picks as usize];
        if let Some(v) = table.get(f) {
            return *v;
        }
        let n = f.n();
        let value = if picks {
            middle_out(n).any(|x| {
                Sign::BOTH
                    .iter()
                    .all(|&s| self.eval(&f.section_unchecked(x, s), false))
            })
        } else {
            middle_out(n).all(|x| {
                Sign::BOTH
                    .iter()
                    .any(|&s| self.eval(&f.section_unchecked(x, s), true))
            })
        };
        if table.len() < self.config.memo_capacity {
            table.entry(f.clone()).or_insert(value);
        }
        value
    }

    pub fn margin_profile(&self, f: &Family) -> Result<MarginProfile, SolverError> {
        self.check_cap(f)?;
        let (n, k) = (f.n(), f.k());
        if f.is_terminal() {
            return Err(SolverError::Terminal { n, k });
        }
        let mut p = MarginProfile {
            u_a: ElementSet::empty(n),
            l_a: ElementSet::empty(n),
            u_b: ElementSet::empty(n),
            l_b: ElementSet::empty(n),
        };
        for x in 1..=n {
            let plus = f.section_unchecked(x, Sign::Plus);
            let minus = f.section_unchecked(x, Sign::Minus);
            if self.eval(&plus, false) {
                p.u_a = p.u_a.with(x);
            }
            if self.eval(&minus, false) {
                p.l_a = p.l_a.with(x);
            }
            if self.eval(&plus, true) {
                p.u_b = p.u_b.with(x);
            }
            if self.eval(&minus, true) {
                p.l_b = p.l_b.with(x);
            }
        }
        Ok(p)
    }

    /// Alice's winning first offers in her `F`-game.
    pub fn best_first_offers(&self, f: &Family) -> Result<ElementSet, SolverError> {
        Ok(self.margin_profile(f)?.alice_margin())
    }

    pub fn evaluate_state(&self, s: &StateReduction) -> Result<bool, SolverError> {
        self.wins(&s.residual, s.protagonist_picks_next)
    }

    /// A move oracle for `owner` in the game with the given protagonist.
    pub fn extract_strategy(
        &self,
        root: &Family,
        protagonist: Player,
        owner: Player,
    ) -> Result<Strategy<'_>, SolverError> {
        let game = Game::new(root.clone(), protagonist);
        let strategy = Strategy {
            solver: self,
            game,
            owner,
        };
        let start = strategy.game.start();
        if !strategy.owner_wins(&start)? {
            return Err(SolverError::LosingSide { owner });
        }
        Ok(strategy)
    }
}

/// Sections `root` at every held element (`+` for the protagonist, `-` for the
/// antagonist) and decides who picks next from the turn parity.
pub fn reduce_state(
    root: &Family,
    protagonist: Player,
    protagonist_holdings: ElementSet,
    antagonist_holdings: ElementSet,
    turn_index: usize,
) -> Result<StateReduction, SolverError> {
    let (n, k) = (root.n(), root.k());
    for h in [protagonist_holdings, antagonist_holdings] {
        ElementSet::from_mask(n, h.mask())?;
    }
    let overlap = protagonist_holdings.intersection(antagonist_holdings);
    if !overlap.is_empty() {
        return Err(SolverError::OverlappingHoldings(overlap));
    }
    if protagonist_holdings.len() >= k.max(1) {
        return Err(SolverError::QuotaExceeded {
            who: "protagonist",
            held: protagonist_holdings.len(),
            quota: k,
        });
    }
    if antagonist_holdings.len() >= (n - k).max(1) {
        return Err(SolverError::QuotaExceeded {
            who: "antagonist",
            held: antagonist_holdings.len(),
            quota: n - k,
        });
    }
    let assigned = protagonist_holdings.len() + antagonist_holdings.len();
    if assigned != turn_index {
        return Err(SolverError::TurnMismatch {
            turn: turn_index,
            assigned,
        });
    }
    // Descending order keeps the original labels of the smaller elements valid.
    let mut held: Vec<(usize, Sign)> = protagonist_holdings
        .iter()
        .map(|x| (x, Sign::Plus))
        .chain(antagonist_holdings.iter().map(|x| (x, Sign::Minus)))
        .collect();
    held.sort_unstable_by_key(|h| std::cmp::Reverse(h.0));
    let mut residual = root.clone();
    for (x, sign) in held {
        residual = residual.section(x, sign)?;
    }
    Ok(StateReduction {
        residual,
        protagonist_picks_next: Player::picker_at(turn_index) == protagonist,
    })
}

/// Holdings of both sides of one game plus the turn counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub protagonist: ElementSet,
    pub antagonist: ElementSet,
    pub turn: usize,
}

/// One picker-chooser game: a root family and the protagonist's name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    root: Family,
    protagonist: Player,
}

impl Game {
    pub fn new(root: Family, protagonist: Player) -> Self {
        Game { root, protagonist }
    }

    pub fn root(&self) -> &Family {
        &self.root
    }

    pub fn protagonist(&self) -> Player {
        self.protagonist
    }

    pub fn start(&self) -> Position {
        let n = self.root.n();
        self.complete(Position {
            protagonist: ElementSet::empty(n),
            antagonist: ElementSet::empty(n),
            turn: 0,
        })
    }

    fn complete(&self, mut pos: Position) -> Position {
        let (n, k) = (self.root.n(), self.root.k());
        let rest = pos.protagonist.union(pos.antagonist).complement();
        if pos.protagonist.len() == k {
            pos.antagonist = pos.antagonist.union(rest);
        } else if pos.antagonist.len() == n - k {
            pos.protagonist = pos.protagonist.union(rest);
        }
        pos
    }

    pub fn is_finished(&self, pos: &Position) -> bool {
        pos.protagonist.len() == self.root.k() && pos.antagonist.len() == self.root.n() - self.root.k()
    }

    pub fn remaining(&self, pos: &Position) -> ElementSet {
        pos.protagonist.union(pos.antagonist).complement()
    }

    pub fn holdings_of(&self, pos: &Position, player: Player) -> ElementSet {
        if player == self.protagonist {
            pos.protagonist
        } else {
            pos.antagonist
        }
    }

    /// The chooser hands `x` to `recipient`; the game auto-completes once a quota fills.
    pub fn assign(&self, pos: &Position, x: usize, recipient: Player) -> Result<Position, SolverError> {
        if self.is_finished(pos) {
            return Err(SolverError::IllegalMove("game is over".into()));
        }
        if !self.remaining(pos).contains(x) {
            return Err(SolverError::IllegalMove(format!("{x} is not on the board")));
        }
        let mut next = *pos;
        if recipient == self.protagonist {
            next.protagonist = next.protagonist.with(x);
        } else {
            next.antagonist = next.antagonist.with(x);
        }
        next.turn += 1;
        Ok(self.complete(next))
    }

    /// Final verdict of a finished position.
    pub fn protagonist_won(&self, pos: &Position) -> bool {
        debug_assert!(self.is_finished(pos));
        self.root.contains_mask(pos.protagonist.mask())
    }

    pub fn reduce(&self, pos: &Position) -> Result<StateReduction, SolverError> {
        reduce_state(
            &self.root,
            self.protagonist,
            pos.protagonist,
            pos.antagonist,
            pos.turn,
        )
    }

    /// Does the protagonist win from `pos` under optimal play?
    pub fn protagonist_wins(&self, solver: &Solver, pos: &Position) -> Result<bool, SolverError> {
        if self.is_finished(pos) {
            Ok(self.protagonist_won(pos))
        } else {
            solver.evaluate_state(&self.reduce(pos)?)
        }
    }

    /// Remaining elements in the middle-out order of the residual board.
    pub fn middle_out_remaining(&self, pos: &Position) -> Vec<usize> {
        let remaining: Vec<usize> = self.remaining(pos).iter().collect();
        middle_out(remaining.len()).map(|i| remaining[i - 1]).collect()
    }
}

/// A winning move oracle. Recomputes verdicts through the solver's memo
/// instead of storing a tree.
pub struct Strategy<'a> {
    solver: &'a Solver,
    game: Game,
    owner: Player,
}

impl Strategy<'_> {
    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn owner_wins(&self, pos: &Position) -> Result<bool, SolverError> {
        let p = self.game.protagonist_wins(self.solver, pos)?;
        Ok(p == (self.owner == self.game.protagonist))
    }

    /// The element to offer. Candidates are tried middle-out.
    pub fn pick(&self, pos: &Position) -> Result<usize, SolverError> {
        if self.game.is_finished(pos) || Player::picker_at(pos.turn) != self.owner {
            return Err(SolverError::IllegalMove(format!(
                "{} is not the picker",
                self.owner
            )));
        }
        for x in self.game.middle_out_remaining(pos) {
            let mut good = true;
            for r in [Player::Alice, Player::Bob] {
                if !self.owner_wins(&self.game.assign(pos, x, r)?)? {
                    good = false;
                    break;
                }
            }
            if good {
                return Ok(x);
            }
        }
        Err(SolverError::LosingSide { owner: self.owner })
    }

    /// Who receives the offered element. The owner takes it when both work.
    pub fn choose(&self, pos: &Position, offered: usize) -> Result<Player, SolverError> {
        if self.game.is_finished(pos) || Player::chooser_at(pos.turn) != self.owner {
            return Err(SolverError::IllegalMove(format!(
                "{} is not the chooser",
                self.owner
            )));
        }
        for r in [self.owner, self.owner.other()] {
            if self.owner_wins(&self.game.assign(pos, offered, r)?)? {
                return Ok(r);
            }
        }
        Err(SolverError::LosingSide { owner: self.owner })
    }
}
