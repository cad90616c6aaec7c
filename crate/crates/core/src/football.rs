//! Football: `2m` exact-rational scores split into two teams of `m`.
//!
//! Indices always refer to the ascending sort of the board. Alice's winning
//! family is the set of `m`-sets whose sum strictly exceeds the sum of the
//! complement; since both teams have `m` players, the same family is Bob's
//! strict-win family in his game.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::family::{Family, FamilyError, KSet, MAX_GROUND};
use crate::solver::{Solver, SolverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("board has {0} scores; football needs an even, positive count")]
    OddCardinality(usize),
    #[error("cannot parse score `{0}`")]
    BadToken(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("board of {n} scores exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("the four-element rule needs a board of 4 scores, got {0}")]
    NotFourElements(usize),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Sorted scores `x_1 <= ... <= x_{2m}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Board {
    scores: Vec<BigRational>,
}

fn parse_score(token: &str) -> Result<BigRational, BoardError> {
    let bad = || BoardError::BadToken(token.to_string());
    if let Some((p, q)) = token.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(BoardError::ZeroDenominator(token.to_string()));
        }
        return Ok(BigRational::new(p, q));
    }
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

impl Board {
    pub fn new(mut scores: Vec<BigRational>) -> Result<Self, BoardError> {
        if scores.is_empty() || scores.len() % 2 == 1 {
            return Err(BoardError::OddCardinality(scores.len()));
        }
        if scores.len() > MAX_GROUND {
            return Err(BoardError::TooLarge {
                n: scores.len(),
                limit: MAX_GROUND,
            });
        }
        scores.sort();
        Ok(Board { scores })
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(scores: I) -> Result<Self, BoardError> {
        Board::new(
            scores
                .into_iter()
                .map(|s| BigRational::from_integer(s.into()))
                .collect(),
        )
    }

    /// The natural board `1, 2, ..., 2m`.
    pub fn natural(m: usize) -> Result<Self, BoardError> {
        Board::from_integers(1..=(2 * m) as i64)
    }

    /// Comma-separated integers, decimals (`0.25`) or fractions (`3/4`).
    pub fn parse(text: &str) -> Result<Self, BoardError> {
        let scores = text
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(parse_score)
            .collect::<Result<Vec<_>, _>>()?;
        Board::new(scores)
    }

    pub fn m(&self) -> usize {
        self.scores.len() / 2
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn scores(&self) -> &[BigRational] {
        &self.scores
    }

    /// Score of element `i` (1-based, ascending order).
    pub fn score(&self, i: usize) -> &BigRational {
        &self.scores[i - 1]
    }

    pub fn total(&self) -> BigRational {
        self.scores.iter().cloned().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn sum_of<I: IntoIterator<Item = usize>>(&self, elements: I) -> BigRational {
        elements
            .into_iter()
            .fold(BigRational::zero(), |acc, i| acc + self.score(i))
    }

    /// Scores rescaled to integers over a common denominator (order preserved).
    fn integer_scores(&self) -> Vec<BigInt> {
        let lcm = self
            .scores
            .iter()
            .fold(BigInt::one(), |acc, s| acc.lcm(s.denom()));
        self.scores
            .iter()
            .map(|s| s.numer() * (&lcm / s.denom()))
            .collect()
    }

    /// `{S ∈ C([2m], m) : 2 Σ_S > Σ}`.
    pub fn winning_family(&self) -> Result<Family, BoardError> {
        let ints = self.integer_scores();
        let total: BigInt = ints.iter().sum();
        let f = Family::from_predicate(self.len(), self.m(), |s| {
            let sum: BigInt = s.iter().map(|i| &ints[i - 1]).sum();
            BigInt::from(2) * sum > total
        })?;
        Ok(f)
    }

    /// Sets whose sum exactly equals their complement's.
    pub fn tie_family(&self) -> Result<Family, BoardError> {
        let ints = self.integer_scores();
        let total: BigInt = ints.iter().sum();
        Ok(Family::from_predicate(self.len(), self.m(), |s| {
            let sum: BigInt = s.iter().map(|i| &ints[i - 1]).sum();
            BigInt::from(2) * sum == total
        })?)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.scores.iter().map(fmt_rational).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Board[{self}]")
    }
}

impl FromStr for Board {
    type Err = BoardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Board::parse(s)
    }
}

impl Serialize for Board {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.scores.iter().map(fmt_rational))
    }
}

/// Exact verdicts for one board.
#[derive(Clone, Debug, Serialize)]
pub struct FootballAnalysis {
    pub board: Board,
    pub m: usize,
    pub alice_family: Family,
    pub bob_strict_family: Family,
    /// Alice can force a strictly larger sum.
    pub alice_wins: bool,
    /// Bob can force a strictly larger sum.
    pub bob_wins: bool,
    /// Neither side can force a strict win, so optimal play can end level.
    pub draw_possible: bool,
    /// Some split has equal sums.
    pub tie_capable: bool,
}

pub fn analyze(solver: &Solver, board: &Board) -> Result<FootballAnalysis, BoardError> {
    let family = board.winning_family()?;
    let status = solver.status(&family)?;
    let alice_wins = status.alice;
    let bob_wins = status.bob;
    Ok(FootballAnalysis {
        board: board.clone(),
        m: board.m(),
        bob_strict_family: family.clone(),
        alice_family: family,
        alice_wins,
        bob_wins,
        draw_possible: !alice_wins && !bob_wins,
        tie_capable: !board.tie_family()?.is_empty(),
    })
}

/// Bob's plan on a four-element board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FourElementRule {
    /// `x1 + x4 >= x2 + x3`: keep `x4` out of Alice's hand.
    KeepTop,
    /// `x1 + x4 < x2 + x3`: make sure `x1` ends up in Alice's hand.
    ForceBottom,
}

impl FourElementRule {
    pub fn for_board(board: &Board) -> Result<Self, BoardError> {
        if board.len() != 4 {
            return Err(BoardError::NotFourElements(board.len()));
        }
        let outer = board.score(1) + board.score(4);
        let inner = board.score(2) + board.score(3);
        Ok(if outer >= inner {
            FourElementRule::KeepTop
        } else {
            FourElementRule::ForceBottom
        })
    }

    /// Alice's 2-sets that defeat Bob's objective; Bob succeeds iff Alice
    /// loses her game on this family.
    pub fn objective_family(self) -> Family {
        Family::from_predicate(4, 2, |s: KSet| match self {
            FourElementRule::KeepTop => s.contains(4),
            FourElementRule::ForceBottom => !s.contains(1),
        })
        .expect("C([4],2) is valid")
    }
}

/// Sign of `2 Σ_S - Σ` for one split: positive when `S` strictly wins.
pub fn split_margin(board: &Board, alice: &KSet) -> BigRational {
    BigRational::from_integer(2.into()) * board.sum_of(alice.iter()) - board.total()
}

pub fn margin_is_positive(board: &Board, alice: &KSet) -> bool {
    split_margin(board, alice).is_positive()
}
