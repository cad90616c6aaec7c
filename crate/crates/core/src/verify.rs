//! Enumeration and sampling of increasing families, and the harness that
//! checks the parity, central-move and related properties over them.
//!
//! Exhaustive runs cover every increasing family (every upset of the
//! pointwise order) for each `k`; sampled runs draw families as the upward
//! closure of random generator sets. The sampled distribution is not uniform
//! over upsets.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::family::{binomial, k_masks, rank_mask, Family, FamilyError, Sign};
use crate::fixtures::{self, FixtureError};
use crate::football::{self, Board, BoardError};
use crate::solver::{Solver, SolverError};

/// Largest `n` enumerated exhaustively unless overridden.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 6;

/// Largest `n` for which every family (not only increasing ones) is enumerated.
pub const ARBITRARY_EXHAUSTIVE_CAP: usize = 5;

pub const DEFAULT_SEED: u64 = 0x5eed_f007_ba11;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("n = {n} is above the exhaustive cap of {cap}")]
    AboveCap { n: usize, cap: usize },
    #[error("k1 formulas are checked for n <= 12, got {0}")]
    K1Range(usize),
    #[error("empty range {0}..={1}")]
    EmptyRange(usize, usize),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
}

/// Depth-first stream of every increasing family in `C([n], k)`.
///
/// Ranks are decided from the top of the colex order down; a set may join
/// only when all of its upper covers already have, so every branch is an
/// upset and none dead-ends.
pub struct IncreasingFamilies {
    upper_covers: Vec<Vec<usize>>,
    stack: Vec<(usize, Family)>,
}

impl Iterator for IncreasingFamilies {
    type Item = Family;

    fn next(&mut self) -> Option<Family> {
        while let Some((undecided, f)) = self.stack.pop() {
            if undecided == 0 {
                return Some(f);
            }
            let r = undecided - 1;
            if self.upper_covers[r].iter().all(|&c| f.has_rank(c)) {
                let mut with = f.clone();
                with.set_rank(r);
                self.stack.push((r, f));
                self.stack.push((r, with));
            } else {
                self.stack.push((r, f));
            }
        }
        None
    }
}

pub fn enumerate_increasing(n: usize, k: usize) -> Result<IncreasingFamilies, VerifyError> {
    enumerate_increasing_capped(n, k, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn enumerate_increasing_capped(
    n: usize,
    k: usize,
    cap: usize,
) -> Result<IncreasingFamilies, VerifyError> {
    if n > cap {
        return Err(VerifyError::AboveCap { n, cap });
    }
    let root = Family::empty(n, k)?;
    let upper_covers = k_masks(n, k)
        .map(|t| {
            (0..n.saturating_sub(1))
                .filter(|&b| t >> b & 1 == 1 && t >> (b + 1) & 1 == 0)
                .map(|b| rank_mask(t ^ (0b11 << b)) as usize)
                .collect()
        })
        .collect();
    Ok(IncreasingFamilies {
        upper_covers,
        stack: vec![(binomial(n, k) as usize, root)],
    })
}

/// Upward closure of a random generator set; each `k`-set is a generator
/// independently with the given probability.
pub fn sample_increasing(
    n: usize,
    k: usize,
    seed: u64,
    probability: f64,
) -> Result<Family, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_generators(&mut rng, n, k, probability)?.upward_closure())
}

fn random_generators(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    probability: f64,
) -> Result<Family, VerifyError> {
    let p = probability.clamp(0.0, 1.0);
    Ok(Family::from_predicate(n, k, |_| rng.random_bool(p))?)
}

fn indexed_rng(seed: u64, n: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 40) | index);
    rng
}

/// The `index`-th sample of a seeded run. `k` cycles through `1..n` and the
/// generator probability is drawn per sample, so a run covers sparse and
/// dense families alike. Depends only on `(seed, n, index)`.
pub fn sample_indexed(n: usize, seed: u64, index: u64) -> Result<Family, VerifyError> {
    let k = 1 + (index as usize) % (n - 1).max(1);
    let mut rng = indexed_rng(seed, n, index);
    let p = rng.random_range(0.01..0.4);
    Ok(random_generators(&mut rng, n, k.min(n), p)?.upward_closure())
}

/// A uniformly random (usually not increasing) family for the duality checks.
pub fn sample_arbitrary_indexed(n: usize, seed: u64, index: u64) -> Result<Family, VerifyError> {
    let k = (index as usize) % (n + 1);
    let mut rng = indexed_rng(seed ^ 0xa5a5, n, index);
    let p = rng.random_range(0.1..0.9);
    random_generators(&mut rng, n, k, p)
}

/// Every family in `C([n], k)`, increasing or not.
pub fn enumerate_all(n: usize, k: usize) -> Result<impl Iterator<Item = Family>, VerifyError> {
    if n > ARBITRARY_EXHAUSTIVE_CAP {
        return Err(VerifyError::AboveCap {
            n,
            cap: ARBITRARY_EXHAUSTIVE_CAP,
        });
    }
    let size = binomial(n, k) as usize;
    let base = Family::empty(n, k)?;
    Ok((0u64..1 << size).map(move |bits| {
        let mut f = base.clone();
        for r in 0..size {
            if bits >> r & 1 == 1 {
                f.set_rank(r);
            }
        }
        f
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Even `n`: Alice ⟹ Bob. Odd `n`: Bob ⟹ Alice.
    Parity,
    /// Middle-element and indifference statements.
    Central,
    /// Closed forms for singleton families.
    K1,
    /// The shipped `G` and `H` verdicts.
    Counterexamples,
    /// `U_A, U_B` upper intervals, `L_A, L_B` lower intervals, and the
    /// margin characterisations of both verdicts.
    Intervals,
    /// Bob's threshold reply derived from one good Alice offer on even boards.
    Threshold,
    /// `Alice(F) = ¬Bob(dual F)` and `Bob(F) = ¬Alice(dual F)`.
    Duality,
    /// Subfamily monotonicity for nested increasing families.
    Monotonicity,
    /// Alice never wins football.
    Football,
}

impl Theorem {
    pub const ALL: [Theorem; 9] = [
        Theorem::Parity,
        Theorem::Central,
        Theorem::K1,
        Theorem::Counterexamples,
        Theorem::Intervals,
        Theorem::Threshold,
        Theorem::Duality,
        Theorem::Monotonicity,
        Theorem::Football,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Parity => "parity",
            Theorem::Central => "central",
            Theorem::K1 => "k1",
            Theorem::Counterexamples => "counterexamples",
            Theorem::Intervals => "intervals",
            Theorem::Threshold => "threshold",
            Theorem::Duality => "duality",
            Theorem::Monotonicity => "monotonicity",
            Theorem::Football => "football",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Theorem::ALL.iter().map(|t| t.name()).collect();
                format!("unknown theorem `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyRange {
    pub n_min: usize,
    pub n_max: usize,
    pub mode: Mode,
}

impl VerifyRange {
    pub fn exhaustive(n_min: usize, n_max: usize) -> Self {
        VerifyRange {
            n_min,
            n_max,
            mode: Mode::Exhaustive,
        }
    }

    pub fn sampled(n_min: usize, n_max: usize, samples: u64, seed: u64) -> Self {
        VerifyRange {
            n_min,
            n_max,
            mode: Mode::Sampled { samples, seed },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub family: Family,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    #[serde(flatten)]
    pub range: VerifyRange,
    pub families_checked: u64,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        let mode = match self.range.mode {
            Mode::Exhaustive => "exhaustive".to_string(),
            Mode::Sampled { samples, seed } => format!("sampled {samples}/n seed {seed}"),
        };
        format!(
            "{} n={}..={} ({mode}): {} families, {} violations, {}",
            self.theorem,
            self.range.n_min,
            self.range.n_max,
            self.families_checked,
            self.violations.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

type Check = fn(&Solver, &Family) -> Result<Option<String>, VerifyError>;

fn check_parity(solver: &Solver, f: &Family) -> Result<Option<String>, VerifyError> {
    let st = solver.status(f)?;
    let n = f.n();
    Ok(if n.is_multiple_of(2) && st.alice && !st.bob {
        Some(format!("n = {n} even: Alice wins but Bob does not"))
    } else if n % 2 == 1 && st.bob && !st.alice {
        Some(format!("n = {n} odd: Bob wins but Alice does not"))
    } else {
        None
    })
}

fn check_central(solver: &Solver, f: &Family) -> Result<Option<String>, VerifyError> {
    let (n, k) = (f.n(), f.k());
    if k == 0 || k >= n {
        return Ok(None);
    }
    let m = n / 2;
    if n % 2 == 1 {
        if solver.wins(f, false)? {
            for s in Sign::BOTH {
                if !solver.wins(&f.section(m + 1, s)?, false)? {
                    return Ok(Some(format!(
                        "Bob(F) holds but Bob(F_{}^{s}) fails",
                        m + 1
                    )));
                }
            }
        }
    } else if solver.wins(f, true)? {
        for x in [m, m + 1] {
            for s in Sign::BOTH {
                if !solver.wins(&f.section(x, s)?, true)? {
                    return Ok(Some(format!("Alice(F) holds but Alice(F_{x}^{s}) fails")));
                }
            }
        }
    }
    Ok(None)
}

fn check_intervals(solver: &Solver, f: &Family) -> Result<Option<String>, VerifyError> {
    if f.is_terminal() {
        return Ok(None);
    }
    let p = solver.margin_profile(f)?;
    let st = solver.status(f)?;
    Ok(if !p.has_interval_structure() {
        Some(format!(
            "U_A={} L_A={} U_B={} L_B={} not interval-shaped",
            p.u_a, p.l_a, p.u_b, p.l_b
        ))
    } else if p.alice_wins() != st.alice {
        Some("Alice verdict disagrees with her margin".into())
    } else if p.bob_wins() != st.bob {
        Some("Bob verdict disagrees with U_B ∪ L_B = [n]".into())
    } else {
        None
    })
}

fn check_threshold(solver: &Solver, f: &Family) -> Result<Option<String>, VerifyError> {
    let n = f.n();
    if f.is_terminal() || n % 2 == 1 || !solver.wins(f, true)? {
        return Ok(None);
    }
    let witnesses = solver.best_first_offers(f)?;
    for a in witnesses.iter() {
        for x in 1..=n {
            if x <= a && !solver.wins(&f.section(x, Sign::Minus)?, true)? {
                return Ok(Some(format!("offer a={a}: rejecting x={x} loses")));
            }
            if x >= a && !solver.wins(&f.section(x, Sign::Plus)?, true)? {
                return Ok(Some(format!("offer a={a}: accepting x={x} loses")));
            }
        }
    }
    Ok(None)
}

fn check_duality(solver: &Solver, f: &Family) -> Result<Option<String>, VerifyError> {
    let st = solver.status(f)?;
    let d = solver.status(&f.dual())?;
    Ok(if st.alice == d.bob || st.bob == d.alice {
        Some(format!("status {st:?}, dual status {d:?}"))
    } else {
        None
    })
}

/// `F ⊆ F ∪ closure({S})` for every `S`, so each step up is one nested pair.
fn check_monotonicity(solver: &Solver, f: &Family) -> Result<Option<String>, VerifyError> {
    let st = solver.status(f)?;
    for s in f.complement_sets() {
        let g = f.with_set(s).upward_closure();
        let sg = solver.status(&g)?;
        if (st.alice && !sg.alice) || (st.bob && !sg.bob) {
            return Ok(Some(format!("adding {s} and closing loses a verdict")));
        }
    }
    Ok(None)
}

fn run_checks<I>(solver: &Solver, families: I, check: Check) -> Result<(u64, Vec<Violation>), VerifyError>
where
    I: IndexedParallelIterator<Item = Result<Family, VerifyError>>,
{
    let results: Vec<Result<Option<Violation>, VerifyError>> = families
        .map(|f| {
            let f = f?;
            Ok(check(solver, &f)?.map(|detail| Violation { family: f, detail }))
        })
        .collect();
    let mut checked = 0;
    let mut violations = Vec::new();
    for r in results {
        checked += 1;
        if let Some(v) = r? {
            violations.push(v);
        }
    }
    Ok((checked, violations))
}

fn increasing_source(
    n: usize,
    mode: Mode,
    exhaustive_cap: usize,
) -> Result<Vec<Result<Family, VerifyError>>, VerifyError> {
    Ok(match mode {
        Mode::Exhaustive => {
            let mut all = Vec::new();
            for k in 0..=n {
                all.extend(enumerate_increasing_capped(n, k, exhaustive_cap)?.map(Ok));
            }
            all
        }
        Mode::Sampled { samples, seed } => (0..samples)
            .into_par_iter()
            .map(|i| sample_indexed(n, seed, i))
            .collect(),
    })
}

fn arbitrary_source(n: usize, mode: Mode) -> Result<Vec<Result<Family, VerifyError>>, VerifyError> {
    Ok(match mode {
        Mode::Exhaustive => {
            let mut all = Vec::new();
            for k in 0..=n {
                all.extend(enumerate_all(n, k)?.map(Ok));
            }
            all
        }
        Mode::Sampled { samples, seed } => (0..samples)
            .into_par_iter()
            .map(|i| sample_arbitrary_indexed(n, seed, i))
            .collect(),
    })
}

/// Knobs beyond the range itself.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub exhaustive_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

pub fn verify(
    solver: &Solver,
    theorem: Theorem,
    range: VerifyRange,
) -> Result<VerificationReport, VerifyError> {
    verify_with(solver, theorem, range, VerifyOptions::default())
}

pub fn verify_with(
    solver: &Solver,
    theorem: Theorem,
    range: VerifyRange,
    options: VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    if range.n_min > range.n_max {
        return Err(VerifyError::EmptyRange(range.n_min, range.n_max));
    }
    let start = Instant::now();
    let (checked, violations) = match theorem {
        Theorem::K1 => k1_formulas(solver, range.n_max)?,
        Theorem::Counterexamples => counterexamples(solver)?,
        Theorem::Football => football_boards(solver, range)?,
        _ => {
            let check: Check = match theorem {
                Theorem::Parity => check_parity,
                Theorem::Central => check_central,
                Theorem::Intervals => check_intervals,
                Theorem::Threshold => check_threshold,
                Theorem::Duality => check_duality,
                Theorem::Monotonicity => check_monotonicity,
                _ => unreachable!(),
            };
            let mut checked = 0;
            let mut violations = Vec::new();
            for n in range.n_min.max(1)..=range.n_max {
                let source = if theorem == Theorem::Duality {
                    arbitrary_source(n, range.mode)?
                } else {
                    increasing_source(n, range.mode, options.exhaustive_cap)?
                };
                let (c, v) = run_checks(solver, source.into_par_iter(), check)?;
                checked += c;
                violations.extend(v);
            }
            (checked, violations)
        }
    };
    Ok(VerificationReport {
        theorem,
        range,
        families_checked: checked,
        violations,
        elapsed: start.elapsed(),
    })
}

pub fn verify_parity(solver: &Solver, range: VerifyRange) -> Result<VerificationReport, VerifyError> {
    verify(solver, Theorem::Parity, range)
}

pub fn verify_central(solver: &Solver, range: VerifyRange) -> Result<VerificationReport, VerifyError> {
    verify(solver, Theorem::Central, range)
}

pub fn verify_k1_formulas(solver: &Solver, n_max: usize) -> Result<VerificationReport, VerifyError> {
    verify(solver, Theorem::K1, VerifyRange::exhaustive(1, n_max))
}

pub fn verify_counterexamples(solver: &Solver) -> Result<VerificationReport, VerifyError> {
    verify(solver, Theorem::Counterexamples, VerifyRange::exhaustive(7, 8))
}

/// Runs one check on a caller-supplied family, e.g. a deliberately
/// non-increasing one, to confirm the harness reports violations.
pub fn check_family(
    solver: &Solver,
    theorem: Theorem,
    f: &Family,
) -> Result<Option<Violation>, VerifyError> {
    let check: Check = match theorem {
        Theorem::Parity => check_parity,
        Theorem::Central => check_central,
        Theorem::Intervals => check_intervals,
        Theorem::Threshold => check_threshold,
        Theorem::Duality => check_duality,
        Theorem::Monotonicity => check_monotonicity,
        Theorem::K1 | Theorem::Counterexamples | Theorem::Football => {
            return Ok(None);
        }
    };
    Ok(check(solver, f)?.map(|detail| Violation {
        family: f.clone(),
        detail,
    }))
}

/// `Alice(T_n(t)) ⟺ t <= ⌈n/2⌉` and `Bob(T_n(t)) ⟺ t <= ⌊n/2⌋ + 1`.
pub fn k1_expected(n: usize, t: usize) -> (bool, bool) {
    (t <= n.div_ceil(2), t <= n / 2 + 1)
}

fn k1_formulas(solver: &Solver, n_max: usize) -> Result<(u64, Vec<Violation>), VerifyError> {
    if n_max > 12 {
        return Err(VerifyError::K1Range(n_max));
    }
    let mut checked = 0;
    let mut violations = Vec::new();
    for n in 1..=n_max {
        for t in 1..=n + 1 {
            let f = Family::singletons_from(n, t)?;
            let st = solver.status(&f)?;
            let (alice, bob) = k1_expected(n, t);
            checked += 1;
            if st.alice != alice || st.bob != bob {
                violations.push(Violation {
                    family: f,
                    detail: format!(
                        "T_{n}({t}): solver ({}, {}), closed form ({alice}, {bob})",
                        st.alice, st.bob
                    ),
                });
            }
        }
    }
    Ok((checked, violations))
}

fn counterexamples(solver: &Solver) -> Result<(u64, Vec<Violation>), VerifyError> {
    let mut violations = Vec::new();
    for (f, want_alice, want_bob) in [(fixtures::g()?, false, true), (fixtures::h()?, true, false)] {
        let st = solver.status(&f)?;
        if st.alice != want_alice || st.bob != want_bob {
            violations.push(Violation {
                family: f.clone(),
                detail: format!("expected ({want_alice}, {want_bob}), got ({}, {})", st.alice, st.bob),
            });
        }
        if f.is_increasing() {
            violations.push(Violation {
                family: f,
                detail: "fixture is increasing".into(),
            });
        }
    }
    Ok((2, violations))
}

/// Random integer boards of every even size in range, plus the natural boards.
pub fn random_board(two_m: usize, seed: u64, index: u64) -> Result<Board, BoardError> {
    let mut rng = indexed_rng(seed ^ 0xf00d, two_m, index);
    let spread: i64 = [3, 10, 1000][rng.random_range(0..3)];
    Board::from_integers((0..two_m).map(|_| rng.random_range(-spread..=spread)))
}

fn football_boards(solver: &Solver, range: VerifyRange) -> Result<(u64, Vec<Violation>), VerifyError> {
    let sizes: Vec<usize> = (range.n_min.max(2)..=range.n_max)
        .filter(|n| n % 2 == 0)
        .collect();
    if sizes.is_empty() {
        return Err(VerifyError::EmptyRange(range.n_min, range.n_max));
    }
    let mut boards: Vec<Board> = Vec::new();
    for &size in &sizes {
        boards.push(Board::natural(size / 2)?);
    }
    if let Mode::Sampled { samples, seed } = range.mode {
        for i in 0..samples {
            let size = sizes[(i as usize) % sizes.len()];
            boards.push(random_board(size, seed, i)?);
        }
    }
    let results: Vec<Result<Option<Violation>, VerifyError>> = boards
        .par_iter()
        .map(|b| {
            let a = football::analyze(solver, b)?;
            Ok(a.alice_wins.then(|| Violation {
                family: a.alice_family,
                detail: format!("Alice wins football on board {b}"),
            }))
        })
        .collect();
    let mut violations = Vec::new();
    for r in results {
        violations.extend(r?);
    }
    Ok((boards.len() as u64, violations))
}

/// First increasing family (in enumeration order, `n` then `k` ascending)
/// where Bob wins although his margin is empty.
pub fn find_empty_margin_bob_win(solver: &Solver, n_max: usize) -> Result<Option<Family>, VerifyError> {
    for n in 2..=n_max {
        for k in 1..n {
            for f in enumerate_increasing(n, k)? {
                if qualifies_empty_margin(solver, &f)? {
                    return Ok(Some(f));
                }
            }
        }
    }
    Ok(None)
}

/// As [`find_empty_margin_bob_win`], restricted to `2 <= k <= n - 2`.
pub fn find_interior_empty_margin_bob_win(
    solver: &Solver,
    n_max: usize,
) -> Result<Option<Family>, VerifyError> {
    for n in 4..=n_max {
        for k in 2..=n - 2 {
            for f in enumerate_increasing(n, k)? {
                if qualifies_empty_margin(solver, &f)? {
                    return Ok(Some(f));
                }
            }
        }
    }
    Ok(None)
}

pub fn qualifies_empty_margin(solver: &Solver, f: &Family) -> Result<bool, VerifyError> {
    if f.is_terminal() {
        return Ok(false);
    }
    let p = solver.margin_profile(f)?;
    Ok(p.bob_wins() && p.bob_margin().is_empty())
}

/// Writes each violating family to `<dir>/<theorem>-<i>.json` for replay.
pub fn write_violations(report: &VerificationReport, dir: &std::path::Path) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (i, v) in report.violations.iter().enumerate() {
        let p = dir.join(format!("{}-{i}.json", report.theorem));
        std::fs::write(&p, v.family.to_json() + "\n")?;
        paths.push(p);
    }
    Ok(paths)
}
