//! Uniform set families on the ground set `[n] = {1, ..., n}`.
//!
//! A [`Family`] is a subset of `C([n], k)`, the `k`-element subsets of `[n]`,
//! stored as a bitset indexed by colexicographic rank. Colex order on `k`-sets
//! coincides with numeric order of their bitmasks, and it is a linear
//! extension of the pointwise order, so a single ascending pass over ranks
//! visits every set after all of the sets below it.
//!
//! Sections are always standardised: removing element `x` relabels
//! `[n] \ {x}` onto `[n - 1]` preserving order. Two families are equal iff
//! their `(n, k, members)` triples are equal, which makes `Family` directly
//! usable as a game-position key.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Largest ground set any family can be built on (element masks are `u32`).
pub const MAX_GROUND: usize = 30;

/// Default ground-set cap used by the solver and the command line.
pub const DEFAULT_GROUND_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("ground set size {n} exceeds the limit of {limit}")]
    GroundTooLarge { n: usize, limit: usize },
    #[error("cardinality k = {k} is not in 0..={n}")]
    BadCardinality { n: usize, k: usize },
    #[error("element {element} is outside 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("set {set} has {found} elements, expected {expected}")]
    WrongCardinality {
        set: String,
        expected: usize,
        found: usize,
    },
    #[error("set {0} is listed more than once")]
    DuplicateSet(String),
    #[error("element {element} repeated in set {set}")]
    RepeatedElement { element: usize, set: String },
    #[error("rank {rank} out of range for C({n},{k}) = {size}")]
    RankOutOfRange {
        rank: u64,
        n: usize,
        k: usize,
        size: u64,
    },
    #[error("missing field `{0}` in structured family")]
    MissingField(&'static str),
    #[error("compact family format needs n <= 9, got n = {0}")]
    CompactTooLarge(usize),
    #[error("unparsable token `{0}`")]
    BadToken(String),
    #[error("cannot take the {sign} section of a family with n = {n}, k = {k}")]
    TerminalSection { sign: Sign, n: usize, k: usize },
    #[error("families live on different universes: C({0},{1}) vs C({2},{3})")]
    UniverseMismatch(usize, usize, usize, usize),
    #[error("malformed structured family: {0}")]
    Json(String),
}

const fn binomial_table() -> [[u64; MAX_GROUND + 1]; MAX_GROUND + 1] {
    let mut t = [[0u64; MAX_GROUND + 1]; MAX_GROUND + 1];
    let mut n = 0;
    while n <= MAX_GROUND {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOM: [[u64; MAX_GROUND + 1]; MAX_GROUND + 1] = binomial_table();

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n || n > MAX_GROUND {
        0
    } else {
        BINOM[n][k]
    }
}

/// Colex rank of a `k`-set given as a bitmask (bit `i` is element `i + 1`).
#[inline]
pub(crate) fn rank_mask(mut mask: u32) -> u64 {
    let mut r = 0;
    let mut i = 1;
    while mask != 0 {
        let pos = mask.trailing_zeros() as usize;
        r += BINOM[pos][i];
        mask &= mask - 1;
        i += 1;
    }
    r
}

#[inline]
pub(crate) fn unrank_mask(n: usize, k: usize, mut r: u64) -> u32 {
    let mut mask = 0u32;
    let mut hi = n;
    for i in (1..=k).rev() {
        // largest c < hi with C(c, i) <= r
        let mut c = hi - 1;
        while BINOM[c][i] > r {
            c -= 1;
        }
        mask |= 1 << c;
        r -= BINOM[c][i];
        hi = c;
    }
    mask
}

/// Next mask with the same popcount (Gosper's hack); `None` past `n` bits.
#[inline]
fn next_same_popcount(mask: u32, n: usize) -> Option<u32> {
    if mask == 0 {
        return None;
    }
    let c = mask & mask.wrapping_neg();
    let r = mask.wrapping_add(c);
    if r == 0 {
        return None;
    }
    let next = (((r ^ mask) >> 2) / c) | r;
    if (next as u64) >> n != 0 {
        None
    } else {
        Some(next)
    }
}

/// Iterates all `k`-subsets of `[n]` as masks, in colex (rank) order.
pub(crate) fn k_masks(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let first = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(((1u64 << k) - 1) as u32)
    };
    let mut done = k == 0;
    std::iter::successors(first, move |&m| {
        if done {
            return None;
        }
        let next = next_same_popcount(m, n);
        done = next.is_none();
        next
    })
}

/// Removes bit `x - 1` from `mask` and shifts the higher bits down by one.
#[inline]
pub(crate) fn standardise_mask(mask: u32, x: usize) -> u32 {
    let low = (1u32 << (x - 1)) - 1;
    (mask & low) | ((mask >> 1) & !low)
}

#[inline]
fn full_mask(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

fn format_elements(mask: u32) -> String {
    let parts: Vec<String> = mask_elements(mask).map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn mask_elements(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let e = mask.trailing_zeros() as usize + 1;
            mask &= mask - 1;
            Some(e)
        }
    })
}

/// A subset of the board `[n]`: holdings, margins, first-offer sets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    mask: u32,
    n: u8,
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        ElementSet { mask: 0, n: n as u8 }
    }

    pub fn full(n: usize) -> Self {
        ElementSet {
            mask: full_mask(n),
            n: n as u8,
        }
    }

    pub fn from_mask(n: usize, mask: u32) -> Result<Self, FamilyError> {
        if n > MAX_GROUND {
            return Err(FamilyError::GroundTooLarge {
                n,
                limit: MAX_GROUND,
            });
        }
        if mask & !full_mask(n) != 0 {
            let element = 32 - mask.leading_zeros() as usize;
            return Err(FamilyError::ElementOutOfRange { element, n });
        }
        Ok(ElementSet { mask, n: n as u8 })
    }

    pub fn from_elements<I>(n: usize, elements: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = ElementSet::empty(n.min(MAX_GROUND));
        if n > MAX_GROUND {
            return Err(FamilyError::GroundTooLarge {
                n,
                limit: MAX_GROUND,
            });
        }
        for e in elements {
            if e == 0 || e > n {
                return Err(FamilyError::ElementOutOfRange { element: e, n });
            }
            if set.contains(e) {
                return Err(FamilyError::RepeatedElement {
                    element: e,
                    set: format_elements(set.mask | 1 << (e - 1)),
                });
            }
            set.mask |= 1 << (e - 1);
        }
        Ok(set)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        x >= 1 && x <= self.n() && self.mask & (1 << (x - 1)) != 0
    }

    pub fn with(mut self, x: usize) -> Self {
        debug_assert!(x >= 1 && x <= self.n());
        self.mask |= 1 << (x - 1);
        self
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet {
            mask: self.mask | other.mask,
            n: self.n.max(other.n),
        }
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet {
            mask: self.mask & other.mask,
            n: self.n.max(other.n),
        }
    }

    pub fn complement(self) -> Self {
        ElementSet {
            mask: !self.mask & full_mask(self.n()),
            n: self.n,
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.mask & other.mask == 0
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        mask_elements(self.mask)
    }

    /// `{t, t+1, ..., n}` for some `t` (the empty set counts).
    pub fn is_upper_interval(&self) -> bool {
        let n = self.n();
        let len = self.len();
        self.mask == full_mask(n) & !full_mask(n - len)
    }

    /// `{1, ..., t}` for some `t` (the empty set counts).
    pub fn is_lower_interval(&self) -> bool {
        self.mask == full_mask(self.len())
    }

    /// `[a..b]` when the set is a contiguous run, `{..}` otherwise, `∅` when empty.
    pub fn interval_notation(&self) -> String {
        if self.is_empty() {
            return "∅".to_string();
        }
        let lo = self.mask.trailing_zeros() as usize + 1;
        let hi = 32 - self.mask.leading_zeros() as usize;
        if hi - lo + 1 == self.len() {
            format!("[{lo}..{hi}]")
        } else {
            format_elements(self.mask)
        }
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_elements(self.mask))
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_elements(self.mask))
    }
}

impl Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// A `k`-element subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KSet(ElementSet);

impl KSet {
    pub fn new<I>(n: usize, elements: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = usize>,
    {
        ElementSet::from_elements(n, elements).map(KSet)
    }

    pub fn from_mask(n: usize, mask: u32) -> Result<Self, FamilyError> {
        ElementSet::from_mask(n, mask).map(KSet)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn mask(&self) -> u32 {
        self.0.mask
    }

    pub fn elements(&self) -> ElementSet {
        self.0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.0.iter()
    }

    /// Colexicographic rank within `C([n], k)`.
    pub fn rank(&self) -> u64 {
        rank_mask(self.0.mask)
    }

    pub fn unrank(n: usize, k: usize, rank: u64) -> Result<Self, FamilyError> {
        check_universe(n, k)?;
        let size = binomial(n, k);
        if rank >= size {
            return Err(FamilyError::RankOutOfRange { rank, n, k, size });
        }
        Ok(KSet(ElementSet {
            mask: unrank_mask(n, k, rank),
            n: n as u8,
        }))
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which side of a section: the element goes to the protagonist (`Plus`) or
/// to the antagonist (`Minus`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

pub(crate) type Bits = SmallVec<[u64; 4]>;

fn check_universe(n: usize, k: usize) -> Result<(), FamilyError> {
    if n > MAX_GROUND {
        return Err(FamilyError::GroundTooLarge {
            n,
            limit: MAX_GROUND,
        });
    }
    if k > n {
        return Err(FamilyError::BadCardinality { n, k });
    }
    Ok(())
}

/// A family `F ⊂ C([n], k)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyDoc", into = "FamilyDoc")]
pub struct Family {
    n: u8,
    k: u8,
    members: Bits,
}

impl Family {
    pub fn empty(n: usize, k: usize) -> Result<Self, FamilyError> {
        check_universe(n, k)?;
        Ok(Self::empty_unchecked(n, k))
    }

    pub(crate) fn empty_unchecked(n: usize, k: usize) -> Self {
        let words = (binomial(n, k) as usize).div_ceil(64).max(1);
        Family {
            n: n as u8,
            k: k as u8,
            members: SmallVec::from_elem(0, words),
        }
    }

    /// All of `C([n], k)`.
    pub fn full(n: usize, k: usize) -> Result<Self, FamilyError> {
        let mut f = Self::empty(n, k)?;
        let size = binomial(n, k) as usize;
        for r in 0..size {
            f.set_rank(r);
        }
        Ok(f)
    }

    pub fn from_sets<I>(n: usize, k: usize, sets: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = KSet>,
    {
        let mut f = Self::empty(n, k)?;
        for s in sets {
            if s.mask() & !full_mask(n) != 0 {
                let element = 32 - s.mask().leading_zeros() as usize;
                return Err(FamilyError::ElementOutOfRange { element, n });
            }
            if s.k() != k {
                return Err(FamilyError::WrongCardinality {
                    set: s.to_string(),
                    expected: k,
                    found: s.k(),
                });
            }
            let r = s.rank() as usize;
            if f.has_rank(r) {
                return Err(FamilyError::DuplicateSet(s.to_string()));
            }
            f.set_rank(r);
        }
        Ok(f)
    }

    /// Builds a family from element lists, e.g. `[[1,2,3],[1,2,4]]`.
    pub fn from_lists<I, S>(n: usize, k: usize, lists: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        check_universe(n, k)?;
        let sets = lists
            .into_iter()
            .map(|l| KSet::new(n, l.as_ref().iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_sets(n, k, sets)
    }

    /// Membership predicate over all of `C([n], k)`.
    pub fn from_predicate<P>(n: usize, k: usize, mut keep: P) -> Result<Self, FamilyError>
    where
        P: FnMut(KSet) -> bool,
    {
        let mut f = Self::empty(n, k)?;
        for (r, m) in k_masks(n, k).enumerate() {
            if keep(KSet(ElementSet { mask: m, n: n as u8 })) {
                f.set_rank(r);
            }
        }
        Ok(f)
    }

    /// The singleton family `T_n(t) = {{r} : t <= r <= n}`; `t = n + 1` is empty.
    pub fn singletons_from(n: usize, t: usize) -> Result<Self, FamilyError> {
        check_universe(n, 1.min(n))?;
        if n == 0 {
            return Err(FamilyError::BadCardinality { n, k: 1 });
        }
        if t == 0 || t > n + 1 {
            return Err(FamilyError::ElementOutOfRange { element: t, n: n + 1 });
        }
        let mut f = Self::empty_unchecked(n, 1);
        // rank of {r} is r - 1
        for r in t..=n {
            f.set_rank(r - 1);
        }
        Ok(f)
    }

    /// Reconstructs a family from a raw membership bitset (little-endian words).
    pub fn from_words(n: usize, k: usize, words: &[u64]) -> Result<Self, FamilyError> {
        let mut f = Self::empty(n, k)?;
        let size = binomial(n, k) as usize;
        if words.len() != f.members.len() {
            return Err(FamilyError::Json(format!(
                "expected {} membership words, got {}",
                f.members.len(),
                words.len()
            )));
        }
        f.members.copy_from_slice(words);
        let tail = size % 64;
        if tail != 0 && f.members[f.members.len() - 1] >> tail != 0 {
            return Err(FamilyError::RankOutOfRange {
                rank: size as u64,
                n,
                k,
                size: size as u64,
            });
        }
        Ok(f)
    }

    #[inline]
    pub(crate) fn set_rank(&mut self, r: usize) {
        self.members[r / 64] |= 1 << (r % 64);
    }

    #[inline]
    pub(crate) fn has_rank(&self, r: usize) -> bool {
        self.members[r / 64] >> (r % 64) & 1 == 1
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    /// `C(n, k)`.
    pub fn universe_size(&self) -> u64 {
        binomial(self.n(), self.k())
    }

    pub fn words(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() as u64 == self.universe_size()
    }

    /// `k = 0` or `k = n`: the final sets are already determined.
    pub fn is_terminal(&self) -> bool {
        self.k == 0 || self.k == self.n
    }

    pub fn contains(&self, s: &KSet) -> bool {
        s.n() == self.n() && s.k() == self.k() && self.has_rank(s.rank() as usize)
    }

    #[inline]
    pub(crate) fn contains_mask(&self, mask: u32) -> bool {
        self.has_rank(rank_mask(mask) as usize)
    }

    /// Member bitmasks in ascending colex order.
    pub(crate) fn member_masks(&self) -> impl Iterator<Item = u32> + '_ {
        let (n, k) = (self.n(), self.k());
        self.members
            .iter()
            .enumerate()
            .flat_map(move |(wi, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        None
                    } else {
                        let b = w.trailing_zeros() as usize;
                        w &= w - 1;
                        Some(wi * 64 + b)
                    }
                })
            })
            .map(move |r| unrank_mask(n, k, r as u64))
    }

    /// Members in ascending colex order.
    pub fn iter(&self) -> impl Iterator<Item = KSet> + '_ {
        let n = self.n;
        self.member_masks()
            .map(move |mask| KSet(ElementSet { mask, n }))
    }

    /// Sets of `C([n], k)` not in the family, ascending.
    pub fn complement_sets(&self) -> impl Iterator<Item = KSet> + '_ {
        let n = self.n;
        k_masks(self.n(), self.k())
            .enumerate()
            .filter(|(r, _)| !self.has_rank(*r))
            .map(move |(_, mask)| KSet(ElementSet { mask, n }))
    }

    /// `self ∪ {s}`; `s` must live in the same universe.
    pub fn with_set(&self, s: KSet) -> Family {
        debug_assert!(s.n() == self.n() && s.k() == self.k());
        let mut f = self.clone();
        f.set_rank(s.rank() as usize);
        f
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.n == other.n
            && self.k == other.k
            && self
                .members
                .iter()
                .zip(other.members.iter())
                .all(|(a, b)| a & !b == 0)
    }

    /// Closed upwards in the pointwise order. Checks only cover relations
    /// (shift one element up by one), which generate the order.
    pub fn is_increasing(&self) -> bool {
        let n = self.n();
        self.member_masks().all(|s| {
            (0..n.saturating_sub(1)).all(|b| {
                if s >> b & 1 == 1 && s >> (b + 1) & 1 == 0 {
                    self.contains_mask(s ^ (0b11 << b))
                } else {
                    true
                }
            })
        })
    }

    /// Smallest increasing family containing `self`.
    pub fn upward_closure(&self) -> Family {
        let (n, k) = (self.n(), self.k());
        let mut out = Self::empty_unchecked(n, k);
        for (r, t) in k_masks(n, k).enumerate() {
            let mut keep = self.has_rank(r);
            if !keep {
                // any lower cover already in the closure (lower covers have smaller rank)
                for b in 1..n {
                    if t >> b & 1 == 1 && t >> (b - 1) & 1 == 0 {
                        let lower = t ^ (0b11 << (b - 1));
                        if out.has_rank(rank_mask(lower) as usize) {
                            keep = true;
                            break;
                        }
                    }
                }
            }
            if keep {
                out.set_rank(r);
            }
        }
        out
    }

    /// `F_x^+`: members containing `x`, with `x` removed, standardised onto `[n-1]`.
    pub fn section_plus(&self, x: usize) -> Result<Family, FamilyError> {
        self.section(x, Sign::Plus)
    }

    /// `F_x^-`: members avoiding `x`, standardised onto `[n-1]`.
    pub fn section_minus(&self, x: usize) -> Result<Family, FamilyError> {
        self.section(x, Sign::Minus)
    }

    pub fn section(&self, x: usize, sign: Sign) -> Result<Family, FamilyError> {
        let (n, k) = (self.n(), self.k());
        if x == 0 || x > n {
            return Err(FamilyError::ElementOutOfRange { element: x, n });
        }
        let ok = match sign {
            Sign::Plus => k >= 1,
            Sign::Minus => k < n,
        };
        if !ok {
            return Err(FamilyError::TerminalSection { sign, n, k });
        }
        Ok(self.section_unchecked(x, sign))
    }

    pub(crate) fn section_unchecked(&self, x: usize, sign: Sign) -> Family {
        let (n, k) = (self.n(), self.k());
        let bit = 1u32 << (x - 1);
        let k_out = match sign {
            Sign::Plus => k - 1,
            Sign::Minus => k,
        };
        let mut out = Self::empty_unchecked(n - 1, k_out);
        let want = match sign {
            Sign::Plus => bit,
            Sign::Minus => 0,
        };
        for s in self.member_masks() {
            if s & bit == want {
                out.set_rank(rank_mask(standardise_mask(s & !bit, x)) as usize);
            }
        }
        out
    }

    /// `{T ∈ C([n], n-k) : [n] \ T ∉ F}`. Complementation swaps the roles of
    /// protagonist and antagonist.
    pub fn dual(&self) -> Family {
        let (n, k) = (self.n(), self.k());
        let full = full_mask(n);
        let mut out = Self::empty_unchecked(n, n - k);
        for (r, t) in k_masks(n, n - k).enumerate() {
            if !self.contains_mask(full & !t) {
                out.set_rank(r);
            }
        }
        out
    }

    /// Compact form: comma-separated digit strings, e.g. `123,124`. Needs `n <= 9`.
    pub fn to_compact(&self) -> Result<String, FamilyError> {
        if self.n() > 9 {
            return Err(FamilyError::CompactTooLarge(self.n()));
        }
        let tokens: Vec<String> = self
            .iter()
            .map(|s| {
                if s.k() == 0 {
                    "∅".to_string()
                } else {
                    s.iter().map(|e| char::from(b'0' + e as u8)).collect()
                }
            })
            .collect();
        Ok(tokens.join(","))
    }

    /// Parses the compact form (`∅` denotes the empty set). `k` is inferred
    /// from the first token when absent.
    pub fn parse_compact(text: &str, n: usize, k: Option<usize>) -> Result<Family, FamilyError> {
        if n > 9 {
            return Err(FamilyError::CompactTooLarge(n));
        }
        let tokens: Vec<&str> = text
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .collect();
        let k = match (k, tokens.first()) {
            (Some(k), _) => k,
            (None, Some(&"∅")) => 0,
            (None, Some(t)) => t.len(),
            (None, None) => return Err(FamilyError::MissingField("k")),
        };
        check_universe(n, k)?;
        let mut sets = Vec::with_capacity(tokens.len());
        for t in tokens {
            let mut elements = Vec::with_capacity(t.len());
            for c in t.chars().filter(|_| t != "∅") {
                let d = c
                    .to_digit(10)
                    .ok_or_else(|| FamilyError::BadToken(t.to_string()))?;
                elements.push(d as usize);
            }
            if elements.len() != k {
                return Err(FamilyError::WrongCardinality {
                    set: t.to_string(),
                    expected: k,
                    found: elements.len(),
                });
            }
            sets.push(KSet::new(n, elements)?);
        }
        Family::from_sets(n, k, sets)
    }

    /// Structured JSON form `{"n":..,"k":..,"sets":[[..],..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serialises")
    }

    pub fn from_json(text: &str) -> Result<Family, FamilyError> {
        let doc: FamilyDoc =
            serde_json::from_str(text).map_err(|e| FamilyError::Json(e.to_string()))?;
        Family::try_from(doc)
    }

    /// Accepts either the structured form or, when `n` is supplied, the compact form.
    pub fn parse(text: &str, n: Option<usize>, k: Option<usize>) -> Result<Family, FamilyError> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let mut doc: FamilyDoc =
                serde_json::from_str(trimmed).map_err(|e| FamilyError::Json(e.to_string()))?;
            doc.n = doc.n.or(n);
            doc.k = doc.k.or(k);
            return Family::try_from(doc);
        }
        let n = n.ok_or(FamilyError::MissingField("n"))?;
        Family::parse_compact(trimmed, n, k)
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::from_json(s)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_compact() {
            Ok(c) => write!(f, "C([{}],{}) {{{}}}", self.n, self.k, c),
            Err(_) => f.write_str(&self.to_json()),
        }
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Wire form of a family.
#[derive(Serialize, Deserialize)]
pub struct FamilyDoc {
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    pub sets: Vec<Vec<usize>>,
}

impl TryFrom<FamilyDoc> for Family {
    type Error = FamilyError;

    fn try_from(doc: FamilyDoc) -> Result<Self, Self::Error> {
        let n = doc.n.ok_or(FamilyError::MissingField("n"))?;
        let k = doc.k.ok_or(FamilyError::MissingField("k"))?;
        Family::from_lists(n, k, doc.sets)
    }
}

impl From<Family> for FamilyDoc {
    fn from(f: Family) -> Self {
        FamilyDoc {
            n: Some(f.n()),
            k: Some(f.k()),
            sets: f.iter().map(|s| s.iter().collect()).collect(),
        }
    }
}
