//! Reference implementations that share no code with the library beyond
//! reading a family's member list. Slow on purpose.
#![allow(dead_code)]

use std::collections::HashSet;

use picker_chooser::{Family, Player};

/// A family as a plain set of bitmasks (bit `x - 1` for element `x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plain {
    pub n: usize,
    pub k: usize,
    pub sets: HashSet<u32>,
}

pub fn mask_of(elements: impl IntoIterator<Item = usize>) -> u32 {
    elements.into_iter().fold(0, |m, x| m | 1 << (x - 1))
}

impl Plain {
    pub fn of(f: &Family) -> Plain {
        Plain {
            n: f.n(),
            k: f.k(),
            sets: f.iter().map(|s| mask_of(s.iter())).collect(),
        }
    }

    pub fn to_family(&self) -> Family {
        let lists: Vec<Vec<usize>> = self.sets.iter().map(|&m| elements(m)).collect();
        Family::from_lists(self.n, self.k, lists).unwrap()
    }
}

pub fn elements(mask: u32) -> Vec<usize> {
    (1..=32).filter(|x| mask >> (x - 1) & 1 == 1).collect()
}

/// All k-subsets of [n] as masks, by brute filtering.
pub fn k_subsets(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

/// Plays the game directly on holdings: the protagonist's final k-set must
/// lie in `f`. Alice picks on even turns.
pub fn protagonist_wins_from(
    f: &Plain,
    protagonist: Player,
    prot: u32,
    ant: u32,
    turn: usize,
) -> bool {
    let full: u32 = if f.n == 32 { u32::MAX } else { (1 << f.n) - 1 };
    let rest = full & !prot & !ant;
    if prot.count_ones() as usize == f.k {
        return f.sets.contains(&prot);
    }
    if ant.count_ones() as usize == f.n - f.k {
        return f.sets.contains(&(prot | rest));
    }
    let alice_picks = turn.is_multiple_of(2);
    let prot_picks = alice_picks == (protagonist == Player::Alice);
    let outcomes = |x: u32| {
        [
            protagonist_wins_from(f, protagonist, prot | x, ant, turn + 1),
            protagonist_wins_from(f, protagonist, prot, ant | x, turn + 1),
        ]
    };
    let offers = (0..f.n).map(|i| 1u32 << i).filter(|b| rest & b != 0);
    if prot_picks {
        offers.into_iter().any(|x| outcomes(x).iter().all(|&w| w))
    } else {
        offers.into_iter().all(|x| outcomes(x).iter().any(|&w| w))
    }
}

/// `(Alice wins her game, Bob wins his game)`.
pub fn status(f: &Plain) -> (bool, bool) {
    (
        protagonist_wins_from(f, Player::Alice, 0, 0, 0),
        protagonist_wins_from(f, Player::Bob, 0, 0, 0),
    )
}

/// `(U_A, L_A, U_B, L_B)` from one-ply lookahead in the two full games.
pub fn margins(f: &Plain) -> (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut out = (vec![], vec![], vec![], vec![]);
    for x in 1..=f.n {
        let b = 1u32 << (x - 1);
        if protagonist_wins_from(f, Player::Alice, b, 0, 1) {
            out.0.push(x);
        }
        if protagonist_wins_from(f, Player::Alice, 0, b, 1) {
            out.1.push(x);
        }
        if protagonist_wins_from(f, Player::Bob, b, 0, 1) {
            out.2.push(x);
        }
        if protagonist_wins_from(f, Player::Bob, 0, b, 1) {
            out.3.push(x);
        }
    }
    out
}

/// Upward closed under replacing an element by a larger one not in the set.
pub fn is_increasing(f: &Plain) -> bool {
    f.sets.iter().all(|&s| {
        (1..=f.n).all(|x| {
            s >> (x - 1) & 1 == 0
                || (x + 1..=f.n).all(|y| {
                    s >> (y - 1) & 1 == 1 || f.sets.contains(&(s & !(1 << (x - 1)) | 1 << (y - 1)))
                })
        })
    })
}

/// Every family on C([n],k) in the order of its subset bitmask.
pub fn all_families(n: usize, k: usize) -> impl Iterator<Item = Plain> {
    let universe = k_subsets(n, k);
    assert!(universe.len() <= 24, "too many families");
    (0u64..1 << universe.len()).map(move |bits| Plain {
        n,
        k,
        sets: universe
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &m)| m)
            .collect(),
    })
}

/// Removes element `x` and renumbers the larger elements down by one.
fn drop_element(mask: u32, x: usize) -> u32 {
    let low = mask & ((1 << (x - 1)) - 1);
    let high = mask >> x;
    low | high << (x - 1)
}

/// `plus`: sets containing `x`, with `x` removed. Otherwise sets avoiding `x`.
pub fn section(f: &Plain, x: usize, plus: bool) -> Plain {
    let b = 1u32 << (x - 1);
    Plain {
        n: f.n - 1,
        k: if plus { f.k - 1 } else { f.k },
        sets: f
            .sets
            .iter()
            .filter(|&&s| (s & b != 0) == plus)
            .map(|&s| drop_element(s & !b, x))
            .collect(),
    }
}

/// `(n-k)`-sets whose complement is not in `f`.
pub fn dual(f: &Plain) -> Plain {
    let full = (1u32 << f.n) - 1;
    Plain {
        n: f.n,
        k: f.n - f.k,
        sets: k_subsets(f.n, f.n - f.k)
            .into_iter()
            .filter(|t| !f.sets.contains(&(full & !t)))
            .collect(),
    }
}

/// m-subsets of an integer board (already sorted) whose sum beats the rest.
pub fn football_family(board: &[i64]) -> Plain {
    let n = board.len();
    let total: i64 = board.iter().sum();
    let sum = |m: u32| elements(m).iter().map(|&x| board[x - 1]).sum::<i64>();
    Plain {
        n,
        k: n / 2,
        sets: k_subsets(n, n / 2).into_iter().filter(|&m| 2 * sum(m) > total).collect(),
    }
}
