//! Shipped families: the non-increasing counterexamples `G ⊂ C([7],3)` and
//! `H ⊂ C([8],4)`, and the empty-margin witnesses found by search.

use thiserror::Error;

use crate::family::{Family, FamilyError};

pub const G_JSON: &str = include_str!("../fixtures/g.json");
pub const H_JSON: &str = include_str!("../fixtures/h.json");
pub const EMPTY_MARGIN_WITNESS_JSON: &str = include_str!("../fixtures/empty_margin_witness.json");
pub const EMPTY_MARGIN_INTERIOR_JSON: &str = include_str!("../fixtures/empty_margin_interior.json");

pub const G_MEMBERS: usize = 17;
pub const H_MEMBERS: usize = 35;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture {name} has {found} members, expected {expected}")]
    CountMismatch {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("fixture {name}: {source}")]
    Parse {
        name: &'static str,
        source: FamilyError,
    },
}

fn load(name: &'static str, text: &str, expected: usize) -> Result<Family, FixtureError> {
    let f = Family::from_json(text).map_err(|source| FixtureError::Parse { name, source })?;
    if f.len() != expected {
        return Err(FixtureError::CountMismatch {
            name,
            expected,
            found: f.len(),
        });
    }
    Ok(f)
}

/// `G`: Bob wins his game, Alice does not win hers.
pub fn g() -> Result<Family, FixtureError> {
    load("G", G_JSON, G_MEMBERS)
}

/// `H`: Alice wins her game, Bob does not win his.
pub fn h() -> Result<Family, FixtureError> {
    load("H", H_JSON, H_MEMBERS)
}

/// First increasing family (smallest n, then k) where Bob wins with an
/// empty margin: `{{2}} ⊂ C([2],1)`.
pub fn empty_margin_witness() -> Result<Family, FixtureError> {
    load("empty-margin witness", EMPTY_MARGIN_WITNESS_JSON, 1)
}

/// First such family with `2 <= k <= n - 2`: `{14, 24, 34} ⊂ C([4],2)`.
pub fn empty_margin_interior() -> Result<Family, FixtureError> {
    load("interior empty-margin witness", EMPTY_MARGIN_INTERIOR_JSON, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load_with_expected_counts() {
        let g = g().unwrap();
        assert_eq!((g.n(), g.k(), g.len()), (7, 3, 17));
        let h = h().unwrap();
        assert_eq!((h.n(), h.k(), h.len()), (8, 4, 35));
        assert!(!g.is_increasing());
        assert!(!h.is_increasing());
    }

    #[test]
    fn g_lacks_the_shift_of_457() {
        let g = g().unwrap();
        let f457 = crate::KSet::new(7, [4, 5, 7]).unwrap();
        let f467 = crate::KSet::new(7, [4, 6, 7]).unwrap();
        assert!(g.contains(&f457));
        assert!(!g.contains(&f467));
    }

    #[test]
    fn compact_listing_matches() {
        let g = g().unwrap();
        let listed = Family::parse_compact(
            "123,124,127,136,137,146,147,157,167,234,245,246,247,257,267,345,457",
            7,
            Some(3),
        )
        .unwrap();
        assert_eq!(g, listed);
    }

    #[test]
    fn witnesses_are_found_by_search() {
        let solver = crate::Solver::new();
        let w = crate::verify::find_empty_margin_bob_win(&solver, 6).unwrap();
        assert_eq!(w, Some(empty_margin_witness().unwrap()));
        let w = crate::verify::find_interior_empty_margin_bob_win(&solver, 6).unwrap();
        assert_eq!(w, Some(empty_margin_interior().unwrap()));
    }

    #[test]
    fn count_mismatch_detected() {
        let err = load("G", r#"{"n":7,"k":3,"sets":[[1,2,3]]}"#, G_MEMBERS).unwrap_err();
        assert!(matches!(err, FixtureError::CountMismatch { found: 1, .. }));
    }
}
