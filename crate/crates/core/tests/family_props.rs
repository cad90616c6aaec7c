mod common;

use common::Plain;
use picker_chooser::verify::{enumerate_increasing, enumerate_increasing_capped, sample_arbitrary_indexed};
use picker_chooser::{Family, KSet, Sign};
use proptest::prelude::*;

/// A random (not necessarily increasing) family with 1 <= n <= 7.
fn any_family() -> impl Strategy<Value = Family> {
    (1usize..=7, any::<u64>()).prop_map(|(n, idx)| sample_arbitrary_indexed(n, 17, idx).unwrap())
}

fn increasing_family() -> impl Strategy<Value = Family> {
    any_family().prop_map(|f| f.upward_closure())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sections_match_reference(f in any_family(), x in 1usize..=7, plus in any::<bool>()) {
        prop_assume!(x <= f.n() && f.n() >= 2);
        prop_assume!(!plus || f.k() >= 1);
        prop_assume!(plus || f.k() < f.n());
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let got = f.section(x, sign).unwrap();
        let want = common::section(&Plain::of(&f), x, plus).to_family();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn sections_commute(n in 3usize..=7, idx in any::<u64>(), x0 in 0usize..7, d in 1usize..7, s in 0usize..2, t in 0usize..2) {
        let f = sample_arbitrary_indexed(n, 29, idx).unwrap();
        let x = 1 + x0 % (n - 1);
        let y = x + 1 + (d - 1) % (n - x);
        let (s, t) = (Sign::BOTH[s], Sign::BOTH[t]);
        let pluses = [s, t].iter().filter(|&&z| z == Sign::Plus).count();
        prop_assume!(pluses <= f.k() && f.k() + 2 - pluses <= n);
        // (F_y^t)_x^s = (F_x^s)_{y-1}^t
        let a = f.section(y, t).unwrap().section(x, s).unwrap();
        let b = f.section(x, s).unwrap().section(y - 1, t).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sections_of_increasing_are_increasing(f in increasing_family(), x in 1usize..=7) {
        prop_assume!(x <= f.n() && f.n() >= 2);
        if f.k() >= 1 {
            let p = f.section(x, Sign::Plus).unwrap();
            prop_assert!(p.is_increasing());
        }
        if f.k() < f.n() {
            let m = f.section(x, Sign::Minus).unwrap();
            prop_assert!(m.is_increasing());
        }
    }

    #[test]
    fn section_monotone_in_element(f in increasing_family(), x in 1usize..7) {
        // for increasing F: F_x^+ ⊆ F_{x+1}^+ and F_{x+1}^- ⊆ F_x^-
        prop_assume!(x < f.n());
        if f.k() >= 1 {
            let a = f.section(x, Sign::Plus).unwrap();
            let b = f.section(x + 1, Sign::Plus).unwrap();
            prop_assert!(a.is_subfamily_of(&b), "{} vs {}", a, b);
        }
        if f.k() < f.n() {
            let a = f.section(x, Sign::Minus).unwrap();
            let b = f.section(x + 1, Sign::Minus).unwrap();
            prop_assert!(b.is_subfamily_of(&a), "{} vs {}", a, b);
        }
    }

    #[test]
    fn dual_matches_reference_and_is_involution(f in any_family()) {
        let d = f.dual();
        prop_assert_eq!(&d, &common::dual(&Plain::of(&f)).to_family());
        prop_assert_eq!(d.dual(), f.clone());
        if f.is_increasing() {
            prop_assert!(d.is_increasing());
        }
    }

    #[test]
    fn increasing_test_matches_reference(f in any_family()) {
        prop_assert_eq!(f.is_increasing(), common::is_increasing(&Plain::of(&f)));
    }

    #[test]
    fn closure_is_pointwise_up_set(f in any_family()) {
        // S is in the closure iff some generator lies below S element by element
        let c = f.upward_closure();
        let below = |t: &KSet, s: &KSet| t.iter().zip(s.iter()).all(|(a, b)| a <= b);
        for s in Family::full(f.n(), f.k()).unwrap().iter() {
            let want = f.iter().any(|t| below(&t, &s));
            prop_assert_eq!(c.contains(&s), want, "{}", s);
        }
    }

    #[test]
    fn json_round_trip(f in any_family()) {
        let text = f.to_json();
        prop_assert_eq!(Family::from_json(&text).unwrap(), f.clone());
        let parsed: Family = text.parse().unwrap();
        prop_assert_eq!(parsed, f);
    }

    #[test]
    fn compact_round_trip(f in any_family()) {
        let text = f.to_compact().unwrap();
        prop_assert_eq!(Family::parse_compact(&text, f.n(), Some(f.k())).unwrap(), f);
    }

    #[test]
    fn rank_unrank(n in 1usize..=30, seed in any::<u64>()) {
        let k = (seed as usize) % (n + 1);
        let total = picker_chooser::family::binomial(n, k);
        let r = seed % total;
        let s = KSet::unrank(n, k, r).unwrap();
        prop_assert_eq!(s.k(), k);
        prop_assert_eq!(s.rank(), r);
    }

    #[test]
    fn colex_extends_pointwise_order(n in 2usize..=10, seed in any::<u64>()) {
        // S <= T pointwise implies rank(S) <= rank(T)
        let k = 1 + (seed as usize) % (n - 1);
        let total = picker_chooser::family::binomial(n, k);
        let s = KSet::unrank(n, k, seed % total).unwrap();
        let mut elems: Vec<usize> = s.iter().collect();
        let i = (seed >> 32) as usize % k;
        let next = elems[i] + 1;
        if next <= n && !elems.contains(&next) {
            elems[i] = next;
            let t = KSet::new(n, elems).unwrap();
            prop_assert!(s.rank() < t.rank());
        }
    }
}

#[test]
fn upset_counts_match_filter_reference() {
    for n in 1..=5 {
        for k in 0..=n {
            if picker_chooser::family::binomial(n, k) > 16 {
                continue;
            }
            let want = common::all_families(n, k)
                .filter(common::is_increasing)
                .count();
            let got: Vec<Family> = enumerate_increasing(n, k).unwrap().collect();
            assert_eq!(got.len(), want, "C([{n}],{k})");
            let distinct: std::collections::HashSet<_> = got.iter().cloned().collect();
            assert_eq!(distinct.len(), got.len());
            assert!(got.iter().all(Family::is_increasing));
        }
    }
}

#[test]
fn upset_counts_larger() {
    // Filter over all 2^20 families of C([6],3), using the library's own cover test
    // (itself checked against the reference above).
    let universe: Vec<KSet> = Family::full(6, 3).unwrap().iter().collect();
    let mut want = 0;
    for bits in 0u32..1 << 20 {
        let f = Family::from_sets(6, 3, universe.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, s)| *s))
            .unwrap();
        if f.is_increasing() {
            want += 1;
        }
    }
    assert_eq!(want, 66);
    assert_eq!(enumerate_increasing(6, 3).unwrap().count(), 66);
    let counts: Vec<usize> = (0..=8).map(|k| enumerate_increasing_capped(8, k, 8).unwrap().count()).collect();
    assert_eq!(counts, vec![2, 9, 128, 2431, 9304, 2431, 128, 9, 2]);
}

#[test]
fn closure_example() {
    let f = Family::parse_compact("457", 7, Some(3)).unwrap();
    assert_eq!(f.upward_closure().to_compact().unwrap(), "457,467,567");
}
