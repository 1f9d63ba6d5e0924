use std::collections::BTreeMap;

use senslab::search::{conjecture_report, extremal_search, sweep, Constraints, SweepMode};
use senslab::Rational;

#[test]
fn exhaustive_four_positions() {
    let r = sweep(4, SweepMode::Exhaustive).unwrap();
    assert_eq!(r.functions_checked, 65536);
    assert_eq!(r.nonconstant_checked, 65534);
    assert!(r.violations_main_theorem.is_empty());
    assert!(r.violations_kenyon_kutin.is_empty());
    assert!(r.sandwich_violations.is_empty());
    let mut by_s0: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    for e in &r.frontier {
        by_s0.entry(e.s0).or_default().push((e.bs0, e.min_c1));
    }
    for row in by_s0.values() {
        assert!(row.windows(2).all(|w| w[0].1 <= w[1].1), "{row:?}");
    }
}

#[test]
fn random_six_positions() {
    let r = sweep(6, SweepMode::Random { samples: 100_000, seed: 1 }).unwrap();
    assert_eq!(r.functions_checked, 100_000);
    assert!(r.passed());
}

#[test]
fn conjecture_ratios() {
    let r2 = conjecture_report(2).unwrap();
    assert!(r2.witness_count > 0);
    let r4 = conjecture_report(4).unwrap();
    assert!(r4.max_ratio >= r2.max_ratio);
    for w in &r4.witnesses {
        let p = w.profile;
        assert_eq!(
            w.ratio,
            Rational::new(p.bs0.unwrap() as i64, (p.s0.unwrap() * p.s1.unwrap()) as i64)
        );
    }
}

#[test]
fn extremal_examples() {
    let r = extremal_search(4, Constraints { s0: Some(2), bs0: Some(2), ..Default::default() }).unwrap();
    assert!(Rational::integer(r.min_c1 as i64) >= r.lower_bound.unwrap());
    let ne = extremal_search(
        4,
        Constraints { s0: Some(2), s1: Some(2), c1: Some(3), ..Default::default() },
    )
    .unwrap();
    assert_eq!(ne.min_c1, 3);
    assert!(!ne.classes.is_empty());
    for class in &ne.classes {
        assert_eq!((class.profile.s0, class.profile.s1, class.profile.c1), (Some(2), Some(2), Some(3)));
    }
}
