use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use senslab::certgraph::{contradictions, overlaps};
use senslab::constructions::or_of_certificates;
use senslab::witness::{reduce_overlaps, verify_lemma3, witness_sensitive_input, StepKind};
use senslab::{is_minimal_certificate, is_one_certificate, profile, Certificate, Error};

fn certs(rows: &[&str]) -> Vec<Certificate> {
    rows.iter().map(|r| r.parse().unwrap()).collect()
}

fn assert_witness(f: &senslab::BooleanFunction, w: &senslab::witness::WitnessResult) {
    let x = w.input.index();
    assert!(!f.get(x));
    for &p in &w.sensitive_bits {
        assert!(f.get(x ^ (1 << (p - 1))), "position {p} at {}", w.input);
    }
}

#[test]
fn path_and_cycle_fixtures() {
    for (rows, n, k) in [
        (&["110****", "**110**", "****111"][..], 7, 3),
        (&["110*****", "**10****", "***111**", "*****00*", "0*****11"][..], 8, 5),
    ] {
        let cs = certs(rows);
        let f = or_of_certificates(n, &cs).unwrap();
        let w = witness_sensitive_input(&f, &cs).unwrap();
        assert!(w.sensitive_bits.len() >= k);
        assert_witness(&f, &w);
        assert!(profile(&f).unwrap().s0.unwrap() as usize >= k);
        assert_eq!(w, witness_sensitive_input(&f, &cs).unwrap());
    }
}

#[test]
fn overlap_matrix() {
    let cs = certs(&["110*******", "**1*******", "**0110****", "*****111**", "0****0**11"]);
    let f = or_of_certificates(10, &cs).unwrap();
    let r = reduce_overlaps(&f, &cs).unwrap();
    assert_eq!((r.d.clone(), r.t), (vec![1, 3], 2));
    let report = verify_lemma3(&f, &cs).unwrap();
    assert!(report.passed);
    assert_eq!(report.measured_s0, profile(&f).unwrap().s0);
    let overlap_steps = report.witness.trace.iter().filter(|s| s.kind == StepKind::OverlapFix).count();
    assert_eq!(overlap_steps, 2);
    assert_witness(&f, &report.witness);
}

fn cert_strategy(n: usize) -> impl Strategy<Value = Certificate> {
    proptest::collection::vec(0u8..3, n).prop_filter_map("nonempty", |digits| {
        let s: String = digits.iter().map(|d| ['0', '1', '*'][*d as usize]).collect();
        let c: Certificate = s.parse().ok()?;
        (!c.is_empty()).then_some(c)
    })
}

fn family_strategy() -> impl Strategy<Value = (usize, Vec<Certificate>)> {
    (3usize..=8).prop_flat_map(|n| (Just(n), proptest::collection::vec(cert_strategy(n), 1..5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn witness_never_reports_unverified(family in family_strategy()) {
        let (n, cs) = family;
        let f = or_of_certificates(n, &cs).unwrap();
        match witness_sensitive_input(&f, &cs) {
            Ok(w) => {
                assert_witness(&f, &w);
                prop_assert!(w.sensitive_bits.len() >= cs.len());
                prop_assert!(profile(&f).unwrap().s0.unwrap() as usize >= cs.len());
            }
            Err(Error::Hypothesis(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e:?}"),
        }
    }

    #[test]
    fn lemma3_on_random_families(family in family_strategy()) {
        let (n, cs) = family;
        let f = or_of_certificates(n, &cs).unwrap();
        match reduce_overlaps(&f, &cs) {
            Ok(r) => {
                for (a, c) in r.certificates.iter().enumerate() {
                    prop_assert!(is_one_certificate(&r.function, c).unwrap());
                    if r.t > 0 {
                        prop_assert!(is_minimal_certificate(&r.function, c).unwrap());
                    }
                    let total: u32 = r.certificates.iter().map(|d| contradictions(c, d)).sum();
                    prop_assert!(total <= 2);
                    for d in &r.certificates[a + 1..] {
                        prop_assert_eq!(overlaps(c, d), 0);
                    }
                }
                match verify_lemma3(&f, &cs) {
                    Ok(report) => {
                        prop_assert!(report.passed);
                        assert_witness(&f, &report.witness);
                    }
                    Err(Error::Hypothesis(_)) => {}
                    Err(e) => prop_assert!(false, "unexpected error {e:?}"),
                }
            }
            Err(Error::Hypothesis(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e:?}"),
        }
    }
}

/// Each position is owned (assigned 1) by exactly one certificate; other
/// certificates assign 0 there with probability 1/5.
fn owned_family(rng: &mut impl Rng) -> Option<(usize, Vec<Certificate>)> {
    let n = rng.random_range(3..=10);
    let k = rng.random_range(1..=n.min(6));
    let owner: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    if (0..k).any(|c| !owner.contains(&c)) {
        return None;
    }
    let cs = (0..k)
        .map(|c| {
            let s: String = (0..n)
                .map(|p| match (owner[p] == c, rng.random_bool(0.2)) {
                    (true, _) => '1',
                    (false, true) => '0',
                    (false, false) => '*',
                })
                .collect();
            s.parse().unwrap()
        })
        .collect();
    Some((n, cs))
}

#[test]
fn owned_families_cover_every_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    let mut accepted = 0;
    for _ in 0..3000 {
        let Some((n, cs)) = owned_family(&mut rng) else { continue };
        let f = or_of_certificates(n, &cs).unwrap();
        match verify_lemma3(&f, &cs) {
            Ok(r) => {
                accepted += 1;
                assert!(r.passed);
                assert!(r.sensitive_count >= cs.len());
                assert_witness(&f, &r.witness);
                for step in &r.witness.trace {
                    *kinds.entry(format!("{:?}", step.kind)).or_default() += 1;
                }
            }
            Err(Error::Hypothesis(_)) => {}
            Err(e) => panic!("{e:?} on {cs:?}"),
        }
    }
    assert!(accepted > 500);
    for kind in ["OverlapFix", "Singleton", "PathHead", "Pair", "Cycle"] {
        assert!(kinds.get(kind).copied().unwrap_or(0) > 0, "{kind} never exercised: {kinds:?}");
    }
}
