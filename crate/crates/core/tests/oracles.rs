mod common;

use common::oracle;
use senslab::measures::{self, input_measures};
use senslab::{
    block_sensitivity_at, certificate_at, minimal_sensitive_blocks, sensitivity_at, BooleanFunction,
    InputWord,
};

fn check_inputs(f: &BooleanFunction) {
    for x in 0..f.num_inputs() {
        let w = InputWord::new(f.n(), x).unwrap();
        let s = sensitivity_at(f, w).unwrap();
        let bs = block_sensitivity_at(f, w).unwrap();
        let c = certificate_at(f, w).unwrap();
        assert_eq!(s, oracle::sensitivity(f, x), "s at {w} of {}", f.to_hex());
        assert_eq!(bs, oracle::block_sensitivity(f, x), "bs at {w} of {}", f.to_hex());
        assert_eq!(c.len() as u32, oracle::certificate_complexity(f, x), "C at {w} of {}", f.to_hex());
        assert!(c.satisfied_by(w).unwrap());
        assert_eq!(f.subcube_value(c.assigned(), c.values()), Some(f.get(x)));
        assert!(s <= bs && bs <= c.len() as u32);
    }
}

fn check_profile(f: &BooleanFunction) {
    let p = measures::profile(f).unwrap();
    let o = oracle::profile(f);
    assert_eq!([p.s0, p.s1], o.s, "{}", f.to_hex());
    assert_eq!([p.bs0, p.bs1], o.bs, "{}", f.to_hex());
    assert_eq!([p.c0, p.c1], o.c, "{}", f.to_hex());
}

#[test]
fn exhaustive_up_to_three_positions() {
    for n in 1..=3 {
        for f in oracle::all_functions(n) {
            check_inputs(&f);
            check_profile(&f);
        }
    }
}

#[test]
fn random_five_position_functions() {
    for f in oracle::random_tables(5, 1000, 0x5eed) {
        check_inputs(&f);
    }
}

#[test]
fn random_profiles_and_input_rows() {
    for n in [4, 6] {
        for f in oracle::random_tables(n, 60, n as u64) {
            check_profile(&f);
            for row in input_measures(&f).unwrap() {
                let x = row.input.index();
                assert_eq!(row.value, f.get(x));
                assert_eq!(row.sensitivity, oracle::sensitivity(&f, x));
                assert_eq!(row.block_sensitivity, oracle::block_sensitivity(&f, x));
                assert_eq!(row.certificate.len() as u32, oracle::certificate_complexity(&f, x));
            }
        }
    }
}

#[test]
fn minimal_blocks_match_definition() {
    for f in oracle::random_tables(5, 200, 11) {
        for x in 0..f.num_inputs() {
            let sensitive = oracle::sensitive_blocks(&f, x);
            let minimal: Vec<u32> = sensitive
                .iter()
                .copied()
                .filter(|&b| !sensitive.iter().any(|&c| c != b && c & b == c))
                .collect();
            let mut got: Vec<u32> = minimal_sensitive_blocks(&f, InputWord::new(5, x).unwrap())
                .unwrap()
                .iter()
                .map(|b| b.mask())
                .collect();
            got.sort_unstable();
            assert_eq!(got, minimal);
        }
    }
}

#[test]
fn certificate_tie_break_is_smallest_mask() {
    for f in oracle::random_tables(4, 100, 21) {
        for x in 0..f.num_inputs() {
            let c = certificate_at(&f, InputWord::new(4, x).unwrap()).unwrap();
            let all = f.num_inputs();
            let first = (0..all)
                .filter(|a: &u32| a.count_ones() as usize == c.len())
                .find(|&a| (0..all).all(|y| (y ^ x) & a != 0 || f.get(y) == f.get(x)))
                .unwrap();
            assert_eq!(c.assigned(), first);
        }
    }
}
