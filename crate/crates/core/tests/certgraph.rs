mod common;

use common::oracle;
use senslab::certgraph::{
    build_graph, build_zero_instance, pigeonhole_bound, verify_adjacency_lemma,
    verify_main_theorem, verify_weight_lemma, SubgraphMode,
};
use senslab::constructions::g0;
use senslab::{profile, Rational};

fn instance_s0(f: &senslab::BooleanFunction) -> u32 {
    profile(f).unwrap().s0.unwrap()
}

#[test]
fn weight_lemma_on_g0() {
    for k in 3..=6 {
        let inst = build_zero_instance(&g0(k).unwrap().function).unwrap();
        inst.check_invariants().unwrap();
        let s0 = instance_s0(&inst.function);
        let r = verify_weight_lemma(&build_graph(&inst), s0, SubgraphMode::AllSubgraphs).unwrap();
        assert!(r.passed, "k={k}");
        assert_eq!(r.subsets_checked, (1 << k) - 1);
        if k == 3 {
            assert_eq!(r.full_graph.weight, 9);
            assert_eq!(r.full_graph.bound, Rational::integer(9));
            assert_eq!(r.full_graph.slack, Rational::integer(0));
        }
    }
}

#[test]
fn adjacency_lemma_on_g0() {
    for k in 3..=6 {
        let inst = build_zero_instance(&g0(k).unwrap().function).unwrap();
        let s0 = instance_s0(&inst.function);
        let r = verify_adjacency_lemma(&build_graph(&inst), s0).unwrap();
        assert!(r.passed, "k={k}");
        assert!(r.connections.iter().all(|c| c.weight >= 3));
    }
}

#[test]
fn every_small_function_with_zero_at_origin() {
    for n in 1..=4 {
        for f in oracle::all_functions(n) {
            if f.get(0) || f.constant_value().is_some() {
                continue;
            }
            let inst = build_zero_instance(&f).unwrap();
            inst.check_invariants().unwrap();
            assert_eq!(inst.k() as u32, oracle::block_sensitivity(&f, 0));
            let s0 = instance_s0(&inst.function);
            let g = build_graph(&inst);
            let r = verify_weight_lemma(&g, s0, SubgraphMode::AllSubgraphs).unwrap();
            assert!(r.passed, "{}", f.to_hex());
            assert!(verify_adjacency_lemma(&g, s0).unwrap().passed, "{}", f.to_hex());
            let p = pigeonhole_bound(&inst);
            assert_eq!(p.total_weight, p.total_zeros);
            assert!(p.each_zero_in_one_contradiction);
            let c1 = instance_c1(&inst.function);
            assert!(p.implied_c1_lower_bound <= c1);
        }
    }
}

fn instance_c1(f: &senslab::BooleanFunction) -> u32 {
    profile(f).unwrap().c1.unwrap()
}

#[test]
fn main_theorem_against_oracle_profiles() {
    for n in 1..=3 {
        for f in oracle::all_functions(n) {
            if f.constant_value().is_some() {
                continue;
            }
            let r = verify_main_theorem(&f).unwrap();
            let o = oracle::profile(&f);
            let (s0, bs0, c1) = (o.s[0].unwrap() as i64, o.bs[0].unwrap() as i64, o.c[1].unwrap() as i64);
            assert_eq!(r.holds, 2 * s0 * c1 >= 3 * bs0 - s0);
            assert_eq!(r.kk_holds, 2 * s0 * c1 >= bs0);
            assert!(r.passed);
        }
    }
}
