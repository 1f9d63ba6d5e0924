//! Brute-force reference implementations, written directly from the
//! definitions and sharing no code with the library beyond table lookup.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use senslab::BooleanFunction;

pub fn sensitivity(f: &BooleanFunction, x: u32) -> u32 {
    (0..f.n()).filter(|&j| f.get(x ^ (1 << j)) != f.get(x)).count() as u32
}

/// Every sensitive block of `x`, as masks in increasing order.
pub fn sensitive_blocks(f: &BooleanFunction, x: u32) -> Vec<u32> {
    (1..f.num_inputs()).filter(|&b| f.get(x ^ b) != f.get(x)).collect()
}

fn best_family(blocks: &[u32], used: u32) -> u32 {
    let mut best = 0;
    for (i, &b) in blocks.iter().enumerate() {
        if b & used == 0 {
            best = best.max(1 + best_family(&blocks[i + 1..], used | b));
        }
    }
    best
}

/// Largest number of pairwise disjoint sensitive blocks, over all families.
pub fn block_sensitivity(f: &BooleanFunction, x: u32) -> u32 {
    best_family(&sensitive_blocks(f, x), 0)
}

/// Smallest number of positions of `x` that force `f(x)` on the subcube.
pub fn certificate_complexity(f: &BooleanFunction, x: u32) -> u32 {
    let all = f.num_inputs();
    (0..all)
        .filter(|&a| (0..all).all(|y| (y ^ x) & a != 0 || f.get(y) == f.get(x)))
        .map(|a| a.count_ones())
        .min()
        .expect("the full assignment is a certificate")
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Profile {
    pub s: [Option<u32>; 2],
    pub bs: [Option<u32>; 2],
    pub c: [Option<u32>; 2],
}

pub fn profile(f: &BooleanFunction) -> Profile {
    let mut p = Profile::default();
    let up = |slot: &mut Option<u32>, v: u32| *slot = Some(slot.map_or(v, |o| o.max(v)));
    for x in 0..f.num_inputs() {
        let z = usize::from(f.get(x));
        up(&mut p.s[z], sensitivity(f, x));
        up(&mut p.bs[z], block_sensitivity(f, x));
        up(&mut p.c[z], certificate_complexity(f, x));
    }
    p
}

/// Seeded random tables for `n` positions.
pub fn random_tables(n: usize, count: usize, seed: u64) -> Vec<BooleanFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let words: Vec<u64> = (0..(1usize << n).div_ceil(64)).map(|_| rng.random()).collect();
            BooleanFunction::from_fn(n, |i| (words[i as usize / 64] >> (i % 64)) & 1 == 1).unwrap()
        })
        .collect()
}

/// All functions of `n <= 4` positions, by table index.
pub fn all_functions(n: usize) -> impl Iterator<Item = BooleanFunction> {
    (0..1u64 << (1 << n)).map(move |t| BooleanFunction::from_bits(n, t).unwrap())
}
