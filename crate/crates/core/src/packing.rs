//! Exact maximum packing of pairwise disjoint position sets.
//!
//! Branch and bound on the lowest position still covered by a candidate:
//! either one of the candidates containing it is taken, or none is. The bound
//! is the smaller of the candidate count and the number of covered positions
//! divided by the smallest candidate size.

fn upper_bound(cands: &[u32]) -> usize {
    let mut union = 0u32;
    let mut smallest = u32::MAX;
    for &c in cands {
        union |= c;
        smallest = smallest.min(c.count_ones());
    }
    if cands.is_empty() {
        return 0;
    }
    std::cmp::min(cands.len(), (union.count_ones() / smallest) as usize)
}

fn greedy(cands: &[u32]) -> usize {
    let mut sorted = cands.to_vec();
    sorted.sort_by_key(|c| (c.count_ones(), *c));
    let mut used = 0u32;
    let mut count = 0;
    for c in sorted {
        if c & used == 0 {
            used |= c;
            count += 1;
        }
    }
    count
}

fn branch(cands: &[u32], chosen: usize, best: &mut usize) {
    if cands.is_empty() {
        *best = (*best).max(chosen);
        return;
    }
    if chosen + upper_bound(cands) <= *best {
        return;
    }
    let union = cands.iter().fold(0u32, |acc, &c| acc | c);
    let pivot = union & union.wrapping_neg();
    let (with, without): (Vec<u32>, Vec<u32>) = cands.iter().partition(|&&c| c & pivot != 0);
    for &b in &with {
        let rest: Vec<u32> = without.iter().copied().filter(|&c| c & b == 0).collect();
        branch(&rest, chosen + 1, best);
    }
    branch(&without, chosen, best);
}

/// Size of a largest family of pairwise disjoint nonempty masks from `cands`.
pub fn max_disjoint(cands: &[u32]) -> usize {
    let cands: Vec<u32> = cands.iter().copied().filter(|&c| c != 0).collect();
    let mut best = greedy(&cands);
    branch(&cands, 0, &mut best);
    best
}

/// A maximum disjoint family whose ascending mask sequence is lexicographically
/// smallest among all maximum families.
pub fn lex_min_max_packing(cands: &[u32]) -> Vec<u32> {
    let mut sorted: Vec<u32> = cands.iter().copied().filter(|&c| c != 0).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut need = max_disjoint(&sorted);
    let mut chosen = Vec::with_capacity(need);
    let mut used = 0u32;
    let mut start = 0;
    while need > 0 {
        let mut picked = false;
        for idx in start..sorted.len() {
            let b = sorted[idx];
            if b & used != 0 {
                continue;
            }
            let rest: Vec<u32> = sorted[idx + 1..]
                .iter()
                .copied()
                .filter(|&c| c & (used | b) == 0)
                .collect();
            if 1 + max_disjoint(&rest) >= need {
                chosen.push(b);
                used |= b;
                need -= 1;
                start = idx + 1;
                picked = true;
                break;
            }
        }
        assert!(picked, "maximum packing size not reachable");
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(cands: &[u32]) -> usize {
        brute_families(cands).iter().map(|f| f.len()).max().unwrap_or(0)
    }

    /// Every disjoint family, each as an ascending mask sequence.
    fn brute_families(cands: &[u32]) -> Vec<Vec<u32>> {
        let k = cands.len();
        let mut out = Vec::new();
        for sel in 0u32..(1 << k) {
            let mut used = 0u32;
            let mut ok = true;
            for (i, &c) in cands.iter().enumerate() {
                if (sel >> i) & 1 == 1 {
                    if c & used != 0 || c == 0 {
                        ok = false;
                        break;
                    }
                    used |= c;
                }
            }
            if ok {
                let mut fam: Vec<u32> = (0..k).filter(|i| (sel >> i) & 1 == 1).map(|i| cands[i]).collect();
                fam.sort_unstable();
                out.push(fam);
            }
        }
        out
    }

    #[test]
    fn small_cases() {
        assert_eq!(max_disjoint(&[]), 0);
        assert_eq!(max_disjoint(&[0b11, 0b1100]), 2);
        assert_eq!(max_disjoint(&[0b0110, 0b0011, 0b1100]), 2);
        assert_eq!(lex_min_max_packing(&[0b1100, 0b0011, 0b0110]), vec![0b0011, 0b1100]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(cands in proptest::collection::vec(1u32..256, 0..12)) {
            prop_assert_eq!(max_disjoint(&cands), brute(&cands));
            let packing = lex_min_max_packing(&cands);
            let best = brute(&cands);
            let lex_min = brute_families(&cands).into_iter().filter(|f| f.len() == best).min().unwrap();
            prop_assert_eq!(&packing, &lex_min);
            let mut used = 0;
            for w in packing.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for b in packing {
                prop_assert_eq!(b & used, 0);
                used |= b;
            }
        }
    }
}
