//! Sweeps over function space.
//!
//! Every sweep measures each function in a fixed order, in parallel over
//! fixed-size chunks that are collected back in order, then folds the
//! measured profiles sequentially. The worker count therefore never changes a
//! report.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::certgraph::MainTheoremReport;
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::measures::{self, MeasureProfile};
use crate::ratio::Rational;

/// Largest `n` for which every function can be enumerated.
pub const MAX_EXHAUSTIVE_VARS: usize = 4;

/// Identifies the sample generator used by [`SweepMode::Random`].
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9): seed_from_u64(seed), set_stream(sample index), truth-table words from next_u64";

const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

/// One measured function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionRecord {
    pub tt_hex: String,
    pub n: usize,
    pub profile: MeasureProfile,
    /// `C1 - ((3/2) bs0/s0 - 1/2)`; absent for constant functions.
    pub thm3_slack: Option<Rational>,
    /// `C1 - bs0/(2 s0)`; absent for constant functions.
    pub kk_slack: Option<Rational>,
}

impl FunctionRecord {
    fn new(f: &BooleanFunction, profile: MeasureProfile) -> Self {
        let check = MainTheoremReport::from_profile(&profile);
        FunctionRecord {
            tt_hex: f.to_hex(),
            n: f.n(),
            profile,
            thm3_slack: check.as_ref().map(|c| c.slack),
            kk_slack: check.as_ref().map(|c| c.kk_slack),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub tt_hex: String,
    pub profile: MeasureProfile,
    pub bound: Rational,
    pub slack: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichViolation {
    pub tt_hex: String,
    pub profile: MeasureProfile,
    pub lower: u32,
    pub upper: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrontierEntry {
    pub s0: u32,
    pub bs0: u32,
    pub min_c1: u32,
    /// First function in sweep order attaining `min_c1`.
    pub example: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioWitness {
    /// `bs0 / (s0 s1)`.
    pub ratio: Rational,
    pub tt_hex: String,
    pub profile: MeasureProfile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    pub functions_checked: u64,
    pub nonconstant_checked: u64,
    pub violations_main_theorem: Vec<Violation>,
    pub violations_kenyon_kutin: Vec<Violation>,
    pub sandwich_violations: Vec<SandwichViolation>,
    /// Sorted by `(s0, bs0)`.
    pub frontier: Vec<FrontierEntry>,
    pub max_conjecture_ratio: Option<RatioWitness>,
}

impl SweepReport {
    pub fn violation_count(&self) -> usize {
        self.violations_main_theorem.len()
            + self.violations_kenyon_kutin.len()
            + self.sandwich_violations.len()
    }

    pub fn passed(&self) -> bool {
        self.violation_count() == 0
    }
}

fn conjecture_ratio(p: &MeasureProfile) -> Option<Rational> {
    let (s0, s1, bs0) = (p.s0?, p.s1?, p.bs0?);
    (s0 > 0 && s1 > 0).then(|| Rational::new(bs0 as i64, (s0 * s1) as i64))
}

fn random_function(n: usize, seed: u64, sample: u64) -> BooleanFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    let words: Vec<u64> = (0..((1usize << n).div_ceil(64))).map(|_| rng.random()).collect();
    BooleanFunction::from_fn(n, |i| (words[(i / 64) as usize] >> (i % 64)) & 1 == 1)
        .expect("n already validated")
}

/// The `index`-th function of the sweep.
fn sweep_function(n: usize, mode: SweepMode, index: u64) -> BooleanFunction {
    match mode {
        SweepMode::Exhaustive => BooleanFunction::from_bits(n, index).expect("n already validated"),
        SweepMode::Random { seed, .. } => random_function(n, seed, index),
    }
}

fn validate(n: usize, mode: SweepMode) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    match mode {
        SweepMode::Exhaustive if n > MAX_EXHAUSTIVE_VARS => Err(Error::Capacity(format!(
            "exhaustive sweeps support n <= {MAX_EXHAUSTIVE_VARS}, got {n}"
        ))),
        SweepMode::Exhaustive => Ok(1u64 << (1u32 << n)),
        SweepMode::Random { .. } if n > measures::MAX_PROFILE_VARS => Err(Error::Capacity(format!(
            "random sweeps support n <= {}, got {n}",
            measures::MAX_PROFILE_VARS
        ))),
        SweepMode::Random { samples, .. } => Ok(samples),
    }
}

/// Measures every function of the sweep, in sweep order.
pub fn sweep_records(n: usize, mode: SweepMode) -> Result<Vec<FunctionRecord>> {
    let total = validate(n, mode)?;
    let chunks: Vec<Vec<FunctionRecord>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(total))
                .map(|i| {
                    let f = sweep_function(n, mode, i);
                    let profile = measures::profile(&f).expect("n already validated");
                    FunctionRecord::new(&f, profile)
                })
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Folds measured records, in order, into a report.
pub fn summarize(n: usize, mode: SweepMode, records: &[FunctionRecord]) -> SweepReport {
    let mut report = SweepReport {
        n,
        mode: match mode {
            SweepMode::Exhaustive => "EXHAUSTIVE".into(),
            SweepMode::Random { samples, seed } => format!("RANDOM(samples={samples}, seed={seed})"),
        },
        rng: matches!(mode, SweepMode::Random { .. }).then(|| RNG_ALGORITHM.to_string()),
        functions_checked: records.len() as u64,
        nonconstant_checked: 0,
        violations_main_theorem: Vec::new(),
        violations_kenyon_kutin: Vec::new(),
        sandwich_violations: Vec::new(),
        frontier: Vec::new(),
        max_conjecture_ratio: None,
    };
    let mut frontier: BTreeMap<(u32, u32), (u32, &str)> = BTreeMap::new();
    for r in records {
        let Some(check) = MainTheoremReport::from_profile(&r.profile) else {
            continue;
        };
        let p = r.profile;
        report.nonconstant_checked += 1;
        if !check.holds {
            report.violations_main_theorem.push(Violation {
                tt_hex: r.tt_hex.clone(),
                profile: p,
                bound: check.bound,
                slack: check.slack,
            });
        }
        if !check.kk_holds {
            report.violations_kenyon_kutin.push(Violation {
                tt_hex: r.tt_hex.clone(),
                profile: p,
                bound: check.kk_bound,
                slack: check.kk_slack,
            });
        }
        let (s0, s1, bs0, c1) = (p.s0.unwrap(), p.s1.unwrap(), p.bs0.unwrap(), p.c1.unwrap());
        let upper = (1u64 << (s0 - 1)) * s1 as u64;
        if c1 < s1 || c1 as u64 > upper {
            report.sandwich_violations.push(SandwichViolation {
                tt_hex: r.tt_hex.clone(),
                profile: p,
                lower: s1,
                upper,
            });
        }
        let entry = frontier.entry((s0, bs0)).or_insert((c1, &r.tt_hex));
        if c1 < entry.0 {
            *entry = (c1, &r.tt_hex);
        }
        if let Some(ratio) = conjecture_ratio(&p) {
            if report.max_conjecture_ratio.as_ref().is_none_or(|w| ratio > w.ratio) {
                report.max_conjecture_ratio = Some(RatioWitness {
                    ratio,
                    tt_hex: r.tt_hex.clone(),
                    profile: p,
                });
            }
        }
    }
    report.frontier = frontier
        .into_iter()
        .map(|((s0, bs0), (min_c1, example))| FrontierEntry {
            s0,
            bs0,
            min_c1,
            example: example.to_string(),
        })
        .collect();
    report
}

/// Checks both lower bounds on `C1` and the `s1 <= C1 <= 2^(s0-1) s1` band
/// on every function of the sweep.
pub fn sweep(n: usize, mode: SweepMode) -> Result<SweepReport> {
    let records = sweep_records(n, mode)?;
    Ok(summarize(n, mode, &records))
}

/// Optional equality constraints for [`extremal_search`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Constraints {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bs0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1: Option<u32>,
    #[serde(rename = "C1", skip_serializing_if = "Option::is_none")]
    pub c1: Option<u32>,
}

impl Constraints {
    pub fn accepts(&self, p: &MeasureProfile) -> bool {
        let ok = |want: Option<u32>, have: Option<u32>| want.is_none() || want == have;
        p.c1.is_some()
            && p.s0.is_some()
            && ok(self.s0, p.s0)
            && ok(self.bs0, p.bs0)
            && ok(self.s1, p.s1)
            && ok(self.c1, p.c1)
    }
}

/// The functions obtained from `f` by permuting and complementing inputs.
pub fn input_orbit(f: &BooleanFunction) -> BTreeSet<u64> {
    let n = f.n();
    let bits = f.to_bits().expect("orbits need n <= 6");
    let mut orbit = BTreeSet::new();
    for perm in (0..n).permutations(n) {
        for flip in 0u32..(1 << n) {
            let mut g = 0u64;
            for x in 0u32..(1 << n) {
                let y = (0..n).fold(0u32, |acc, j| acc | (((x >> j) & 1) << perm[j])) ^ flip;
                g |= ((bits >> y) & 1) << x;
            }
            orbit.insert(g);
        }
    }
    orbit
}

/// Smallest table (as an integer) in the input orbit of `f`.
pub fn canonical_form(f: &BooleanFunction) -> BooleanFunction {
    let min = *input_orbit(f).iter().next().expect("orbit contains f");
    BooleanFunction::from_bits(f.n(), min).expect("same n")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalClass {
    /// Canonical representative.
    pub tt_hex: String,
    pub orbit_size: usize,
    pub profile: MeasureProfile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalResult {
    pub n: usize,
    pub constraints: Constraints,
    pub objective: String,
    pub min_c1: u32,
    /// `(3/2) bs0/s0 - 1/2` when both are constrained.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<Rational>,
    pub matching_functions: u64,
    pub optimal_functions: u64,
    /// Optimal functions up to input permutation and complementation, by
    /// canonical table.
    pub classes: Vec<ExtremalClass>,
}

/// All functions meeting `constraints` with minimum `C1`.
pub fn extremal_search(n: usize, constraints: Constraints) -> Result<ExtremalResult> {
    let records = sweep_records(n, SweepMode::Exhaustive)?;
    let matching: Vec<&FunctionRecord> = records
        .iter()
        .filter(|r| constraints.accepts(&r.profile))
        .collect();
    let min_c1 = matching
        .iter()
        .filter_map(|r| r.profile.c1)
        .min()
        .ok_or(Error::NoSolution)?;
    let optimal: Vec<&FunctionRecord> = matching
        .iter()
        .copied()
        .filter(|r| r.profile.c1 == Some(min_c1))
        .collect();
    let mut classes: BTreeMap<u64, ExtremalClass> = BTreeMap::new();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    for r in &optimal {
        let f = BooleanFunction::from_hex(&r.tt_hex, n)?;
        let bits = f.to_bits().expect("n <= 4");
        if seen.contains(&bits) {
            continue;
        }
        let orbit = input_orbit(&f);
        let canon = *orbit.iter().next().expect("nonempty");
        seen.extend(orbit.iter().copied());
        classes.insert(
            canon,
            ExtremalClass {
                tt_hex: BooleanFunction::from_bits(n, canon)?.to_hex(),
                orbit_size: orbit.len(),
                profile: r.profile,
            },
        );
    }
    let lower_bound = match (constraints.s0, constraints.bs0) {
        (Some(s0), Some(bs0)) if s0 > 0 => {
            Some(Rational::new(3 * bs0 as i64 - s0 as i64, 2 * s0 as i64))
        }
        _ => None,
    };
    Ok(ExtremalResult {
        n,
        constraints,
        objective: "MINIMIZE_C1".into(),
        min_c1,
        lower_bound,
        matching_functions: matching.len() as u64,
        optimal_functions: optimal.len() as u64,
        classes: classes.into_values().collect(),
    })
}

/// Most witnesses listed by [`conjecture_report`].
pub const MAX_LISTED_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    /// Exact maximum of `bs0 / (s0 s1)` over non-constant functions.
    pub max_ratio: Rational,
    pub witness_count: u64,
    /// The first witnesses in table order.
    pub witnesses: Vec<RatioWitness>,
}

/// Exact maximum of `bs0/(s0 s1)` over all functions of `n` inputs.
pub fn conjecture_report(n: usize) -> Result<ConjectureReport> {
    let records = sweep_records(n, SweepMode::Exhaustive)?;
    let ratios: Vec<(Rational, &FunctionRecord)> = records
        .iter()
        .filter_map(|r| conjecture_ratio(&r.profile).map(|q| (q, r)))
        .collect();
    let max_ratio = ratios
        .iter()
        .map(|(q, _)| *q)
        .max()
        .expect("n >= 1 has non-constant functions");
    let all: Vec<RatioWitness> = ratios
        .into_iter()
        .filter(|(q, _)| *q == max_ratio)
        .map(|(ratio, r)| RatioWitness {
            ratio,
            tt_hex: r.tt_hex.clone(),
            profile: r.profile,
        })
        .collect();
    Ok(ConjectureReport {
        n,
        max_ratio,
        witness_count: all.len() as u64,
        witnesses: all.into_iter().take(MAX_LISTED_WITNESSES).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::g0;

    #[test]
    fn exhaustive_small() {
        let r = sweep(2, SweepMode::Exhaustive).unwrap();
        assert_eq!(r.functions_checked, 16);
        assert_eq!(r.nonconstant_checked, 14);
        assert!(r.passed());
        assert!(r.rng.is_none());
    }

    #[test]
    fn exhaustive_capacity() {
        assert!(matches!(sweep(5, SweepMode::Exhaustive), Err(Error::Capacity(_))));
    }

    #[test]
    fn random_is_reproducible() {
        let mode = SweepMode::Random { samples: 200, seed: 1 };
        let a = sweep_records(5, mode).unwrap();
        let b = sweep_records(5, mode).unwrap();
        assert_eq!(a, b);
        let other = sweep_records(5, SweepMode::Random { samples: 200, seed: 2 }).unwrap();
        assert_ne!(a, other);
        assert!(summarize(5, mode, &a).passed());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let mode = SweepMode::Random { samples: 9000, seed: 3 };
        let a = one.install(|| sweep(4, mode).unwrap());
        let b = four.install(|| sweep(4, mode).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn conjecture_n1() {
        let r = conjecture_report(1).unwrap();
        assert_eq!(r.max_ratio, Rational::integer(1));
        assert_eq!(r.witness_count, 2);
    }

    #[test]
    fn orbit_of_or_is_its_class() {
        let or2 = BooleanFunction::from_hex("e", 2).unwrap();
        // x1 OR x2 under complementation gives the four two-input functions with three ones
        assert_eq!(input_orbit(&or2).len(), 4);
        let and2 = BooleanFunction::from_hex("8", 2).unwrap();
        assert!(input_orbit(&and2).iter().all(|&g| g.count_ones() == 1));
    }

    #[test]
    fn extremal_g0_k2() {
        let r = extremal_search(
            4,
            Constraints {
                s0: Some(1),
                bs0: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        // the bound (3/2)*2 - 1/2 rounds up to 3, which a 3-input function
        // attains; g0(2) meets the constraints with C1 = 4
        assert_eq!(r.min_c1, 3);
        assert_eq!(r.lower_bound, Some(Rational::new(5, 2)));
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].tt_hex, "03c0");
        let g = g0(2).unwrap().function;
        let p = measures::profile(&g).unwrap();
        assert!(r.constraints.accepts(&p));
        assert_eq!(p.c1, Some(4));
        assert_eq!(canonical_form(&canonical_form(&g)), canonical_form(&g));
    }

    #[test]
    fn extremal_no_solution() {
        let r = extremal_search(
            2,
            Constraints {
                s0: Some(3),
                ..Default::default()
            },
        );
        assert_eq!(r, Err(Error::NoSolution));
    }
}
