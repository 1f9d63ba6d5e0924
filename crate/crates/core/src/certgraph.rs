//! Contradiction graphs of zero-input instances and the lower-bound checks
//! built on them.
//!
//! A [`ZeroInputInstance`] takes a maximum disjoint family of minimal sensitive
//! blocks of the all-0 input, fixes every uncovered position to 0, and pairs
//! each block `B_i` with a minimal 1-certificate satisfied by `0^{B_i}`. The
//! [`ContradictionGraph`] weights each pair of certificates by the number of
//! positions where they disagree.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{
    full_mask, is_minimal_certificate, BooleanFunction, Block, Certificate, InputWord,
};
use crate::measures::{self, MeasureProfile};
use crate::packing;
use crate::ratio::Rational;

/// Positions where one certificate assigns 1 and the other 0.
pub fn contradictions(c: &Certificate, d: &Certificate) -> u32 {
    (c.assigned() & d.assigned() & (c.values() ^ d.values())).count_ones()
}

/// Positions where both certificates assign the same value.
pub fn overlaps(c: &Certificate, d: &Certificate) -> u32 {
    (c.assigned() & d.assigned() & !(c.values() ^ d.values())).count_ones()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroInputInstance {
    /// The function after fixing uncovered positions to 0 (and shifting, if any).
    pub function: BooleanFunction,
    /// Disjoint minimal sensitive blocks of the all-0 input covering every position.
    pub blocks: Vec<Block>,
    /// `certificates[i]` is a minimal 1-certificate satisfied by `0^{blocks[i]}`.
    pub certificates: Vec<Certificate>,
    /// Original position of each instance position, in order.
    pub positions: Vec<usize>,
    /// The input the original function was shifted by before restriction.
    pub shift: InputWord,
}

impl ZeroInputInstance {
    /// Number of blocks, `k`.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// Checks the structural facts the lower-bound argument relies on.
    pub fn check_invariants(&self) -> Result<()> {
        let f = &self.function;
        let n = f.n();
        if f.get(0) {
            return Err(Error::Internal("instance function is 1 at all-0".into()));
        }
        let mut covered = 0u32;
        for b in &self.blocks {
            if b.mask() & covered != 0 {
                return Err(Error::Internal(format!("block {b} overlaps an earlier block")));
            }
            covered |= b.mask();
        }
        if covered != full_mask(n) {
            return Err(Error::Internal("blocks do not cover every position".into()));
        }
        for (b, c) in self.blocks.iter().zip(&self.certificates) {
            if c.values() != b.mask() || c.assigned() & b.mask() != b.mask() {
                return Err(Error::Internal(format!(
                    "certificate {c} does not assign exactly the ones of block {b}"
                )));
            }
            if !is_minimal_certificate(f, c)? || !f.is_constant_on(c.assigned(), c.values(), true) {
                return Err(Error::Internal(format!("{c} is not a minimal 1-certificate")));
            }
        }
        for pos in 1..=n {
            let ones = self
                .certificates
                .iter()
                .filter(|c| c.value_at(pos) == Some(true))
                .count();
            if ones != 1 {
                return Err(Error::Internal(format!(
                    "position {pos} is assigned 1 by {ones} certificates"
                )));
            }
        }
        Ok(())
    }
}

fn compress(mask: u32, positions: &[usize]) -> u32 {
    positions
        .iter()
        .enumerate()
        .filter(|(_, &p)| (mask >> (p - 1)) & 1 == 1)
        .fold(0u32, |acc, (j, _)| acc | (1 << j))
}

/// Builds the instance at the all-0 input.
pub fn build_zero_instance(f: &BooleanFunction) -> Result<ZeroInputInstance> {
    build_shifted_instance(f, InputWord::zero(f.n()))
}

fn build_shifted_instance(original: &BooleanFunction, shift: InputWord) -> Result<ZeroInputInstance> {
    let n = original.n();
    if n > measures::MAX_PER_INPUT_VARS {
        return Err(Error::Capacity(format!(
            "instances support n <= {}, got {n}",
            measures::MAX_PER_INPUT_VARS
        )));
    }
    if original.constant_value().is_some() {
        return Err(Error::ConstantFunction);
    }
    let f = original.shifted(shift.index());
    if f.get(0) {
        return Err(Error::ZeroInputIsOne);
    }
    let packing = packing::lex_min_max_packing(&measures::minimal_block_masks(&f, 0));
    let covered = packing.iter().fold(0u32, |acc, b| acc | b);
    let fix = Certificate::from_masks(n, full_mask(n) & !covered, 0);
    let restricted = f.restrict(&fix)?;
    let blocks: Vec<Block> = packing
        .iter()
        .map(|&b| Block::from_mask(compress(b, &restricted.positions)))
        .collect();
    let certificates = blocks
        .iter()
        .map(|b| measures::certificate_scan(&restricted.function, b.mask()))
        .collect();
    Ok(ZeroInputInstance {
        function: restricted.function,
        blocks,
        certificates,
        positions: restricted.positions,
        shift,
    })
}

/// Builds the instance at the first 0-input (by index) maximizing block
/// sensitivity, after shifting that input to all-0.
pub fn build_instance_at_max(f: &BooleanFunction) -> Result<ZeroInputInstance> {
    if f.n() > measures::MAX_PROFILE_VARS {
        return Err(Error::Capacity(format!(
            "locating the bs0 maximum supports n <= {}, got {}",
            measures::MAX_PROFILE_VARS,
            f.n()
        )));
    }
    if f.constant_value().is_some() {
        return Err(Error::ConstantFunction);
    }
    let mut best: Option<(u32, u32)> = None;
    for index in (0..f.num_inputs()).filter(|&i| !f.get(i)) {
        let bs = measures::block_sensitivity_index(f, index);
        if best.is_none_or(|(_, b)| bs > b) {
            best = Some((index, bs));
        }
    }
    let (index, _) = best.expect("non-constant function has a 0-input");
    build_shifted_instance(f, InputWord::new(f.n(), index)?)
}

/// Complete weighted graph on certificates; weight = number of contradictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContradictionGraph {
    order: usize,
    weights: Vec<u32>,
}

impl ContradictionGraph {
    pub fn from_certificates(certs: &[Certificate]) -> Self {
        let k = certs.len();
        let mut weights = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    weights[i * k + j] = contradictions(&certs[i], &certs[j]);
                }
            }
        }
        ContradictionGraph { order: k, weights }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.weights[i * self.order + j]
    }

    /// Rows of the symmetric weight matrix.
    pub fn matrix(&self) -> Vec<Vec<u32>> {
        self.weights.chunks(self.order.max(1)).take(self.order).map(|r| r.to_vec()).collect()
    }

    /// Total weight of edges joining `v` to members of `set`.
    pub fn weight_to(&self, v: usize, set: u32) -> u32 {
        let mut s = set & !(1 << v);
        let mut total = 0;
        while s != 0 {
            let u = s.trailing_zeros() as usize;
            total += self.weight(v, u);
            s &= s - 1;
        }
        total
    }

    /// Weight of the subgraph induced by `set`.
    pub fn subset_weight(&self, set: u32) -> u32 {
        let mut s = set;
        let mut total = 0;
        while s != 0 {
            let v = s.trailing_zeros() as usize;
            s &= s - 1;
            total += self.weight_to(v, s);
        }
        total
    }

    pub fn total_weight(&self) -> u32 {
        if self.order == 0 {
            return 0;
        }
        self.subset_weight(full_mask(self.order))
    }
}

pub fn build_graph(inst: &ZeroInputInstance) -> ContradictionGraph {
    ContradictionGraph::from_certificates(&inst.certificates)
}

/// Largest order accepted by [`SubgraphMode::AllSubgraphs`].
pub const MAX_EXHAUSTIVE_ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgraphMode {
    AllSubgraphs,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgraphBound {
    pub vertices: Vec<usize>,
    pub order: usize,
    pub weight: u32,
    pub bound: Rational,
    pub slack: Rational,
}

/// `2 s0 (w - bound)`, an integer with the sign of the slack.
fn scaled_slack(s0: u32, order: u32, weight: u32) -> i64 {
    let (s0, m, w) = (s0 as i64, order as i64, weight as i64);
    2 * s0 * w - 3 * m * m + 3 * m * s0
}

/// `(3/2) m^2 / s0 - (3/2) m`.
pub fn weight_lemma_bound(s0: u32, order: u32) -> Rational {
    let (s0, m) = (s0 as i64, order as i64);
    Rational::new(3 * m * m - 3 * m * s0, 2 * s0)
}

fn subgraph_bound(g: &ContradictionGraph, s0: u32, set: u32) -> SubgraphBound {
    let order = set.count_ones();
    let weight = g.subset_weight(set);
    let bound = weight_lemma_bound(s0, order);
    SubgraphBound {
        vertices: crate::function::mask_positions(set).into_iter().map(|p| p - 1).collect(),
        order: order as usize,
        weight,
        bound,
        slack: Rational::integer(weight as i64) - bound,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightLemmaReport {
    pub s0: u32,
    pub mode: String,
    pub subsets_checked: u64,
    pub min_slack: Option<SubgraphBound>,
    pub full_graph: SubgraphBound,
    pub violation_count: u64,
    /// At most [`MAX_REPORTED_VIOLATIONS`] violating sets, in enumeration order.
    pub violations: Vec<SubgraphBound>,
    pub passed: bool,
}

pub const MAX_REPORTED_VIOLATIONS: usize = 64;

#[derive(Default)]
struct SlackScan {
    checked: u64,
    min: Option<(i64, u32)>,
    violation_count: u64,
    violations: Vec<u32>,
}

impl SlackScan {
    fn visit(&mut self, set: u32, scaled: i64) {
        self.checked += 1;
        if self.min.is_none_or(|(best, _)| scaled < best) {
            self.min = Some((scaled, set));
        }
        if scaled < 0 {
            self.violation_count += 1;
            if self.violations.len() < MAX_REPORTED_VIOLATIONS {
                self.violations.push(set);
            }
        }
    }

    /// Merge a scan of a later portion of the enumeration.
    fn merge(mut self, later: SlackScan) -> SlackScan {
        self.checked += later.checked;
        if let Some((s, set)) = later.min {
            if self.min.is_none_or(|(best, _)| s < best) {
                self.min = Some((s, set));
            }
        }
        self.violation_count += later.violation_count;
        for v in later.violations {
            if self.violations.len() < MAX_REPORTED_VIOLATIONS {
                self.violations.push(v);
            }
        }
        self
    }
}

/// Checks `w >= (3/2) m^2 / s0 - (3/2) m` on induced subgraphs.
pub fn verify_weight_lemma(
    g: &ContradictionGraph,
    s0: u32,
    mode: SubgraphMode,
) -> Result<WeightLemmaReport> {
    if s0 == 0 {
        return Err(Error::InvalidParameter("s0 must be at least 1".into()));
    }
    let k = g.order();
    let scan = match mode {
        SubgraphMode::AllSubgraphs => {
            if k > MAX_EXHAUSTIVE_ORDER {
                return Err(Error::Capacity(format!(
                    "exhaustive subgraph check supports order <= {MAX_EXHAUSTIVE_ORDER}, got {k}"
                )));
            }
            let size = 1usize << k;
            let mut weight = vec![0u32; size];
            for set in 1..size {
                let v = set.trailing_zeros() as usize;
                let rest = set & (set - 1);
                weight[set] = weight[rest] + g.weight_to(v, rest as u32);
            }
            const CHUNK: usize = 1 << 12;
            let scans: Vec<SlackScan> = (0..size.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let mut scan = SlackScan::default();
                    for set in (c * CHUNK).max(1)..((c + 1) * CHUNK).min(size) {
                        let order = set.count_ones();
                        scan.visit(set as u32, scaled_slack(s0, order, weight[set]));
                    }
                    scan
                })
                .collect();
            scans.into_iter().fold(SlackScan::default(), SlackScan::merge)
        }
        SubgraphMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut scan = SlackScan::default();
            if k > 0 {
                let top = full_mask(k);
                for _ in 0..samples {
                    let set = loop {
                        let s = rng.random::<u32>() & top;
                        if s != 0 {
                            break s;
                        }
                    };
                    scan.visit(set, scaled_slack(s0, set.count_ones(), g.subset_weight(set)));
                }
            }
            scan
        }
    };
    let full_graph = subgraph_bound(g, s0, full_mask(k));
    Ok(WeightLemmaReport {
        s0,
        mode: match mode {
            SubgraphMode::AllSubgraphs => "ALL_SUBGRAPHS".into(),
            SubgraphMode::Sampled { samples, seed } => format!("SAMPLED({samples}, seed={seed})"),
        },
        subsets_checked: scan.checked,
        min_slack: scan.min.map(|(_, set)| subgraph_bound(g, s0, set)),
        passed: scan.violation_count == 0 && !full_graph.slack.is_negative(),
        full_graph,
        violation_count: scan.violation_count,
        violations: scan
            .violations
            .iter()
            .map(|&set| subgraph_bound(g, s0, set))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexConnection {
    pub vertex: usize,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjacencyReport {
    pub s0: u32,
    pub order: usize,
    pub vacuous: bool,
    /// Minimum-weight induced subgraph `H` of order `s0`.
    pub subgraph: Vec<usize>,
    pub subgraph_weight: u32,
    pub connections: Vec<VertexConnection>,
    /// Outside vertices joined to `H` by total weight below 3.
    pub violations: Vec<usize>,
    pub passed: bool,
}

/// Default cap on the number of `s0`-subsets examined by
/// [`verify_adjacency_lemma`].
pub const DEFAULT_ADJACENCY_BUDGET: u128 = 10_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn verify_adjacency_lemma(g: &ContradictionGraph, s0: u32) -> Result<AdjacencyReport> {
    verify_adjacency_lemma_with_budget(g, s0, DEFAULT_ADJACENCY_BUDGET)
}

/// Finds the lexicographically first minimum-weight `H` of order `s0` and
/// checks every outside vertex is joined to it by weight at least 3.
pub fn verify_adjacency_lemma_with_budget(
    g: &ContradictionGraph,
    s0: u32,
    budget: u128,
) -> Result<AdjacencyReport> {
    if s0 == 0 {
        return Err(Error::InvalidParameter("s0 must be at least 1".into()));
    }
    let k = g.order();
    let h = s0 as usize;
    if k <= h {
        return Ok(AdjacencyReport {
            s0,
            order: k,
            vacuous: true,
            subgraph: (0..k).collect(),
            subgraph_weight: g.total_weight(),
            connections: Vec::new(),
            violations: Vec::new(),
            passed: true,
        });
    }
    let count = binomial(k, h);
    if count > budget {
        return Err(Error::Capacity(format!(
            "C({k}, {h}) = {count} subsets exceeds the budget of {budget}"
        )));
    }
    let (set, weight) = (0..k)
        .combinations(h)
        .map(|combo| {
            let set = combo.iter().fold(0u32, |acc, &v| acc | (1 << v));
            (set, g.subset_weight(set))
        })
        .min_by_key(|&(_, w)| w)
        .expect("at least one subset");
    let connections: Vec<VertexConnection> = (0..k)
        .filter(|v| set & (1 << v) == 0)
        .map(|v| VertexConnection {
            vertex: v,
            weight: g.weight_to(v, set),
        })
        .collect();
    let violations: Vec<usize> = connections
        .iter()
        .filter(|c| c.weight < 3)
        .map(|c| c.vertex)
        .collect();
    Ok(AdjacencyReport {
        s0,
        order: k,
        vacuous: false,
        subgraph: (0..k).filter(|v| set & (1 << v) != 0).collect(),
        subgraph_weight: weight,
        connections,
        passed: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PigeonholeReport {
    pub zeros_per_certificate: Vec<u32>,
    pub max_zeros: u32,
    /// `max_zeros + 1`: every certificate also assigns at least one 1.
    pub implied_c1_lower_bound: u32,
    pub total_weight: u32,
    pub total_zeros: u32,
    /// Every 0 of every certificate meets exactly one certificate assigning 1.
    pub each_zero_in_one_contradiction: bool,
}

pub fn pigeonhole_bound(inst: &ZeroInputInstance) -> PigeonholeReport {
    let certs = &inst.certificates;
    let zeros: Vec<u32> = certs.iter().map(|c| c.zeros()).collect();
    let each_zero_in_one_contradiction = certs.iter().all(|c| {
        let zero_mask = c.assigned() & !c.values();
        crate::function::mask_positions(zero_mask).into_iter().all(|p| {
            certs.iter().filter(|d| d.value_at(p) == Some(true)).count() == 1
        })
    });
    let max_zeros = zeros.iter().copied().max().unwrap_or(0);
    PigeonholeReport {
        max_zeros,
        implied_c1_lower_bound: max_zeros + 1,
        total_weight: build_graph(inst).total_weight(),
        total_zeros: zeros.iter().sum(),
        zeros_per_certificate: zeros,
        each_zero_in_one_contradiction,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    pub profile: MeasureProfile,
    /// `(3/2) bs0 / s0 - 1/2`.
    pub bound: Rational,
    pub slack: Rational,
    pub holds: bool,
    /// `bs0 / (2 s0)`.
    pub kk_bound: Rational,
    pub kk_slack: Rational,
    pub kk_holds: bool,
    pub passed: bool,
}

impl MainTheoremReport {
    /// Evaluates both lower bounds on `C1` for an already measured profile;
    /// `None` for constant functions.
    pub fn from_profile(profile: &MeasureProfile) -> Option<MainTheoremReport> {
        let (s0, bs0, c1) = (profile.s0?, profile.bs0?, profile.c1?);
        if s0 == 0 {
            return None;
        }
        let (s0, bs0, c1) = (s0 as i64, bs0 as i64, c1 as i64);
        let bound = Rational::new(3 * bs0 - s0, 2 * s0);
        let kk_bound = Rational::new(bs0, 2 * s0);
        let slack = Rational::integer(c1) - bound;
        let kk_slack = Rational::integer(c1) - kk_bound;
        let holds = !slack.is_negative();
        let kk_holds = !kk_slack.is_negative();
        Some(MainTheoremReport {
            profile: *profile,
            bound,
            slack,
            holds,
            kk_bound,
            kk_slack,
            kk_holds,
            passed: holds && kk_holds,
        })
    }
}

/// Measures `f` and checks `C1 >= (3/2) bs0/s0 - 1/2` and `C1 >= bs0/(2 s0)`.
pub fn verify_main_theorem(f: &BooleanFunction) -> Result<MainTheoremReport> {
    let profile = measures::profile(f)?;
    MainTheoremReport::from_profile(&profile).ok_or(Error::ConstantFunction)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComponentKind {
    Singleton,
    Pair2,
    Path,
    Cycle,
    Other,
}

/// A connected component of the positive-weight edges. Paths are listed from
/// the lower-indexed endpoint; cycles from their smallest vertex towards its
/// smaller neighbour; other kinds ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub vertices: Vec<usize>,
}

fn walk(g: &ContradictionGraph, members: &[usize], start: usize) -> Vec<usize> {
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = members
            .iter()
            .copied()
            .filter(|&v| v != cur && v != prev && g.weight(cur, v) > 0 && !order.contains(&v))
            .min();
        match next {
            Some(v) => {
                order.push(v);
                prev = cur;
                cur = v;
            }
            None => return order,
        }
    }
}

fn classify(g: &ContradictionGraph, members: Vec<usize>) -> Component {
    if members.len() == 1 {
        return Component {
            kind: ComponentKind::Singleton,
            vertices: members,
        };
    }
    let edges: Vec<u32> = members
        .iter()
        .tuple_combinations()
        .map(|(&u, &v)| g.weight(u, v))
        .filter(|&w| w > 0)
        .collect();
    if members.len() == 2 {
        let kind = match edges[0] {
            1 => ComponentKind::Path,
            2 => ComponentKind::Pair2,
            _ => ComponentKind::Other,
        };
        return Component {
            kind,
            vertices: members,
        };
    }
    let degree = |v: usize| members.iter().filter(|&&u| u != v && g.weight(u, v) > 0).count();
    let unit = edges.iter().all(|&w| w == 1);
    let max_degree = members.iter().map(|&v| degree(v)).max().unwrap_or(0);
    if unit && max_degree <= 2 {
        if edges.len() == members.len() - 1 {
            let start = *members.iter().find(|&&v| degree(v) == 1).expect("path endpoint");
            return Component {
                kind: ComponentKind::Path,
                vertices: walk(g, &members, start),
            };
        }
        if edges.len() == members.len() {
            return Component {
                kind: ComponentKind::Cycle,
                vertices: walk(g, &members, members[0]),
            };
        }
    }
    Component {
        kind: ComponentKind::Other,
        vertices: members,
    }
}

/// Components of the graph formed by positive-weight edges, ordered by their
/// smallest vertex.
pub fn classify_components(g: &ContradictionGraph) -> Vec<Component> {
    let k = g.order();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            for u in 0..k {
                if !seen[u] && g.weight(v, u) > 0 {
                    seen[u] = true;
                    members.push(u);
                    frontier.push(u);
                }
            }
        }
        members.sort_unstable();
        out.push(classify(g, members));
    }
    out
}
