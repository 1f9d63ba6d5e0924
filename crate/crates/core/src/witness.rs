//! Explicit sensitive 0-inputs from certificate families.
//!
//! The engine keeps a partial assignment of the original positions. Every
//! live certificate is stored without the positions the assignment already
//! fixes and is kept minimal relative to it. Each reduction fixes the
//! positions of one or two certificates so that a chosen position becomes
//! sensitive on every 0-input consistent with the assignment; at the end the
//! assignment is completed and every recorded position is checked by
//! evaluation.

use std::fmt::Write as _;

use serde::Serialize;

use crate::certgraph::{classify_components, contradictions, overlaps, ComponentKind, ContradictionGraph};
use crate::error::{Error, Result};
use crate::function::{
    full_mask, mask_positions, position_bit, BooleanFunction, Block,
    Certificate, InputWord,
};
use crate::measures;

/// Largest free set accepted by [`largest_nonconstant_subfunction`].
pub const MAX_FREE_POSITIONS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepKind {
    OverlapFix,
    Singleton,
    PathHead,
    Pair,
    Cycle,
}

impl StepKind {
    fn label(self) -> &'static str {
        match self {
            StepKind::OverlapFix => "OVERLAP_FIX",
            StepKind::Singleton => "SINGLETON",
            StepKind::PathHead => "PATH_HEAD",
            StepKind::Pair => "PAIR",
            StepKind::Cycle => "CYCLE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessStep {
    pub kind: StepKind,
    /// Indices into the caller's certificate list.
    pub certificates: Vec<usize>,
    /// Positions fixed by this step.
    pub fixed: Certificate,
    /// Positions this step makes sensitive.
    pub sensitive: Vec<usize>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessResult {
    pub input: InputWord,
    /// Sorted; each position was checked to flip `f` at `input`.
    pub sensitive_bits: Vec<usize>,
    pub trace: Vec<WitnessStep>,
}

fn lex_less(a: u32, b: u32) -> bool {
    let d = a ^ b;
    d != 0 && a & (d & d.wrapping_neg()) == 0
}

/// Assignment of `free` (as value bits) that leaves `f` not identically 1 on
/// the subcube, agreeing with `target` on as many positions as possible.
fn largest_nonconstant(
    f: &BooleanFunction,
    fixed: u32,
    vals: u32,
    free: u32,
    target: u32,
) -> Result<Option<u32>> {
    if free.count_ones() as usize > MAX_FREE_POSITIONS {
        return Err(Error::Capacity(format!(
            "largest non-constant subfunction supports at most {MAX_FREE_POSITIONS} free positions, got {}",
            free.count_ones()
        )));
    }
    let mut best: Option<(u32, u32)> = None;
    let mut a = 0u32;
    loop {
        if !f.is_constant_on(fixed | free, vals | a, true) {
            let agree = (!(a ^ target) & free).count_ones();
            let better = match best {
                None => true,
                Some((ba, bv)) => agree > ba || (agree == ba && lex_less(a, bv)),
            };
            if better {
                best = Some((agree, a));
            }
        }
        if a == free {
            break;
        }
        a = (a.wrapping_sub(free)) & free;
    }
    Ok(best.map(|(_, a)| a))
}

/// Among assignments of `free` whose restriction of `f` is not identically 1,
/// one with the most positions set to `preferred`. Ties go to the
/// lexicographically smallest word over `free` (ascending positions, 0 < 1).
pub fn largest_nonconstant_subfunction(
    f: &BooleanFunction,
    free: &Block,
    preferred: bool,
) -> Result<Certificate> {
    let n = f.n();
    if free.mask() & !full_mask(n) != 0 {
        let position = mask_positions(free.mask() & !full_mask(n))[0];
        return Err(Error::PositionOutOfRange { position, n });
    }
    let target = if preferred { free.mask() } else { 0 };
    let a = largest_nonconstant(f, 0, 0, free.mask(), target)?
        .ok_or(Error::NoNonConstantSubfunction)?;
    Ok(Certificate::from_masks(n, free.mask(), a))
}

/// The outcome of fixing every overlap position to 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapReduction {
    /// `f` restricted by `fixed`.
    pub function: BooleanFunction,
    /// Original position of each position of `function`.
    pub positions: Vec<usize>,
    /// All positions fixed, in original coordinates.
    pub fixed: Certificate,
    /// Positions fixed to 0 because two certificates assign 0 there.
    pub overlap_positions: Vec<usize>,
    /// Indices of the certificates assigning 1 to an overlap position.
    pub d: Vec<usize>,
    pub t: usize,
    /// One sensitive position per member of `d`, in original coordinates.
    pub earned: Vec<usize>,
    /// Indices of the certificates outside `d`.
    pub survivors: Vec<usize>,
    /// Surviving certificates, re-minimized, in original coordinates.
    pub survivor_certificates: Vec<Certificate>,
    /// Surviving certificates in the coordinates of `function`.
    pub certificates: Vec<Certificate>,
    pub steps: Vec<WitnessStep>,
}

fn check_family(f: &BooleanFunction, certs: &[Certificate]) -> Result<()> {
    for c in certs {
        if c.n() != f.n() {
            return Err(Error::DimensionMismatch {
                expected: f.n(),
                found: c.n(),
            });
        }
    }
    Ok(())
}

fn check_contradiction_budget(certs: &[Certificate], labels: &[usize]) -> Result<()> {
    for (i, c) in certs.iter().enumerate() {
        let total: u32 = certs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, d)| contradictions(c, d))
            .sum();
        if total > 2 {
            let with = certs
                .iter()
                .enumerate()
                .find(|&(j, d)| j != i && contradictions(c, d) > 0)
                .map(|(j, _)| labels[j])
                .unwrap_or(labels[i]);
            return Err(Error::Hypothesis(format!(
                "certificate {} ({c}) has {total} contradictions in total (first with certificate {with})",
                labels[i]
            )));
        }
    }
    Ok(())
}

fn format_assignment(mask: u32, values: u32) -> String {
    mask_positions(mask)
        .into_iter()
        .map(|p| format!("x{p}={}", u8::from(values & position_bit(p) != 0)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn describe(kind: StepKind, labels: &[usize], mask: u32, values: u32, sensitive: &[usize]) -> String {
    let mut s = String::from(kind.label());
    let names: Vec<String> = labels.iter().map(|l| format!("c{l}")).collect();
    if !names.is_empty() {
        let _ = write!(s, " {}", names.join(","));
    }
    let _ = write!(s, ": fixed {}", format_assignment(mask, values));
    if !sensitive.is_empty() {
        let bits: Vec<String> = sensitive.iter().map(|p| format!("x{p}")).collect();
        let _ = write!(s, "; sensitive {}", bits.join(","));
    }
    s
}

fn compress(mask: u32, positions: &[usize]) -> u32 {
    positions
        .iter()
        .enumerate()
        .filter(|(_, &p)| mask & position_bit(p) != 0)
        .fold(0, |acc, (j, _)| acc | (1 << j))
}

/// Fixes every overlap position to 0 and earns one sensitive position for
/// each certificate that assigned 1 there.
///
/// Requires each certificate to be a 1-certificate of `f` with at most two
/// contradictions in total, and each position to be assigned 1 by exactly one
/// certificate. Without overlaps the input is returned unchanged.
pub fn reduce_overlaps(f: &BooleanFunction, certs: &[Certificate]) -> Result<OverlapReduction> {
    check_family(f, certs)?;
    let n = f.n();
    for (i, c) in certs.iter().enumerate() {
        if !f.is_constant_on(c.assigned(), c.values(), true) {
            return Err(Error::Hypothesis(format!("certificate {i} ({c}) is not a 1-certificate")));
        }
    }
    for p in 1..=n {
        let owners: Vec<usize> = (0..certs.len())
            .filter(|&i| certs[i].value_at(p) == Some(true))
            .collect();
        if owners.len() != 1 {
            return Err(Error::Hypothesis(format!(
                "position {p} is assigned 1 by {} certificates {owners:?}",
                owners.len()
            )));
        }
    }
    check_contradiction_budget(certs, &(0..certs.len()).collect::<Vec<_>>())?;

    let mut overlap_mask = 0u32;
    for (i, c) in certs.iter().enumerate() {
        for d in &certs[i + 1..] {
            if overlaps(c, d) > 0 {
                overlap_mask |= c.assigned() & d.assigned() & !(c.values() ^ d.values());
            }
        }
    }
    if overlap_mask == 0 {
        return Ok(OverlapReduction {
            function: f.clone(),
            positions: (1..=n).collect(),
            fixed: Certificate::empty(n),
            overlap_positions: Vec::new(),
            d: Vec::new(),
            t: 0,
            earned: Vec::new(),
            survivors: (0..certs.len()).collect(),
            survivor_certificates: certs.to_vec(),
            certificates: certs.to_vec(),
            steps: Vec::new(),
        });
    }

    let mut fixed = overlap_mask;
    let mut vals = 0u32;
    if f.is_constant_on(fixed, vals, true) {
        return Err(Error::Hypothesis(
            "fixing the overlap positions to 0 leaves a constant-1 function".into(),
        ));
    }
    let d: Vec<usize> = (0..certs.len())
        .filter(|&i| certs[i].values() & overlap_mask != 0)
        .collect();
    let mut earned = Vec::new();
    let mut steps = Vec::new();
    for &idx in &d {
        let c = &certs[idx];
        let hit = c.values() & overlap_mask;
        if hit.count_ones() != 1 || c.zeros() != 0 {
            return Err(Error::Hypothesis(format!(
                "certificate {idx} ({c}) must assign only 1s and meet exactly one overlap"
            )));
        }
        let i = hit.trailing_zeros() as usize + 1;
        let free = c.assigned() & !hit;
        let (bit, a) = if free == 0 {
            (i, 0)
        } else {
            let a = largest_nonconstant(f, fixed, vals, free, free)?
                .ok_or_else(|| Error::Internal(format!("no non-constant subfunction for certificate {idx}")))?;
            fixed |= free;
            vals |= a;
            let zeros = free & !a;
            if zeros == 0 {
                (i, a)
            } else {
                (zeros.trailing_zeros() as usize + 1, a)
            }
        };
        earned.push(bit);
        let mask = hit | free;
        steps.push(WitnessStep {
            kind: StepKind::OverlapFix,
            certificates: vec![idx],
            fixed: Certificate::from_masks(n, mask, a),
            sensitive: vec![bit],
            description: describe(StepKind::OverlapFix, &[idx], mask, a, &[bit]),
        });
    }

    let survivors: Vec<usize> = (0..certs.len()).filter(|i| !d.contains(i)).collect();
    let mut survivor_certificates = Vec::with_capacity(survivors.len());
    for &idx in &survivors {
        survivor_certificates.push(relative_refresh(f, fixed, vals, &certs[idx], idx)?);
    }
    let fixed_cert = Certificate::from_masks(n, fixed, vals);
    let restriction = f.restrict(&fixed_cert)?;
    let m = restriction.positions.len();
    let certificates = survivor_certificates
        .iter()
        .map(|c| {
            Certificate::from_masks(
                m,
                compress(c.assigned(), &restriction.positions),
                compress(c.values(), &restriction.positions),
            )
        })
        .collect();
    Ok(OverlapReduction {
        function: restriction.function,
        positions: restriction.positions,
        fixed: fixed_cert,
        overlap_positions: mask_positions(overlap_mask),
        t: d.len(),
        d,
        earned,
        survivors,
        survivor_certificates,
        certificates,
        steps,
    })
}

/// Drops the fixed positions of `c` and minimizes it relative to the
/// assignment, removing the highest index first.
fn relative_refresh(
    f: &BooleanFunction,
    fixed: u32,
    vals: u32,
    c: &Certificate,
    label: usize,
) -> Result<Certificate> {
    let common = c.assigned() & fixed;
    if (c.values() ^ vals) & common != 0 {
        return Err(Error::Internal(format!(
            "certificate {label} ({c}) is contradicted by the fixed assignment"
        )));
    }
    let mut assigned = c.assigned() & !fixed;
    let values = c.values() & assigned;
    if assigned == 0 || !f.is_constant_on(fixed | assigned, vals | values, true) {
        return Err(Error::Internal(format!(
            "certificate {label} ({c}) is no longer a 1-certificate"
        )));
    }
    loop {
        let mut changed = false;
        for p in mask_positions(assigned).into_iter().rev() {
            let candidate = assigned & !position_bit(p);
            if f.is_constant_on(fixed | candidate, vals | (values & candidate), true) {
                assigned = candidate;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Certificate::from_masks(c.n(), assigned, values & assigned))
}

fn contradiction_position(c: &Certificate, d: &Certificate) -> Option<usize> {
    let m = c.assigned() & d.assigned() & (c.values() ^ d.values());
    (m != 0).then(|| m.trailing_zeros() as usize + 1)
}

struct Engine<'a> {
    f: &'a BooleanFunction,
    n: usize,
    fixed: u32,
    vals: u32,
    live: Vec<Option<Certificate>>,
    labels: Vec<usize>,
    sensitive: Vec<usize>,
    trace: Vec<WitnessStep>,
}

impl<'a> Engine<'a> {
    fn fix(&mut self, mask: u32, values: u32) {
        debug_assert_eq!(mask & self.fixed, 0);
        self.fixed |= mask;
        self.vals |= values & mask;
    }

    fn record(&mut self, kind: StepKind, slots: &[usize], mask: u32, values: u32, sensitive: Vec<usize>) {
        let labels: Vec<usize> = slots.iter().map(|&s| self.labels[s]).collect();
        self.sensitive.extend(&sensitive);
        self.trace.push(WitnessStep {
            kind,
            description: describe(kind, &labels, mask, values, &sensitive),
            certificates: labels,
            fixed: Certificate::from_masks(self.n, mask, values & mask),
            sensitive,
        });
    }

    fn cert(&self, slot: usize) -> Certificate {
        self.live[slot].expect("live certificate")
    }

    fn refresh(&mut self, slot: usize) -> Result<()> {
        if let Some(c) = self.live[slot] {
            self.live[slot] = Some(relative_refresh(self.f, self.fixed, self.vals, &c, self.labels[slot])?);
        }
        Ok(())
    }

    fn refresh_all(&mut self) -> Result<()> {
        for slot in 0..self.live.len() {
            self.refresh(slot)?;
        }
        Ok(())
    }

    fn largest(&self, free: u32, target: u32) -> Result<u32> {
        largest_nonconstant(self.f, self.fixed, self.vals, free, target)?
            .ok_or_else(|| Error::Internal("restricted function became constant 1".into()))
    }

    fn run(&mut self) -> Result<()> {
        loop {
            let live: Vec<usize> = (0..self.live.len()).filter(|&s| self.live[s].is_some()).collect();
            if live.is_empty() {
                return Ok(());
            }
            let certs: Vec<Certificate> = live.iter().map(|&s| self.cert(s)).collect();
            let graph = ContradictionGraph::from_certificates(&certs);
            let component = classify_components(&graph).swap_remove(0);
            let slots: Vec<usize> = component.vertices.iter().map(|&v| live[v]).collect();
            match component.kind {
                ComponentKind::Singleton => self.singleton(slots[0]),
                ComponentKind::Path => self.path_head(slots[0], slots[1]),
                ComponentKind::Pair2 => self.pair(slots[0], slots[1])?,
                ComponentKind::Cycle => self.cycle(&slots)?,
                ComponentKind::Other => {
                    let labels: Vec<usize> = slots.iter().map(|&s| self.labels[s]).collect();
                    return Err(Error::Hypothesis(format!(
                        "certificates {labels:?} form a component that is not a singleton, path, pair or cycle"
                    )));
                }
            }
            self.refresh_all()?;
        }
    }

    fn singleton(&mut self, slot: usize) {
        let c = self.cert(slot);
        let last = 31 - c.assigned().leading_zeros() as usize + 1;
        let values = c.values() ^ position_bit(last);
        self.fix(c.assigned(), values);
        self.live[slot] = None;
        self.record(StepKind::Singleton, &[slot], c.assigned(), values, vec![last]);
    }

    fn path_head(&mut self, head: usize, next: usize) {
        let (c, d) = (self.cert(head), self.cert(next));
        let i = contradiction_position(&c, &d).expect("path neighbours contradict");
        let values = c.values() ^ position_bit(i);
        self.fix(c.assigned(), values);
        self.live[head] = None;
        self.record(StepKind::PathHead, &[head, next], c.assigned(), values, vec![i]);
    }

    fn pair(&mut self, first: usize, second: usize) -> Result<()> {
        let (c, d) = (self.cert(first), self.cert(second));
        let both = c.assigned() & d.assigned() & (c.values() ^ d.values());
        let [i, j] = mask_positions(both)[..] else {
            return Err(Error::Internal("pair does not contradict twice".into()));
        };
        let s_values = c.values() ^ position_bit(j);
        self.fix(c.assigned(), s_values);
        let rest = d.assigned() & !self.fixed;
        let (mut mask, mut values) = (c.assigned(), s_values);
        let second_bit = if rest == 0 {
            i
        } else {
            let a = self.largest(rest, d.values())?;
            self.fix(rest, a);
            mask |= rest;
            values |= a;
            let disagree = rest & (a ^ d.values());
            if disagree == 0 {
                i
            } else {
                disagree.trailing_zeros() as usize + 1
            }
        };
        self.live[first] = None;
        self.live[second] = None;
        self.record(StepKind::Pair, &[first, second], mask, values, vec![j, second_bit]);
        Ok(())
    }

    fn cycle(&mut self, slots: &[usize]) -> Result<()> {
        let m = slots.len();
        let c1 = self.cert(slots[0]);
        let j12 = contradiction_position(&c1, &self.cert(slots[1]))
            .ok_or_else(|| Error::Internal("cycle start does not contradict its neighbour".into()))?;
        let (mut mask, mut values) = (0u32, 0u32);
        let mut sensitive = Vec::with_capacity(m);
        for idx in 1..m {
            let ci = self.cert(slots[idx]);
            let next = if idx + 1 == m { c1 } else { self.cert(slots[idx + 1]) };
            let (bit, step_values) = match contradiction_position(&ci, &next) {
                Some(p) => (p, (ci.values() & !position_bit(p)) | (next.values() & position_bit(p))),
                None => {
                    let p = ci.assigned().trailing_zeros() as usize + 1;
                    (p, ci.values() ^ position_bit(p))
                }
            };
            self.fix(ci.assigned(), step_values);
            mask |= ci.assigned();
            values |= step_values & ci.assigned();
            sensitive.push(bit);
            self.live[slots[idx]] = None;
            for &later in &slots[idx + 1..] {
                self.refresh(later)?;
            }
        }
        let rest = c1.assigned() & !self.fixed;
        let closing = if rest == 0 {
            j12
        } else {
            let a = self.largest(rest, c1.values())?;
            self.fix(rest, a);
            mask |= rest;
            values |= a;
            let disagree = rest & (a ^ c1.values());
            if disagree == 0 {
                j12
            } else {
                disagree.trailing_zeros() as usize + 1
            }
        };
        sensitive.insert(0, closing);
        self.live[slots[0]] = None;
        self.record(StepKind::Cycle, slots, mask, values, sensitive);
        Ok(())
    }

    fn finish(self) -> Result<WitnessResult> {
        let f = self.f;
        let free = full_mask(self.n) & !self.fixed;
        let mut a = 0u32;
        let input = loop {
            let x = self.vals | a;
            if !f.get(x) {
                break x;
            }
            if a == free {
                return Err(Error::Internal(
                    "no 0-input is consistent with the fixed assignment".into(),
                ));
            }
            a = a.wrapping_sub(free) & free;
        };
        let mut bits = self.sensitive.clone();
        bits.sort_unstable();
        bits.dedup();
        if bits.len() != self.sensitive.len() {
            return Err(Error::Internal("a sensitive position was recorded twice".into()));
        }
        for &p in &bits {
            if !f.get(input ^ position_bit(p)) {
                return Err(Error::Internal(format!(
                    "recorded position {p} is not sensitive at the witness input"
                )));
            }
        }
        Ok(WitnessResult {
            input: InputWord::new(self.n, input)?,
            sensitive_bits: bits,
            trace: self.trace,
        })
    }
}

fn check_lemma4_family(f: &BooleanFunction, fixed: u32, vals: u32, certs: &[Certificate], labels: &[usize]) -> Result<()> {
    for (c, &label) in certs.iter().zip(labels) {
        let minimal = f.is_constant_on(fixed | c.assigned(), vals | c.values(), true)
            && c.assigned() & fixed == 0
            && c.positions().into_iter().all(|p| {
                let a = c.assigned() & !position_bit(p);
                !f.is_constant_on(fixed | a, vals | (c.values() & a), true)
            });
        if !minimal {
            return Err(Error::Hypothesis(format!(
                "certificate {label} ({c}) is not a minimal 1-certificate"
            )));
        }
    }
    for (a, c) in certs.iter().enumerate() {
        for (b, d) in certs.iter().enumerate().skip(a + 1) {
            if overlaps(c, d) > 0 {
                return Err(Error::Hypothesis(format!(
                    "certificates {} ({c}) and {} ({d}) overlap",
                    labels[a], labels[b]
                )));
            }
        }
    }
    check_contradiction_budget(certs, labels)
}

/// Builds a 0-input with at least one sensitive position per certificate.
///
/// Requires `f` not constant 1 and `certs` to be pairwise non-overlapping
/// minimal 1-certificates with at most two contradictions each.
pub fn witness_sensitive_input(f: &BooleanFunction, certs: &[Certificate]) -> Result<WitnessResult> {
    check_family(f, certs)?;
    if f.constant_value() == Some(true) {
        return Err(Error::Hypothesis("the function is constant 1".into()));
    }
    let labels: Vec<usize> = (0..certs.len()).collect();
    check_lemma4_family(f, 0, 0, certs, &labels)?;
    let mut engine = Engine {
        f,
        n: f.n(),
        fixed: 0,
        vals: 0,
        live: certs.iter().copied().map(Some).collect(),
        labels,
        sensitive: Vec::new(),
        trace: Vec::new(),
    };
    engine.run()?;
    engine.finish()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma3Report {
    pub k: usize,
    pub t: usize,
    pub witness: WitnessResult,
    pub sensitive_count: usize,
    /// Exact `s0(f)`, measured when `n` allows.
    pub measured_s0: Option<u32>,
    pub passed: bool,
}

/// Runs the overlap reduction followed by the component reductions and checks
/// that the witness has at least `k` sensitive positions.
pub fn verify_lemma3(f: &BooleanFunction, certs: &[Certificate]) -> Result<Lemma3Report> {
    let reduction = reduce_overlaps(f, certs)?;
    if f.is_constant_on(reduction.fixed.assigned(), reduction.fixed.values(), true) {
        return Err(Error::Hypothesis("the function is constant 1".into()));
    }
    check_lemma4_family(
        f,
        reduction.fixed.assigned(),
        reduction.fixed.values(),
        &reduction.survivor_certificates,
        &reduction.survivors,
    )?;
    let mut engine = Engine {
        f,
        n: f.n(),
        fixed: reduction.fixed.assigned(),
        vals: reduction.fixed.values(),
        live: reduction.survivor_certificates.iter().copied().map(Some).collect(),
        labels: reduction.survivors.clone(),
        sensitive: reduction.earned.clone(),
        trace: reduction.steps.clone(),
    };
    engine.run()?;
    let witness = engine.finish()?;
    let measured_s0 = if f.n() <= measures::MAX_PROFILE_VARS {
        measures::profile(f)?.s0
    } else {
        None
    };
    let sensitive_count = witness.sensitive_bits.len();
    let k = certs.len();
    Ok(Lemma3Report {
        k,
        t: reduction.t,
        sensitive_count,
        passed: sensitive_count >= k && measured_s0.is_none_or(|s| s as usize >= k),
        measured_s0,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{g0, named, or_of_certificates, NamedFunction};
    use crate::function::is_minimal_certificate;

    fn certs(rows: &[&str]) -> Vec<Certificate> {
        rows.iter().map(|r| r.parse().unwrap()).collect()
    }

    const PATH: [&str; 3] = ["110****", "**110**", "****111"];
    const CYCLE: [&str; 5] = ["110*****", "**10****", "***111**", "*****00*", "0*****11"];
    const OVERLAP: [&str; 5] = ["110*******", "**1*******", "**0110****", "*****111**", "0****0**11"];

    fn check(f: &BooleanFunction, r: &WitnessResult) {
        let x = r.input.index();
        assert!(!f.get(x));
        for &p in &r.sensitive_bits {
            assert!(f.get(x ^ position_bit(p)), "position {p}");
        }
    }

    #[test]
    fn largest_nonconstant_examples() {
        let or2 = named(NamedFunction::Or, 2).unwrap();
        let free = Block::from_positions(&[1, 2]).unwrap();
        assert_eq!(largest_nonconstant_subfunction(&or2, &free, true).unwrap().to_string(), "00");
        let and2 = named(NamedFunction::And, 2).unwrap();
        let one = Block::from_positions(&[1]).unwrap();
        assert_eq!(largest_nonconstant_subfunction(&and2, &one, true).unwrap().to_string(), "1*");
        let g = g0(2).unwrap().function;
        assert_eq!(largest_nonconstant_subfunction(&g, &free, true).unwrap().to_string(), "11**");
        let always = named(NamedFunction::One, 2).unwrap();
        assert_eq!(
            largest_nonconstant_subfunction(&always, &free, true),
            Err(Error::NoNonConstantSubfunction)
        );
    }

    #[test]
    fn largest_nonconstant_tie_break() {
        // f = x1 AND x2 over free {1,2} preferring 0: only 11 is excluded; 00 wins
        let and2 = named(NamedFunction::And, 2).unwrap();
        let free = Block::from_positions(&[1, 2]).unwrap();
        assert_eq!(largest_nonconstant_subfunction(&and2, &free, false).unwrap().to_string(), "00");
        // preferring 1: 10 and 01 tie; 01 is lexicographically smaller
        assert_eq!(largest_nonconstant_subfunction(&and2, &free, true).unwrap().to_string(), "01");
    }

    #[test]
    fn singleton_example() {
        let f = BooleanFunction::from_fn(3, |i| i & 3 == 3).unwrap();
        let r = witness_sensitive_input(&f, &certs(&["11*"])).unwrap();
        assert_eq!(r.input.to_string(), "100");
        assert_eq!(r.sensitive_bits, vec![2]);
        assert_eq!(r.trace[0].kind, StepKind::Singleton);
        check(&f, &r);
    }

    #[test]
    fn path_matrix() {
        let cs = certs(&PATH);
        let f = or_of_certificates(7, &cs).unwrap();
        let r = witness_sensitive_input(&f, &cs).unwrap();
        assert!(r.sensitive_bits.len() >= 3);
        assert_eq!(r.trace[0].kind, StepKind::PathHead);
        assert_eq!(r.trace[0].sensitive, vec![3]);
        check(&f, &r);
        assert_eq!(r, witness_sensitive_input(&f, &cs).unwrap());
    }

    #[test]
    fn cycle_matrix() {
        let cs = certs(&CYCLE);
        let f = or_of_certificates(8, &cs).unwrap();
        let r = witness_sensitive_input(&f, &cs).unwrap();
        assert!(r.sensitive_bits.len() >= 5, "{r:?}");
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.trace[0].kind, StepKind::Cycle);
        check(&f, &r);
        assert!(measures::profile(&f).unwrap().s0.unwrap() >= 5);
    }

    #[test]
    fn pair_matrix() {
        let cs = certs(&["1110*", "**011"]);
        let f = or_of_certificates(5, &cs).unwrap();
        let r = witness_sensitive_input(&f, &cs).unwrap();
        assert_eq!(r.trace[0].kind, StepKind::Pair);
        // x5 := 1 agrees with d, so flipping x3 satisfies d
        assert_eq!(r.trace[0].sensitive, vec![4, 3]);
        check(&f, &r);
        // |T| = 2 takes the first contradiction position
        let cs = certs(&["1110", "**01"]);
        let f = or_of_certificates(4, &cs).unwrap();
        let r = witness_sensitive_input(&f, &cs).unwrap();
        assert_eq!(r.trace[0].sensitive, vec![4, 3]);
        check(&f, &r);
    }

    #[test]
    fn hypothesis_errors() {
        let or2 = named(NamedFunction::Or, 2).unwrap();
        let one = named(NamedFunction::One, 2).unwrap();
        assert!(matches!(witness_sensitive_input(&one, &[]), Err(Error::Hypothesis(_))));
        assert!(matches!(
            witness_sensitive_input(&or2, &certs(&["11"])),
            Err(Error::Hypothesis(_))
        ));
        let g = g0(3).unwrap();
        assert!(matches!(
            witness_sensitive_input(&g.function, &g.certificates),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn overlap_matrix_reduction() {
        let cs = certs(&OVERLAP);
        let f = or_of_certificates(10, &cs).unwrap();
        let r = reduce_overlaps(&f, &cs).unwrap();
        assert_eq!(r.overlap_positions, vec![3, 6]);
        assert_eq!(r.d, vec![1, 3]);
        assert_eq!(r.t, 2);
        assert_eq!(r.survivors, vec![0, 2, 4]);
        for c in &r.certificates {
            assert!(is_minimal_certificate(&r.function, c).unwrap());
            assert!(crate::function::is_one_certificate(&r.function, c).unwrap());
        }
        for (a, c) in r.certificates.iter().enumerate() {
            for d in &r.certificates[a + 1..] {
                assert_eq!(overlaps(c, d), 0);
            }
        }
        let report = verify_lemma3(&f, &cs).unwrap();
        assert!(report.passed);
        assert!(report.sensitive_count >= 5);
        check(&f, &report.witness);
    }

    #[test]
    fn overlap_free_is_identity() {
        let cs = certs(&["110", "**1"]);
        let f = or_of_certificates(3, &cs).unwrap();
        let r = reduce_overlaps(&f, &cs).unwrap();
        assert_eq!(r.t, 0);
        assert_eq!(r.certificates, cs);
        assert_eq!(r.function, f);
    }

    #[test]
    fn lemma3_examples() {
        for rows in [&PATH[..], &CYCLE[..]] {
            let cs = certs(rows);
            let f = or_of_certificates(cs[0].n(), &cs).unwrap();
            let r = verify_lemma3(&f, &cs).unwrap();
            assert!(r.passed);
            assert!(r.measured_s0.unwrap() as usize >= cs.len());
        }
        let or2 = named(NamedFunction::Or, 2).unwrap();
        let r = verify_lemma3(&or2, &certs(&["1*", "*1"])).unwrap();
        assert_eq!((r.sensitive_count, r.measured_s0), (2, Some(2)));
    }
}
