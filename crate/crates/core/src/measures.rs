//! Exact sensitivity, block sensitivity and certificate complexity.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{BooleanFunction, Block, Certificate, InputWord};
use crate::packing;

/// Largest `n` accepted by the per-input exact operations.
pub const MAX_PER_INPUT_VARS: usize = 16;
/// Largest `n` accepted by [`profile`].
pub const MAX_PROFILE_VARS: usize = 12;

fn check_input(f: &BooleanFunction, x: InputWord) -> Result<()> {
    if x.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: x.n(),
        });
    }
    if f.n() > MAX_PER_INPUT_VARS {
        return Err(Error::Capacity(format!(
            "exact per-input measures support n <= {MAX_PER_INPUT_VARS}, got {}",
            f.n()
        )));
    }
    Ok(())
}

pub(crate) fn sensitivity_index(f: &BooleanFunction, index: u32) -> u32 {
    let value = f.get(index);
    (0..f.n())
        .filter(|&i| f.get(index ^ (1 << i)) != value)
        .count() as u32
}

/// `s(f, x)`: number of single positions whose flip changes `f(x)`.
pub fn sensitivity_at(f: &BooleanFunction, x: InputWord) -> Result<u32> {
    if x.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: x.n(),
        });
    }
    Ok(sensitivity_index(f, x.index()))
}

const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// For every mask `B` with bit `i`, the entry of `B ^ (1 << i)`; zero elsewhere.
fn lift_along(bits: &[u64], i: usize, out: &mut [u64]) {
    if i < 6 {
        for (o, &w) in out.iter_mut().zip(bits) {
            *o = (w & LOW_HALF[i]) << (1u32 << i);
        }
    } else {
        let stride = 1usize << (i - 6);
        for (j, o) in out.iter_mut().enumerate() {
            *o = if j & stride != 0 { bits[j ^ stride] } else { 0 };
        }
    }
}

/// Masks of the inclusion-minimal sensitive blocks at `index`, unordered.
///
/// Works on the table `g(B) = f(x ^ B) != f(x)`: a subset-OR transform marks
/// every mask that contains a sensitive block, and `B` is minimal when it is
/// sensitive while none of `B \ {i}` contains one.
pub(crate) fn minimal_block_masks(f: &BooleanFunction, index: u32) -> Vec<u32> {
    let n = f.n();
    let mut sensitive = f.shifted(index);
    if f.get(index) {
        sensitive = sensitive.negated();
    }
    let sens: Vec<u64> = sensitive.words().to_vec();

    let mut down = sens.clone();
    let mut lifted = vec![0u64; sens.len()];
    for i in 0..n {
        lift_along(&down, i, &mut lifted);
        for (d, &l) in down.iter_mut().zip(&lifted) {
            *d |= l;
        }
    }
    let mut blocked = vec![0u64; sens.len()];
    for i in 0..n {
        lift_along(&down, i, &mut lifted);
        for (b, &l) in blocked.iter_mut().zip(&lifted) {
            *b |= l;
        }
    }

    let mut out = Vec::new();
    for (j, (&s, &b)) in sens.iter().zip(&blocked).enumerate() {
        let mut m = s & !b;
        while m != 0 {
            let bit = m.trailing_zeros();
            out.push(((j as u32) << 6) | bit);
            m &= m - 1;
        }
    }
    out
}

/// All inclusion-minimal nonempty sensitive blocks at `x`, by ascending size
/// then ascending mask.
pub fn minimal_sensitive_blocks(f: &BooleanFunction, x: InputWord) -> Result<Vec<Block>> {
    check_input(f, x)?;
    let mut masks = minimal_block_masks(f, x.index());
    masks.sort_by_key(|m| (m.count_ones(), *m));
    Ok(masks.into_iter().map(Block::from_mask).collect())
}

pub(crate) fn block_sensitivity_index(f: &BooleanFunction, index: u32) -> u32 {
    packing::max_disjoint(&minimal_block_masks(f, index)) as u32
}

/// `bs(f, x)`: the largest number of pairwise disjoint sensitive blocks.
pub fn block_sensitivity_at(f: &BooleanFunction, x: InputWord) -> Result<u32> {
    check_input(f, x)?;
    Ok(block_sensitivity_index(f, x.index()))
}

/// Masks with `k` bits among the low `n`, ascending.
pub(crate) fn masks_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let first: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut next = (k <= n).then_some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (succ < limit).then_some(succ)
        };
        Some(cur as u32)
    })
}

pub(crate) fn certificate_scan(f: &BooleanFunction, index: u32) -> Certificate {
    let n = f.n();
    for size in 0..=n {
        for mask in masks_of_size(n, size) {
            if f.subcube_value(mask, index).is_some() {
                return Certificate::from_masks(n, mask, index);
            }
        }
    }
    unreachable!("the full assignment is always a certificate")
}

/// A minimum-length certificate satisfied by `x`; among equal lengths the
/// numerically smallest assigned-position mask wins.
pub fn certificate_at(f: &BooleanFunction, x: InputWord) -> Result<Certificate> {
    check_input(f, x)?;
    Ok(certificate_scan(f, x.index()))
}

/// Constancy of every subcube, indexed in base 3 (digit 0 or 1 = fixed value,
/// 2 = free). Entries: 0 / 1 constant value, 2 mixed.
struct SubcubeTable {
    pow3: Vec<u32>,
    status: Vec<u8>,
}

impl SubcubeTable {
    fn build(f: &BooleanFunction) -> Self {
        let n = f.n();
        let mut pow3 = Vec::with_capacity(n + 1);
        let mut p = 1u32;
        for _ in 0..=n {
            pow3.push(p);
            p *= 3;
        }
        let size = pow3[n] as usize;
        let mut status = vec![0u8; size];
        let mut digits = vec![0u8; n];
        for idx in 0..size {
            let value = match digits.iter().position(|&d| d == 2) {
                None => {
                    let point = digits
                        .iter()
                        .enumerate()
                        .fold(0u32, |acc, (i, &d)| acc | ((d as u32) << i));
                    f.get(point) as u8
                }
                Some(i) => {
                    let zero = status[idx - 2 * pow3[i] as usize];
                    let one = status[idx - pow3[i] as usize];
                    if zero == one && zero != 2 {
                        zero
                    } else {
                        2
                    }
                }
            };
            status[idx] = value;
            for d in digits.iter_mut() {
                if *d == 2 {
                    *d = 0;
                } else {
                    *d += 1;
                    break;
                }
            }
        }
        SubcubeTable { pow3, status }
    }

    fn is_constant(&self, assigned: u32, point: u32) -> bool {
        let idx: u32 = (0..self.pow3.len() - 1)
            .map(|i| {
                let digit = if (assigned >> i) & 1 == 1 {
                    (point >> i) & 1
                } else {
                    2
                };
                digit * self.pow3[i]
            })
            .sum();
        self.status[idx as usize] != 2
    }

    fn certificate(&self, n: usize, index: u32) -> Certificate {
        for size in 0..=n {
            for mask in masks_of_size(n, size) {
                if self.is_constant(mask, index) {
                    return Certificate::from_masks(n, mask, index);
                }
            }
        }
        unreachable!("the full assignment is always a certificate")
    }
}

/// Per-input measures, one row of [`input_measures`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputMeasures {
    pub input: InputWord,
    pub value: bool,
    pub sensitivity: u32,
    pub block_sensitivity: u32,
    pub certificate: Certificate,
}

/// The six per-value measures. `None` marks a value the function never takes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct MeasureProfile {
    pub s0: Option<u32>,
    pub s1: Option<u32>,
    pub bs0: Option<u32>,
    pub bs1: Option<u32>,
    #[serde(rename = "C0")]
    pub c0: Option<u32>,
    #[serde(rename = "C1")]
    pub c1: Option<u32>,
}

impl MeasureProfile {
    pub fn s(&self) -> u32 {
        self.s0.max(self.s1).unwrap_or(0)
    }

    pub fn bs(&self) -> u32 {
        self.bs0.max(self.bs1).unwrap_or(0)
    }

    pub fn c(&self) -> u32 {
        self.c0.max(self.c1).unwrap_or(0)
    }

    /// Profile of the output-negated function.
    pub fn negated(&self) -> MeasureProfile {
        MeasureProfile {
            s0: self.s1,
            s1: self.s0,
            bs0: self.bs1,
            bs1: self.bs0,
            c0: self.c1,
            c1: self.c0,
        }
    }

    /// Whether both output values occur.
    pub fn is_balanced_support(&self) -> bool {
        self.s0.is_some() && self.s1.is_some()
    }

    fn absorb(&mut self, value: bool, s: u32, bs: u32, c: u32) {
        let bump = |slot: &mut Option<u32>, v: u32| *slot = Some(slot.map_or(v, |old| old.max(v)));
        if value {
            bump(&mut self.s1, s);
            bump(&mut self.bs1, bs);
            bump(&mut self.c1, c);
        } else {
            bump(&mut self.s0, s);
            bump(&mut self.bs0, bs);
            bump(&mut self.c0, c);
        }
    }

    fn merge(mut self, other: MeasureProfile) -> MeasureProfile {
        let pick = |a: Option<u32>, b: Option<u32>| match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        };
        self.s0 = pick(self.s0, other.s0);
        self.s1 = pick(self.s1, other.s1);
        self.bs0 = pick(self.bs0, other.bs0);
        self.bs1 = pick(self.bs1, other.bs1);
        self.c0 = pick(self.c0, other.c0);
        self.c1 = pick(self.c1, other.c1);
        self
    }
}

fn check_profile(f: &BooleanFunction) -> Result<()> {
    if f.n() > MAX_PROFILE_VARS {
        return Err(Error::Capacity(format!(
            "full profiles support n <= {MAX_PROFILE_VARS}, got {}",
            f.n()
        )));
    }
    Ok(())
}

/// Measures at every input, in index order.
pub fn input_measures(f: &BooleanFunction) -> Result<Vec<InputMeasures>> {
    check_profile(f)?;
    let table = SubcubeTable::build(f);
    let n = f.n();
    let row = |index: u32| InputMeasures {
        input: InputWord::new(n, index).expect("index below 2^n"),
        value: f.get(index),
        sensitivity: sensitivity_index(f, index),
        block_sensitivity: block_sensitivity_index(f, index),
        certificate: table.certificate(n, index),
    };
    Ok(if n >= 8 {
        (0..f.num_inputs()).into_par_iter().map(row).collect()
    } else {
        (0..f.num_inputs()).map(row).collect()
    })
}

/// The z-maxima of sensitivity, block sensitivity and certificate complexity.
pub fn profile(f: &BooleanFunction) -> Result<MeasureProfile> {
    check_profile(f)?;
    let table = SubcubeTable::build(f);
    let n = f.n();
    let one = |index: u32| {
        let mut p = MeasureProfile::default();
        p.absorb(
            f.get(index),
            sensitivity_index(f, index),
            block_sensitivity_index(f, index),
            table.certificate(n, index).len() as u32,
        );
        p
    };
    Ok(if n >= 8 {
        (0..f.num_inputs())
            .into_par_iter()
            .map(one)
            .reduce(MeasureProfile::default, MeasureProfile::merge)
    } else {
        (0..f.num_inputs())
            .map(one)
            .fold(MeasureProfile::default(), MeasureProfile::merge)
    })
}
