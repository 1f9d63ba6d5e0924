//! Dense truth tables, input words, blocks and partial assignments.
//!
//! Input positions are numbered `1..=n`. Position `j` lives in bit `j - 1` of
//! an input index, so the table entry at index `i` is `f(x)` where
//! `x_j = (i >> (j - 1)) & 1`. Text forms of words and certificates put
//! position 1 leftmost.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported number of input positions for dense tables.
pub const MAX_VARS: usize = 24;

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

/// 1-based positions of the set bits of `mask`, ascending.
pub(crate) fn mask_positions(mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

#[inline]
pub(crate) fn position_bit(position: usize) -> u32 {
    1u32 << (position - 1)
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::TooManyVariables { n, max: MAX_VARS });
    }
    Ok(())
}

/// Masks selecting, inside one 64-bit word, the indices whose bit `i` is clear.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// A Boolean function `f: {0,1}^n -> {0,1}` stored as a bit-packed truth table.
///
/// Bits of the last word beyond `2^n` are always zero, so derived equality is
/// table equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

impl BooleanFunction {
    fn blank(n: usize) -> Self {
        let len = std::cmp::max(1, (1usize << n) / 64);
        BooleanFunction {
            n,
            words: vec![0; len],
        }
    }

    fn tail_mask(&self) -> u64 {
        if self.n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << self.n)) - 1
        }
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        check_n(n)?;
        let mut f = Self::blank(n);
        if value {
            let tail = f.tail_mask();
            for w in f.words.iter_mut() {
                *w = tail;
            }
        }
        Ok(f)
    }

    /// Builds the table by evaluating `rule` on every input index.
    pub fn from_fn(n: usize, rule: impl Fn(u32) -> bool) -> Result<Self> {
        check_n(n)?;
        let mut f = Self::blank(n);
        for index in 0..(1u32 << n) {
            if rule(index) {
                f.set(index, true);
            }
        }
        Ok(f)
    }

    /// Table packed into one word, bit `i` = `f(i)`. Requires `n <= 6`.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::TooManyVariables { n, max: 6 });
        }
        let mut f = Self::blank(n);
        if bits & !f.tail_mask() != 0 {
            return Err(Error::InvalidParameter(format!(
                "table bits exceed 2^{n} entries"
            )));
        }
        f.words[0] = bits;
        Ok(f)
    }

    /// Inverse of [`BooleanFunction::from_bits`].
    pub fn to_bits(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_inputs(&self) -> u32 {
        1u32 << self.n
    }

    #[inline]
    pub(crate) fn full_mask(&self) -> u32 {
        full_mask(self.n)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Output at a raw input index.
    #[inline]
    pub fn get(&self, index: u32) -> bool {
        debug_assert!(index < self.num_inputs());
        (self.words[(index >> 6) as usize] >> (index & 63)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, index: u32, value: bool) {
        let word = &mut self.words[(index >> 6) as usize];
        let bit = 1u64 << (index & 63);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    pub fn evaluate(&self, x: InputWord) -> Result<bool> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n,
            });
        }
        Ok(self.get(x.bits))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `Some(v)` when the function is constantly `v`.
    pub fn constant_value(&self) -> Option<bool> {
        let ones = self.count_ones();
        if ones == 0 {
            Some(false)
        } else if ones == self.num_inputs() as u64 {
            Some(true)
        } else {
            None
        }
    }

    pub fn negated(&self) -> Self {
        let tail = self.tail_mask();
        BooleanFunction {
            n: self.n,
            words: self.words.iter().map(|w| !w & tail).collect(),
        }
    }

    /// The function `x -> f(x XOR shift)`.
    pub fn shifted(&self, shift: u32) -> Self {
        debug_assert!(shift & !self.full_mask() == 0);
        let mut words = self.words.clone();
        let word_shift = (shift >> 6) as usize;
        if word_shift != 0 {
            words = (0..words.len()).map(|j| self.words[j ^ word_shift]).collect();
        }
        for (i, low) in LOW_HALF.iter().enumerate() {
            if (shift >> i) & 1 == 1 {
                let s = 1u32 << i;
                for w in words.iter_mut() {
                    *w = ((*w & low) << s) | ((*w >> s) & low);
                }
            }
        }
        BooleanFunction { n: self.n, words }
    }

    /// Value of `f` on the subcube fixing `assigned` positions to `values`,
    /// or `None` when `f` is not constant there.
    pub fn subcube_value(&self, assigned: u32, values: u32) -> Option<bool> {
        let free = self.full_mask() & !assigned;
        let values = values & assigned;
        if self.n >= 6 && free & 0x3f == 0x3f {
            let word_free = free >> 6;
            let word_base = values >> 6;
            let first = self.words[word_base as usize];
            if first != 0 && first != u64::MAX {
                return None;
            }
            let mut s = word_free;
            while s != 0 {
                if self.words[(word_base | s) as usize] != first {
                    return None;
                }
                s = (s - 1) & word_free;
            }
            return Some(first != 0);
        }
        let first = self.get(values);
        let mut s = free;
        while s != 0 {
            if self.get(values | s) != first {
                return None;
            }
            s = (s - 1) & free;
        }
        Some(first)
    }

    /// Whether `f` is constantly `value` on the subcube.
    pub fn is_constant_on(&self, assigned: u32, values: u32, value: bool) -> bool {
        self.subcube_value(assigned, values) == Some(value)
    }

    /// Fixes the positions assigned by `assignment` and renumbers the remaining
    /// positions in ascending original order.
    pub fn restrict(&self, assignment: &Certificate) -> Result<Restriction> {
        if assignment.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: assignment.n,
            });
        }
        let free = self.full_mask() & !assignment.assigned;
        let positions = mask_positions(free);
        let m = positions.len();
        let function = BooleanFunction::from_fn(m, |index| {
            let mut full = assignment.values;
            for (j, &p) in positions.iter().enumerate() {
                if (index >> j) & 1 == 1 {
                    full |= position_bit(p);
                }
            }
            self.get(full)
        })?;
        Ok(Restriction {
            function,
            positions,
        })
    }

    /// Lowercase hex of the table, most significant nibble first.
    pub fn to_hex(&self) -> String {
        let digits = std::cmp::max(1, (1usize << self.n) / 4);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let nibble = (self.words[d / 16] >> ((d % 16) * 4)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(hex: &str, n: usize) -> Result<Self> {
        check_n(n)?;
        let digits = std::cmp::max(1, (1usize << n) / 4);
        if hex.len() != digits {
            return Err(Error::InvalidHex(format!(
                "expected {digits} digits for n = {n}, found {}",
                hex.len()
            )));
        }
        let mut f = Self::blank(n);
        for (k, ch) in hex.chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::InvalidHex(format!("non-hex character {ch:?}")))?
                as u64;
            f.words[k / 16] |= nibble << ((k % 16) * 4);
        }
        if f.words[0] & !f.tail_mask() != 0 {
            return Err(Error::InvalidHex(format!(
                "digit sets bits beyond the {} table entries",
                1usize << n
            )));
        }
        Ok(f)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, {})", self.n, self.to_hex())
    }
}

/// Result of [`BooleanFunction::restrict`]: the subfunction and, for each of
/// its positions (in order), the original 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub function: BooleanFunction,
    pub positions: Vec<usize>,
}

/// An `n`-bit input `x_1 .. x_n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputWord {
    n: usize,
    bits: u32,
}

impl InputWord {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        check_n(n)?;
        if bits & !full_mask(n) != 0 {
            return Err(Error::InvalidWord(format!(
                "bits {bits:#x} set above position {n}"
            )));
        }
        Ok(InputWord { n, bits })
    }

    pub fn zero(n: usize) -> Self {
        InputWord { n, bits: 0 }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// The input as a table index.
    #[inline]
    pub fn index(&self) -> u32 {
        self.bits
    }

    pub fn bit(&self, position: usize) -> bool {
        (self.bits >> (position - 1)) & 1 == 1
    }

    /// `x^S`: every position of `block` complemented.
    pub fn flip(&self, block: &Block) -> Result<InputWord> {
        if block.mask & !full_mask(self.n) != 0 {
            return Err(Error::PositionOutOfRange {
                position: 32 - block.mask.leading_zeros() as usize,
                n: self.n,
            });
        }
        Ok(InputWord {
            n: self.n,
            bits: self.bits ^ block.mask,
        })
    }

    pub fn flip_position(&self, position: usize) -> Result<InputWord> {
        self.flip(&Block::from_positions(&[position])?)
    }
}

impl fmt::Display for InputWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.n {
            f.write_str(if self.bit(p) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for InputWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InputWord({self})")
    }
}

impl FromStr for InputWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        check_n(n)?;
        let mut bits = 0u32;
        for (j, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << j,
                _ => return Err(Error::InvalidWord(format!("unexpected {ch:?} in {s:?}"))),
            }
        }
        Ok(InputWord { n, bits })
    }
}

/// Serializes as `{"n": n, "tt_hex": hex}`.
impl Serialize for BooleanFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("BooleanFunction", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("tt_hex", &self.to_hex())?;
        st.end()
    }
}

impl Serialize for InputWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for InputWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A set of input positions.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    mask: u32,
}

impl Block {
    pub fn from_mask(mask: u32) -> Self {
        Block { mask }
    }

    pub fn from_positions(positions: &[usize]) -> Result<Self> {
        let mut mask = 0;
        for &p in positions {
            if p == 0 || p > MAX_VARS {
                return Err(Error::PositionOutOfRange {
                    position: p,
                    n: MAX_VARS,
                });
            }
            mask |= position_bit(p);
        }
        Ok(Block { mask })
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, position: usize) -> bool {
        (1..=32).contains(&position) && (self.mask >> (position - 1)) & 1 == 1
    }

    pub fn positions(&self) -> Vec<usize> {
        mask_positions(self.mask)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block{self}")
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.positions().serialize(serializer)
    }
}

/// A partial assignment over `n` positions, written with `{0,1,*}`.
///
/// `values` is zero outside `assigned`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    n: usize,
    assigned: u32,
    values: u32,
}

impl Certificate {
    pub fn new(n: usize, assigned: u32, values: u32) -> Result<Self> {
        check_n(n)?;
        if assigned & !full_mask(n) != 0 {
            return Err(Error::PositionOutOfRange {
                position: 32 - assigned.leading_zeros() as usize,
                n,
            });
        }
        Ok(Certificate {
            n,
            assigned,
            values: values & assigned,
        })
    }

    pub(crate) fn from_masks(n: usize, assigned: u32, values: u32) -> Self {
        debug_assert!(assigned & !full_mask(n) == 0);
        Certificate {
            n,
            assigned,
            values: values & assigned,
        }
    }

    pub fn empty(n: usize) -> Self {
        Certificate {
            n,
            assigned: 0,
            values: 0,
        }
    }

    /// The full assignment of `x`.
    pub fn from_input(x: InputWord) -> Self {
        Certificate {
            n: x.n,
            assigned: full_mask(x.n),
            values: x.bits,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn assigned(&self) -> u32 {
        self.assigned
    }

    #[inline]
    pub fn values(&self) -> u32 {
        self.values
    }

    /// Number of assigned positions.
    pub fn len(&self) -> usize {
        self.assigned.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.assigned == 0
    }

    pub fn ones(&self) -> u32 {
        self.values.count_ones()
    }

    pub fn zeros(&self) -> u32 {
        (self.assigned & !self.values).count_ones()
    }

    pub fn value_at(&self, position: usize) -> Option<bool> {
        let bit = position_bit(position);
        (self.assigned & bit != 0).then_some(self.values & bit != 0)
    }

    pub fn positions(&self) -> Vec<usize> {
        mask_positions(self.assigned)
    }

    pub fn support(&self) -> Block {
        Block::from_mask(self.assigned)
    }

    pub fn without(&self, position: usize) -> Certificate {
        let bit = position_bit(position);
        Certificate {
            n: self.n,
            assigned: self.assigned & !bit,
            values: self.values & !bit,
        }
    }

    pub fn with(&self, position: usize, value: bool) -> Certificate {
        let bit = position_bit(position);
        Certificate {
            n: self.n,
            assigned: self.assigned | bit,
            values: if value {
                self.values | bit
            } else {
                self.values & !bit
            },
        }
    }

    pub fn satisfied_by(&self, x: InputWord) -> Result<bool> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n,
            });
        }
        Ok((x.bits ^ self.values) & self.assigned == 0)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.n {
            f.write_str(match self.value_at(p) {
                None => "*",
                Some(false) => "0",
                Some(true) => "1",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Certificate({self})")
    }
}

impl FromStr for Certificate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        check_n(n)?;
        let mut assigned = 0;
        let mut values = 0;
        for (j, ch) in s.chars().enumerate() {
            match ch {
                '*' => {}
                '0' => assigned |= 1 << j,
                '1' => {
                    assigned |= 1 << j;
                    values |= 1 << j;
                }
                _ => {
                    return Err(Error::InvalidCertificate(format!(
                        "unexpected {ch:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(Certificate {
            n,
            assigned,
            values,
        })
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn satisfies(x: InputWord, c: &Certificate) -> Result<bool> {
    c.satisfied_by(x)
}

fn check_dims(f: &BooleanFunction, c: &Certificate) -> Result<()> {
    if f.n() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: c.n(),
        });
    }
    Ok(())
}

/// Value certified by `c`, or `None` when `f` is not constant on its subcube.
pub fn certified_value(f: &BooleanFunction, c: &Certificate) -> Result<Option<bool>> {
    check_dims(f, c)?;
    Ok(f.subcube_value(c.assigned, c.values))
}

pub fn is_one_certificate(f: &BooleanFunction, c: &Certificate) -> Result<bool> {
    Ok(certified_value(f, c)? == Some(true))
}

/// Whether `c` is a certificate from which no single position can be dropped.
pub fn is_minimal_certificate(f: &BooleanFunction, c: &Certificate) -> Result<bool> {
    let Some(value) = certified_value(f, c)? else {
        return Ok(false);
    };
    Ok(c
        .positions()
        .into_iter()
        .all(|p| !f.is_constant_on(c.assigned & !position_bit(p), c.values, value)))
}

/// Shrinks a certificate of `f` by removing the highest-index removable
/// position until no position can be removed.
pub fn minimize_certificate(f: &BooleanFunction, c: &Certificate) -> Result<Certificate> {
    let value = certified_value(f, c)?.ok_or_else(|| Error::NotACertificate(c.to_string()))?;
    let mut current = *c;
    loop {
        let mut changed = false;
        for p in current.positions().into_iter().rev() {
            let candidate = current.without(p);
            if f.is_constant_on(candidate.assigned, candidate.values, value) {
                current = candidate;
                changed = true;
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}
