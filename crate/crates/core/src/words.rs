//! Binary strings, Dyck words and one-dimensional overlap predicates.
//!
//! A `1` is read as an up step and a `0` as a down step; position 1 is the
//! leftmost character. A Dyck word is a balanced string in which no prefix
//! has more `0`s than `1`s, and a type-α Dyck word additionally keeps every
//! proper nonempty prefix strictly above the axis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// A finite sequence of bits.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// `count` copies of `bit`.
    pub fn repeat(bit: bool, count: usize) -> Self {
        BitString {
            bits: vec![bit; count],
        }
    }

    /// Unpacks the low `len` bits of `value`, most significant first.
    pub fn from_packed(value: u64, len: usize) -> Self {
        assert!(len <= 64, "packed strings are at most 64 bits");
        let bits = (0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1).collect();
        BitString { bits }
    }

    /// Packs the string into an integer with position 1 as the most
    /// significant bit. `None` if longer than 64 bits.
    pub fn to_packed(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn first(&self) -> Option<bool> {
        self.bits.first().copied()
    }

    pub fn last(&self) -> Option<bool> {
        self.bits.last().copied()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.ones()
    }

    pub fn prefix(&self, len: usize) -> BitString {
        BitString::from_bits(self.bits[..len].to_vec())
    }

    pub fn suffix(&self, len: usize) -> BitString {
        BitString::from_bits(self.bits[self.len() - len..].to_vec())
    }

    /// The substring `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString::from_bits(self.bits[start..end].to_vec())
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn starts_with(&self, prefix: &[bool]) -> bool {
        self.bits.starts_with(prefix)
    }

    pub fn ends_with(&self, suffix: &[bool]) -> bool {
        self.bits.ends_with(suffix)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(format!(
                    "bit strings contain only '0' and '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A validated Dyck word of length `2ℓ`, `ℓ ≥ 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DyckWord(BitString);

impl DyckWord {
    pub fn new(word: BitString) -> Result<Self> {
        if is_dyck(&word) {
            Ok(DyckWord(word))
        } else {
            Err(Error::invalid(format!("{word} is not a Dyck word")))
        }
    }

    /// `1^ℓ 0^ℓ`, the tallest Dyck word of its length.
    pub fn pyramid(half_length: usize) -> Result<Self> {
        if half_length == 0 {
            return Err(Error::invalid("Dyck words have positive length"));
        }
        let word = BitString::repeat(true, half_length).concat(&BitString::repeat(false, half_length));
        Ok(DyckWord(word))
    }

    pub fn as_bits(&self) -> &BitString {
        &self.0
    }

    pub fn into_bits(self) -> BitString {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_length(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyckWord(\"{}\")", self.0)
    }
}

impl FromStr for DyckWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DyckWord::new(s.parse()?)
    }
}

impl AsRef<BitString> for DyckWord {
    fn as_ref(&self) -> &BitString {
        &self.0
    }
}

/// The `k`-th Catalan number, exactly.
///
/// Uses `C_{k+1} = C_k · 2(2k+1) / (k+2)` with the common factor cancelled
/// first, so the only way to fail is a result that does not fit in `u128`.
pub fn catalan(k: u32) -> Result<u128> {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        let num = 2 * (2 * i + 1);
        let den = i + 2;
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        debug_assert_eq!(c % den, 0);
        c = (c / den)
            .checked_mul(num)
            .ok_or_else(|| Error::Overflow(format!("catalan({k}) exceeds 128 bits")))?;
    }
    Ok(c)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Balanced, positive length, and no prefix dips below the axis.
pub fn is_dyck(s: &BitString) -> bool {
    if s.is_empty() || !s.len().is_multiple_of(2) {
        return false;
    }
    let mut height: i64 = 0;
    for &b in s.bits() {
        height += if b { 1 } else { -1 };
        if height < 0 {
            return false;
        }
    }
    height == 0
}

/// A Dyck word whose path touches the axis only at its two endpoints.
pub fn is_type_alpha(s: &BitString) -> bool {
    if !is_dyck(s) {
        return false;
    }
    let mut height: i64 = 0;
    // Every proper nonempty prefix must stay strictly positive.
    for &b in &s.bits()[..s.len() - 1] {
        height += if b { 1 } else { -1 };
        if height <= 0 {
            return false;
        }
    }
    true
}

/// `1·u·0`, which is always of type α.
pub fn type_alpha_from(u: &DyckWord) -> BitString {
    let mut bits = Vec::with_capacity(u.len() + 2);
    bits.push(true);
    bits.extend_from_slice(u.as_bits().bits());
    bits.push(false);
    BitString::from_bits(bits)
}

/// All Dyck words of `length`, in descending binary order (`1100` before `1010`).
pub fn enumerate_dyck(length: usize, limits: &Limits) -> Result<Vec<DyckWord>> {
    if length == 0 || !length.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "Dyck word length must be even and positive, got {length}"
        )));
    }
    if length > limits.max_word_len {
        return Err(Error::ResourceLimit {
            what: "Dyck word length",
            requested: length as u128,
            limit: limits.max_word_len as u128,
        });
    }
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(length);
    extend_dyck(&mut buf, 0, length / 2, &mut out);
    Ok(out)
}

fn extend_dyck(buf: &mut Vec<bool>, height: usize, half: usize, out: &mut Vec<DyckWord>) {
    let placed = buf.len();
    let ups = (placed + height) / 2;
    if placed == 2 * half {
        out.push(DyckWord(BitString::from_bits(buf.clone())));
        return;
    }
    if ups < half {
        buf.push(true);
        extend_dyck(buf, height + 1, half, out);
        buf.pop();
    }
    if height > 0 {
        buf.push(false);
        extend_dyck(buf, height - 1, half, out);
        buf.pop();
    }
}

/// Which side of a string overlap carries the prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapDirection {
    /// A prefix of the first string equals a suffix of the second.
    PrefixOfFirst,
    /// A prefix of the second string equals a suffix of the first.
    PrefixOfSecond,
}

/// A shortest proper prefix/suffix coincidence between two strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StringOverlap {
    pub length: usize,
    pub direction: OverlapDirection,
}

/// Finds the shortest nonempty proper prefix of one string that equals a
/// proper suffix of the other. At equal length the first string's prefix is
/// reported first. `None` means the strings are non-overlapping.
pub fn strings_overlap(x: &BitString, y: &BitString) -> Result<Option<StringOverlap>> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::invalid("overlap test needs nonempty strings"));
    }
    let (xb, yb) = (x.bits(), y.bits());
    let max = x.len().min(y.len());
    for k in 1..max {
        if xb[..k] == yb[yb.len() - k..] {
            return Ok(Some(StringOverlap {
                length: k,
                direction: OverlapDirection::PrefixOfFirst,
            }));
        }
        if yb[..k] == xb[xb.len() - k..] {
            return Ok(Some(StringOverlap {
                length: k,
                direction: OverlapDirection::PrefixOfSecond,
            }));
        }
    }
    Ok(None)
}

/// True when `x` has no border, i.e. no nonempty proper prefix that is also
/// a suffix.
pub fn is_self_non_overlapping(x: &BitString) -> bool {
    match strings_overlap(x, x) {
        Ok(found) => found.is_none(),
        Err(_) => true,
    }
}

/// Packed variant of [`strings_overlap`] for two strings of the same length
/// `n ≤ 64`; returns only presence.
pub(crate) fn packed_overlap(x: u64, y: u64, n: usize) -> bool {
    (1..n).any(|k| {
        let mask = low_mask(k);
        let (xp, yp) = (x >> (n - k), y >> (n - k));
        xp == (y & mask) || yp == (x & mask)
    })
}

#[inline]
pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}
