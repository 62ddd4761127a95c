//! Construction of the matrix sets `L(m×n)`.
//!
//! Every matrix in a set shares one first row `A₁`, a type-α Dyck word built
//! from the set's anchor. The remaining rows are drawn from a fixed menu of
//! row types that depends on the parity of `n`:
//!
//! | n    | middle rows (2..m−1)   | last row  |
//! |------|------------------------|-----------|
//! | even | T1, T2, T3, T4, T5     | T1, T2, T3 |
//! | odd  | T6, T7, T8             | T6, T7    |
//!
//! With `u` the even-case anchor (`A₁ = 1u0`) and `v` the odd-case anchor
//! (`A₁ = 1v`):
//!
//! * T1 `w ∈ D_n`, `w ≠ A₁`
//! * T2 `11w`, T3 `w00`, T4 `01w` with `w ∈ D_{n−2}`, `w ≠ u`
//! * T5 `0w0` with `w ∈ D_{n−2}`
//! * T6 `1w`, T7 `w0` with `w ∈ D_{n−1}`, `w ≠ v`
//! * T8 `0w` with `w ∈ D_{n−1}`
//!
//! The first row may not reappear further down. For T2 through T8 the
//! patterns already rule that out, so only T1 carries the explicit exclusion.

use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matrix::{BinaryMatrix, MAX_COLS};
use crate::words::{enumerate_dyck, is_dyck, is_type_alpha, type_alpha_from, BitString, DyckWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Row classification relative to a [`SetSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RowKind {
    Alpha,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    Other,
}

impl RowKind {
    pub const EVEN_TYPES: [RowKind; 5] = [RowKind::T1, RowKind::T2, RowKind::T3, RowKind::T4, RowKind::T5];
    pub const ODD_TYPES: [RowKind; 3] = [RowKind::T6, RowKind::T7, RowKind::T8];

    /// The numbered row types available for `parity`.
    pub fn numbered(parity: Parity) -> &'static [RowKind] {
        match parity {
            Parity::Even => &Self::EVEN_TYPES,
            Parity::Odd => &Self::ODD_TYPES,
        }
    }

    pub fn allowed_in_middle(self, parity: Parity) -> bool {
        Self::numbered(parity).contains(&self)
    }

    pub fn allowed_last(self, parity: Parity) -> bool {
        match parity {
            Parity::Even => matches!(self, RowKind::T1 | RowKind::T2 | RowKind::T3),
            Parity::Odd => matches!(self, RowKind::T6 | RowKind::T7),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RowKind::Alpha => "alpha",
            RowKind::T1 => "type 1",
            RowKind::T2 => "type 2",
            RowKind::T3 => "type 3",
            RowKind::T4 => "type 4",
            RowKind::T5 => "type 5",
            RowKind::T6 => "type 6",
            RowKind::T7 => "type 7",
            RowKind::T8 => "type 8",
            RowKind::Other => "other",
        }
    }
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Parameters fixing one concrete set `L(m×n)`.
///
/// For even `n` the anchor is `u ∈ D_{n−2}` and the first row is `1u0`. For
/// odd `n` it is a type-α word `v ∈ D_{n−1}` and the first row is `1v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSpec {
    m: usize,
    n: usize,
    anchor: DyckWord,
}

impl SetSpec {
    pub fn new(m: usize, n: usize, anchor: DyckWord) -> Result<Self> {
        check_dims(m, n)?;
        match Parity::of(n) {
            Parity::Even if anchor.len() != n - 2 => Err(Error::invalid(format!(
                "even n = {n} needs an anchor of length {}, got {}",
                n - 2,
                anchor.len()
            ))),
            Parity::Odd if anchor.len() != n - 1 => Err(Error::invalid(format!(
                "odd n = {n} needs an anchor of length {}, got {}",
                n - 1,
                anchor.len()
            ))),
            Parity::Odd if !is_type_alpha(anchor.as_bits()) => Err(Error::invalid(format!(
                "odd n needs a type-alpha anchor, {anchor} is not"
            ))),
            _ => Ok(SetSpec { m, n, anchor }),
        }
    }

    /// Uses [`SetSpec::default_anchor`].
    pub fn with_default_anchor(m: usize, n: usize) -> Result<Self> {
        check_dims(m, n)?;
        SetSpec::new(m, n, Self::default_anchor(n)?)
    }

    /// Parses an optional anchor string, falling back to the default.
    pub fn parse(m: usize, n: usize, anchor: Option<&str>) -> Result<Self> {
        match anchor {
            Some(a) => SetSpec::new(m, n, a.parse()?),
            None => SetSpec::with_default_anchor(m, n),
        }
    }

    /// `1^k 0^k` of the anchor length for `n`.
    pub fn default_anchor(n: usize) -> Result<DyckWord> {
        check_dims(2, n)?;
        match Parity::of(n) {
            Parity::Even => DyckWord::pyramid((n - 2) / 2),
            Parity::Odd => DyckWord::pyramid((n - 1) / 2),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn anchor(&self) -> &DyckWord {
        &self.anchor
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    /// Same anchor and width, different row count.
    pub fn with_rows(&self, m: usize) -> Result<Self> {
        SetSpec::new(m, self.n, self.anchor.clone())
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::invalid(format!("m must be at least 2, got {m}")));
    }
    let min_n = match Parity::of(n) {
        Parity::Even => 4,
        Parity::Odd => 5,
    };
    if n < min_n || n > MAX_COLS {
        return Err(Error::invalid(format!(
            "n = {n} out of range: {} n needs {min_n} <= n <= {MAX_COLS}",
            Parity::of(n)
        )));
    }
    Ok(())
}

/// Every admissible anchor for width `n`: `D_{n−2}` for even `n`, the
/// type-α words of `D_{n−1}` for odd `n`.
pub fn all_anchors(n: usize, limits: &Limits) -> Result<Vec<DyckWord>> {
    check_dims(2, n)?;
    Ok(match Parity::of(n) {
        Parity::Even => enumerate_dyck(n - 2, limits)?,
        Parity::Odd => enumerate_dyck(n - 1, limits)?
            .into_iter()
            .filter(|w| is_type_alpha(w.as_bits()))
            .collect(),
    })
}

/// The shared first row `A₁`.
pub fn anchor_row(spec: &SetSpec) -> BitString {
    match spec.parity() {
        Parity::Even => type_alpha_from(&spec.anchor),
        Parity::Odd => BitString::from_bits(vec![true]).concat(spec.anchor.as_bits()),
    }
}

/// Whether `row` fits the pattern of `kind` (a numbered row type, or
/// `Alpha` for the first row itself). `Other` never matches.
pub fn row_matches(row: &BitString, spec: &SetSpec, kind: RowKind) -> Result<bool> {
    let n = spec.n;
    if row.len() != n {
        return Err(Error::invalid(format!("row has length {}, expected {n}", row.len())));
    }
    let anchor = spec.anchor.as_bits();
    let dyck_not_anchor = |w: BitString| is_dyck(&w) && w != *anchor;
    let starts = |p: &[bool]| row.starts_with(p);
    let ends = |p: &[bool]| row.ends_with(p);
    let matched = match (spec.parity(), kind) {
        (_, RowKind::Alpha) => *row == anchor_row(spec),
        (Parity::Even, RowKind::T1) => is_dyck(row) && *row != anchor_row(spec),
        (Parity::Even, RowKind::T2) => starts(&[true, true]) && dyck_not_anchor(row.slice(2, n)),
        (Parity::Even, RowKind::T3) => ends(&[false, false]) && dyck_not_anchor(row.slice(0, n - 2)),
        (Parity::Even, RowKind::T4) => starts(&[false, true]) && dyck_not_anchor(row.slice(2, n)),
        (Parity::Even, RowKind::T5) => starts(&[false]) && ends(&[false]) && is_dyck(&row.slice(1, n - 1)),
        (Parity::Odd, RowKind::T6) => starts(&[true]) && dyck_not_anchor(row.slice(1, n)),
        (Parity::Odd, RowKind::T7) => ends(&[false]) && dyck_not_anchor(row.slice(0, n - 1)),
        (Parity::Odd, RowKind::T8) => starts(&[false]) && is_dyck(&row.slice(1, n)),
        _ => false,
    };
    Ok(matched)
}

/// Classifies `row` against the spec's row types, lowest-numbered match first.
pub fn classify_row(row: &BitString, spec: &SetSpec) -> Result<RowKind> {
    if row_matches(row, spec, RowKind::Alpha)? {
        return Ok(RowKind::Alpha);
    }
    for &kind in RowKind::numbered(spec.parity()) {
        if row_matches(row, spec, kind)? {
            return Ok(kind);
        }
    }
    Ok(RowKind::Other)
}

/// Every string matching `kind`'s pattern, in Dyck enumeration order.
pub fn rows_of_kind(spec: &SetSpec, kind: RowKind, limits: &Limits) -> Result<Vec<BitString>> {
    let n = spec.n;
    let anchor = spec.anchor.as_bits();
    let first = anchor_row(spec);
    let wrap = |pre: &str, words: Vec<DyckWord>, post: &str, exclude_anchor: bool| -> Result<Vec<BitString>> {
        let pre: BitString = pre.parse()?;
        let post: BitString = post.parse()?;
        Ok(words
            .into_iter()
            .filter(|w| !(exclude_anchor && w.as_bits() == anchor))
            .map(|w| pre.concat(w.as_bits()).concat(&post))
            .collect())
    };
    let rows = match (spec.parity(), kind) {
        (Parity::Even, RowKind::T1) => enumerate_dyck(n, limits)?
            .into_iter()
            .map(DyckWord::into_bits)
            .filter(|w| *w != first)
            .collect(),
        (Parity::Even, RowKind::T2) => wrap("11", enumerate_dyck(n - 2, limits)?, "", true)?,
        (Parity::Even, RowKind::T3) => wrap("", enumerate_dyck(n - 2, limits)?, "00", true)?,
        (Parity::Even, RowKind::T4) => wrap("01", enumerate_dyck(n - 2, limits)?, "", true)?,
        (Parity::Even, RowKind::T5) => wrap("0", enumerate_dyck(n - 2, limits)?, "0", false)?,
        (Parity::Odd, RowKind::T6) => wrap("1", enumerate_dyck(n - 1, limits)?, "", true)?,
        (Parity::Odd, RowKind::T7) => wrap("", enumerate_dyck(n - 1, limits)?, "0", true)?,
        (Parity::Odd, RowKind::T8) => wrap("0", enumerate_dyck(n - 1, limits)?, "", false)?,
        _ => Vec::new(),
    };
    Ok(rows)
}

fn choices(spec: &SetSpec, kinds: impl Iterator<Item = RowKind>, limits: &Limits) -> Result<Vec<BitString>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for kind in kinds {
        for row in rows_of_kind(spec, kind, limits)? {
            if seen.insert(row.clone()) {
                out.push(row);
            }
        }
    }
    Ok(out)
}

/// Legal rows for positions `2..m−1`, deduplicated, types ascending.
pub fn middle_row_choices(spec: &SetSpec, limits: &Limits) -> Result<Vec<BitString>> {
    let parity = spec.parity();
    choices(spec, RowKind::numbered(parity).iter().copied(), limits)
}

/// Legal last rows, deduplicated, types ascending.
pub fn last_row_choices(spec: &SetSpec, limits: &Limits) -> Result<Vec<BitString>> {
    let parity = spec.parity();
    choices(
        spec,
        RowKind::numbered(parity).iter().copied().filter(|k| k.allowed_last(parity)),
        limits,
    )
}

/// Result of a membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// `row` is 1-based.
    NotMember { row: usize, reason: String },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

/// Checks `matrix` against the membership rules of `spec`, naming the first
/// offending row.
pub fn validate_member(matrix: &BinaryMatrix, spec: &SetSpec) -> Result<Membership> {
    let (m, n) = matrix.dims();
    if (m, n) != (spec.m, spec.n) {
        return Err(Error::invalid(format!(
            "matrix is {m}x{n}, spec is {}x{}",
            spec.m, spec.n
        )));
    }
    let first = anchor_row(spec);
    if matrix.row(0) != first {
        return Ok(Membership::NotMember {
            row: 1,
            reason: format!("first row must be {first}"),
        });
    }
    let parity = spec.parity();
    for i in 1..m {
        let row = matrix.row(i);
        let kind = classify_row(&row, spec)?;
        let is_last = i == m - 1;
        let reason = match kind {
            RowKind::Alpha => Some("first row repeated".to_string()),
            RowKind::Other => Some("matches no row type".to_string()),
            k if is_last && !k.allowed_last(parity) => Some(format!("{k} forbidden in last row")),
            k if !k.allowed_in_middle(parity) => Some(format!("{k} not allowed for {parity} n")),
            _ => None,
        };
        if let Some(reason) = reason {
            return Ok(Membership::NotMember { row: i + 1, reason });
        }
    }
    Ok(Membership::Member)
}

/// A set `L(m×n)` with its row menus materialized, supporting enumeration,
/// ranking and unranking without listing the matrices.
///
/// Elements are ordered mixed-radix, big-endian over rows `2..m`: row 2 is
/// the most significant digit and each digit follows its menu's order.
#[derive(Debug, Clone)]
pub struct MatrixSet {
    spec: SetSpec,
    first: u64,
    middle: Vec<u64>,
    last: Vec<u64>,
    middle_pos: HashMap<u64, usize>,
    last_pos: HashMap<u64, usize>,
    size: u128,
}

impl MatrixSet {
    pub fn new(spec: &SetSpec, limits: &Limits) -> Result<Self> {
        let pack = |rows: Vec<BitString>| -> Vec<u64> {
            rows.iter().map(|r| r.to_packed().expect("n <= 64")).collect()
        };
        let middle = pack(middle_row_choices(spec, limits)?);
        let last = pack(last_row_choices(spec, limits)?);
        let overflow = || Error::Overflow(format!("|L({}x{})| exceeds 128 bits", spec.m, spec.n));
        let mut size = last.len() as u128;
        for _ in 0..spec.m - 2 {
            size = size.checked_mul(middle.len() as u128).ok_or_else(overflow)?;
        }
        let index = |rows: &[u64]| rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        Ok(MatrixSet {
            first: anchor_row(spec).to_packed().expect("n <= 64"),
            middle_pos: index(&middle),
            last_pos: index(&last),
            middle,
            last,
            size,
            spec: spec.clone(),
        })
    }

    pub fn spec(&self) -> &SetSpec {
        &self.spec
    }

    /// Number of matrices in the set.
    pub fn len(&self) -> u128 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn middle_choices(&self) -> Vec<BitString> {
        self.middle.iter().map(|&r| BitString::from_packed(r, self.spec.n)).collect()
    }

    pub fn last_choices(&self) -> Vec<BitString> {
        self.last.iter().map(|&r| BitString::from_packed(r, self.spec.n)).collect()
    }

    fn radix(&self, digit: usize) -> usize {
        if digit + 2 == self.spec.m {
            self.last.len()
        } else {
            self.middle.len()
        }
    }

    fn assemble(&self, digits: &[usize]) -> BinaryMatrix {
        let mut rows = Vec::with_capacity(self.spec.m);
        rows.push(self.first);
        let (mids, last) = digits.split_at(digits.len() - 1);
        rows.extend(mids.iter().map(|&d| self.middle[d]));
        rows.push(self.last[last[0]]);
        BinaryMatrix::from_packed(self.spec.n, rows).expect("rows are n bits wide")
    }

    /// The `index`-th matrix in enumeration order.
    pub fn unrank(&self, index: u128) -> Result<BinaryMatrix> {
        if index >= self.size {
            return Err(Error::invalid(format!(
                "index {index} out of range for a set of {} matrices",
                self.size
            )));
        }
        let digits_len = self.spec.m - 1;
        let mut digits = vec![0usize; digits_len];
        let mut rest = index;
        for d in (0..digits_len).rev() {
            let radix = self.radix(d) as u128;
            digits[d] = (rest % radix) as usize;
            rest /= radix;
        }
        Ok(self.assemble(&digits))
    }

    /// Position of `matrix` in enumeration order; errors if it is not a member.
    pub fn rank(&self, matrix: &BinaryMatrix) -> Result<u128> {
        if matrix.dims() != (self.spec.m, self.spec.n) {
            return Err(Error::invalid("matrix dimensions do not match the set"));
        }
        let rows = matrix.packed_rows();
        if rows[0] != self.first {
            return Err(Error::invalid("first row is not the anchor row"));
        }
        let m = self.spec.m;
        let mut rank: u128 = 0;
        for (d, &row) in rows[1..].iter().enumerate() {
            let lookup = if d + 2 == m { &self.last_pos } else { &self.middle_pos };
            let pos = lookup
                .get(&row)
                .ok_or_else(|| Error::invalid(format!("row {} is not a legal choice", d + 2)))?;
            rank = rank * self.radix(d) as u128 + *pos as u128;
        }
        Ok(rank)
    }

    pub fn contains(&self, matrix: &BinaryMatrix) -> bool {
        self.rank(matrix).is_ok()
    }

    /// Iterates over the whole set without a size check.
    pub fn iter(&self) -> Elements<&MatrixSet> {
        Elements::new(self)
    }

    /// Materializes the set, refusing if it is larger than `limits` allow.
    pub fn to_vec(&self, limits: &Limits) -> Result<Vec<BinaryMatrix>> {
        self.check_size(limits)?;
        Ok(self.iter().collect())
    }

    fn check_size(&self, limits: &Limits) -> Result<()> {
        if self.size > limits.max_set_size {
            return Err(Error::ResourceLimit {
                what: "matrix set size",
                requested: self.size,
                limit: limits.max_set_size,
            });
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a MatrixSet {
    type Item = BinaryMatrix;
    type IntoIter = Elements<&'a MatrixSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// Odometer over a [`MatrixSet`], borrowed or owned.
pub struct Elements<S: Borrow<MatrixSet>> {
    set: S,
    digits: Vec<usize>,
    remaining: u128,
}

impl<S: Borrow<MatrixSet>> Elements<S> {
    fn new(set: S) -> Self {
        let s = set.borrow();
        let digits = vec![0; s.spec.m - 1];
        let remaining = s.size;
        Elements { set, digits, remaining }
    }
}

impl<S: Borrow<MatrixSet>> Iterator for Elements<S> {
    type Item = BinaryMatrix;

    fn next(&mut self) -> Option<BinaryMatrix> {
        if self.remaining == 0 {
            return None;
        }
        let set = self.set.borrow();
        let out = set.assemble(&self.digits);
        self.remaining -= 1;
        for d in (0..self.digits.len()).rev() {
            self.digits[d] += 1;
            if self.digits[d] < set.radix(d) {
                break;
            }
            self.digits[d] = 0;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match usize::try_from(self.remaining) {
            Ok(r) => (r, Some(r)),
            Err(_) => (usize::MAX, None),
        }
    }
}

/// Streams every matrix of `L(m×n)` in enumeration order.
pub fn enumerate_set(spec: &SetSpec, limits: &Limits) -> Result<Elements<MatrixSet>> {
    let set = MatrixSet::new(spec, limits)?;
    set.check_size(limits)?;
    Ok(Elements::new(set))
}

/// The `index`-th element of [`enumerate_set`]'s order.
pub fn unrank(spec: &SetSpec, index: u128, limits: &Limits) -> Result<BinaryMatrix> {
    MatrixSet::new(spec, limits)?.unrank(index)
}

/// JSON form of a set element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixRecord {
    pub m: usize,
    pub n: usize,
    pub parity: Parity,
    pub anchor: BitString,
    pub rows: Vec<BitString>,
}

impl MatrixRecord {
    pub fn new(spec: &SetSpec, matrix: &BinaryMatrix) -> Self {
        let (m, n) = matrix.dims();
        MatrixRecord {
            m,
            n,
            parity: spec.parity(),
            anchor: spec.anchor.as_bits().clone(),
            rows: matrix.rows().collect(),
        }
    }
}
