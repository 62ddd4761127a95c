//! Rigid-translation overlap oracle for equal-size matrices.
//!
//! An [`Offset`] `(dr, dc)` places `B` `dr` rows below and `dc` columns to the
//! right of `A`; the control window is their intersection, of size
//! `(m − |dr|) × (n − |dc|)`. `A` and `B` overlap at that offset when every
//! cell of the window holds the same bit in both. Scanning every signed
//! offset covers all four block-partition equalities at once.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::words::low_mask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Offset {
    pub dr: isize,
    pub dc: isize,
}

impl Offset {
    pub const ORIGIN: Offset = Offset { dr: 0, dc: 0 };

    pub fn new(dr: isize, dc: isize) -> Self {
        Offset { dr, dc }
    }

    pub fn negate(self) -> Self {
        Offset {
            dr: -self.dr,
            dc: -self.dc,
        }
    }

    pub fn is_origin(self) -> bool {
        self == Self::ORIGIN
    }

    pub fn kind(self) -> WitnessKind {
        match (self.dr, self.dc) {
            (0, 0) => WitnessKind::Coincident,
            (_, 0) => WitnessKind::Vertical,
            (0, _) => WitnessKind::Horizontal,
            _ => WitnessKind::Corner,
        }
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dr, self.dc)
    }
}

/// Shape of an overlap's control window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    /// Column shift zero, row shift nonzero.
    Vertical,
    /// Row shift zero, column shift nonzero.
    Horizontal,
    /// Both shifts nonzero.
    Corner,
    /// Full superposition of two matrices expected to be distinct.
    Coincident,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::Vertical => "vertical",
            WitnessKind::Horizontal => "horizontal",
            WitnessKind::Corner => "corner",
            WitnessKind::Coincident => "coincident",
        })
    }
}

/// An offset at which two matrices agree on the whole control window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OverlapWitness {
    pub offset: Offset,
    pub window_rows: usize,
    pub window_cols: usize,
    pub kind: WitnessKind,
}

impl OverlapWitness {
    fn new(offset: Offset, m: usize, n: usize) -> Self {
        OverlapWitness {
            offset,
            window_rows: m - offset.dr.unsigned_abs(),
            window_cols: n - offset.dc.unsigned_abs(),
            kind: offset.kind(),
        }
    }
}

/// All offsets for an `m × n` pair in row-major order, `dr` then `dc` ascending.
pub fn offsets(m: usize, n: usize) -> impl Iterator<Item = Offset> {
    let (m, n) = (m as isize, n as isize);
    (-(m - 1)..m).flat_map(move |dr| (-(n - 1)..n).map(move |dc| Offset { dr, dc }))
}

/// Total number of cell comparisons over every nonzero offset, without early exit.
pub fn comparison_budget(m: usize, n: usize) -> u128 {
    offsets(m, n)
        .filter(|o| !o.is_origin())
        .map(|o| ((m - o.dr.unsigned_abs()) * (n - o.dc.unsigned_abs())) as u128)
        .sum()
}

fn check_same_dims(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<()> {
    if a.dims() != b.dims() {
        let (am, an) = a.dims();
        let (bm, bn) = b.dims();
        return Err(Error::invalid(format!("dimension mismatch: {am}x{an} vs {bm}x{bn}")));
    }
    Ok(())
}

/// Per-row window projections. `A` keeps its columns `max(dc,0)..n+min(dc,0)`,
/// `B` its columns shifted back by `dc`; both land in the low bits.
#[inline]
fn project_a(row: u64, n: usize, dc: isize) -> u64 {
    if dc >= 0 {
        row & low_mask(n - dc as usize)
    } else {
        row >> (-dc) as usize
    }
}

#[inline]
fn project_b(row: u64, n: usize, dc: isize) -> u64 {
    if dc >= 0 {
        row >> dc as usize
    } else {
        row & low_mask(n - (-dc) as usize)
    }
}

#[inline]
fn a_rows(m: usize, dr: isize) -> std::ops::Range<usize> {
    let m = m as isize;
    (dr.max(0) as usize)..((m + dr.min(0)) as usize)
}

fn window_matches(a: &[u64], b: &[u64], n: usize, off: Offset) -> bool {
    a_rows(a.len(), off.dr).all(|i| {
        let j = (i as isize - off.dr) as usize;
        project_a(a[i], n, off.dc) == project_b(b[j], n, off.dc)
    })
}

/// Whether `B`, translated by `off`, agrees with `A` on the whole control window.
pub fn overlap_at(a: &BinaryMatrix, b: &BinaryMatrix, off: Offset) -> Result<bool> {
    check_same_dims(a, b)?;
    let (m, n) = a.dims();
    if off.dr.unsigned_abs() >= m || off.dc.unsigned_abs() >= n {
        return Err(Error::invalid(format!("offset {off} out of range for {m}x{n}")));
    }
    Ok(window_matches(a.packed_rows(), b.packed_rows(), n, off))
}

/// First overlap in row-major offset order. The origin is skipped unless
/// `include_origin` is set.
pub fn first_overlap(a: &BinaryMatrix, b: &BinaryMatrix, include_origin: bool) -> Result<Option<OverlapWitness>> {
    check_same_dims(a, b)?;
    let (m, n) = a.dims();
    let (ar, br) = (a.packed_rows(), b.packed_rows());
    Ok(offsets(m, n)
        .filter(|o| include_origin || !o.is_origin())
        .find(|&o| window_matches(ar, br, n, o))
        .map(|o| OverlapWitness::new(o, m, n)))
}

/// Every overlapping offset, in row-major order.
pub fn all_overlaps(a: &BinaryMatrix, b: &BinaryMatrix, include_origin: bool) -> Result<Vec<OverlapWitness>> {
    check_same_dims(a, b)?;
    let (m, n) = a.dims();
    let (ar, br) = (a.packed_rows(), b.packed_rows());
    Ok(offsets(m, n)
        .filter(|o| include_origin || !o.is_origin())
        .filter(|&o| window_matches(ar, br, n, o))
        .map(|o| OverlapWitness::new(o, m, n))
        .collect())
}

/// `None` when `a` and `b` are non-overlapping.
///
/// Equal inputs are treated as one matrix tested against itself, so the
/// trivial full superposition is skipped. For unequal inputs the origin can
/// never match.
pub fn matrices_non_overlapping(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<Option<OverlapWitness>> {
    first_overlap(a, b, a != b)
}

/// One failing pair of a set check. `a == b` marks a self-overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub witness: OverlapWitness,
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Flat {
            a: usize,
            b: usize,
            dr: isize,
            dc: isize,
            kind: WitnessKind,
        }
        Flat {
            a: self.a,
            b: self.b,
            dr: self.witness.offset.dr,
            dc: self.witness.offset.dc,
            kind: self.witness.kind,
        }
        .serialize(serializer)
    }
}

/// Outcome of checking a whole set.
///
/// `checked_pairs` counts the `N` self-checks plus the `N(N−1)/2` unordered
/// pairs. Violations are sorted by `(a, b)` with `a ≤ b`, and each carries the
/// first overlapping offset of `b` moved over `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub checked_pairs: u128,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    fn from_violations(count: usize, mut violations: Vec<Violation>, fail_fast: bool) -> Self {
        violations.sort_by_key(|v| (v.a, v.b));
        if fail_fast {
            violations.truncate(1);
        }
        let count = count as u128;
        VerifyReport {
            pass: violations.is_empty(),
            checked_pairs: count * (count + 1) / 2,
            violations,
        }
    }
}

fn check_uniform(matrices: &[BinaryMatrix]) -> Result<Option<(usize, usize)>> {
    let Some(first) = matrices.first() else {
        return Ok(None);
    };
    if let Some((i, _)) = matrices.iter().enumerate().find(|(_, x)| x.dims() != first.dims()) {
        return Err(Error::invalid(format!("matrix {i} has different dimensions from matrix 0")));
    }
    Ok(Some(first.dims()))
}

/// Checks that every matrix is self non-overlapping and every pair of
/// (positionally) distinct matrices is non-overlapping.
///
/// Runs one hash join per offset: each matrix's `A`-side window is looked up
/// among all `B`-side windows, which finds every overlapping pair exactly.
/// With `fail_fast` the report keeps only the first violation; the work done
/// is the same.
pub fn verify_set(matrices: &[BinaryMatrix], fail_fast: bool) -> Result<VerifyReport> {
    let Some((m, n)) = check_uniform(matrices)? else {
        return Ok(VerifyReport::from_violations(0, Vec::new(), fail_fast));
    };
    let offs: Vec<Offset> = offsets(m, n).collect();
    let hits: Vec<(usize, usize, Offset)> = offs
        .par_iter()
        .flat_map_iter(|&off| offset_hits(matrices, n, off))
        .collect();

    // Canonical form: a ≤ b, keeping the row-major smallest offset per pair.
    let mut first: BTreeMap<(usize, usize), Offset> = BTreeMap::new();
    for (i, j, off) in hits {
        let (key, off) = if i <= j { ((i, j), off) } else { ((j, i), off.negate()) };
        first
            .entry(key)
            .and_modify(|cur| *cur = (*cur).min(off))
            .or_insert(off);
    }
    let violations = first
        .into_iter()
        .map(|((a, b), off)| Violation {
            a,
            b,
            witness: OverlapWitness::new(off, m, n),
        })
        .collect();
    Ok(VerifyReport::from_violations(matrices.len(), violations, fail_fast))
}

fn window_key(rows: &[u64], range: std::ops::Range<usize>, project: impl Fn(u64) -> u64) -> Vec<u64> {
    rows[range].iter().map(|&r| project(r)).collect()
}

/// All `(i, j)` with `matrices[j]` moved by `off` agreeing with `matrices[i]`,
/// excluding the trivial `(i, i)` at the origin.
fn offset_hits(matrices: &[BinaryMatrix], n: usize, off: Offset) -> Vec<(usize, usize, Offset)> {
    let m = matrices[0].row_count();
    let a_range = a_rows(m, off.dr);
    let b_range = {
        let shift = |i: usize| (i as isize - off.dr) as usize;
        shift(a_range.start)..shift(a_range.end)
    };
    let mut index: HashMap<Vec<u64>, Vec<usize>> = HashMap::with_capacity(matrices.len());
    for (j, b) in matrices.iter().enumerate() {
        let key = window_key(b.packed_rows(), b_range.clone(), |r| project_b(r, n, off.dc));
        index.entry(key).or_default().push(j);
    }
    let mut out = Vec::new();
    for (i, a) in matrices.iter().enumerate() {
        let key = window_key(a.packed_rows(), a_range.clone(), |r| project_a(r, n, off.dc));
        if let Some(js) = index.get(&key) {
            out.extend(
                js.iter()
                    .filter(|&&j| !(off.is_origin() && i == j))
                    .map(|&j| (i, j, off)),
            );
        }
    }
    out
}

/// Direct pairwise scan with the same report contract as [`verify_set`].
///
/// Quadratic in the set size; kept as an independent route for
/// cross-checking the indexed verifier.
pub fn verify_set_pairwise(matrices: &[BinaryMatrix], fail_fast: bool) -> Result<VerifyReport> {
    check_uniform(matrices)?;
    let mut violations = Vec::new();
    'outer: for (i, a) in matrices.iter().enumerate() {
        for (j, b) in matrices.iter().enumerate().skip(i) {
            if let Some(witness) = first_overlap(a, b, i != j)? {
                violations.push(Violation { a: i, b: j, witness });
                if fail_fast {
                    break 'outer;
                }
            }
        }
    }
    Ok(VerifyReport::from_violations(matrices.len(), violations, fail_fast))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{strings_overlap, BitString};

    fn matrix(rows: &[&str]) -> BinaryMatrix {
        let rows: Vec<BitString> = rows.iter().map(|r| r.parse().unwrap()).collect();
        BinaryMatrix::new(&rows).unwrap()
    }

    /// Cell-by-cell reference for `overlap_at`.
    fn naive_overlap(a: &BinaryMatrix, b: &BinaryMatrix, off: Offset) -> bool {
        let (m, n) = a.dims();
        (0..m as isize).all(|i| {
            (0..n as isize).all(|j| {
                let (bi, bj) = (i - off.dr, j - off.dc);
                if bi < 0 || bj < 0 || bi >= m as isize || bj >= n as isize {
                    return true;
                }
                a.get(i as usize, j as usize) == b.get(bi as usize, bj as usize)
            })
        })
    }

    #[test]
    fn origin_of_equal_matrices_matches() {
        let a = matrix(&["1100", "1010"]);
        assert!(overlap_at(&a, &a, Offset::ORIGIN).unwrap());
    }

    #[test]
    fn column_shift_example() {
        let a = matrix(&["10", "10"]);
        let b = matrix(&["01", "01"]);
        assert!(overlap_at(&a, &b, Offset::new(0, 1)).unwrap());
        assert!(!overlap_at(&a, &b, Offset::new(1, 0)).unwrap());
        assert!(overlap_at(&a, &b, Offset::new(0, 2)).is_err());
    }

    #[test]
    fn repeated_rows_give_vertical_witness() {
        let a = matrix(&["1010", "1010", "1010"]);
        let w = matrices_non_overlapping(&a, &a).unwrap().unwrap();
        // (−2, −3) fails, but the horizontal period 2 of 1010 makes (−2, −2)
        // a corner match that precedes every vertical offset.
        assert_eq!(w.offset, Offset::new(-2, -2));
        let all = all_overlaps(&a, &a, false).unwrap();
        assert!(all.iter().any(|w| w.offset == Offset::new(1, 0) && w.kind == WitnessKind::Vertical));
    }

    #[test]
    fn packed_matches_naive_exhaustively() {
        // every pair of 2x3 matrices, every offset
        let all: Vec<BinaryMatrix> = (0u64..64)
            .map(|v| BinaryMatrix::from_packed(3, vec![v >> 3, v & 7]).unwrap())
            .collect();
        for a in &all {
            for b in &all {
                for off in offsets(2, 3) {
                    assert_eq!(overlap_at(a, b, off).unwrap(), naive_overlap(a, b, off));
                }
            }
        }
    }

    #[test]
    fn single_rows_reduce_to_strings() {
        for n in 1..=6usize {
            for x in 0u64..1 << n {
                for y in 0u64..1 << n {
                    let (sx, sy) = (BitString::from_packed(x, n), BitString::from_packed(y, n));
                    let a = BinaryMatrix::new(std::slice::from_ref(&sx)).unwrap();
                    let b = BinaryMatrix::new(std::slice::from_ref(&sy)).unwrap();
                    let matrix_overlap = first_overlap(&a, &b, false).unwrap().is_some();
                    let string_overlap = strings_overlap(&sx, &sy).unwrap().is_some();
                    assert_eq!(matrix_overlap, string_overlap, "{sx} {sy}");
                }
            }
        }
    }

    #[test]
    fn witness_window_and_kind() {
        let w = OverlapWitness::new(Offset::new(2, -3), 4, 6);
        assert_eq!((w.window_rows, w.window_cols, w.kind), (2, 3, WitnessKind::Corner));
        assert_eq!(Offset::new(1, 0).kind(), WitnessKind::Vertical);
        assert_eq!(Offset::new(0, -1).kind(), WitnessKind::Horizontal);
        assert_eq!(Offset::ORIGIN.kind(), WitnessKind::Coincident);
    }

    #[test]
    fn budget_counts_cells() {
        // 2x2: offsets (±1, ±1) -> 1 cell each, (±1,0) and (0,±1) -> 2 cells each
        assert_eq!(comparison_budget(2, 2), 4 + 8);
        let direct: u128 = offsets(3, 5)
            .filter(|o| !o.is_origin())
            .map(|o| (3 - o.dr.unsigned_abs()) as u128 * (5 - o.dc.unsigned_abs()) as u128)
            .sum();
        assert_eq!(comparison_budget(3, 5), direct);
        // Sum over all offsets including the origin factorizes as m^2 n^2.
        assert_eq!(comparison_budget(3, 5) + 15, 9 * 25);
    }

    #[test]
    fn verifiers_agree_on_random_small_sets() {
        // A deterministic pseudo-random walk over 3x4 matrices.
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let count = (next() % 12) as usize + 1;
            let set: Vec<BinaryMatrix> = (0..count)
                .map(|_| BinaryMatrix::from_packed(4, (0..3).map(|_| next() & 0xf).collect()).unwrap())
                .collect();
            for fail_fast in [false, true] {
                assert_eq!(
                    verify_set(&set, fail_fast).unwrap(),
                    verify_set_pairwise(&set, fail_fast).unwrap()
                );
            }
        }
    }

    #[test]
    fn duplicates_are_coincident() {
        let a = matrix(&["1100", "1010"]);
        let report = verify_set(&[a.clone(), a], false).unwrap();
        assert!(!report.pass);
        let v = report.violations.iter().find(|v| v.a == 0 && v.b == 1).unwrap();
        // a coincident match is at the origin, but a smaller offset may come first
        assert!(all_overlaps(&matrix(&["1100", "1010"]), &matrix(&["1100", "1010"]), true)
            .unwrap()
            .iter()
            .any(|w| w.kind == WitnessKind::Coincident));
        assert!(v.witness.offset <= Offset::ORIGIN);
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let a = matrix(&["1100", "1010"]);
        let b = matrix(&["110", "101"]);
        assert!(verify_set(&[a.clone(), b.clone()], false).is_err());
        assert!(matrices_non_overlapping(&a, &b).is_err());
        assert!(verify_set(&[], false).unwrap().pass);
    }

    #[test]
    fn report_json() {
        let a = matrix(&["1010", "1010"]);
        let report = verify_set(&[a], true).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["pass"], false);
        assert_eq!(json["checked_pairs"], 1);
        let v = &json["violations"][0];
        assert_eq!(v["a"], 0);
        assert_eq!(v["b"], 0);
        assert!(v["kind"].is_string());
        assert!(v["dr"].is_i64() && v["dc"].is_i64());
    }
}
