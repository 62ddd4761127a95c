//! Expanding a set `L(m×n)` by one extra matrix.
//!
//! Given a string `x` of length `n` that fits none of the set's row types and
//! shares no proper prefix/suffix with the first row `A₁`, the matrix `Z`
//! with first row `A₁` and every other row `x` is self non-overlapping and
//! does not overlap any member of the set. The functions here search for such
//! strings exhaustively, build `Z`, and verify the enlarged set with the
//! overlap oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matrix::BinaryMatrix;
use crate::overlap::{verify_set, VerifyReport};
use crate::setgen::{all_anchors, anchor_row, classify_row, row_matches, MatrixSet, RowKind, SetSpec};
use crate::words::{packed_overlap, strings_overlap, BitString, DyckWord, StringOverlap};

/// How a string fares as the repeated row of `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionCandidate {
    pub x: BitString,
    pub kind: RowKind,
    /// Numbered row types whose pattern `x` does not fit.
    pub excluded_types: Vec<RowKind>,
    /// Shortest overlap with `A₁`, if any.
    pub overlap: Option<StringOverlap>,
    pub nonoverlap_ok: bool,
}

impl ExpansionCandidate {
    pub fn is_valid(&self) -> bool {
        self.kind == RowKind::Other && self.nonoverlap_ok
    }

    /// Why the candidate is unusable, if it is.
    pub fn rejection(&self) -> Option<String> {
        if self.kind == RowKind::Alpha {
            Some(format!("x = {} equals the first row", self.x))
        } else if self.kind != RowKind::Other {
            Some(format!("x = {} is a {} row of the set", self.x, self.kind))
        } else {
            self.overlap.map(|o| {
                format!(
                    "x = {} overlaps the first row: shared prefix/suffix of length {} ({:?})",
                    self.x, o.length, o.direction
                )
            })
        }
    }
}

/// Classifies `x` and tests it against `A₁`.
pub fn assess_candidate(spec: &SetSpec, x: &BitString) -> Result<ExpansionCandidate> {
    let kind = classify_row(x, spec)?;
    let mut excluded_types = Vec::new();
    for &k in RowKind::numbered(spec.parity()) {
        if !row_matches(x, spec, k)? {
            excluded_types.push(k);
        }
    }
    let overlap = strings_overlap(x, &anchor_row(spec))?;
    Ok(ExpansionCandidate {
        x: x.clone(),
        kind,
        excluded_types,
        overlap,
        nonoverlap_ok: overlap.is_none(),
    })
}

/// Every string of `row`'s length, other than `row`, that is non-overlapping
/// with it, in descending binary order.
pub fn strings_compatible_with(row: &BitString, limits: &Limits) -> Result<Vec<BitString>> {
    let n = row.len();
    if n == 0 {
        return Err(Error::invalid("row must be nonempty"));
    }
    if n > limits.max_scan_len {
        return Err(Error::ResourceLimit {
            what: "exhaustive string scan length",
            requested: n as u128,
            limit: limits.max_scan_len as u128,
        });
    }
    let target = row.to_packed().expect("scan length fits 64 bits");
    Ok((0..1u64 << n)
        .rev()
        .filter(|&s| s != target && !packed_overlap(s, target, n))
        .map(|s| BitString::from_packed(s, n))
        .collect())
}

/// Every string non-overlapping with `A₁` (other than `A₁`), with its row kind.
pub fn find_compatible_rows(spec: &SetSpec, limits: &Limits) -> Result<Vec<(BitString, RowKind)>> {
    strings_compatible_with(&anchor_row(spec), limits)?
        .into_iter()
        .map(|s| classify_row(&s, spec).map(|k| (s, k)))
        .collect()
}

/// The strings usable as the repeated row of `Z`, descending binary order.
pub fn find_expansion_strings(spec: &SetSpec, limits: &Limits) -> Result<Vec<BitString>> {
    Ok(find_compatible_rows(spec, limits)?
        .into_iter()
        .filter(|(_, k)| *k == RowKind::Other)
        .map(|(s, _)| s)
        .collect())
}

/// `Z`: first row `A₁`, rows `2..m` all equal to `x`.
pub fn build_z(spec: &SetSpec, x: &BitString) -> Result<BinaryMatrix> {
    let candidate = assess_candidate(spec, x)?;
    if let Some(reason) = candidate.rejection() {
        return Err(Error::InvalidArgument(reason));
    }
    let mut rows = vec![anchor_row(spec)];
    rows.extend(std::iter::repeat_n(x.clone(), spec.m() - 1));
    BinaryMatrix::new(&rows)
}

/// Runs the set verifier over `L(m×n) ∪ {Z}`; `Z` is the last index.
pub fn verify_expansion(spec: &SetSpec, x: &BitString, limits: &Limits) -> Result<VerifyReport> {
    let z = build_z(spec, x)?;
    let mut all = MatrixSet::new(spec, limits)?.to_vec(limits)?;
    all.push(z);
    verify_set(&all, false)
}

/// Expansion strings available for one anchor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchorSurvey {
    pub anchor: DyckWord,
    pub first_row: BitString,
    pub candidates: usize,
    pub first_candidate: Option<BitString>,
}

/// Runs [`find_expansion_strings`] for every admissible anchor of width `n`.
pub fn survey_anchors(n: usize, limits: &Limits) -> Result<Vec<AnchorSurvey>> {
    all_anchors(n, limits)?
        .into_iter()
        .map(|anchor| {
            let spec = SetSpec::new(2, n, anchor.clone())?;
            let found = find_expansion_strings(&spec, limits)?;
            Ok(AnchorSurvey {
                first_row: anchor_row(&spec),
                candidates: found.len(),
                first_candidate: found.into_iter().next(),
                anchor,
            })
        })
        .collect()
}
