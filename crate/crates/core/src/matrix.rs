use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::words::{low_mask, BitString};

/// Widest row a [`BinaryMatrix`] can hold; rows are packed into one `u64`.
pub const MAX_COLS: usize = 64;

/// An `m × n` grid of bits.
///
/// Rows are stored packed, column 1 in the most significant of the `n` used
/// bits, so window comparisons reduce to a shift and a mask per row. The
/// observable contract is still entry-wise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<u64>,
}

impl BinaryMatrix {
    pub fn new(rows: &[BitString]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::invalid("a matrix needs at least one row"));
        };
        let cols = first.len();
        if cols == 0 || cols > MAX_COLS {
            return Err(Error::invalid(format!("row length must be in 1..={MAX_COLS}, got {cols}")));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::invalid(format!(
                "row {} has length {}, expected {cols}",
                i + 1,
                r.len()
            )));
        }
        let rows = rows.iter().map(|r| r.to_packed().expect("checked width")).collect();
        Ok(BinaryMatrix { cols, rows })
    }

    /// Builds from packed rows; bits above `cols` must be clear.
    pub fn from_packed(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if rows.is_empty() || cols == 0 || cols > MAX_COLS {
            return Err(Error::invalid("matrix dimensions out of range"));
        }
        if rows.iter().any(|&r| r & !low_mask(cols) != 0) {
            return Err(Error::invalid("packed row wider than the column count"));
        }
        Ok(BinaryMatrix { cols, rows })
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols)
    }

    pub fn packed_rows(&self) -> &[u64] {
        &self.rows
    }

    /// Row `i`, zero-based.
    pub fn row(&self, i: usize) -> BitString {
        BitString::from_packed(self.rows[i], self.cols)
    }

    pub fn rows(&self) -> impl Iterator<Item = BitString> + '_ {
        (0..self.rows.len()).map(|i| self.row(i))
    }

    /// Entry at zero-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> (self.cols - 1 - j)) & 1 == 1
    }

    /// A copy with row `i` (zero-based) replaced.
    pub fn with_row(&self, i: usize, row: &BitString) -> Result<Self> {
        if row.len() != self.cols {
            return Err(Error::invalid(format!(
                "replacement row has length {}, expected {}",
                row.len(),
                self.cols
            )));
        }
        if i >= self.rows.len() {
            return Err(Error::invalid(format!("row index {i} out of range")));
        }
        let mut out = self.clone();
        out.rows[i] = row.to_packed().expect("checked width");
        Ok(out)
    }

    pub fn transpose(&self) -> Result<Self> {
        let (m, n) = self.dims();
        if m > MAX_COLS {
            return Err(Error::invalid(format!("cannot transpose: {m} rows exceed {MAX_COLS}")));
        }
        let rows = (0..n)
            .map(|j| (0..m).fold(0u64, |acc, i| (acc << 1) | self.get(i, j) as u64))
            .collect();
        Ok(BinaryMatrix { cols: m, rows })
    }

    /// The text form: one line of `0`/`1` per row, each newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows.len() * (self.cols + 1));
        for row in self.rows() {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text form. Blank lines are not allowed inside a matrix.
    pub fn from_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(|l| l.trim_end_matches('\r').parse::<BitString>())
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().any(BitString::is_empty) {
            return Err(Error::invalid("empty line inside matrix text"));
        }
        BinaryMatrix::new(&rows)
    }

    /// Splits a stream of matrices separated by single blank lines.
    pub fn parse_stream(text: &str) -> Result<Vec<Self>> {
        text.split("\n\n")
            .filter(|chunk| !chunk.trim().is_empty())
            .map(BinaryMatrix::from_text)
            .collect()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows().map(|r| r.to_string())).finish()
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BinaryMatrix::from_text(s)
    }
}
