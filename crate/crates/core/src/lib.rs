//! Non-overlapping binary matrices built from Dyck words.
//!
//! A set `L(m×n)` fixes a type-α Dyck word as the first row of every matrix
//! and fills the remaining rows from a small menu of Dyck-word-derived row
//! types. No two matrices of the set, and no matrix with itself, can be slid
//! over one another so that the overlapping cells agree.
//!
//! The crate is organized as:
//!
//! * [`words`]: bit strings, Dyck words, Catalan numbers, 1D overlap tests
//! * [`setgen`]: row classification and construction of `L(m×n)`
//! * [`overlap`]: the exhaustive sliding-window oracle and set verifier
//! * [`census`]: closed-form sizes and the reference table
//! * [`expand`]: search for strings that enlarge a set by one matrix

pub mod census;
pub mod error;
pub mod expand;
pub mod limits;
pub mod matrix;
pub mod overlap;
pub mod setgen;
pub mod words;

pub use census::{cardinality, cardinality_even, cardinality_odd, compare_orientations, cross_check, emit_table, CountReport};
pub use error::{Error, Result};
pub use expand::{build_z, find_compatible_rows, find_expansion_strings, verify_expansion};
pub use limits::Limits;
pub use matrix::BinaryMatrix;
pub use overlap::{matrices_non_overlapping, overlap_at, verify_set, Offset, OverlapWitness, VerifyReport, WitnessKind};
pub use setgen::{
    anchor_row, classify_row, enumerate_set, last_row_choices, middle_row_choices, unrank, validate_member, MatrixSet,
    Membership, Parity, RowKind, SetSpec,
};
pub use words::{
    catalan, enumerate_dyck, is_dyck, is_self_non_overlapping, is_type_alpha, strings_overlap, type_alpha_from,
    BitString, DyckWord,
};
