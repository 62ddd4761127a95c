//! Shared fixtures for the criterion benches.

use dyckmat::{BinaryMatrix, Limits, MatrixSet, SetSpec};

/// The full set `L(m×n)` with the default anchor.
pub fn default_set(m: usize, n: usize) -> Vec<BinaryMatrix> {
    let spec = SetSpec::with_default_anchor(m, n).expect("valid dimensions");
    let limits = Limits::default();
    MatrixSet::new(&spec, &limits)
        .and_then(|set| set.to_vec(&limits))
        .expect("set fits the default guard")
}
