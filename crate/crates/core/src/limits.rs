/// Guards on exhaustive work.
///
/// Every enumeration in the crate is exponential in some parameter, so each
/// entry point checks the relevant bound before doing any work and fails with
/// [`Error::ResourceLimit`](crate::Error::ResourceLimit) instead of running away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Longest Dyck word length `enumerate_dyck` will list.
    pub max_word_len: usize,
    /// Largest matrix set `enumerate_set` will produce.
    pub max_set_size: u128,
    /// Longest string length the `2^n` scans in `expand` will sweep.
    pub max_scan_len: usize,
}

impl Limits {
    pub const DEFAULT_MAX_WORD_LEN: usize = 32;
    pub const DEFAULT_MAX_SET_SIZE: u128 = 1_000_000;
    pub const DEFAULT_MAX_SCAN_LEN: usize = 24;

    pub fn with_max_set_size(mut self, size: u128) -> Self {
        self.max_set_size = size;
        self
    }

    pub fn with_max_word_len(mut self, len: usize) -> Self {
        self.max_word_len = len;
        self
    }

    pub fn with_max_scan_len(mut self, len: usize) -> Self {
        self.max_scan_len = len;
        self
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_word_len: Self::DEFAULT_MAX_WORD_LEN,
            max_set_size: Self::DEFAULT_MAX_SET_SIZE,
            max_scan_len: Self::DEFAULT_MAX_SCAN_LEN,
        }
    }
}
