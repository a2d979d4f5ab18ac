//! Resource limits shared by the sweeping operations.
//!
//! Limits exist to refuse absurd requests up front with a typed error rather
//! than grinding for hours or exhausting memory. Defaults are sized so that
//! every supported verification tier runs comfortably within them.

use crate::field::DEFAULT_TABLE_ELEMS;

/// Caps applied before any sweep or table construction starts.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Maximum field size p^n for building the exp/log/trace tables.
    pub max_table_elems: u64,
    /// Maximum bytes for one transform working grid (p^{n+1} count cells).
    pub max_grid_bytes: u64,
    /// Rough cap on a sweep's total inner-loop operations.
    pub max_sweep_ops: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_elems: DEFAULT_TABLE_ELEMS,
            // One working grid plus the per-channel result grids; 1 GiB is
            // far beyond any supported tier (the largest tier uses ~10 KiB).
            max_grid_bytes: 1 << 30,
            // Largest supported sweep is the even-d transform pass at about
            // 2^37 cell operations; the cap leaves headroom above it while
            // refusing runs that would take days.
            max_sweep_ops: 1 << 39,
        }
    }
}

impl Limits {
    /// Derive the table-element cap from a byte budget for the field tables.
    pub fn with_table_bytes(mut self, bytes: u64) -> Self {
        self.max_table_elems = bytes / crate::field::TABLE_BYTES_PER_ELEMENT;
        self
    }
}
