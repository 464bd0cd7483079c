//! Fixtures shared by the benches.

use selfdual_core::tables;
use selfdual_core::{Family, StackedCode};

/// Builds a tabulated code by family and parameters.
pub fn code(table: &str, family: Family, n: usize, k: usize, d: usize) -> StackedCode {
    tables::table(table)
        .find(|e| e.family == family && e.n == n && e.k == k && e.d == d)
        .and_then(|e| e.spec().ok())
        .and_then(|s| s.build().ok())
        .unwrap_or_else(|| panic!("no fixture {table} [[{n},{k},{d}]]"))
}
