//! Fixtures shared by the benchmarks.

use ergolab::{power_apply, C0Graph, LadderFamilyGraph, LadderVertex, SparseVector};

/// `Tⁿ e_entry`, a realistic input for single-step benchmarks.
pub fn entry_state(g: &LadderFamilyGraph, n: u64) -> SparseVector<LadderVertex> {
    power_apply(g, &SparseVector::unit(g.entry_vertex()), n)
}

/// Unit vectors on the first `count` vertices of the enumeration.
pub fn unit_inputs(g: &LadderFamilyGraph, count: u64) -> Vec<SparseVector<LadderVertex>> {
    g.truncation(count).into_iter().map(SparseVector::unit).collect()
}
