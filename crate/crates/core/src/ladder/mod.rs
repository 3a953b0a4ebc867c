//! The ladder graph `G_0`, its truncated copies `G_k`, and the combined
//! graph in which a source feeds the entries of all copies.
//!
//! `G_0` has a top chain `o → s_1 → s_2 → …`, rungs `s_n → t_{j(n)}` of
//! weight `1/2`, and a bottom chain `… → t_2 → t_1 → v` whose weights make
//! every `o → v` path weigh exactly `1`. The `n`-th such path has length
//! `2^{n+1} − 1`.

mod depth;
mod graph;
mod orbit;
mod vertex;

pub use depth::{bottom_weight, rung_position, Depth};
pub use graph::{make_counterexample, make_g0, make_gk, LadderFamilyGraph, LadderKind};
pub use orbit::{orbit_predicate, EntryOrbit};
pub use vertex::{enumerate_copy_vertex, enumerate_vertex, index_of_copy_vertex, index_of_vertex, LadderVertex};
