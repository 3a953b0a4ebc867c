//! Exact-arithmetic operators on sequence spaces: weighted graphs acting on
//! `c0`, the ladder-family counterexamples built from them, a block-diagonal
//! operator on `ℓ∞`, and Cesàro-mean diagnostics for all of them.

mod error;
pub mod blockdiag;
pub mod ergodic;
pub mod geometric;
pub mod graphop;
pub mod ladder;
pub mod rational;
pub mod sparse;

pub use error::{Error, Result};
pub use geometric::{cesaro_geometric, cesaro_geometric_sum};
pub use graphop::{
    apply, apply_adjoint, count_paths_to, enumerate_paths, operator_norm_truncated, power_apply,
    power_norm_truncated, verify_c0_conditions, C0Graph, C0Report, ExplicitGraph, Path, PathCount,
};
pub use ladder::{
    bottom_weight, enumerate_vertex, index_of_vertex, make_counterexample, make_g0, make_gk, orbit_predicate,
    rung_position, EntryOrbit, LadderFamilyGraph, LadderKind, LadderVertex,
};
pub use rational::Rational;
pub use sparse::SparseVector;
pub use blockdiag::{
    b_coeff, block_cesaro, multiplication_fixed_check, sup_deviation, t_block, witness_apply, Block2x2, BlockOperator,
};
pub use ergodic::{
    cesaro_apply, cesaro_trace, fixed_space_certificate, graph_handle, power_mean_ergodic_check, renorm_estimate,
    scalar_rotation_check, weak_compactness_witness, Budget, CesaroTrace, Conclusion, FixedSpaceCertificate,
    OperatorHandle, Rotation,
};
