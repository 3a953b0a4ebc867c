//! Cesàro means and the ergodic diagnostics built on them.
//!
//! The engine keeps `Tⁿx` and `Σ_{k<n} Tᵏx` as it goes, so a whole
//! schedule of means costs one pass. Orbits of the ladder graphs are
//! additionally available in closed form, which gives an independent route
//! to the same norms.

mod engine;
mod fixed_space;
mod handle;
mod orbit_means;
mod witness;

pub use engine::{
    cesaro_apply, cesaro_apply_budgeted, cesaro_trace, power_mean_ergodic_check, scalar_rotation_check, Budget,
    CesaroRecord, CesaroSweep, CesaroTrace, CheckOutcome, CheckValue, Rotation, ROTATION_MODULUS_TOLERANCE,
};
pub use orbit_means::{
    ladder_cesaro_mean, ladder_power_mean, ladder_rotation_mean, ladder_rotation_mean_float, orbit_mean_summary,
    MeanScalar, OrbitMeanSummary,
};
pub use fixed_space::{
    certify_fixed_space, fixed_space_certificate, ladder_fixed_space_problem, Conclusion, FixedSpaceCertificate,
    FixedSpaceProblem, InfiniteChain, Step, DEFAULT_COPIES, DEFAULT_TOP_SPAN,
};
pub use handle::{block_handle, graph_handle, OperatorHandle};
pub use witness::{renorm_estimate, weak_compactness_witness, WitnessMatrix};
