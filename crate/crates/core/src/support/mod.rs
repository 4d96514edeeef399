//! Supports of copulas: exact formulas, sampled estimates and the necessary
//! conditions every support satisfies.

pub mod estimate;
pub mod exact;
pub mod hyperplane;

pub use estimate::{
    box_counting_dimension, check_one_essential_closedness, check_one_essential_closedness_grid, support_estimate,
    ClosednessReport, DimensionEstimate, DimensionSource, Residual, SupportEstimate, DEFAULT_MIN_COUNT,
};
pub use exact::{extract_function_from_support, hypergraph, permuted_support, support_bipartite_exact, support_exact};
pub use hyperplane::{check_hyperplane_condition, HyperplaneViolation};
