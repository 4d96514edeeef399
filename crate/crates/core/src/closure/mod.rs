//! The d-essential closure operator, exact and on grids, and its property suite.

pub mod exact;
pub mod grid;
pub mod props;

pub use exact::{
    closure_of_interior, empty_closure_criterion, essential_closure_exact, full_rank_axes,
    is_essentially_closed, topological_closure, EmptinessReport,
};
pub use grid::{essential_closure_grid, GridClosureParams};
pub use props::{check_properties, random_corpus, run_corpus, CorpusSummary, Property, PropertyReport, Verdict, Witness};
