//! Copula families, exact C-volumes, axiom checks, sampling and the
//! piecewise maps behind bipartite dependence.

pub mod axioms;
pub mod piecewise;
pub mod sample;
pub mod shuffle;
pub mod spec;

pub use axioms::{check_copula_axioms, check_slab_margins, AxiomReport, BoxCheck, PointCheck, SlabReport};
pub use piecewise::{essential_refinement, validate_measure_preserving, MapPiece, MeasurePreservation, PiecewiseMap};
pub use sample::sample_copula;
pub use shuffle::{ShuffleOfMin, ShufflePiece};
pub use spec::{CopulaSpec, RawFn, Volume, ADMISSION_LEVEL};
