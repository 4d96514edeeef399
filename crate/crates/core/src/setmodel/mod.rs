//! Subsets of the unit cube: exact tagged pieces, dyadic grids, sample clouds.

pub mod axis;
pub mod cloud;
pub mod grid;
pub mod piece;
pub mod pieceset;
pub mod raster;

pub use axis::{AxisSet, Permutation};
pub use cloud::SampleCloud;
pub use grid::DyadicGridSet;
pub use piece::{AffinePiece, Tag};
pub use pieceset::TaggedPieceSet;
pub use raster::{count_cells, rasterize_cloud, rasterize_piece, rasterize_set};
