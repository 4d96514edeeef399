//! Essential closures of finite unions of affine pieces in [0,1]^k, their grid
//! approximation, and supports of multivariate copulas.

pub mod closure;
pub mod copula;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod linalg;
pub mod polygon;
pub mod scalar;
pub mod setmodel;
pub mod support;

pub use error::{Error, Result};
pub use scalar::{parse_rational, rat, Rational, Scalar};
pub use setmodel::{AxisSet, DyadicGridSet, Permutation, SampleCloud, Tag};

pub type Piece = setmodel::AffinePiece<Rational>;
pub type PieceSet = setmodel::TaggedPieceSet<Rational>;
pub type PieceSetF64 = setmodel::TaggedPieceSet<f64>;
