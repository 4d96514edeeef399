//! The sets, maps and copulas used as reference examples throughout.

use crate::copula::{CopulaSpec, MapPiece, PiecewiseMap, ShuffleOfMin, ShufflePiece};
use crate::scalar::{int, rat};
use crate::setmodel::Tag;
use crate::{Piece, PieceSet};

fn seg(a: [(i64, i64); 2], b: [(i64, i64); 2], tag: Tag) -> Piece {
    Piece::segment(vec![rat(a[0].0, a[0].1), rat(a[1].0, a[1].1)], vec![rat(b[0].0, b[0].1), rat(b[1].0, b[1].1)], tag)
        .expect("fixture segment")
}

/// Diagonal (Full) and anti-diagonal (Null): the graph of `x` on irrationals,
/// `1 - x` on rationals.
pub fn fig1() -> PieceSet {
    PieceSet::new(2, vec![seg([(0, 1), (0, 1)], [(1, 1), (1, 1)], Tag::Full), seg([(0, 1), (1, 1)], [(1, 1), (0, 1)], Tag::Null)])
        .expect("fig1")
}

/// A set that is not a copula support: its vertical and horizontal parts are
/// isolated inside their lines.
pub fn fig2() -> PieceSet {
    PieceSet::new(
        2,
        vec![
            seg([(0, 1), (1, 1)], [(1, 2), (1, 2)], Tag::Full),
            seg([(1, 2), (0, 1)], [(1, 2), (1, 2)], Tag::Full),
            seg([(1, 2), (1, 2)], [(1, 1), (1, 2)], Tag::Full),
        ],
    )
    .expect("fig2")
}

/// Support of a three-piece shuffle of Min, canonical.
pub fn fig3() -> PieceSet {
    PieceSet::new(
        2,
        vec![
            seg([(0, 1), (4, 5)], [(1, 5), (1, 1)], Tag::Full),
            seg([(1, 5), (1, 2)], [(7, 10), (0, 1)], Tag::Full),
            seg([(7, 10), (1, 2)], [(1, 1), (4, 5)], Tag::Full),
        ],
    )
    .expect("fig3")
    .canonicalize()
}

/// Main diagonal of the square.
pub fn m2() -> PieceSet {
    PieceSet::new(2, vec![seg([(0, 1), (0, 1)], [(1, 1), (1, 1)], Tag::Full)]).expect("m2")
}

/// Main diagonal of the cube.
pub fn m3() -> PieceSet {
    PieceSet::new(3, vec![Piece::segment(vec![int(0); 3], vec![int(1); 3], Tag::Full).expect("m3")]).expect("m3")
}

pub fn fig3_shuffle() -> ShuffleOfMin {
    ShuffleOfMin::new(vec![
        ShufflePiece::new((int(0), rat(1, 5)), (rat(4, 5), int(1)), 1),
        ShufflePiece::new((rat(1, 5), rat(7, 10)), (int(0), rat(1, 2)), -1),
        ShufflePiece::new((rat(7, 10), int(1)), (rat(1, 2), rat(4, 5)), 1),
    ])
    .expect("fig3 shuffle")
}

/// `x` almost everywhere, `1 - x` on a dense null set.
pub fn example_map() -> PiecewiseMap {
    PiecewiseMap::new(
        1,
        1,
        vec![
            MapPiece { domain: vec![(int(0), int(1))], tag: Tag::Full, coeffs: vec![vec![int(0), int(1)]] },
            MapPiece { domain: vec![(int(0), int(1))], tag: Tag::Null, coeffs: vec![vec![int(1), int(-1)]] },
        ],
    )
    .expect("example map")
}

/// `F(x, y) = y/2` for `x <= 1/2` and `3/2 - x` for `x >= 1/2`.
pub fn two_to_one_map() -> PiecewiseMap {
    PiecewiseMap::new(
        2,
        1,
        vec![
            MapPiece {
                domain: vec![(int(0), rat(1, 2)), (int(0), int(1))],
                tag: Tag::Full,
                coeffs: vec![vec![int(0), int(0), rat(1, 2)]],
            },
            MapPiece {
                domain: vec![(rat(1, 2), int(1)), (int(0), int(1))],
                tag: Tag::Full,
                coeffs: vec![vec![rat(3, 2), int(-1), int(0)]],
            },
        ],
    )
    .expect("2->1 map")
}

pub fn example_copula() -> CopulaSpec {
    CopulaSpec::bipartite(example_map()).expect("example copula")
}

pub fn two_to_one_copula() -> CopulaSpec {
    CopulaSpec::bipartite(two_to_one_map()).expect("2->1 copula")
}

/// `max(u + v + w - 2, 0)`: grounded with uniform margins but not 3-increasing.
pub fn w3_raw() -> CopulaSpec {
    CopulaSpec::raw(3, "max(u+v+w-2,0)", |u| (u[0] + u[1] + u[2] - 2.0).max(0.0)).expect("w3")
}
