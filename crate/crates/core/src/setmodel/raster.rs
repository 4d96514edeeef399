//! Closed-cell rasterization of symbolic sets and sample clouds.
//!
//! A cell is occupied when its closed box meets the closed piece, so a cell
//! touching a piece in a single corner point counts. Null pieces rasterize like
//! Full ones since they are dense in their patch.

use std::collections::BTreeSet;

use super::cloud::{cell_index, SampleCloud};
use super::grid::DyadicGridSet;
use super::piece::AffinePiece;
use super::pieceset::TaggedPieceSet;
use crate::error::{input, Result};
use crate::linalg::rank;
use crate::polygon::Polygon;
use crate::scalar::{pmax, pmin, Scalar};

/// Indices of the closed cells along one axis that contain coordinate `x`.
fn axis_cells<T: Scalar>(x: &T, side: u32) -> Vec<u32> {
    let q = x.clone() * T::from_u32(side).expect("side fits");
    let f = q.floor_int();
    let mut out = Vec::with_capacity(2);
    if q.is_integral() && f >= 1 && f - 1 < side as i64 {
        out.push((f - 1) as u32);
    }
    if f >= 0 && f < side as i64 {
        out.push(f as u32);
    }
    out
}

fn point_cells<T: Scalar>(x: &[T], grid: &mut DyadicGridSet) {
    let per_axis: Vec<Vec<u32>> = x.iter().map(|c| axis_cells(c, grid.side())).collect();
    let mut cur = vec![0u32; x.len()];
    fn rec(per_axis: &[Vec<u32>], axis: usize, cur: &mut Vec<u32>, grid: &mut DyadicGridSet) {
        if axis == per_axis.len() {
            grid.insert(cur);
            return;
        }
        for &i in &per_axis[axis] {
            cur[axis] = i;
            rec(per_axis, axis + 1, cur, grid);
        }
    }
    rec(&per_axis, 0, &mut cur, grid);
}

/// Segment: the set of cells containing `x(t)` only changes where a coordinate
/// crosses a grid line, so evaluating at every crossing and at the midpoints
/// between consecutive crossings covers every case exactly.
fn segment_cells<T: Scalar>(piece: &AffinePiece<T>, grid: &mut DyadicGridSet) {
    let anchor = piece.anchor();
    let dir = &piece.dirs()[0];
    let side = grid.side();
    let m = T::from_u32(side).expect("side fits");
    let mut ts: Vec<T> = vec![T::zero(), T::one()];
    for (a, v) in anchor.iter().zip(dir) {
        if v.is_zero() {
            continue;
        }
        let end = a.clone() + v.clone();
        let (lo, hi) = (pmin(a, &end), pmax(a, &end));
        let i0 = (lo * m.clone()).floor_int().max(0);
        let i1 = (hi * m.clone()).floor_int().min(side as i64);
        for i in i0..=i1 {
            let line = T::from_i64(i).expect("index fits") / m.clone();
            let t = (line - a.clone()) / v.clone();
            if t >= T::zero() && t <= T::one() {
                ts.push(t);
            }
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ts.dedup();
    let mut probes = Vec::with_capacity(2 * ts.len());
    for w in ts.windows(2) {
        probes.push(w[0].clone());
        probes.push((w[0].clone() + w[1].clone()) * T::half());
    }
    probes.push(ts.last().expect("nonempty").clone());
    for t in probes {
        point_cells(&piece.point_at(&[t]), grid);
    }
}

/// Planar piece: pick two axes onto which it projects bijectively and walk the
/// columns of that projection. In each column the piece is a convex polygon;
/// any remaining coordinate is affine on it, so the occupied cells along the
/// remaining axis form the contiguous range between its extremes.
fn plane_cells<T: Scalar>(piece: &AffinePiece<T>, grid: &mut DyadicGridSet) {
    let k = piece.k();
    let side = grid.side();
    let m = T::from_u32(side).expect("side fits");
    let dirs = piece.dirs();
    let (ax, bx) = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .find(|&(a, b)| {
            let sub: Vec<Vec<T>> = dirs.iter().map(|d| vec![d[a].clone(), d[b].clone()]).collect();
            rank(&sub) == 2
        })
        .expect("planar piece has a rank-2 coordinate pair");
    let rest: Option<usize> = (0..k).find(|&c| c != ax && c != bx);
    let (alo, ahi) = piece.coord_range(ax);
    let (blo, bhi) = piece.coord_range(bx);
    let cell_range = |lo: &T, hi: &T| -> (i64, i64) {
        let l = (lo.clone() * m.clone()).floor_int();
        let l = if (lo.clone() * m.clone()).is_integral() { l - 1 } else { l };
        let h = (hi.clone() * m.clone()).floor_int();
        (l.max(0), h.min(side as i64 - 1))
    };
    let (ia0, ia1) = cell_range(&alo, &ahi);
    let (ib0, ib1) = cell_range(&blo, &bhi);
    let (a0, [da1, da2]) = (piece.anchor()[ax].clone(), [dirs[0][ax].clone(), dirs[1][ax].clone()]);
    let (b0, [db1, db2]) = (piece.anchor()[bx].clone(), [dirs[0][bx].clone(), dirs[1][bx].clone()]);
    let params = piece.param_box();
    let base = Polygon::rect(
        params[0].0.clone(),
        params[0].1.clone(),
        params[1].0.clone(),
        params[1].1.clone(),
    );
    for ia in ia0..=ia1 {
        let lo = T::from_i64(ia).expect("fits") / m.clone();
        let hi = T::from_i64(ia + 1).expect("fits") / m.clone();
        // lo <= a0 + s*da1 + t*da2 <= hi
        let col = base
            .clip(&da1, &da2, &(a0.clone() - lo))
            .clip(&-da1.clone(), &-da2.clone(), &(hi - a0.clone()));
        if col.is_empty() {
            continue;
        }
        for ib in ib0..=ib1 {
            let lo = T::from_i64(ib).expect("fits") / m.clone();
            let hi = T::from_i64(ib + 1).expect("fits") / m.clone();
            let poly = col
                .clip(&db1, &db2, &(b0.clone() - lo))
                .clip(&-db1.clone(), &-db2.clone(), &(hi - b0.clone()));
            if poly.is_empty() {
                continue;
            }
            let mut cell = vec![0u32; k];
            cell[ax] = ia as u32;
            cell[bx] = ib as u32;
            match rest {
                None => grid.insert(&cell),
                Some(c) => {
                    let vals: Vec<T> = poly
                        .vertices
                        .iter()
                        .map(|v| piece.point_at(&[v[0].clone(), v[1].clone()])[c].clone())
                        .collect();
                    let mut lo = vals[0].clone();
                    let mut hi = vals[0].clone();
                    for v in &vals[1..] {
                        lo = pmin(&lo, v);
                        hi = pmax(&hi, v);
                    }
                    let (ic0, ic1) = cell_range(&lo, &hi);
                    for ic in ic0..=ic1 {
                        cell[c] = ic as u32;
                        grid.insert(&cell);
                    }
                }
            }
        }
    }
}

pub fn rasterize_piece<T: Scalar>(piece: &AffinePiece<T>, grid: &mut DyadicGridSet) {
    match piece.p() {
        0 => point_cells(piece.anchor(), grid),
        1 => segment_cells(piece, grid),
        _ => plane_cells(piece, grid),
    }
}

/// Cells of level `level` whose closed box meets the set.
pub fn rasterize_set<T: Scalar>(set: &TaggedPieceSet<T>, level: u32) -> Result<DyadicGridSet> {
    let mut grid = DyadicGridSet::empty(set.k(), level)?;
    for piece in set.pieces() {
        rasterize_piece(piece, &mut grid);
    }
    Ok(grid)
}

/// Cells containing at least one point of the cloud (grid-line points go to the
/// lower-index cell).
pub fn rasterize_cloud(cloud: &SampleCloud, level: u32) -> Result<DyadicGridSet> {
    count_cells(cloud, level, 1)
}

/// Cells containing at least `min_count` points.
pub fn count_cells(cloud: &SampleCloud, level: u32, min_count: usize) -> Result<DyadicGridSet> {
    if min_count == 0 {
        return input("min_count must be at least 1");
    }
    let grid = DyadicGridSet::empty(cloud.k(), level)?;
    let side = grid.side();
    let mut counts: std::collections::BTreeMap<u64, usize> = std::collections::BTreeMap::new();
    for p in cloud.points() {
        let cell: Vec<u32> = p.iter().map(|&x| cell_index(x, side)).collect();
        *counts.entry(grid.pack(&cell)).or_default() += 1;
    }
    let keys: BTreeSet<u64> = counts
        .into_iter()
        .filter(|&(_, n)| n >= min_count)
        .map(|(k, _)| k)
        .collect();
    Ok(grid.with_keys(keys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};
    use crate::setmodel::piece::Tag;

    type P = AffinePiece<Rational>;

    fn set(k: usize, pieces: Vec<P>) -> TaggedPieceSet<Rational> {
        TaggedPieceSet::new(k, pieces).unwrap()
    }

    #[test]
    fn diagonal_touches_corner_cells() {
        let diag = P::segment(vec![int(0), int(0)], vec![int(1), int(1)], Tag::Full).unwrap();
        let g = rasterize_set(&set(2, vec![diag]), 1).unwrap();
        // Off-diagonal cells meet the segment only at (1/2, 1/2); the corner rule keeps them.
        assert_eq!(g.len(), 4);
        let g = rasterize_set(&set(2, vec![P::segment(vec![int(0), int(0)], vec![int(1), int(1)], Tag::Null).unwrap()]), 3).unwrap();
        assert_eq!(g.len(), 3 * 8 - 2);
    }

    #[test]
    fn point_on_grid_corner_hits_four_cells() {
        let p = P::point(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let g = rasterize_set(&set(2, vec![p]), 1).unwrap();
        assert_eq!(g, DyadicGridSet::full(2, 1).unwrap());
        let p = P::point(vec![rat(1, 3), rat(1, 3)]).unwrap();
        assert_eq!(rasterize_set(&set(2, vec![p]), 1).unwrap().len(), 1);
    }

    #[test]
    fn cloud_cells() {
        let c = SampleCloud::from_points(2, 0, &[vec![0.1, 0.9]]).unwrap();
        let g = rasterize_cloud(&c, 1).unwrap();
        assert_eq!(g.cells().collect::<Vec<_>>(), vec![vec![0, 1]]);
        assert!(count_cells(&c, 1, 2).unwrap().is_empty());
        assert!(count_cells(&c, 1, 0).is_err());
    }

    #[test]
    fn full_square_fills_grid() {
        let sq = P::rect(int(0), int(1), int(0), int(1), Tag::Full).unwrap();
        assert_eq!(rasterize_set(&set(2, vec![sq]), 3).unwrap(), DyadicGridSet::full(2, 3).unwrap());
    }

    #[test]
    fn small_box_with_corner_touch() {
        // [0, 1/8]^2 at level 3 is exactly cell (0,0) plus the cells it touches.
        let b = P::rect(int(0), rat(1, 8), int(0), rat(1, 8), Tag::Full).unwrap();
        let g = rasterize_set(&set(2, vec![b]), 3).unwrap();
        assert_eq!(g.cells().collect::<Vec<_>>(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn plane_in_three_dimensions() {
        // z = x over the unit square in (x, y): every (ix, iy) column gets iz in {ix-1, ix, ix+1}.
        let plane = P::parallelogram(
            vec![int(0), int(0), int(0)],
            vec![int(1), int(0), int(1)],
            vec![int(0), int(1), int(0)],
            Tag::Full,
        )
        .unwrap();
        let g = rasterize_set(&set(3, vec![plane]), 2).unwrap();
        for c in g.cells() {
            assert!((c[2] as i64 - c[0] as i64).abs() <= 1, "{c:?}");
        }
        assert_eq!(g.len(), 4 * (3 * 4 - 2));
    }

    #[test]
    fn brute_force_agrees_on_segments() {
        // Oracle: a closed box meets a closed segment iff the parameter intervals
        // where each coordinate lies in the box's range have a common point.
        let seg = P::segment(vec![rat(1, 10), rat(4, 5)], vec![rat(7, 10), rat(1, 5)], Tag::Full).unwrap();
        let level = 3;
        let g = rasterize_set(&set(2, vec![seg.clone()]), level).unwrap();
        let m = 8i64;
        let mut expect = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let mut lo = int(0);
                let mut hi = int(1);
                for (axis, idx) in [(0usize, i), (1usize, j)] {
                    let a = seg.anchor()[axis].clone();
                    let v = seg.dirs()[0][axis].clone();
                    let (c0, c1) = (rat(idx, m), rat(idx + 1, m));
                    let (t0, t1) = ((c0 - a.clone()) / v.clone(), (c1 - a) / v);
                    let (t0, t1) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
                    lo = pmax(&lo, &t0);
                    hi = pmin(&hi, &t1);
                }
                if lo <= hi {
                    expect.push(vec![i as u32, j as u32]);
                }
            }
        }
        assert_eq!(g.cells().collect::<Vec<_>>(), expect);
    }
}
