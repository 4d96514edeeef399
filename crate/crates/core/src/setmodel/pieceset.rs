//! Finite unions of tagged affine pieces, the exact set representation.

use std::cmp::Ordering;

use super::axis::{AxisSet, Permutation};
use super::piece::{AffinePiece, Tag, MAX_SYMBOLIC_DIM};
use crate::error::{input, Result};
use crate::linalg::{add, rank, scale, solve_in_span, sub};
use crate::polygon::{union_area, Polygon};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TaggedPieceSet<T> {
    k: usize,
    pieces: Vec<AffinePiece<T>>,
}

/// Can a piece tagged `by` help cover a piece tagged `target`?
fn eligible(target: Tag, by: Tag) -> bool {
    target == Tag::Null || by == Tag::Full
}

/// Canonical description of a line: base point with zero leading coordinate and
/// a direction whose leading nonzero entry is 1. The line parameter is then the
/// value of coordinate `lead`.
struct Line<T> {
    base: Vec<T>,
    dir: Vec<T>,
    lead: usize,
}

impl<T: Scalar> Line<T> {
    fn of_segment(s: &AffinePiece<T>) -> Self {
        let v = &s.dirs()[0];
        let lead = v.iter().position(|x| !x.is_zero()).expect("segment has a direction");
        let dir = scale(v, &(T::one() / v[lead].clone()));
        let base = sub(s.anchor(), &scale(&dir, &s.anchor()[lead]));
        Line { base, dir, lead }
    }

    fn same(&self, other: &Line<T>) -> bool {
        self.dir == other.dir && self.base == other.base
    }

    fn at(&self, u: &T) -> Vec<T> {
        add(&self.base, &scale(&self.dir, u))
    }

    /// Interval of the line parameter covered by `piece`, when `piece` contains a
    /// subsegment of this line (collinear segments, planes containing the line).
    fn overlap(&self, piece: &AffinePiece<T>) -> Option<(T, T)> {
        match piece.p() {
            1 => {
                let other = Line::of_segment(piece);
                if !self.same(&other) {
                    return None;
                }
                Some(piece.coord_range(self.lead))
            }
            2 => {
                let s1 = solve_in_span(piece.dirs(), &self.dir)?;
                let s0 = solve_in_span(piece.dirs(), &sub(&self.base, piece.anchor()))?;
                let mut lo: Option<T> = None;
                let mut hi: Option<T> = None;
                for i in 0..2 {
                    let (blo, bhi) = &piece.param_box()[i];
                    // blo <= s0 + u*s1 <= bhi
                    if s1[i].is_zero() {
                        if s0[i] < *blo || s0[i] > *bhi {
                            return None;
                        }
                        continue;
                    }
                    let a = (blo.clone() - s0[i].clone()) / s1[i].clone();
                    let b = (bhi.clone() - s0[i].clone()) / s1[i].clone();
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    if lo.as_ref().map_or(true, |l| a > *l) {
                        lo = Some(a);
                    }
                    if hi.as_ref().map_or(true, |h| b < *h) {
                        hi = Some(b);
                    }
                }
                match (lo, hi) {
                    (Some(l), Some(h)) if l <= h => Some((l, h)),
                    _ => None,
                }
            }
            _ => None,
        }
    }
}

/// Sorted, merged union of closed intervals; abutting intervals are joined.
fn merge_intervals<T: Scalar>(mut ivs: Vec<(T, T)>) -> Vec<(T, T)> {
    ivs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut out: Vec<(T, T)> = Vec::new();
    for (lo, hi) in ivs {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

/// Closure of `[lo,hi]` minus the union of `cuts`, as positive-length intervals.
fn subtract_intervals<T: Scalar>(lo: &T, hi: &T, cuts: Vec<(T, T)>) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let mut cursor = lo.clone();
    for (a, b) in merge_intervals(cuts) {
        if b <= cursor {
            continue;
        }
        if a >= *hi {
            break;
        }
        if a > cursor {
            out.push((cursor.clone(), a.clone()));
        }
        cursor = b;
        if cursor >= *hi {
            break;
        }
    }
    if cursor < *hi {
        out.push((cursor, hi.clone()));
    }
    out
}

fn intervals_cover<T: Scalar>(lo: &T, hi: &T, ivs: Vec<(T, T)>) -> bool {
    if lo == hi {
        return ivs.iter().any(|(a, b)| a <= lo && lo <= b);
    }
    subtract_intervals(lo, hi, ivs).is_empty()
}

/// `piece` (normalized, p = 2) in the parameter frame of plane piece `frame`, if coplanar.
fn polygon_in_frame<T: Scalar>(frame: &AffinePiece<T>, piece: &AffinePiece<T>) -> Option<Polygon<T>> {
    for d in piece.dirs() {
        solve_in_span(frame.dirs(), d)?;
    }
    let corners = piece.corners();
    // corners are indexed by bitmask: 00, 10, 01, 11 -> loop 00, 10, 11, 01
    let order = [0usize, 1, 3, 2];
    let mut verts = Vec::with_capacity(4);
    for i in order {
        let c = frame.params_of(&corners[i])?;
        verts.push([c[0].clone(), c[1].clone()]);
    }
    Some(Polygon::new(verts))
}

impl<T: Scalar> TaggedPieceSet<T> {
    pub fn new(k: usize, pieces: Vec<AffinePiece<T>>) -> Result<Self> {
        if k == 0 || k > MAX_SYMBOLIC_DIM {
            return input(format!("symbolic sets need 1 <= k <= {MAX_SYMBOLIC_DIM}, got {k}"));
        }
        if let Some(p) = pieces.iter().find(|p| p.k() != k) {
            return input(format!("piece of dimension {} in a set of dimension {k}", p.k()));
        }
        Ok(TaggedPieceSet { k, pieces })
    }

    pub fn empty(k: usize) -> Self {
        TaggedPieceSet { k, pieces: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pieces(&self) -> &[AffinePiece<T>] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<AffinePiece<T>> {
        self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return input(format!("union of sets in dimensions {} and {}", self.k, other.k));
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Ok(TaggedPieceSet { k: self.k, pieces })
    }

    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        sigma.check_len(self.k)?;
        let pieces = self.pieces.iter().map(|p| p.permute(sigma)).collect::<Result<_>>()?;
        Ok(TaggedPieceSet { k: self.k, pieces })
    }

    fn normalized_pieces(&self) -> Vec<AffinePiece<T>> {
        self.pieces
            .iter()
            .map(|p| p.normalized().expect("valid piece normalizes"))
            .collect()
    }

    /// Normal form: every piece normalized, collinear segments of the same tag
    /// merged, parts of pieces already covered by other pieces removed (Null
    /// parts under Full ones, points on segments, segments inside planar
    /// pieces), duplicates dropped, pieces sorted.
    ///
    /// For sets made of points and segments the result is unique per point set.
    /// Planar pieces are deduplicated and dropped when covered by the others but
    /// are not re-tiled, so two different tilings of one planar region keep
    /// different forms; [`TaggedPieceSet::same_set`] decides equality in all cases.
    pub fn canonicalize(&self) -> Self {
        let mut points = Vec::new();
        let mut segments = Vec::new();
        let mut planes = Vec::new();
        for p in self.normalized_pieces() {
            match p.p() {
                0 => points.push(p),
                1 => segments.push(p),
                _ => planes.push(p),
            }
        }

        planes.sort_by(|a, b| a.cmp_key(b));
        planes.dedup();
        let mut i = 0;
        while i < planes.len() {
            let target = planes[i].clone();
            let others: Vec<_> = planes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            if Self::plane_covered(&target, &others) {
                planes.remove(i);
            } else {
                i += 1;
            }
        }

        // Group segments by (line, tag), merge, then trim covered parts.
        let mut groups: Vec<(Line<T>, Tag, Vec<(T, T)>)> = Vec::new();
        for s in &segments {
            let line = Line::of_segment(s);
            let iv = s.coord_range(line.lead);
            match groups.iter_mut().find(|(l, t, _)| *t == s.tag() && l.same(&line)) {
                Some(g) => g.2.push(iv),
                None => groups.push((line, s.tag(), vec![iv])),
            }
        }
        let merged: Vec<(Line<T>, Tag, Vec<(T, T)>)> = groups
            .into_iter()
            .map(|(l, t, ivs)| (l, t, merge_intervals(ivs)))
            .collect();
        let mut out_segments = Vec::new();
        for (line, tag, ivs) in &merged {
            let mut cuts = Vec::new();
            for plane in planes.iter().filter(|q| eligible(*tag, q.tag())) {
                if let Some(iv) = line.overlap(plane) {
                    cuts.push(iv);
                }
            }
            if *tag == Tag::Null {
                for (l2, t2, ivs2) in &merged {
                    if *t2 == Tag::Full && l2.same(line) {
                        cuts.extend(ivs2.iter().cloned());
                    }
                }
            }
            for (lo, hi) in ivs {
                for (a, b) in subtract_intervals(lo, hi, cuts.clone()) {
                    let start = line.at(&a);
                    let end = line.at(&b);
                    let seg = AffinePiece::segment(start, end, *tag)
                        .and_then(|s| s.normalized())
                        .expect("trimmed segment stays in the cube");
                    out_segments.push(seg);
                }
            }
        }

        points.sort_by(|a, b| a.cmp_key(b));
        points.dedup();
        points.retain(|pt| {
            !out_segments
                .iter()
                .chain(planes.iter())
                .any(|q| q.contains_point(pt.anchor()))
        });

        let mut pieces = points;
        pieces.extend(out_segments);
        pieces.extend(planes);
        pieces.sort_by(|a, b| a.cmp_key(b));
        pieces.dedup();
        TaggedPieceSet { k: self.k, pieces }
    }

    fn plane_covered(target: &AffinePiece<T>, others: &[AffinePiece<T>]) -> bool {
        let covers: Vec<Polygon<T>> = others
            .iter()
            .filter(|q| q.p() == 2 && eligible(target.tag(), q.tag()))
            .filter_map(|q| {
                // same plane: anchor offset must lie in the target's span too
                solve_in_span(target.dirs(), &sub(q.anchor(), target.anchor()))?;
                polygon_in_frame(target, q)
            })
            .collect();
        Polygon::rect(T::zero(), T::one(), T::zero(), T::one()).covered_by(&covers)
    }

    /// Whether the union of this set's pieces contains `piece` (as a point set,
    /// with Null pieces standing for their rational points).
    pub fn covers_piece(&self, piece: &AffinePiece<T>) -> bool {
        let target = piece.normalized().expect("valid piece normalizes");
        let pieces = self.normalized_pieces();
        match target.p() {
            0 => pieces.iter().any(|q| q.contains_point(target.anchor())),
            1 => {
                let line = Line::of_segment(&target);
                let (lo, hi) = target.coord_range(line.lead);
                let ivs: Vec<(T, T)> = pieces
                    .iter()
                    .filter(|q| eligible(target.tag(), q.tag()))
                    .filter_map(|q| line.overlap(q))
                    .collect();
                intervals_cover(&lo, &hi, ivs)
            }
            _ => Self::plane_covered(&target, &pieces),
        }
    }

    /// `other ⊆ self` as point sets.
    pub fn contains(&self, other: &Self) -> bool {
        self.k == other.k && other.pieces.iter().all(|p| self.covers_piece(p))
    }

    /// Point-set equality.
    pub fn same_set(&self, other: &Self) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// Pieces of `other` not covered by `self`; empty exactly when `other ⊆ self`.
    pub fn uncovered_pieces(&self, other: &Self) -> Vec<AffinePiece<T>> {
        other
            .pieces
            .iter()
            .filter(|p| !self.covers_piece(p))
            .cloned()
            .collect()
    }

    /// Lebesgue measure of the orthogonal projection onto the standard subspace
    /// `w`, computed directly from piece geometry. For `|w| = 0` this is the
    /// counting measure of `{0}` (1 if the set is nonempty).
    pub fn projection_measure(&self, w: &AxisSet) -> Result<T> {
        if w.k() != self.k {
            return input(format!("axis set in R^{} used on a set in R^{}", w.k(), self.k));
        }
        let d = w.dim();
        if d == 0 {
            return Ok(if self.is_empty() { T::zero() } else { T::one() });
        }
        // Null pieces are countable, so they never carry positive measure for d >= 1.
        let full: Vec<AffinePiece<T>> = self
            .normalized_pieces()
            .into_iter()
            .filter(|p| p.tag() == Tag::Full)
            .filter(|p| {
                let projected: Vec<Vec<T>> = p.dirs().iter().map(|v| w.project(v)).collect();
                rank(&projected) == d
            })
            .collect();
        match d {
            1 => {
                let axis = w.axes()[0];
                let ivs = merge_intervals(full.iter().map(|p| p.coord_range(axis)).collect());
                Ok(ivs
                    .into_iter()
                    .fold(T::zero(), |acc, (lo, hi)| acc + hi - lo))
            }
            2 => {
                let polys: Vec<Polygon<T>> = full
                    .iter()
                    .map(|p| {
                        let c = p.corners();
                        let verts = [0usize, 1, 3, 2]
                            .iter()
                            .map(|&i| {
                                let q = w.project(&c[i]);
                                [q[0].clone(), q[1].clone()]
                            })
                            .collect();
                        Polygon::new(verts)
                    })
                    .collect();
                Ok(union_area(&polys))
            }
            // pieces are at most 2-dimensional
            _ => Ok(T::zero()),
        }
    }

    /// Pieces sorted in canonical order, used for stable output.
    pub fn sorted(&self) -> Self {
        let mut pieces = self.pieces.clone();
        pieces.sort_by(|a, b| a.cmp_key(b));
        TaggedPieceSet { k: self.k, pieces }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    type S = TaggedPieceSet<Rational>;
    type P = AffinePiece<Rational>;

    fn seg(a: (i64, i64, i64, i64), b: (i64, i64, i64, i64), tag: Tag) -> P {
        P::segment(vec![rat(a.0, a.1), rat(a.2, a.3)], vec![rat(b.0, b.1), rat(b.2, b.3)], tag).unwrap()
    }

    fn diag() -> P {
        seg((0, 1, 0, 1), (1, 1, 1, 1), Tag::Full)
    }

    #[test]
    fn abutting_collinear_segments_merge() {
        let s = S::new(
            2,
            vec![seg((0, 1, 0, 1), (1, 2, 1, 2), Tag::Full), seg((1, 2, 1, 2), (1, 1, 1, 1), Tag::Full)],
        )
        .unwrap();
        assert_eq!(s.canonicalize(), S::new(2, vec![diag()]).unwrap());
    }

    #[test]
    fn duplicates_collapse() {
        let s = S::new(2, vec![diag(), diag()]).unwrap();
        assert_eq!(s.canonicalize().len(), 1);
    }

    #[test]
    fn interior_point_absorbed() {
        let pt = P::point(vec![rat(1, 3), rat(1, 3)]).unwrap();
        let s = S::new(2, vec![pt, diag()]).unwrap();
        assert_eq!(s.canonicalize(), S::new(2, vec![diag()]).unwrap());
        let off = P::point(vec![rat(1, 3), rat(1, 2)]).unwrap();
        assert_eq!(S::new(2, vec![off, diag()]).unwrap().canonicalize().len(), 2);
    }

    #[test]
    fn null_part_under_full_is_dropped() {
        let s = S::new(
            2,
            vec![seg((0, 1, 0, 1), (1, 1, 1, 1), Tag::Null), seg((0, 1, 0, 1), (1, 2, 1, 2), Tag::Full)],
        )
        .unwrap();
        let c = s.canonicalize();
        let expect = S::new(
            2,
            vec![seg((0, 1, 0, 1), (1, 2, 1, 2), Tag::Full), seg((1, 2, 1, 2), (1, 1, 1, 1), Tag::Null)],
        )
        .unwrap()
        .sorted();
        assert_eq!(c, expect);
        assert!(c.same_set(&s));
    }

    #[test]
    fn segment_inside_square_is_absorbed() {
        let sq = P::rect(int(0), int(1), int(0), int(1), Tag::Full).unwrap();
        let s = S::new(2, vec![sq.clone(), diag()]).unwrap();
        assert_eq!(s.canonicalize(), S::new(2, vec![sq]).unwrap());
    }

    #[test]
    fn split_square_equals_whole() {
        let whole = S::new(2, vec![P::rect(int(0), int(1), int(0), int(1), Tag::Full).unwrap()]).unwrap();
        let halves = S::new(
            2,
            vec![
                P::rect(int(0), rat(1, 2), int(0), int(1), Tag::Full).unwrap(),
                P::rect(rat(1, 2), int(1), int(0), int(1), Tag::Full).unwrap(),
            ],
        )
        .unwrap();
        assert!(whole.same_set(&halves));
        assert!(whole.contains(&S::new(2, vec![diag()]).unwrap()));
        let tri = S::new(2, vec![P::rect(int(0), rat(1, 2), int(0), int(1), Tag::Full).unwrap()]).unwrap();
        assert!(!tri.contains(&whole));
        assert!(whole.contains(&tri));
    }

    #[test]
    fn full_not_covered_by_null() {
        let full = S::new(2, vec![diag()]).unwrap();
        let null = S::new(2, vec![diag().with_tag(Tag::Null)]).unwrap();
        assert!(full.contains(&null));
        assert!(!null.contains(&full));
    }

    #[test]
    fn projection_measures() {
        let s = S::new(2, vec![diag()]).unwrap();
        let w1 = AxisSet::new(2, vec![0]).unwrap();
        let w12 = AxisSet::full(2);
        assert_eq!(s.projection_measure(&w1).unwrap(), int(1));
        assert_eq!(s.projection_measure(&w12).unwrap(), int(0));
        let null = S::new(2, vec![diag().with_tag(Tag::Null)]).unwrap();
        assert_eq!(null.projection_measure(&w1).unwrap(), int(0));
        assert_eq!(null.projection_measure(&AxisSet::new(2, vec![]).unwrap()).unwrap(), int(1));
        let two = S::new(
            2,
            vec![
                P::rect(int(0), rat(1, 2), int(0), rat(1, 2), Tag::Full).unwrap(),
                P::rect(rat(1, 4), rat(3, 4), rat(1, 4), rat(3, 4), Tag::Full).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(two.projection_measure(&w12).unwrap(), rat(7, 16));
        assert_eq!(two.projection_measure(&w1).unwrap(), rat(3, 4));
    }

    #[test]
    fn planes_in_three_dimensions() {
        // z = y/2 over x in [0,1/2] contains the segment x = 1/4, z = y/2.
        let plane = P::parallelogram(
            vec![int(0), int(0), int(0)],
            vec![rat(1, 2), int(0), int(0)],
            vec![int(0), int(1), rat(1, 2)],
            Tag::Full,
        )
        .unwrap();
        let s = P::segment(
            vec![rat(1, 4), int(0), int(0)],
            vec![rat(1, 4), int(1), rat(1, 2)],
            Tag::Full,
        )
        .unwrap();
        let set = S::new(3, vec![plane.clone()]).unwrap();
        assert!(set.covers_piece(&s));
        let with = S::new(3, vec![plane, s]).unwrap();
        assert_eq!(with.canonicalize().len(), 1);
        let off = P::segment(vec![rat(1, 4), int(0), int(0)], vec![rat(1, 4), int(1), int(1)], Tag::Full).unwrap();
        assert!(!set.covers_piece(&off));
    }
}
