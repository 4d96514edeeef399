//! The d-essential closure on tagged piece sets.
//!
//! The closure commutes with finite unions, so it is evaluated piece by piece.
//! For a single closed Full piece P: any neighborhood of a point of P meets P in
//! a relatively open patch, and the projection of that patch onto a standard
//! subspace W has positive d-dimensional measure iff the projection restricted
//! to the affine hull of P has rank d. So either every point of P survives (and
//! the closure is P) or none does. A Null piece is countable, so all its
//! projections of dimension >= 1 are null, while for d = 0 the counting measure
//! sees every nonempty intersection and the closure is the topological one.

use crate::error::{input, Error, Result};
use crate::linalg::rank;
use crate::scalar::Scalar;
use crate::setmodel::{AffinePiece, AxisSet, Tag, TaggedPieceSet};

/// Some `W` with `|W| = d` onto which the piece projects with full rank `d`.
pub fn full_rank_axes<T: Scalar>(piece: &AffinePiece<T>, d: usize) -> Option<AxisSet> {
    if piece.p() < d {
        return None;
    }
    AxisSet::all_of_size(piece.k(), d).into_iter().find(|w| {
        let projected: Vec<Vec<T>> = piece.dirs().iter().map(|v| w.project(v)).collect();
        rank(&projected) == d
    })
}

fn piece_survives<T: Scalar>(piece: &AffinePiece<T>, d: usize) -> bool {
    if d == 0 {
        return true;
    }
    piece.tag() == Tag::Full && full_rank_axes(piece, d).is_some()
}

fn check_order<T: Scalar>(s: &TaggedPieceSet<T>, d: usize) -> Result<()> {
    if d > s.k() {
        return input(format!("closure order d = {d} exceeds the ambient dimension {}", s.k()));
    }
    Ok(())
}

pub fn essential_closure_exact<T: Scalar>(s: &TaggedPieceSet<T>, d: usize) -> Result<TaggedPieceSet<T>> {
    check_order(s, d)?;
    let kept: Vec<AffinePiece<T>> = s
        .pieces()
        .iter()
        .filter(|p| piece_survives(p, d))
        .map(|p| p.with_tag(Tag::Full))
        .collect();
    Ok(TaggedPieceSet::new(s.k(), kept)?.canonicalize())
}

/// Topological closure, which is the 0-essential closure.
pub fn topological_closure<T: Scalar>(s: &TaggedPieceSet<T>) -> TaggedPieceSet<T> {
    essential_closure_exact(s, 0).expect("d = 0 is always in range")
}

/// Closure of the interior. In dimension k <= 3 with pieces of dimension at
/// most 2, only Full pieces with `p == k` have interior points, and the closure
/// of their interior is the piece itself.
pub fn closure_of_interior<T: Scalar>(s: &TaggedPieceSet<T>) -> TaggedPieceSet<T> {
    let pieces = s
        .pieces()
        .iter()
        .filter(|p| p.tag() == Tag::Full && p.p() == s.k())
        .cloned()
        .collect();
    TaggedPieceSet::new(s.k(), pieces)
        .expect("subset of a valid set")
        .canonicalize()
}

pub fn is_essentially_closed<T: Scalar>(s: &TaggedPieceSet<T>, d: usize) -> Result<bool> {
    Ok(essential_closure_exact(s, d)?.same_set(s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmptinessReport<T> {
    pub empty: bool,
    /// Measure of the projection onto each `W` with `|W| = d`.
    pub measures: Vec<(AxisSet, T)>,
}

/// Decides whether the d-essential closure is empty in two independent ways,
/// from the closure operator and from the projection measures of the whole set,
/// and fails with [`Error::Invariant`] if they disagree.
pub fn empty_closure_criterion<T: Scalar>(s: &TaggedPieceSet<T>, d: usize) -> Result<EmptinessReport<T>> {
    check_order(s, d)?;
    let by_closure = essential_closure_exact(s, d)?.is_empty();
    let measures = AxisSet::all_of_size(s.k(), d)
        .into_iter()
        .map(|w| s.projection_measure(&w).map(|m| (w, m)))
        .collect::<Result<Vec<_>>>()?;
    let by_measure = measures.iter().all(|(_, m)| m.is_zero());
    if by_closure != by_measure {
        return Err(Error::Invariant(format!(
            "closure emptiness ({by_closure}) disagrees with projection measures ({by_measure}) at d = {d}"
        )));
    }
    Ok(EmptinessReport { empty: by_closure, measures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    type P = AffinePiece<Rational>;
    type S = TaggedPieceSet<Rational>;

    fn seg(a: [Rational; 2], b: [Rational; 2], tag: Tag) -> P {
        P::segment(a.to_vec(), b.to_vec(), tag).unwrap()
    }

    fn diag(tag: Tag) -> P {
        seg([int(0), int(0)], [int(1), int(1)], tag)
    }

    fn anti(tag: Tag) -> P {
        seg([int(0), int(1)], [int(1), int(0)], tag)
    }

    fn fig1() -> S {
        S::new(2, vec![diag(Tag::Full), anti(Tag::Null)]).unwrap()
    }

    #[test]
    fn order_one_drops_the_null_line() {
        let c = essential_closure_exact(&fig1(), 1).unwrap();
        assert_eq!(c, S::new(2, vec![diag(Tag::Full)]).unwrap());
    }

    #[test]
    fn order_zero_closes_everything() {
        let c = essential_closure_exact(&fig1(), 0).unwrap();
        let expect = S::new(2, vec![diag(Tag::Full), anti(Tag::Full)]).unwrap().canonicalize();
        assert_eq!(c, expect);
    }

    #[test]
    fn points_and_vertical_segments() {
        let pt = S::new(2, vec![P::point(vec![rat(1, 2), rat(1, 2)]).unwrap()]).unwrap();
        assert!(essential_closure_exact(&pt, 1).unwrap().is_empty());
        let vert = S::new(2, vec![seg([rat(3, 10), int(0)], [rat(3, 10), int(1)], Tag::Full)]).unwrap();
        assert_eq!(essential_closure_exact(&vert, 1).unwrap(), vert.canonicalize());
        assert_eq!(
            full_rank_axes(&vert.pieces()[0], 1).unwrap(),
            AxisSet::new(2, vec![1]).unwrap()
        );
    }

    #[test]
    fn rejects_order_above_dimension() {
        assert!(matches!(essential_closure_exact(&fig1(), 3), Err(Error::Input(_))));
    }

    #[test]
    fn closedness_examples() {
        let d = S::new(2, vec![diag(Tag::Full)]).unwrap();
        assert!(is_essentially_closed(&d, 1).unwrap());
        let with_pt = S::new(2, vec![diag(Tag::Full), P::point(vec![rat(1, 5), rat(4, 5)]).unwrap()]).unwrap();
        assert!(!is_essentially_closed(&with_pt, 1).unwrap());
        assert!(is_essentially_closed(&with_pt, 0).unwrap());
        assert!(!is_essentially_closed(&fig1(), 0).unwrap());
    }

    #[test]
    fn emptiness_examples() {
        let pt = S::new(2, vec![P::point(vec![rat(1, 2), rat(1, 2)]).unwrap()]).unwrap();
        let r = empty_closure_criterion(&pt, 1).unwrap();
        assert!(r.empty);
        assert!(r.measures.iter().all(|(_, m)| *m == int(0)));

        let d = S::new(2, vec![diag(Tag::Full)]).unwrap();
        let r = empty_closure_criterion(&d, 1).unwrap();
        assert!(!r.empty);
        assert_eq!(r.measures[0].1, int(1));

        let null = S::new(2, vec![anti(Tag::Null)]).unwrap();
        assert!(empty_closure_criterion(&null, 1).unwrap().empty);
        assert!(!empty_closure_criterion(&null, 0).unwrap().empty);
    }

    #[test]
    fn full_square_survives_every_order() {
        let sq = S::new(2, vec![P::rect(int(0), int(1), int(0), int(1), Tag::Full).unwrap()]).unwrap();
        for d in 0..=2 {
            assert_eq!(essential_closure_exact(&sq, d).unwrap(), sq);
        }
        assert_eq!(closure_of_interior(&sq), sq);
    }
}
