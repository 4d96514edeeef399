//! Pieces lying in an axis-perpendicular hyperplane that are isolated there:
//! near some relative interior point, the set stays inside the hyperplane.

use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::{dot, solve_in_span, sub};
use crate::scalar::{rat, Rational};
use crate::{Piece, PieceSet};

#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneViolation {
    /// Index of the offending piece in the input set.
    pub piece: usize,
    /// Zero-based axis `i` of the hyperplane `{x_i = coordinate}`.
    pub axis: usize,
    pub coordinate: Rational,
    pub witness: Vec<Rational>,
    /// A ball of this radius around the witness meets the set only inside the
    /// hyperplane. A rational lower bound of the true distance.
    pub radius: Rational,
}

/// Parameters along a segment where its membership in `other` can change.
fn breakpoints(seg: &Piece, other: &Piece, out: &mut Vec<Rational>) {
    let a = seg.anchor();
    let d = &seg.dirs()[0];
    let dd = dot(d, d);
    for c in other.corners() {
        out.push(dot(&sub(&c, a), d) / dd.clone());
    }
    let corners = other.corners();
    let mut edges: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
    match other.p() {
        1 => edges.push((corners[0].clone(), sub(&corners[1], &corners[0]))),
        2 => {
            for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
                edges.push((corners[i].clone(), sub(&corners[j], &corners[i])));
            }
        }
        _ => {}
    }
    if other.p() == 2 {
        let mut dirs = vec![d.clone()];
        dirs.extend(other.dirs().iter().map(|e| e.iter().map(|x| -x.clone()).collect()));
        if let Some(sol) = solve_in_span(&dirs, &sub(other.anchor(), a)) {
            out.push(sol[0].clone());
        }
    }
    for (base, e) in edges {
        let neg: Vec<Rational> = e.iter().map(|x| -x.clone()).collect();
        if let Some(sol) = solve_in_span(&[d.clone(), neg], &sub(&base, a)) {
            out.push(sol[0].clone());
        }
    }
}

/// Relative interior points to test on `piece`.
fn probes(piece: &Piece, others: &[&Piece]) -> Vec<Vec<Rational>> {
    let quarters = [rat(1, 4), rat(1, 2), rat(3, 4)];
    match piece.p() {
        0 => vec![piece.anchor().to_vec()],
        1 => {
            let mut ts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
            ts.extend(quarters.iter().cloned());
            for o in others {
                breakpoints(piece, o, &mut ts);
            }
            ts.retain(|t| *t >= Rational::zero() && *t <= Rational::one());
            ts.sort();
            ts.dedup();
            let mut params: Vec<Rational> = ts.windows(2).map(|w| (&w[0] + &w[1]) / rat(2, 1)).collect();
            params.extend(ts.into_iter().filter(|t| !t.is_zero() && !t.is_one()));
            params.iter().map(|t| piece.point_at(std::slice::from_ref(t))).collect()
        }
        _ => {
            let mut pts = Vec::new();
            for s in &quarters {
                for t in &quarters {
                    pts.push(piece.point_at(&[s.clone(), t.clone()]));
                }
            }
            pts
        }
    }
}

/// Rational `r > 0` with `r^2 <= sq`.
fn sqrt_lower_bound(sq: &Rational) -> Rational {
    let approx = sq.to_f64().unwrap_or(0.0).sqrt();
    let scale = 1i64 << 30;
    let mut r = rat((approx * scale as f64).floor() as i64, scale);
    while &r * &r > *sq && r > Rational::zero() {
        r = &r * rat(1023, 1024);
    }
    if r <= Rational::zero() {
        // distances here are rational squares of at least 2^-60 in practice
        r = rat(1, scale);
        while &r * &r > *sq {
            r = &r / rat(2, 1);
        }
    }
    r
}

/// One violation per piece lying in some hyperplane `{x_i = c}` that has a
/// relative interior point at positive distance from every piece not lying in
/// that hyperplane. An empty result means the necessary condition holds.
///
/// Along segments the probes include every parameter where the segment can
/// enter or leave another piece, so the test is exact there. Planar pieces
/// (k = 3) are probed on a 3x3 grid of interior points only.
pub fn check_hyperplane_condition(s: &PieceSet) -> Vec<HyperplaneViolation> {
    let pieces: Vec<Piece> = s.pieces().iter().map(|p| p.normalized().expect("valid piece")).collect();
    let mut out = Vec::new();
    'pieces: for (idx, piece) in pieces.iter().enumerate() {
        for (axis, c) in piece.axis_hyperplanes() {
            let outside: Vec<&Piece> = pieces
                .iter()
                .filter(|q| !q.axis_hyperplanes().iter().any(|(i, x)| *i == axis && *x == c))
                .collect();
            for q in probes(piece, &outside) {
                let best = outside.iter().map(|o| o.sq_distance_to(&q)).min();
                let isolated = best.as_ref().map_or(true, |d| !d.is_zero());
                if isolated {
                    let radius = best.map_or_else(Rational::one, |d| sqrt_lower_bound(&d).min(Rational::one()));
                    out.push(HyperplaneViolation { piece: idx, axis, coordinate: c, witness: q, radius });
                    continue 'pieces;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::int;
    use crate::setmodel::{Tag, TaggedPieceSet};

    #[test]
    fn vertical_and_graph_pieces_violate() {
        let v = check_hyperplane_condition(&fixtures::fig2());
        assert_eq!(v.len(), 2, "{v:?}");
        assert!(v.iter().any(|x| x.axis == 0 && x.coordinate == rat(1, 2)));
        assert!(v.iter().any(|x| x.axis == 1 && x.coordinate == rat(1, 2)));
        for x in &v {
            assert!(x.radius > Rational::zero());
            // oracle: the witness is at least `radius` from every other piece
            let set = fixtures::fig2();
            for (j, p) in set.pieces().iter().enumerate() {
                if j != x.piece && p.axis_hyperplanes().iter().all(|(i, _)| *i != x.axis) {
                    assert!(p.sq_distance_to(&x.witness) >= &x.radius * &x.radius);
                }
            }
        }
    }

    #[test]
    fn supports_have_none() {
        assert!(check_hyperplane_condition(&fixtures::fig3()).is_empty());
        assert!(check_hyperplane_condition(&fixtures::m2()).is_empty());
        assert!(check_hyperplane_condition(&fixtures::m3()).is_empty());
    }

    #[test]
    fn diagonal_with_vertical() {
        let mut pieces = fixtures::m2().into_pieces();
        pieces.push(Piece::segment(vec![rat(1, 2), int(0)], vec![rat(1, 2), int(1)], Tag::Full).unwrap());
        let v = check_hyperplane_condition(&TaggedPieceSet::new(2, pieces).unwrap());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axis, 0);
    }

    #[test]
    fn quartile_probes_alone_would_miss_it() {
        // slanted segments meet x = 1/2 exactly at y = 1/4, 1/2, 3/4; only the
        // probes between breakpoints see the isolated stretches
        let s = TaggedPieceSet::new(
            2,
            vec![
                Piece::segment(vec![rat(1, 2), int(0)], vec![rat(1, 2), int(1)], Tag::Full).unwrap(),
                Piece::segment(vec![int(0), int(0)], vec![int(1), rat(1, 2)], Tag::Full).unwrap(),
                Piece::segment(vec![int(0), rat(1, 4)], vec![int(1), rat(3, 4)], Tag::Full).unwrap(),
                Piece::segment(vec![int(0), rat(1, 2)], vec![int(1), int(1)], Tag::Full).unwrap(),
            ],
        )
        .unwrap();
        let v = check_hyperplane_condition(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].witness, vec![rat(1, 2), rat(1, 8)]);
        assert_eq!(sqrt_lower_bound(&rat(1, 4)), rat(1, 2));
        assert!(sqrt_lower_bound(&rat(1, 3)) * sqrt_lower_bound(&rat(1, 3)) <= rat(1, 3));
    }
}
