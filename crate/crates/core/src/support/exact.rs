//! Exact supports: graphs of piecewise maps, their essential closures, and
//! the way back from a support to a function.

use num_traits::{One, Zero};

use crate::closure::essential_closure_exact;
use crate::copula::{essential_refinement, CopulaSpec, MapPiece, PiecewiseMap};
use crate::error::{input, Error, Result};
use crate::scalar::{int, Rational};
use crate::setmodel::{AffinePiece, Permutation, Tag, TaggedPieceSet};
use crate::{Piece, PieceSet};

/// Largest ambient dimension of symbolic sets.
const MAX_K: usize = crate::setmodel::piece::MAX_SYMBOLIC_DIM;

/// `{(x, F(x))}`, one piece per map piece, tags inherited.
pub fn hypergraph(f: &PiecewiseMap) -> Result<PieceSet> {
    let k = f.n() + f.m();
    if k > MAX_K {
        return Err(Error::Unsupported(format!(
            "graph of a map {}->{} lives in dimension {k}; symbolic sets stop at {MAX_K}, use the grid path",
            f.n(),
            f.m()
        )));
    }
    let pieces = f.pieces().iter().map(graph_piece).collect::<Result<Vec<_>>>()?;
    TaggedPieceSet::new(k, pieces)
}

fn graph_piece(p: &MapPiece) -> Result<Piece> {
    let lo: Vec<Rational> = p.domain.iter().map(|(a, _)| a.clone()).collect();
    let mut anchor = lo.clone();
    anchor.extend(p.eval(&lo));
    let dirs = (0..p.domain.len())
        .map(|i| {
            let w = &p.domain[i].1 - &p.domain[i].0;
            let mut d = vec![Rational::zero(); p.domain.len()];
            d[i] = w.clone();
            d.extend(p.coeffs.iter().map(|row| &row[i + 1] * &w));
            d
        })
        .collect::<Vec<_>>();
    let p_dim = dirs.len();
    AffinePiece::new(anchor, dirs, vec![(Rational::zero(), Rational::one()); p_dim], p.tag)?.normalized()
}

/// The n-essential closure of the graph of the refined map, `n` the domain
/// dimension. The map is assumed measure preserving.
pub fn support_bipartite_exact(f: &PiecewiseMap) -> Result<PieceSet> {
    let graph = hypergraph(&essential_refinement(f))?;
    Ok(essential_closure_exact(&graph, f.n())?.canonicalize())
}

pub fn support_exact(c: &CopulaSpec) -> Result<PieceSet> {
    let k = c.k();
    let unsupported = |what: &str| Err(Error::Unsupported(format!("no symbolic support for {what}")));
    match c {
        CopulaSpec::Product(2) => TaggedPieceSet::new(2, vec![Piece::rect(int(0), int(1), int(0), int(1), Tag::Full)?]),
        CopulaSpec::Product(_) => unsupported("Product beyond k = 2 (full-dimensional pieces stop at 2)"),
        CopulaSpec::Min(_) if k > MAX_K => unsupported("Min beyond k = 3"),
        CopulaSpec::Min(_) => TaggedPieceSet::new(k, vec![Piece::segment(vec![int(0); k], vec![int(1); k], Tag::Full)?]),
        CopulaSpec::WLower2 => {
            TaggedPieceSet::new(2, vec![Piece::segment(vec![int(0), int(1)], vec![int(1), int(0)], Tag::Full)?])
        }
        CopulaSpec::Shuffle(s) => support_bipartite_exact(&s.to_map()),
        CopulaSpec::Bipartite(m) => support_bipartite_exact(m),
        CopulaSpec::Permuted { inner, sigma } => Ok(support_exact(inner)?.permute(sigma)?.canonicalize()),
        CopulaSpec::Raw { .. } => unsupported("raw copula formulas"),
    }
}

/// `S_sigma`, the image of `S` under the coordinate permutation.
pub fn permuted_support(s: &PieceSet, sigma: &Permutation) -> Result<PieceSet> {
    Ok(s.permute(sigma)?.canonicalize())
}

/// Reads a planar support made of non-vertical Full segments as the graph of
/// a function. Each piece owns its left endpoint; the last one also owns 1.
pub fn extract_function_from_support(s: &PieceSet) -> Result<PiecewiseMap> {
    if s.k() != 2 {
        return input(format!("function extraction needs a planar set, got k = {}", s.k()));
    }
    let canon = s.canonicalize();
    let mut pieces = Vec::with_capacity(canon.len());
    for p in canon.pieces() {
        if p.tag() == Tag::Null {
            return input("not a function graph: Null piece present");
        }
        if p.p() != 1 {
            return input(format!("not a function graph: piece of dimension {}", p.p()));
        }
        let a = p.point_at(&[Rational::zero()]);
        let b = p.point_at(&[Rational::one()]);
        let (a, b) = if a[0] <= b[0] { (a, b) } else { (b, a) };
        if a[0] == b[0] {
            return input(format!("not a function graph: vertical segment at x = {}", a[0]));
        }
        let slope = (&b[1] - &a[1]) / (&b[0] - &a[0]);
        let c0 = &a[1] - &slope * &a[0];
        pieces.push(MapPiece { domain: vec![(a[0].clone(), b[0].clone())], tag: Tag::Full, coeffs: vec![vec![c0, slope]] });
    }
    pieces.sort_by(|x, y| x.domain[0].cmp(&y.domain[0]));
    let mut at = Rational::zero();
    for p in &pieces {
        let (lo, hi) = &p.domain[0];
        if *lo < at {
            return input(format!("not a function graph: x-projections overlap on [{lo}, {at}]"));
        }
        if *lo > at {
            return input(format!("not a function graph: no value on ({at}, {lo})"));
        }
        at = hi.clone();
    }
    if !at.is_one() {
        return input(format!("not a function graph: no value on ({at}, 1]"));
    }
    PiecewiseMap::new(1, 1, pieces)
}
