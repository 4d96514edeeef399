use std::cmp::Ordering;

use super::axis::Permutation;
use crate::error::{input, Result};
use crate::linalg::{add, min_sq_norm_over_unit_box, rank, scale, solve_in_span, sub};
use crate::scalar::{in_unit, Scalar};

/// Largest ambient dimension the symbolic engine accepts.
pub const MAX_SYMBOLIC_DIM: usize = 3;

/// How much of its affine patch a piece actually contains.
///
/// `Full` pieces are the whole closed patch. `Null` pieces are a dense subset of
/// measure zero (the points with rational parameters): they vanish under every
/// essential closure of order at least one but their topological closure is the
/// whole patch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Full,
    Null,
}

/// `anchor + sum_i t_i * dirs[i]` for `t` ranging over `param_box`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePiece<T> {
    anchor: Vec<T>,
    dirs: Vec<Vec<T>>,
    param_box: Vec<(T, T)>,
    tag: Tag,
}

pub(crate) fn lex_cmp<T: PartialOrd>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

impl<T: Scalar> AffinePiece<T> {
    pub fn new(anchor: Vec<T>, dirs: Vec<Vec<T>>, param_box: Vec<(T, T)>, tag: Tag) -> Result<Self> {
        let k = anchor.len();
        if k == 0 || k > MAX_SYMBOLIC_DIM {
            return input(format!("symbolic pieces need 1 <= k <= {MAX_SYMBOLIC_DIM}, got {k}"));
        }
        let p = dirs.len();
        if p > 2 || p > k {
            return input(format!("piece of intrinsic dimension {p} in R^{k} is not supported"));
        }
        if param_box.len() != p {
            return input(format!("parameter box has {} intervals for {p} directions", param_box.len()));
        }
        if dirs.iter().any(|d| d.len() != k) {
            return input("direction vector length differs from anchor length");
        }
        if param_box.iter().any(|(lo, hi)| lo > hi) {
            return input("parameter interval with lo > hi");
        }
        if rank(&dirs) != p {
            return input("piece directions are linearly dependent");
        }
        let piece = AffinePiece { anchor, dirs, param_box, tag };
        if !piece.corners().iter().all(|c| c.iter().all(in_unit)) {
            return input("piece leaves the unit cube");
        }
        Ok(piece)
    }

    pub fn point(coords: Vec<T>) -> Result<Self> {
        AffinePiece::new(coords, vec![], vec![], Tag::Full)
    }

    /// Closed segment between two points; equal endpoints give a point.
    pub fn segment(a: Vec<T>, b: Vec<T>, tag: Tag) -> Result<Self> {
        if a.len() != b.len() {
            return input("segment endpoints differ in dimension");
        }
        let d = sub(&b, &a);
        if d.iter().all(|x| x.is_zero()) {
            return AffinePiece::point(a);
        }
        AffinePiece::new(a, vec![d], vec![(T::zero(), T::one())], tag)
    }

    /// Parallelogram with corners `anchor`, `anchor + e1`, `anchor + e2`, `anchor + e1 + e2`.
    pub fn parallelogram(anchor: Vec<T>, e1: Vec<T>, e2: Vec<T>, tag: Tag) -> Result<Self> {
        let unit = || (T::zero(), T::one());
        AffinePiece::new(anchor, vec![e1, e2], vec![unit(), unit()], tag)?.normalized()
    }

    /// Axis-aligned rectangle `[x0,x1] x [y0,y1]` in the plane.
    pub fn rect(x0: T, x1: T, y0: T, y1: T, tag: Tag) -> Result<Self> {
        let e1 = vec![x1 - x0.clone(), T::zero()];
        let e2 = vec![T::zero(), y1 - y0.clone()];
        AffinePiece::new(
            vec![x0, y0],
            vec![e1, e2],
            vec![(T::zero(), T::one()), (T::zero(), T::one())],
            tag,
        )?
        .normalized()
    }

    pub fn k(&self) -> usize {
        self.anchor.len()
    }

    /// Intrinsic dimension.
    pub fn p(&self) -> usize {
        self.dirs.len()
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn anchor(&self) -> &[T] {
        &self.anchor
    }

    pub fn dirs(&self) -> &[Vec<T>] {
        &self.dirs
    }

    pub fn param_box(&self) -> &[(T, T)] {
        &self.param_box
    }

    pub fn with_tag(&self, tag: Tag) -> Self {
        let mut out = self.clone();
        out.tag = if self.p() == 0 { Tag::Full } else { tag };
        out
    }

    pub fn point_at(&self, params: &[T]) -> Vec<T> {
        self.dirs
            .iter()
            .zip(params)
            .fold(self.anchor.clone(), |acc, (d, t)| add(&acc, &scale(d, t)))
    }

    /// The `2^p` corners, indexed by bit `i` choosing the upper end of interval `i`.
    pub fn corners(&self) -> Vec<Vec<T>> {
        let p = self.p();
        (0..1usize << p)
            .map(|mask| {
                let params: Vec<T> = (0..p)
                    .map(|i| {
                        let (lo, hi) = &self.param_box[i];
                        if mask >> i & 1 == 1 { hi.clone() } else { lo.clone() }
                    })
                    .collect();
                self.point_at(&params)
            })
            .collect()
    }

    /// Same point set with parameter box `[0,1]^p`, degenerate directions removed,
    /// and a deterministic choice of anchor and direction order. Two normalized
    /// pieces are equal exactly when they describe the same closed patch and tag.
    pub fn normalized(&self) -> Result<Self> {
        let base_params: Vec<T> = self.param_box.iter().map(|(lo, _)| lo.clone()).collect();
        let anchor = self.point_at(&base_params);
        let dirs: Vec<Vec<T>> = self
            .dirs
            .iter()
            .zip(&self.param_box)
            .map(|(d, (lo, hi))| scale(d, &(hi.clone() - lo.clone())))
            .filter(|d| d.iter().any(|x| !x.is_zero()))
            .collect();
        let (anchor, dirs) = match dirs.len() {
            0 => (anchor, dirs),
            1 => {
                let other = add(&anchor, &dirs[0]);
                if lex_cmp(&other, &anchor) == Ordering::Less {
                    let back = sub(&anchor, &other);
                    (other, vec![back])
                } else {
                    (anchor, dirs)
                }
            }
            _ => {
                let (d1, d2) = (&dirs[0], &dirs[1]);
                let neg = |v: &Vec<T>| scale(v, &-T::one());
                let candidates = [
                    (anchor.clone(), d1.clone(), d2.clone()),
                    (add(&anchor, d1), neg(d1), d2.clone()),
                    (add(&anchor, d2), d1.clone(), neg(d2)),
                    (add(&add(&anchor, d1), d2), neg(d1), neg(d2)),
                ];
                let (a, mut e1, mut e2) = candidates
                    .into_iter()
                    .min_by(|x, y| lex_cmp(&x.0, &y.0))
                    .expect("four corners");
                if lex_cmp(&e2, &e1) == Ordering::Less {
                    std::mem::swap(&mut e1, &mut e2);
                }
                (a, vec![e1, e2])
            }
        };
        let p = dirs.len();
        let tag = if p == 0 { Tag::Full } else { self.tag };
        AffinePiece::new(anchor, dirs, vec![(T::zero(), T::one()); p], tag)
    }

    /// Parameters of `x` in this piece's frame, if `x` lies in its affine hull.
    pub fn params_of(&self, x: &[T]) -> Option<Vec<T>> {
        solve_in_span(&self.dirs, &sub(x, &self.anchor))
    }

    pub fn contains_point(&self, x: &[T]) -> bool {
        self.params_of(x).is_some_and(|t| {
            t.iter()
                .zip(&self.param_box)
                .all(|(t, (lo, hi))| t >= lo && t <= hi)
        })
    }

    /// Squared Euclidean distance from `x` to the closed patch.
    pub fn sq_distance_to(&self, x: &[T]) -> T {
        let n = self.normalized().expect("valid piece normalizes");
        min_sq_norm_over_unit_box(&sub(&n.anchor, x), &n.dirs)
    }

    /// Axes `i` for which the piece lies in the hyperplane `{x_i = c}`, with `c`.
    pub fn axis_hyperplanes(&self) -> Vec<(usize, T)> {
        (0..self.k())
            .filter(|&i| self.dirs.iter().all(|d| d[i].is_zero()))
            .map(|i| (i, self.anchor[i].clone()))
            .collect()
    }

    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        sigma.check_len(self.k())?;
        Ok(AffinePiece {
            anchor: sigma.apply(&self.anchor),
            dirs: self.dirs.iter().map(|d| sigma.apply(d)).collect(),
            param_box: self.param_box.clone(),
            tag: self.tag,
        })
    }

    /// Lower and upper bound of coordinate `axis` over the piece.
    pub fn coord_range(&self, axis: usize) -> (T, T) {
        let corners = self.corners();
        let mut lo = corners[0][axis].clone();
        let mut hi = lo.clone();
        for c in &corners[1..] {
            if c[axis] < lo {
                lo = c[axis].clone();
            }
            if c[axis] > hi {
                hi = c[axis].clone();
            }
        }
        (lo, hi)
    }

    pub(crate) fn cmp_key(&self, other: &Self) -> Ordering {
        self.p()
            .cmp(&other.p())
            .then_with(|| lex_cmp(&self.anchor, &other.anchor))
            .then_with(|| {
                self.dirs
                    .iter()
                    .zip(&other.dirs)
                    .map(|(a, b)| lex_cmp(a, b))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| self.tag.cmp(&other.tag))
    }
}
