//! Exact convex polygon operations in a 2-dimensional coordinate frame.

use crate::scalar::Scalar;

/// Convex polygon as a vertex loop. May be degenerate (a segment or a point).
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon<T> {
    pub vertices: Vec<[T; 2]>,
}

impl<T: Scalar> Polygon<T> {
    pub fn new(vertices: Vec<[T; 2]>) -> Self {
        let mut p = Polygon { vertices };
        if p.signed_area2() < T::zero() {
            p.vertices.reverse();
        }
        p
    }

    pub fn rect(x0: T, x1: T, y0: T, y1: T) -> Self {
        Polygon::new(vec![
            [x0.clone(), y0.clone()],
            [x1.clone(), y0],
            [x1, y1.clone()],
            [x0, y1],
        ])
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Twice the signed area (shoelace).
    pub fn signed_area2(&self) -> T {
        let n = self.vertices.len();
        let mut s = T::zero();
        for i in 0..n {
            let [x0, y0] = &self.vertices[i];
            let [x1, y1] = &self.vertices[(i + 1) % n];
            s = s + x0.clone() * y1.clone() - x1.clone() * y0.clone();
        }
        s
    }

    pub fn area(&self) -> T {
        self.signed_area2().abs() / (T::one() + T::one())
    }

    /// Keeps the closed half-plane `a*x + b*y + c >= 0`.
    pub fn clip(&self, a: &T, b: &T, c: &T) -> Self {
        let eval = |p: &[T; 2]| a.clone() * p[0].clone() + b.clone() * p[1].clone() + c.clone();
        let n = self.vertices.len();
        if n == 0 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(n + 2);
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            let (fp, fq) = (eval(p), eval(q));
            let zero = T::zero();
            if fp >= zero {
                out.push(p.clone());
            }
            if (fp > zero && fq < zero) || (fp < zero && fq > zero) {
                let t = fp.clone() / (fp - fq);
                out.push([
                    p[0].clone() + t.clone() * (q[0].clone() - p[0].clone()),
                    p[1].clone() + t * (q[1].clone() - p[1].clone()),
                ]);
            }
        }
        Polygon { vertices: out }
    }

    /// Intersection with another convex polygon. `other` must have positive area.
    pub fn intersect(&self, other: &Polygon<T>) -> Self {
        let mut out = self.clone();
        for (a, b, c) in other.edge_halfplanes() {
            out = out.clip(&a, &b, &c);
            if out.is_empty() {
                break;
            }
        }
        out
    }

    /// Interior side of each edge as `(a, b, c)` with `a*x + b*y + c >= 0`.
    fn edge_halfplanes(&self) -> Vec<(T, T, T)> {
        let n = self.vertices.len();
        (0..n)
            .filter_map(|i| {
                let p = &self.vertices[i];
                let q = &self.vertices[(i + 1) % n];
                let dx = q[0].clone() - p[0].clone();
                let dy = q[1].clone() - p[1].clone();
                if dx.is_zero() && dy.is_zero() {
                    return None;
                }
                // Counter-clockwise loop: interior is to the left, cross(d, x - p) >= 0.
                let a = -dy.clone();
                let b = dx.clone();
                let c = dy * p[0].clone() - dx * p[1].clone();
                Some((a, b, c))
            })
            .collect()
    }

    /// Closure of `self \ other` as convex pieces of positive area.
    pub fn subtract(&self, other: &Polygon<T>) -> Vec<Polygon<T>> {
        if other.area().is_zero() {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        for (a, b, c) in other.edge_halfplanes() {
            let outside = rest.clip(&-a.clone(), &-b.clone(), &-c.clone());
            if !outside.is_empty() && !outside.area().is_zero() {
                out.push(outside);
            }
            rest = rest.clip(&a, &b, &c);
            if rest.is_empty() || rest.area().is_zero() {
                break;
            }
        }
        out
    }

    /// Whether the union of `covers` contains `self` up to a null set. For closed
    /// polygons that is the same as containing it outright.
    pub fn covered_by(&self, covers: &[Polygon<T>]) -> bool {
        let mut rest = vec![self.clone()];
        rest.retain(|p| !p.area().is_zero());
        for c in covers {
            if rest.is_empty() {
                break;
            }
            rest = rest.iter().flat_map(|p| p.subtract(c)).collect();
        }
        rest.is_empty()
    }

    /// Interval of `t` for which `base + t*dir` lies in the polygon, if any.
    pub fn line_interval(&self, base: &[T; 2], dir: &[T; 2]) -> Option<(T, T)> {
        let mut lo: Option<T> = None;
        let mut hi: Option<T> = None;
        for (a, b, c) in self.edge_halfplanes() {
            // a*(bx + t dx) + b*(by + t dy) + c >= 0  <=>  c0 + c1 t >= 0
            let c0 = a.clone() * base[0].clone() + b.clone() * base[1].clone() + c;
            let c1 = a * dir[0].clone() + b * dir[1].clone();
            if c1.is_zero() {
                if c0 < T::zero() {
                    return None;
                }
            } else {
                let t = -c0 / c1.clone();
                if c1 > T::zero() {
                    if lo.as_ref().map_or(true, |l| t > *l) {
                        lo = Some(t);
                    }
                } else if hi.as_ref().map_or(true, |h| t < *h) {
                    hi = Some(t);
                }
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) if l <= h => Some((l, h)),
            (Some(_), Some(_)) => None,
            _ => None,
        }
    }
}

/// Area of the union of convex polygons.
pub fn union_area<T: Scalar>(polys: &[Polygon<T>]) -> T {
    let mut total = T::zero();
    for (i, p) in polys.iter().enumerate() {
        let mut rest = vec![p.clone()];
        for q in &polys[..i] {
            rest = rest.iter().flat_map(|r| r.subtract(q)).collect();
        }
        for r in rest {
            total = total + r.area();
        }
    }
    total
}
