//! Small dense linear algebra on scalar vectors. Dimensions here never exceed 3.

use crate::scalar::Scalar;

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn is_zero_vec<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn cross3<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// Scales `v` so its first nonzero entry is 1. Zero vectors are returned as-is.
pub fn normalize_leading<T: Scalar>(v: &[T]) -> Vec<T> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let lead = lead.clone();
            v.iter().map(|x| x.clone() / lead.clone()).collect()
        }
        None => v.to_vec(),
    }
}

/// Rank of the matrix whose rows are `rows`.
pub fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() / m[r][c].clone();
                for j in c..ncols {
                    let delta = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Coefficients `c` with `sum_i c[i] * dirs[i] == v`, if any exist.
/// `dirs` must be linearly independent.
pub fn solve_in_span<T: Scalar>(dirs: &[Vec<T>], v: &[T]) -> Option<Vec<T>> {
    let p = dirs.len();
    let k = v.len();
    if p == 0 {
        return is_zero_vec(v).then(Vec::new);
    }
    // Augmented k x (p+1) system.
    let mut m: Vec<Vec<T>> = (0..k)
        .map(|row| {
            let mut r: Vec<T> = dirs.iter().map(|d| d[row].clone()).collect();
            r.push(v[row].clone());
            r
        })
        .collect();
    let mut pivots = Vec::with_capacity(p);
    let mut r = 0;
    for c in 0..p {
        let pivot = (r..k).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, pivot);
        let inv = T::one() / m[r][c].clone();
        for j in c..=p {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..k {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=p {
                    let delta = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[p].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&row| m[row][p].clone()).collect())
}

/// Minimum of a convex quadratic `|a + sum s_i d_i|^2` over the box `s_i in [0,1]`,
/// for one or two directions. Returns the squared distance from the origin.
pub fn min_sq_norm_over_unit_box<T: Scalar>(a: &[T], dirs: &[Vec<T>]) -> T {
    let clamp01 = |t: T| {
        if t < T::zero() {
            T::zero()
        } else if t > T::one() {
            T::one()
        } else {
            t
        }
    };
    let on_segment = |base: &[T], d: &[T]| -> T {
        let dd = dot(d, d);
        if dd.is_zero() {
            return dot(base, base);
        }
        let t = clamp01(-dot(base, d) / dd);
        let q = add(base, &scale(d, &t));
        dot(&q, &q)
    };
    match dirs.len() {
        0 => dot(a, a),
        1 => on_segment(a, &dirs[0]),
        2 => {
            let (d1, d2) = (&dirs[0], &dirs[1]);
            let (g11, g12, g22) = (dot(d1, d1), dot(d1, d2), dot(d2, d2));
            let (b1, b2) = (-dot(a, d1), -dot(a, d2));
            let det = g11.clone() * g22.clone() - g12.clone() * g12.clone();
            if !det.is_zero() {
                let s = (b1.clone() * g22.clone() - b2.clone() * g12.clone()) / det.clone();
                let t = (g11.clone() * b2 - g12.clone() * b1) / det;
                let unit = |x: &T| *x >= T::zero() && *x <= T::one();
                if unit(&s) && unit(&t) {
                    let q = add(&add(a, &scale(d1, &s)), &scale(d2, &t));
                    return dot(&q, &q);
                }
            }
            let edges = [
                (a.to_vec(), d1),
                (add(a, d2), d1),
                (a.to_vec(), d2),
                (add(a, d1), d2),
            ];
            let mut best: Option<T> = None;
            for (base, d) in edges.iter() {
                let v = on_segment(base, d);
                if best.as_ref().map_or(true, |b| v < *b) {
                    best = Some(v);
                }
            }
            best.expect("four edges")
        }
        _ => unreachable!("pieces have at most two directions"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[v(&[1, 1]), v(&[2, 2])]), 1);
        assert_eq!(rank(&[v(&[1, 0, 0]), v(&[0, 1, 1])]), 2);
        assert_eq!(rank::<Rational>(&[v(&[0, 0])]), 0);
        assert_eq!(rank::<f64>(&[vec![1.0, 2.0], vec![3.0, 4.0]]), 2);
    }

    #[test]
    fn solves_when_in_span() {
        let dirs = vec![v(&[1, 0, 1]), v(&[0, 1, 1])];
        assert_eq!(solve_in_span(&dirs, &v(&[2, 3, 5])), Some(v(&[2, 3])));
        assert_eq!(solve_in_span(&dirs, &v(&[2, 3, 4])), None);
        assert_eq!(solve_in_span::<Rational>(&[], &v(&[0, 0])), Some(vec![]));
    }

    #[test]
    fn box_distance() {
        // Unit square in the plane z = 0, query from (1/2, 1/2, 1): distance^2 = 1.
        let a = vec![rat(-1, 2), rat(-1, 2), int(-1)];
        let dirs = vec![v(&[1, 0, 0]), v(&[0, 1, 0])];
        assert_eq!(min_sq_norm_over_unit_box(&a, &dirs), int(1));
        // Query (2, 0, 0): nearest point is the corner (1, 0, 0).
        let a = vec![int(-2), int(0), int(0)];
        assert_eq!(min_sq_norm_over_unit_box(&a, &dirs), int(1));
        // Segment from origin along (1,1), query (1,0): distance^2 = 1/2.
        let a = vec![int(-1), int(0)];
        assert_eq!(min_sq_norm_over_unit_box(&a, &[v(&[1, 1])]), rat(1, 2));
    }
}
