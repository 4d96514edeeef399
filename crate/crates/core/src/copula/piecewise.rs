//! Piecewise affine maps `[0,1]^n -> [0,1]^m` on boxes, n in {1, 2}.

use num_traits::{One, Signed, Zero};

use crate::error::{input, Result};
use crate::polygon::Polygon;
use crate::scalar::{dyadic, int, pmax, pmin, Rational, Scalar};
use crate::setmodel::Tag;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapPiece {
    /// One closed interval per domain axis.
    pub domain: Vec<(Rational, Rational)>,
    pub tag: Tag,
    /// One row `[c0, c1, .., cn]` per output coordinate: `f_j(x) = c0 + sum ci xi`.
    pub coeffs: Vec<Vec<Rational>>,
}

impl MapPiece {
    pub fn eval<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        self.coeffs
            .iter()
            .map(|row| {
                row[1..]
                    .iter()
                    .zip(x)
                    .fold(T::from_rational(&row[0]), |acc, (c, xi)| acc + T::from_rational(c) * xi.clone())
            })
            .collect()
    }

    pub fn volume(&self) -> Rational {
        self.domain.iter().map(|(lo, hi)| hi - lo).product()
    }

    pub fn corners(&self) -> Vec<Vec<Rational>> {
        let n = self.domain.len();
        (0..1usize << n)
            .map(|bits| {
                (0..n)
                    .map(|i| if bits >> i & 1 == 1 { self.domain[i].1.clone() } else { self.domain[i].0.clone() })
                    .collect()
            })
            .collect()
    }

    /// Whether output coordinate `j` is constant on the piece.
    fn is_flat(&self, j: usize) -> bool {
        self.coeffs[j][1..]
            .iter()
            .zip(&self.domain)
            .all(|(c, (lo, hi))| c.is_zero() || lo == hi)
    }

    /// Domain region where `f_j` lies in `[lo, hi]`, clipped further by the
    /// upper bounds `upto` on the inputs, as an exact length or area.
    fn measure_where<T: Scalar>(&self, constraints: &[(usize, Option<T>, T)], upto: &[T]) -> T {
        let n = self.domain.len();
        let dom: Vec<(T, T)> = self
            .domain
            .iter()
            .zip(upto)
            .map(|((lo, hi), u)| (T::from_rational(lo), pmin(&T::from_rational(hi), u)))
            .collect();
        if dom.iter().any(|(lo, hi)| hi < lo) {
            return T::zero();
        }
        let coef = |j: usize, i: usize| T::from_rational(&self.coeffs[j][i]);
        if n == 1 {
            let (mut lo, mut hi) = dom[0].clone();
            for (j, below, above) in constraints {
                // below <= c0 + c1 x <= above
                let (c0, c1) = (coef(*j, 0), coef(*j, 1));
                let mut bounds = vec![(above.clone(), true)];
                if let Some(b) = below {
                    bounds.push((b.clone(), false));
                }
                for (bound, upper) in bounds {
                    if c1.is_zero() {
                        let ok = if upper { c0 <= bound } else { c0 >= bound };
                        if !ok {
                            return T::zero();
                        }
                        continue;
                    }
                    let t = (bound - c0.clone()) / c1.clone();
                    if upper == c1.is_positive() {
                        hi = pmin(&hi, &t);
                    } else {
                        lo = pmax(&lo, &t);
                    }
                }
            }
            return if hi > lo { hi - lo } else { T::zero() };
        }
        let mut poly = Polygon::rect(dom[0].0.clone(), dom[0].1.clone(), dom[1].0.clone(), dom[1].1.clone());
        for (j, below, above) in constraints {
            let (c0, c1, c2) = (coef(*j, 0), coef(*j, 1), coef(*j, 2));
            // above - f >= 0
            poly = poly.clip(&-c1.clone(), &-c2.clone(), &(above.clone() - c0.clone()));
            if let Some(b) = below {
                poly = poly.clip(&c1, &c2, &(c0.clone() - b.clone()));
            }
        }
        if poly.vertices.len() < 3 {
            T::zero()
        } else {
            poly.area()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseMap {
    n: usize,
    m: usize,
    pieces: Vec<MapPiece>,
}

fn overlap_volume(a: &MapPiece, b: &MapPiece) -> Rational {
    a.domain
        .iter()
        .zip(&b.domain)
        .map(|((a0, a1), (b0, b1))| {
            let w = pmin(a1, b1) - pmax(a0, b0);
            if w.is_positive() {
                w
            } else {
                Rational::zero()
            }
        })
        .product()
}

impl PiecewiseMap {
    pub fn new(n: usize, m: usize, pieces: Vec<MapPiece>) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return input(format!("piecewise maps need domain dimension 1 or 2, got {n}"));
        }
        if m == 0 {
            return input("piecewise map needs at least one output coordinate");
        }
        let (zero, one) = (Rational::zero(), Rational::one());
        for (idx, p) in pieces.iter().enumerate() {
            if p.domain.len() != n {
                return input(format!("map piece {idx} has a {}-dimensional domain, expected {n}", p.domain.len()));
            }
            if p.domain.iter().any(|(lo, hi)| *lo < zero || hi < lo || *hi > one) {
                return input(format!("map piece {idx} has a domain box outside [0,1]^{n}"));
            }
            if p.coeffs.len() != m || p.coeffs.iter().any(|row| row.len() != n + 1) {
                return input(format!("map piece {idx} needs {m} coefficient rows of length {}", n + 1));
            }
            for c in p.corners() {
                if p.eval(&c).iter().any(|y| *y < zero || *y > one) {
                    return input(format!("map piece {idx} leaves [0,1]^{m}"));
                }
            }
        }
        let full: Vec<&MapPiece> = pieces.iter().filter(|p| p.tag == Tag::Full).collect();
        let total: Rational = full.iter().map(|p| p.volume()).sum();
        if total != one {
            return input(format!("Full domain pieces have total volume {total}, not 1"));
        }
        for (i, a) in full.iter().enumerate() {
            for b in &full[i + 1..] {
                if !overlap_volume(a, b).is_zero() {
                    return input("Full domain pieces overlap in more than their boundaries");
                }
            }
        }
        Ok(PiecewiseMap { n, m, pieces })
    }

    pub fn identity() -> Self {
        PiecewiseMap::new(
            1,
            1,
            vec![MapPiece { domain: vec![(int(0), int(1))], tag: Tag::Full, coeffs: vec![vec![int(0), int(1)]] }],
        )
        .expect("identity map")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pieces(&self) -> &[MapPiece] {
        &self.pieces
    }

    /// Full pieces of positive volume: the ones that carry mass.
    pub fn carrying_pieces(&self) -> impl Iterator<Item = &MapPiece> + '_ {
        self.pieces.iter().filter(|p| p.tag == Tag::Full && !p.volume().is_zero())
    }

    /// Output coordinate `j` on its own.
    pub fn coordinate(&self, j: usize) -> PiecewiseMap {
        let pieces = self
            .pieces
            .iter()
            .map(|p| MapPiece { domain: p.domain.clone(), tag: p.tag, coeffs: vec![p.coeffs[j].clone()] })
            .collect();
        PiecewiseMap { n: self.n, m: 1, pieces }
    }

    /// `lambda_n({x <= u : F(x) <= v})` over the carrying pieces.
    pub fn joint_cdf<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        let constraints: Vec<(usize, Option<T>, T)> = v.iter().cloned().enumerate().map(|(j, vj)| (j, None, vj)).collect();
        self.carrying_pieces()
            .map(|p| p.measure_where(&constraints, u))
            .fold(T::zero(), |a, b| a + b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurePreservation {
    pub preserving: bool,
    /// Largest `|mass(bin) - 2^-L|` over all bins and output coordinates.
    pub max_deviation: Rational,
}

/// Pushes Lebesgue measure on the domain through each output coordinate onto
/// the dyadic bins `(j 2^-L, (j+1) 2^-L]` (the first bin closed) and compares
/// every bin mass with `2^-L`, exactly.
pub fn validate_measure_preserving(map: &PiecewiseMap, level: u32) -> Result<MeasurePreservation> {
    if level > 20 {
        return input(format!("measure check level {level} is above the supported 20"));
    }
    let side = 1usize << level;
    let width = dyadic(level);
    let ones: Vec<Rational> = vec![Rational::one(); map.n];
    let mut max_dev = Rational::zero();
    for j in 0..map.m {
        let mut mass = vec![Rational::zero(); side];
        for p in map.carrying_pieces() {
            if p.is_flat(j) {
                let y = p.eval(&p.corners()[0]).swap_remove(j);
                let idx = (&y / &width).ceil().to_integer();
                let idx: usize = (idx - 1u32).try_into().unwrap_or(0usize).min(side - 1);
                mass[idx] += p.volume();
                continue;
            }
            let ys: Vec<Rational> = p.corners().iter().map(|c| p.eval(c).swap_remove(j)).collect();
            let lo = ys.iter().min().expect("corners").clone();
            let hi = ys.iter().max().expect("corners").clone();
            let first: usize = (&lo / &width).floor().to_integer().try_into().unwrap_or(0usize).min(side - 1);
            let last: usize = (&hi / &width).ceil().to_integer().try_into().unwrap_or(side).min(side);
            for (b, slot) in mass.iter_mut().enumerate().take(last).skip(first) {
                let below = &width * Rational::from_integer((b as i64).into());
                let above = &below + &width;
                // Boundaries of bins carry no mass on a non-flat piece.
                *slot += p.measure_where(&[(j, Some(below), above)], &ones);
            }
        }
        for m in mass {
            let dev = (m - &width).abs();
            if dev > max_dev {
                max_dev = dev;
            }
        }
    }
    Ok(MeasurePreservation { preserving: max_dev.is_zero(), max_deviation: max_dev })
}

/// Drops everything that is only defined on a null set: Null pieces and
/// degenerate Full boxes. The result agrees with `map` almost everywhere.
pub fn essential_refinement(map: &PiecewiseMap) -> PiecewiseMap {
    PiecewiseMap { n: map.n, m: map.m, pieces: map.carrying_pieces().cloned().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn piece1(a: Rational, b: Rational, tag: Tag, c0: Rational, c1: Rational) -> MapPiece {
        MapPiece { domain: vec![(a, b)], tag, coeffs: vec![vec![c0, c1]] }
    }

    fn example_map() -> PiecewiseMap {
        PiecewiseMap::new(
            1,
            1,
            vec![
                piece1(int(0), int(1), Tag::Full, int(0), int(1)),
                piece1(int(0), int(1), Tag::Null, int(1), int(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn measure_preservation() {
        assert!(validate_measure_preserving(&PiecewiseMap::identity(), 6).unwrap().preserving);
        assert!(validate_measure_preserving(&example_map(), 6).unwrap().preserving);
        let half = PiecewiseMap::new(1, 1, vec![piece1(int(0), int(1), Tag::Full, int(0), rat(1, 2))]).unwrap();
        let r = validate_measure_preserving(&half, 3).unwrap();
        assert!(!r.preserving);
        // bins below 1/2 get twice their share, bins above get none
        assert_eq!(r.max_deviation, rat(1, 8));
        let flat = PiecewiseMap::new(1, 1, vec![piece1(int(0), int(1), Tag::Full, rat(1, 2), int(0))]).unwrap();
        assert!(!validate_measure_preserving(&flat, 2).unwrap().preserving);
    }

    #[test]
    fn two_to_one_map_preserves_measure() {
        let m = PiecewiseMap::new(
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
        .unwrap();
        assert!(validate_measure_preserving(&m, 6).unwrap().preserving);
        // joint cdf at (1, 1, v) is v; oracle: count a fine midpoint grid
        assert_eq!(m.joint_cdf(&[int(1), int(1)], &[rat(1, 3)]), rat(1, 3));
        let (u, v) = (0.7, 0.6);
        let n = 400;
        let mut hits = 0;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = ((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
                let f = if x <= 0.5 { y / 2.0 } else { 1.5 - x };
                if x <= u && f <= v {
                    hits += 1;
                }
            }
        }
        let approx = hits as f64 / (n * n) as f64;
        assert!((m.joint_cdf(&[u, 1.0], &[v]) - approx).abs() < 5e-3);
    }

    #[test]
    fn rejects_invalid_maps() {
        let over = PiecewiseMap::new(
            1,
            1,
            vec![
                piece1(int(0), rat(3, 4), Tag::Full, int(0), int(1)),
                piece1(rat(1, 2), int(1), Tag::Full, int(0), int(1)),
            ],
        );
        assert!(over.is_err());
        let escapes = PiecewiseMap::new(1, 1, vec![piece1(int(0), int(1), Tag::Full, int(0), int(2))]);
        assert!(escapes.is_err());
        assert!(PiecewiseMap::new(3, 1, vec![]).is_err());
    }

    #[test]
    fn refinement() {
        let r = essential_refinement(&example_map());
        assert_eq!(r, PiecewiseMap::identity());
        assert_eq!(essential_refinement(&r), r);
        let diag = PiecewiseMap::new(
            1,
            2,
            vec![MapPiece { domain: vec![(int(0), int(1))], tag: Tag::Full, coeffs: vec![vec![int(0), int(1)]; 2] }],
        )
        .unwrap();
        assert_eq!(essential_refinement(&diag), diag);
    }
}
