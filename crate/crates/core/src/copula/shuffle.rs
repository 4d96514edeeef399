//! Shuffles of Min: interval exchanges with flips and the 2-copulas they carry.

use num_traits::{One, ToPrimitive, Zero};

use super::piecewise::{MapPiece, PiecewiseMap};
use crate::error::{input, Result};
use crate::scalar::{pmax, pmin, Rational, Scalar};
use crate::setmodel::Tag;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShufflePiece {
    pub src: (Rational, Rational),
    pub dst: (Rational, Rational),
    /// `1` keeps orientation, `-1` flips the interval.
    pub dir: i8,
}

impl ShufflePiece {
    pub fn new(src: (Rational, Rational), dst: (Rational, Rational), dir: i8) -> Self {
        ShufflePiece { src, dst, dir }
    }

    fn len(&self) -> Rational {
        &self.src.1 - &self.src.0
    }

    /// Image of `x` under the affine bijection `src -> dst`.
    pub fn apply<T: Scalar>(&self, x: &T) -> T {
        let (a, c, d) = (
            T::from_rational(&self.src.0),
            T::from_rational(&self.dst.0),
            T::from_rational(&self.dst.1),
        );
        if self.dir > 0 {
            c + (x.clone() - a)
        } else {
            d - (x.clone() - a)
        }
    }
}

/// A shuffle of the Min copula. Pieces are kept sorted by source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleOfMin {
    pieces: Vec<ShufflePiece>,
}

fn tiles_unit(mut ivs: Vec<(Rational, Rational)>, what: &str) -> Result<()> {
    ivs.sort();
    let mut at = Rational::zero();
    for (lo, hi) in ivs {
        if lo != at {
            return input(format!("{what} intervals do not tile [0,1]: gap or overlap at {at}"));
        }
        at = hi;
    }
    if !at.is_one() {
        return input(format!("{what} intervals stop at {at}, not 1"));
    }
    Ok(())
}

impl ShuffleOfMin {
    pub fn new(mut pieces: Vec<ShufflePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return input("shuffle needs at least one piece");
        }
        for p in &pieces {
            if p.dir != 1 && p.dir != -1 {
                return input(format!("shuffle orientation must be 1 or -1, got {}", p.dir));
            }
            if p.src.0 >= p.src.1 || p.dst.0 >= p.dst.1 {
                return input("shuffle intervals must have positive length");
            }
            if p.len() != &p.dst.1 - &p.dst.0 {
                return input(format!(
                    "source [{}, {}] and target [{}, {}] differ in length",
                    p.src.0, p.src.1, p.dst.0, p.dst.1
                ));
            }
        }
        tiles_unit(pieces.iter().map(|p| p.src.clone()).collect(), "source")?;
        tiles_unit(pieces.iter().map(|p| p.dst.clone()).collect(), "target")?;
        pieces.sort_by(|a, b| a.src.cmp(&b.src));
        Ok(ShuffleOfMin { pieces })
    }

    pub fn identity() -> Self {
        ShuffleOfMin {
            pieces: vec![ShufflePiece::new((Rational::zero(), Rational::one()), (Rational::zero(), Rational::one()), 1)],
        }
    }

    pub fn pieces(&self) -> &[ShufflePiece] {
        &self.pieces
    }

    /// Piece whose half-open source `[a, b)` holds `x`; the last piece also owns 1.
    fn piece_for<T: Scalar>(&self, x: &T) -> &ShufflePiece {
        let last = self.pieces.len() - 1;
        self.pieces
            .iter()
            .enumerate()
            .find(|(i, p)| *x < T::from_rational(&p.src.1) || *i == last)
            .map(|(_, p)| p)
            .expect("nonempty")
    }

    /// The interval exchange `T`.
    pub fn map<T: Scalar>(&self, x: &T) -> T {
        self.piece_for(x).apply(x)
    }

    pub fn map_f64(&self, x: f64) -> f64 {
        self.map(&x).clamp(0.0, 1.0)
    }

    /// The shuffle of the transposed copula: sources and targets swap.
    pub fn inverse(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| ShufflePiece::new(p.dst.clone(), p.src.clone(), p.dir))
            .collect();
        ShuffleOfMin::new(pieces).expect("inverse of a valid shuffle")
    }

    /// Mass of `[0,u] x [0,v]`: the length of `{x <= u : T(x) <= v}`.
    pub fn cdf<T: Scalar>(&self, u: &T, v: &T) -> T {
        let mut total = T::zero();
        for p in &self.pieces {
            let a = T::from_rational(&p.src.0);
            let b = pmin(&T::from_rational(&p.src.1), u);
            if b <= a {
                continue;
            }
            let c = T::from_rational(&p.dst.0);
            let d = T::from_rational(&p.dst.1);
            let (lo, hi) = if p.dir > 0 {
                // c + (x - a) <= v
                (a.clone(), pmin(&b, &(a.clone() + v.clone() - c)))
            } else {
                // d - (x - a) <= v
                (pmax(&a, &(a.clone() + d - v.clone())), b)
            };
            if hi > lo {
                total = total + (hi - lo);
            }
        }
        total
    }

    pub fn to_map(&self) -> PiecewiseMap {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let (c0, c1) = if p.dir > 0 {
                    (&p.dst.0 - &p.src.0, Rational::one())
                } else {
                    (&p.dst.1 + &p.src.0, -Rational::one())
                };
                MapPiece { domain: vec![p.src.clone()], tag: Tag::Full, coeffs: vec![vec![c0, c1]] }
            })
            .collect();
        PiecewiseMap::new(1, 1, pieces).expect("shuffle map is a valid piecewise map")
    }

    /// Breakpoints of the source partition, for diagnostics.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.src.0.to_f64().unwrap_or(0.0)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn fig3() -> ShuffleOfMin {
        ShuffleOfMin::new(vec![
            ShufflePiece::new((rat(1, 5), rat(7, 10)), (int(0), rat(1, 2)), -1),
            ShufflePiece::new((int(0), rat(1, 5)), (rat(4, 5), int(1)), 1),
            ShufflePiece::new((rat(7, 10), int(1)), (rat(1, 2), rat(4, 5)), 1),
        ])
        .unwrap()
    }

    /// Independent oracle: integrate the indicator on a fine midpoint grid.
    fn cdf_oracle(s: &ShuffleOfMin, u: f64, v: f64) -> f64 {
        let n = 200_000;
        (0..n)
            .filter(|i| {
                let x = (*i as f64 + 0.5) / n as f64;
                x <= u && s.map_f64(x) <= v
            })
            .count() as f64
            / n as f64
    }

    #[test]
    fn cdf_values() {
        let s = fig3();
        assert_eq!(s.cdf(&int(1), &int(1)), int(1));
        assert_eq!(s.cdf(&rat(1, 5), &rat(1, 2)), int(0));
        assert_eq!(s.cdf(&rat(7, 10), &rat(1, 2)), rat(1, 2));
        for (u, v) in [(0.3, 0.9), (0.75, 0.6), (0.1, 0.95), (0.5, 0.25)] {
            let exact = s.cdf(&u, &v);
            assert!((exact - cdf_oracle(&s, u, v)).abs() < 1e-4, "{u} {v}");
        }
    }

    #[test]
    fn map_and_inverse() {
        let s = fig3();
        assert_eq!(s.map(&int(0)), rat(4, 5));
        assert_eq!(s.map(&rat(1, 5)), rat(1, 2));
        assert_eq!(s.map(&int(1)), rat(4, 5));
        let inv = s.inverse();
        for x in [rat(1, 10), rat(3, 10), rat(9, 10)] {
            assert_eq!(inv.map(&s.map(&x)), x);
        }
        assert_eq!(inv.inverse(), s);
    }

    #[test]
    fn rejects_bad_shuffles() {
        let bad_len = ShuffleOfMin::new(vec![ShufflePiece::new((int(0), int(1)), (int(0), rat(1, 2)), 1)]);
        assert!(bad_len.is_err());
        let gap = ShuffleOfMin::new(vec![
            ShufflePiece::new((int(0), rat(1, 2)), (int(0), rat(1, 2)), 1),
            ShufflePiece::new((rat(1, 2), int(1)), (rat(1, 4), rat(3, 4)), 1),
        ]);
        assert!(gap.is_err());
        let dir = ShuffleOfMin::new(vec![ShufflePiece::new((int(0), int(1)), (int(0), int(1)), 0)]);
        assert!(dir.is_err());
    }
}
