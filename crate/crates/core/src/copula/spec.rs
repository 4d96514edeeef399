//! Copula families and their C-volumes.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};

use super::piecewise::{validate_measure_preserving, PiecewiseMap};
use super::shuffle::ShuffleOfMin;
use crate::error::{input, Error, Result};
use crate::scalar::{pmax, pmin, Rational, Scalar};
use crate::setmodel::Permutation;

/// Level at which piecewise maps are checked before they may define a copula.
pub const ADMISSION_LEVEL: u32 = 10;

pub type RawFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum CopulaSpec {
    Product(usize),
    Min(usize),
    WLower2,
    Shuffle(ShuffleOfMin),
    /// `(U, F(U))` with `U` uniform on `[0,1]^n`, `F` the map.
    Bipartite(PiecewiseMap),
    /// A user formula, evaluated in binary64. Not necessarily a copula.
    Raw { k: usize, name: String, f: RawFn },
    /// Law of `(X_{sigma(1)}, .., X_{sigma(k)})` for `X` drawn from `inner`.
    Permuted { inner: Box<CopulaSpec>, sigma: Permutation },
}

impl fmt::Debug for CopulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopulaSpec::Product(k) => write!(f, "Product({k})"),
            CopulaSpec::Min(k) => write!(f, "Min({k})"),
            CopulaSpec::WLower2 => write!(f, "WLower2"),
            CopulaSpec::Shuffle(s) => f.debug_tuple("Shuffle").field(s).finish(),
            CopulaSpec::Bipartite(m) => f.debug_tuple("Bipartite").field(m).finish(),
            CopulaSpec::Raw { k, name, .. } => write!(f, "Raw({k}, {name:?})"),
            CopulaSpec::Permuted { inner, sigma } => {
                f.debug_struct("Permuted").field("inner", inner).field("sigma", sigma).finish()
            }
        }
    }
}

/// A C-volume, exact whenever the family allows it.
#[derive(Clone, Debug, PartialEq)]
pub enum Volume {
    Exact(Rational),
    Approx(f64),
}

impl Volume {
    pub fn to_f64(&self) -> f64 {
        match self {
            Volume::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Volume::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Volume::Exact(r) => Some(r),
            Volume::Approx(_) => None,
        }
    }
}

impl CopulaSpec {
    pub fn product(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(CopulaSpec::Product(k))
    }

    pub fn min(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(CopulaSpec::Min(k))
    }

    /// Admits `map` only if every output coordinate is measure preserving.
    pub fn bipartite(map: PiecewiseMap) -> Result<Self> {
        let check = validate_measure_preserving(&map, ADMISSION_LEVEL)?;
        if !check.preserving {
            return input(format!(
                "map is not measure preserving: a level-{ADMISSION_LEVEL} bin is off by {}",
                check.max_deviation
            ));
        }
        Ok(CopulaSpec::Bipartite(map))
    }

    pub fn raw(k: usize, name: impl Into<String>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Result<Self> {
        check_k(k)?;
        Ok(CopulaSpec::Raw { k, name: name.into(), f: Arc::new(f) })
    }

    pub fn k(&self) -> usize {
        match self {
            CopulaSpec::Product(k) | CopulaSpec::Min(k) | CopulaSpec::Raw { k, .. } => *k,
            CopulaSpec::WLower2 | CopulaSpec::Shuffle(_) => 2,
            CopulaSpec::Bipartite(m) => m.n() + m.m(),
            CopulaSpec::Permuted { inner, .. } => inner.k(),
        }
    }

    /// Whether C-volumes are computed in exact arithmetic.
    pub fn is_exact(&self) -> bool {
        match self {
            CopulaSpec::Raw { .. } => false,
            CopulaSpec::Permuted { inner, .. } => inner.is_exact(),
            _ => true,
        }
    }

    /// The copula of the permuted vector, simplified where a family is closed
    /// under the permutation.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        sigma.check_len(self.k())?;
        if *sigma == Permutation::identity(self.k()) {
            return Ok(self.clone());
        }
        Ok(match self {
            CopulaSpec::Product(_) | CopulaSpec::Min(_) | CopulaSpec::WLower2 => self.clone(),
            CopulaSpec::Shuffle(s) => CopulaSpec::Shuffle(s.inverse()),
            CopulaSpec::Permuted { inner, sigma: first } => {
                // y_i = x_{first[sigma[i]]}
                let composed: Vec<usize> = sigma.as_slice().iter().map(|&i| first.as_slice()[i]).collect();
                inner.permuted(&Permutation::new(composed)?)?
            }
            _ => CopulaSpec::Permuted { inner: Box::new(self.clone()), sigma: sigma.clone() },
        })
    }

    /// `C(u)`. `u` must lie in the unit cube.
    pub fn cdf<T: Scalar>(&self, u: &[T]) -> Result<T> {
        if u.len() != self.k() {
            return input(format!("copula of dimension {} evaluated at a point of dimension {}", self.k(), u.len()));
        }
        if u.iter().any(|x| *x < T::zero() || *x > T::one()) {
            return input("copula argument outside [0,1]^k");
        }
        Ok(match self {
            CopulaSpec::Product(_) => u.iter().cloned().fold(T::one(), |a, b| a * b),
            CopulaSpec::Min(_) => u[1..].iter().fold(u[0].clone(), |a, b| pmin(&a, b)),
            CopulaSpec::WLower2 => pmax(&(u[0].clone() + u[1].clone() - T::one()), &T::zero()),
            CopulaSpec::Shuffle(s) => s.cdf(&u[0], &u[1]),
            CopulaSpec::Bipartite(m) => m.joint_cdf(&u[..m.n()], &u[m.n()..]),
            CopulaSpec::Raw { f, .. } => {
                let x: Vec<f64> = u.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
                T::from_f64(f(&x)).ok_or_else(|| Error::Input("raw copula returned a non-finite value".into()))?
            }
            CopulaSpec::Permuted { inner, sigma } => inner.cdf(&sigma.inverse().apply(u))?,
        })
    }

    /// Signed corner sum over the box. Corner bit `i` set means the upper end
    /// on axis `i`; each lower end flips the sign.
    pub fn c_volume_in<T: Scalar>(&self, bx: &[(T, T)]) -> Result<T> {
        let k = self.k();
        if bx.len() != k {
            return input(format!("box of dimension {} for a copula of dimension {k}", bx.len()));
        }
        if bx.iter().any(|(lo, hi)| *lo < T::zero() || hi < lo || *hi > T::one()) {
            return input("box not inside [0,1]^k");
        }
        let mut total = T::zero();
        for bits in 0..1usize << k {
            let z: Vec<T> = (0..k)
                .map(|i| if bits >> i & 1 == 1 { bx[i].1.clone() } else { bx[i].0.clone() })
                .collect();
            let lower = k - bits.count_ones() as usize;
            let c = self.cdf(&z)?;
            total = if lower % 2 == 0 { total + c } else { total - c };
        }
        Ok(total)
    }

    pub fn c_volume(&self, bx: &[(Rational, Rational)]) -> Result<Volume> {
        if self.is_exact() {
            Ok(Volume::Exact(self.c_volume_in(bx)?))
        } else {
            let b: Vec<(f64, f64)> = bx
                .iter()
                .map(|(lo, hi)| (lo.to_f64().unwrap_or(f64::NAN), hi.to_f64().unwrap_or(f64::NAN)))
                .collect();
            Ok(Volume::Approx(self.c_volume_in(&b)?))
        }
    }

    /// Volume of the slab `[0,u]` on `axis`, full elsewhere; `u` for a copula.
    pub fn slab_volume(&self, axis: usize, u: &Rational) -> Result<Volume> {
        if axis >= self.k() {
            return input(format!("axis {axis} out of range"));
        }
        let bx: Vec<(Rational, Rational)> = (0..self.k())
            .map(|i| (Rational::zero(), if i == axis { u.clone() } else { Rational::one() }))
            .collect();
        self.c_volume(&bx)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return input(format!("copulas need k >= 2, got {k}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn volumes() {
        let half = (int(0), rat(1, 2));
        assert_eq!(CopulaSpec::product(2).unwrap().c_volume(&[half.clone(), half.clone()]).unwrap(), Volume::Exact(rat(1, 4)));
        let m = CopulaSpec::min(2).unwrap();
        assert_eq!(m.c_volume(&[half, (rat(1, 2), int(1))]).unwrap(), Volume::Exact(int(0)));
        let w3 = CopulaSpec::raw(3, "w3", |u| (u[0] + u[1] + u[2] - 2.0).max(0.0)).unwrap();
        let v = w3.c_volume(&vec![(rat(1, 2), int(1)); 3]).unwrap();
        assert!((v.to_f64() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn corner_sum_matches_direct_oracle() {
        // oracle: V = C(b) - C(a1,b2) - C(b1,a2) + C(a) for k = 2
        let w = CopulaSpec::WLower2;
        let (a1, b1, a2, b2) = (rat(1, 8), rat(7, 8), rat(1, 4), rat(5, 8));
        let c = |x: &Rational, y: &Rational| w.cdf(&[x.clone(), y.clone()]).unwrap();
        let direct = c(&b1, &b2) - c(&a1, &b2) - c(&b1, &a2) + c(&a1, &a2);
        assert_eq!(w.c_volume_in(&[(a1, b1), (a2, b2)]).unwrap(), direct);
    }

    #[test]
    fn permutation_algebra() {
        let raw = CopulaSpec::raw(3, "asym", |u| u[0] * u[1].min(u[2])).unwrap();
        let s = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let p = raw.permuted(&s).unwrap();
        // y = (x2, x3, x1): C_s(a, b, c) = C(c, a, b)
        let (a, b, c): (f64, f64, f64) = (0.3, 0.6, 0.8);
        assert!((p.cdf(&[a, b, c]).unwrap() - c * a.min(b)).abs() < 1e-15);
        let back = p.permuted(&s.inverse()).unwrap();
        assert!(matches!(back, CopulaSpec::Raw { .. }));
        assert!(matches!(CopulaSpec::min(3).unwrap().permuted(&s).unwrap(), CopulaSpec::Min(3)));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(CopulaSpec::product(1).is_err());
        let p = CopulaSpec::product(2).unwrap();
        assert!(p.cdf(&[int(2), int(0)]).is_err());
        assert!(p.c_volume(&[(int(0), int(1))]).is_err());
        assert!(p.c_volume(&[(rat(1, 2), rat(1, 4)), (int(0), int(1))]).is_err());
    }
}
