//! Scalar abstraction shared by the symbolic geometry and the copula formulas.
//!
//! The symbolic engine is meant to run on [`Rational`]; the same code also
//! compiles for `f64`/`f32`, which is handy for quick approximate evaluation.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{input, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_rational(r: &Rational) -> Self;

    /// Largest integer not above `self`.
    fn floor_int(&self) -> i64;

    fn is_integral(&self) -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&rat(num, den))
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn floor_int(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor fits in i64")
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }

    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
}

impl Scalar for f32 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }

    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-level` as an exact rational.
pub fn dyadic(level: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << level as usize)
}

/// Parses `"3"`, `"-1/5"` or a finite decimal such as `"0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return input("empty number");
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad_number(s))?;
        let d: BigInt = d.trim().parse().map_err(|_| bad_number(s))?;
        if d.is_zero() {
            return input(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad_number(s))?),
        None => (t, 0),
    };
    let neg = mantissa.starts_with('-');
    let digits = mantissa.trim_start_matches(['-', '+']);
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad_number(s));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad_number(s));
    }
    let all: BigInt = format!("{whole}{frac}0").parse().map_err(|_| bad_number(s))?;
    let all = all / BigInt::from(10);
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(all);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

fn bad_number(s: &str) -> crate::error::Error {
    crate::error::Error::Input(format!("not a rational number: {s:?}"))
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub(crate) fn pmin<T: PartialOrd + Clone>(a: &T, b: &T) -> T {
    if b < a { b.clone() } else { a.clone() }
}

pub(crate) fn pmax<T: PartialOrd + Clone>(a: &T, b: &T) -> T {
    if b > a { b.clone() } else { a.clone() }
}

pub(crate) fn in_unit<T: Scalar>(x: &T) -> bool {
    *x >= T::zero() && *x <= T::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/5").unwrap(), rat(1, 5));
        assert_eq!(parse_rational(" -3/6 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("0.2").unwrap(), rat(1, 5));
        assert_eq!(parse_rational("1").unwrap(), int(1));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("2.5E1").unwrap(), int(25));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn formats_as_num_den() {
        assert_eq!(format_rational(&rat(4, 5)), "4/5");
        assert_eq!(format_rational(&int(1)), "1");
        assert_eq!(format_rational(&rat(0, 7)), "0");
    }

    #[test]
    fn floor_and_integrality() {
        assert_eq!(rat(7, 2).floor_int(), 3);
        assert_eq!(rat(-1, 2).floor_int(), -1);
        assert!(int(4).is_integral());
        assert!(!rat(1, 3).is_integral());
        assert_eq!(2.5f64.floor_int(), 2);
        assert!(<f64 as Scalar>::half() == 0.5);
        assert_eq!(dyadic(3), rat(1, 8));
    }
}
