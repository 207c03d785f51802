//! Scalar abstractions shared by the exact and floating-point code paths.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, Num, One, ToPrimitive, Zero};

/// Exact rational type used for all weights.
pub type Rational = BigRational;

/// Field-like scalar a vertex function can take values in.
///
/// Weights are always exact; `from_rational` is the single point where
/// they are converted into the scalar of the computation.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
}

/// Floating-point scalar for the eigensolver.
pub trait Real: Scalar + Float {
    /// Default convergence threshold for the off-diagonal Frobenius norm.
    fn jacobi_tolerance() -> Self;
}

impl Scalar for BigRational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Scalar for Ratio<i64> {
    fn from_rational(r: &Rational) -> Self {
        let n = r.numer().to_i64().expect("numerator fits i64");
        let d = r.denom().to_i64().expect("denominator fits i64");
        Ratio::new(n, d)
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r) as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Real for f64 {
    fn jacobi_tolerance() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn jacobi_tolerance() -> Self {
        1e-5
    }
}

/// Converts without overflowing on huge numerators/denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // scale down both sides by a common power of two
    let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `p/q`, or `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde helper writing a rational as its `p/q` string.
pub fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// [`ser_rational`] for optional fields.
pub fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_rational(r)),
        None => s.serialize_none(),
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_format() {
        for s in ["1/3", "-2/7", "5", "0"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(fmt_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(10).pow(400);
        let r = Rational::new(big.clone() + 1, big * 3);
        assert!((rational_to_f64(&r) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(factorial(4), BigInt::from(24));
    }
}
