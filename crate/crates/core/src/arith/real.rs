//! Scalars that stay exact while their inputs are rational.
//!
//! Every exponent formula in this crate is a rational function of the
//! reciprocals `1/p_j`, `1/q_j`, `1/r_j`. Keeping those in `BigRational`
//! lets boundary conditions such as "strictly positive" be decided exactly.
//! A value degrades to `f64` only when an approximate operand enters.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Real {
    Exact(BigRational),
    Approx(f64),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Real::Exact(BigRational::one())
    }

    pub fn int(v: i64) -> Self {
        Real::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Real::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Converts through the shortest decimal representation, so `0.3`
    /// becomes exactly `3/10`. Non-finite input stays approximate.
    pub fn from_f64(v: f64) -> Self {
        if !v.is_finite() {
            return Real::Approx(v);
        }
        parse_decimal(&format!("{v}")).map_or(Real::Approx(v), Real::Exact)
    }

    pub fn approx(v: f64) -> Self {
        Real::Approx(v)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => rational_to_f64(r),
            Real::Approx(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Approx(v) => *v == 0.0,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Real::Exact(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
            Real::Approx(v) => {
                if *v > 0.0 {
                    1
                } else if *v < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Real {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `max(self, 0)`.
    pub fn pos_part(&self) -> Real {
        if self.is_negative() {
            Real::zero()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Real> {
        if self.is_zero() {
            return Err(Error::Arithmetic("reciprocal of zero".into()));
        }
        Ok(match self {
            Real::Exact(r) => Real::Exact(r.recip()),
            Real::Approx(v) => Real::Approx(1.0 / v),
        })
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn total_cmp(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Parses `12`, `-1.25`, `3e-2` or `4/3` into an exact rational.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n)?;
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

impl FromStr for Real {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_decimal(s)
            .map(Real::Exact)
            .ok_or_else(|| Error::Parse(format!("not a rational number: {s:?}")))
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::int(v)
    }
}

impl From<BigRational> for Real {
    fn from(v: BigRational) -> Self {
        Real::Exact(v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{r}"),
            Real::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.total_cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                match (self, rhs) {
                    (Real::Exact(a), Real::Exact(b)) => Real::Exact(a $op b),
                    _ => Real::Approx(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                &self $op &rhs
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                &self $op rhs
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<&Real> for &Real {
    type Output = Real;
    /// Panics on exact division by zero; callers check denominators first.
    fn div(self, rhs: &Real) -> Real {
        match (self, rhs) {
            (Real::Exact(a), Real::Exact(b)) => {
                assert!(!b.is_zero(), "exact division by zero");
                Real::Exact(a / b)
            }
            _ => Real::Approx(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl Div<Real> for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        &self / &rhs
    }
}

impl Div<&Real> for Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        &self / rhs
    }
}

impl Div<Real> for &Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        self / &rhs
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(-a),
            Real::Approx(v) => Real::Approx(-v),
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |acc, x| acc + x)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Real::Exact(r) if r.is_integer() => match r.numer().to_i64() {
                Some(v) => s.serialize_i64(v),
                None => s.serialize_str(&r.to_string()),
            },
            Real::Exact(r) => s.serialize_str(&r.to_string()),
            Real::Approx(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Real::int(v)),
            Raw::Float(v) => Ok(Real::from_f64(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!("0.3".parse::<Real>().unwrap(), Real::ratio(3, 10));
        assert_eq!("4/3".parse::<Real>().unwrap(), Real::ratio(4, 3));
        assert_eq!("-1.25e1".parse::<Real>().unwrap(), Real::ratio(-25, 2));
        assert_eq!(Real::from_f64(0.1), Real::ratio(1, 10));
        assert!("abc".parse::<Real>().is_err());
        assert!("1/0".parse::<Real>().is_err());
    }

    #[test]
    fn exactness_degrades_only_with_approx_operands() {
        let a = Real::ratio(1, 3) + Real::ratio(2, 3);
        assert!(a.is_exact());
        assert_eq!(a, Real::one());
        let b = Real::ratio(1, 3) + Real::approx(0.5);
        assert!(!b.is_exact());
        assert!((b.to_f64() - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn serde_keeps_fractions() {
        let v = serde_json::to_string(&Real::ratio(3, 2)).unwrap();
        assert_eq!(v, "\"3/2\"");
        let back: Real = serde_json::from_str(&v).unwrap();
        assert_eq!(back, Real::ratio(3, 2));
        let n: Real = serde_json::from_str("2.5").unwrap();
        assert_eq!(n, Real::ratio(5, 2));
    }
}
