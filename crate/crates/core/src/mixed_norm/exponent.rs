use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Real;
use crate::error::{Error, Result};

/// A Lebesgue exponent `p ∈ [1, ∞]`, stored as `1/p` so that `∞` is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Exponent {
    recip: Real,
}

impl Exponent {
    pub fn infinity() -> Self {
        Exponent { recip: Real::zero() }
    }

    pub fn from_value(p: Real) -> Result<Self> {
        if p < Real::one() {
            return Err(Error::InvalidInput(format!("exponent {p} is below 1")));
        }
        Ok(Exponent { recip: p.recip()? })
    }

    pub fn from_recip(recip: Real) -> Result<Self> {
        if recip.is_negative() || recip > Real::one() {
            return Err(Error::InvalidInput(format!("reciprocal exponent {recip} outside [0, 1]")));
        }
        Ok(Exponent { recip })
    }

    /// Accepts `f64::INFINITY`; finite values go through their decimal form.
    pub fn from_f64(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::infinity())
        } else if p.is_nan() {
            Err(Error::InvalidInput("NaN exponent".into()))
        } else {
            Self::from_value(Real::from_f64(p))
        }
    }

    pub fn int(p: i64) -> Self {
        Self::from_value(Real::int(p)).expect("integer exponent must be >= 1")
    }

    pub fn recip(&self) -> &Real {
        &self.recip
    }

    pub fn recip_f64(&self) -> f64 {
        self.recip.to_f64()
    }

    pub fn is_infinite(&self) -> bool {
        self.recip.is_zero()
    }

    /// `None` for `p = ∞`.
    pub fn value(&self) -> Option<Real> {
        if self.is_infinite() {
            None
        } else {
            Some(self.recip.recip().expect("nonzero"))
        }
    }

    pub fn value_f64(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            1.0 / self.recip_f64()
        }
    }

    /// The conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn dual(&self) -> Exponent {
        Exponent { recip: Real::one() - &self.recip }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Self::infinity()),
            other => Self::from_value(other.parse()?),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value() {
            None => s.serialize_str("inf"),
            Some(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Int(v) => Exponent::from_value(Real::int(v)),
            Raw::Float(v) => Exponent::from_f64(v),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// A d-vector of Lebesgue exponents, e.g. `p̄`, `q̄` or their duals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<Exponent>);

impl ExponentVector {
    pub fn new(entries: Vec<Exponent>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("exponent vector must have d >= 1".into()));
        }
        Ok(ExponentVector(entries))
    }

    /// `f64::INFINITY` encodes `p = ∞`.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Exponent::from_f64(v)).collect::<Result<_>>()?)
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Exponent::from_value(Real::int(v))).collect::<Result<_>>()?)
    }

    pub fn parse(values: &[&str]) -> Result<Self> {
        Self::new(values.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn from_recips(recips: Vec<Real>) -> Result<Self> {
        Self::new(recips.into_iter().map(Exponent::from_recip).collect::<Result<_>>()?)
    }

    pub fn uniform(d: usize, p: Exponent) -> Result<Self> {
        Self::new(vec![p; d])
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, j: usize) -> &Exponent {
        &self.0[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Exponent> {
        self.0.iter()
    }

    pub fn recips(&self) -> Vec<Real> {
        self.0.iter().map(|e| e.recip().clone()).collect()
    }

    pub fn recips_f64(&self) -> Vec<f64> {
        self.0.iter().map(Exponent::recip_f64).collect()
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.0.iter().map(Exponent::value_f64).collect()
    }

    /// Entry `j` of the result is entry `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        ExponentVector(perm.iter().map(|&i| self.0[i].clone()).collect())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        Self::new(self.0[range].to_vec())
    }
}

/// Entrywise conjugate exponents.
pub fn dual_exponents(p: &ExponentVector) -> ExponentVector {
    ExponentVector(p.iter().map(Exponent::dual).collect())
}
