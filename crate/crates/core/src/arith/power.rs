//! Products of integer bases raised to rational powers, `Π b_i^{e_i}`.
//!
//! Bases are factored into primes so that the representation is canonical:
//! two products are equal iff their prime-exponent maps coincide. Ordering
//! is decided exactly by clearing denominators and comparing big integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::Real;

/// Above this many bits in either side of an exact comparison we fall back
/// to comparing logarithms.
const EXACT_BITS_LIMIT: f64 = 4.0e6;

#[derive(Clone, Debug, Default)]
pub struct PowerProduct {
    factors: BTreeMap<u64, Real>,
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    /// `base^exp` for a positive integer base.
    pub fn pow_int(base: u64, exp: &Real) -> Self {
        assert!(base > 0, "power product bases must be positive");
        let mut out = Self::one();
        if exp.is_zero() {
            return out;
        }
        for (p, e) in factorize(base) {
            out.insert(p, exp * Real::int(e as i64));
        }
        out
    }

    pub fn from_int(v: u64) -> Self {
        Self::pow_int(v, &Real::one())
    }

    fn insert(&mut self, prime: u64, exp: Real) {
        let entry = self.factors.entry(prime).or_insert_with(Real::zero);
        *entry = &*entry + &exp;
        if entry.is_zero() {
            self.factors.remove(&prime);
        }
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut out = self.clone();
        for (p, e) in &other.factors {
            out.insert(*p, e.clone());
        }
        out
    }

    pub fn div(&self, other: &PowerProduct) -> PowerProduct {
        self.mul(&other.powr(&Real::int(-1)))
    }

    pub fn powr(&self, exp: &Real) -> PowerProduct {
        let mut out = PowerProduct::one();
        if exp.is_zero() {
            return out;
        }
        for (p, e) in &self.factors {
            out.insert(*p, e * exp);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.factors.values().all(Real::is_exact)
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, &Real)> {
        self.factors.iter().map(|(p, e)| (*p, e))
    }

    pub fn ln(&self) -> f64 {
        self.factors.iter().map(|(p, e)| e.to_f64() * (*p as f64).ln()).sum()
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    /// Exact three-way comparison with `1`.
    pub fn cmp_one(&self) -> Ordering {
        if self.factors.is_empty() {
            return Ordering::Equal;
        }
        if !self.is_exact() {
            return self.ln().total_cmp(&0.0);
        }
        let mut lcm = BigInt::one();
        for e in self.factors.values() {
            lcm = lcm.lcm(e.as_exact().unwrap().denom());
        }
        let mut bits_pos = 0.0;
        let mut bits_neg = 0.0;
        let mut scaled = Vec::with_capacity(self.factors.len());
        for (p, e) in &self.factors {
            let r = e.as_exact().unwrap();
            let k = r.numer() * (&lcm / r.denom());
            let bits = k.abs().to_f64().unwrap_or(f64::INFINITY) * (*p as f64).log2();
            if k.is_positive() {
                bits_pos += bits;
            } else {
                bits_neg += bits;
            }
            scaled.push((*p, k));
        }
        if bits_pos.max(bits_neg) > EXACT_BITS_LIMIT {
            return self.ln().total_cmp(&0.0);
        }
        let mut pos = BigUint::one();
        let mut neg = BigUint::one();
        for (p, k) in scaled {
            let e = k.abs().to_u32().expect("exponent bounded by bit limit");
            let term = num_traits::pow(BigUint::from(p), e as usize);
            if k.is_positive() {
                pos *= term;
            } else {
                neg *= term;
            }
        }
        pos.cmp(&neg)
    }

    pub fn exact_cmp(&self, other: &PowerProduct) -> Ordering {
        self.div(other).cmp_one()
    }

    /// Smallest positive integer `c ≥ self`.
    pub fn ceil(&self) -> u64 {
        let mut c = (self.to_f64().ceil() as u64).max(1);
        while c > 1 && PowerProduct::from_int(c - 1).exact_cmp(self) != Ordering::Less {
            c -= 1;
        }
        while PowerProduct::from_int(c).exact_cmp(self) == Ordering::Less {
            c += 1;
        }
        c
    }

    /// Largest integer `c ≤ self`; requires `self ≥ 1`.
    pub fn floor(&self) -> u64 {
        let c = self.ceil();
        if PowerProduct::from_int(c).exact_cmp(self) == Ordering::Equal {
            c
        } else {
            c - 1
        }
    }
}

impl PartialEq for PowerProduct {
    fn eq(&self, other: &Self) -> bool {
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(other.factors.iter())
                .all(|((p, e), (q, f))| p == q && e == f)
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(p, e)| format!("{p}^({e})")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl Serialize for PowerProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
