//! Degree sweeps of the Nikol'skii and Bernstein ratios over a fixed family
//! of test polynomials.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{bernstein_ratio, nikolskii_ratio, TrigPoly};
use crate::error::{Error, Result};
use crate::mixed_norm::ExponentVector;

/// `Π_j D_{N}(x_j)`: every coefficient 1.
pub fn dirichlet_poly(degree: &[u64]) -> TrigPoly {
    TrigPoly::from_fn(degree.to_vec(), true, |_| Complex64::new(1.0, 0.0)).expect("Hermitian")
}

/// `Π_j 𝒦_{N}(x_j)`: coefficients `Π (1 − |k_j|/(N_j + 1))`.
pub fn fejer_poly(degree: &[u64]) -> TrigPoly {
    TrigPoly::from_fn(degree.to_vec(), true, |k| {
        Complex64::new(k.iter().zip(degree).map(|(&kj, &n)| 1.0 - kj.unsigned_abs() as f64 / (n + 1) as f64).product(), 0.0)
    })
    .expect("Hermitian")
}

/// `Π_j cos(N_j x_j)`.
pub fn top_harmonic(degree: &[u64]) -> TrigPoly {
    TrigPoly::from_fn(degree.to_vec(), true, |k| {
        let on = k.iter().zip(degree).all(|(&kj, &n)| kj.unsigned_abs() == n);
        Complex64::new(if on { 0.5f64.powi(degree.iter().filter(|&&n| n > 0).count() as i32) } else { 0.0 }, 0.0)
    })
    .expect("Hermitian")
}

/// Real polynomial with independent uniform coefficients in the unit square.
pub fn random_real_poly(degree: &[u64], rng: &mut impl Rng) -> TrigPoly {
    let raw = TrigPoly::from_fn(degree.to_vec(), false, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).expect("sizes match");
    TrigPoly::from_fn(degree.to_vec(), true, |k| {
        let neg: Vec<i64> = k.iter().map(|v| -v).collect();
        (raw.get(k) + raw.get(&neg).conj()) * 0.5
    })
    .expect("symmetrized")
}

/// Dirichlet, Fejér and top-harmonic polynomials of degree `N` on every axis,
/// followed by `random` random ones.
pub fn test_family(d: usize, n: u64, random: usize, seed: u64) -> Vec<TrigPoly> {
    let deg = vec![n; d];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n);
    let mut out = vec![dirichlet_poly(&deg), fejer_poly(&deg), top_harmonic(&deg)];
    out.extend((0..random).map(|_| random_real_poly(&deg, &mut rng)));
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n: u64,
    pub max_ratio: f64,
}

fn check_ns(ns: &[u64]) -> Result<()> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::InvalidInput("sweep degrees must be nonempty and >= 1".into()));
    }
    Ok(())
}

/// Largest [`nikolskii_ratio`] over [`test_family`] for each `N`.
pub fn nikolskii_sweep(p: &ExponentVector, q: &ExponentVector, ns: &[u64], random: usize, seed: u64) -> Result<Vec<SweepPoint>> {
    check_ns(ns)?;
    ns.iter()
        .map(|&n| {
            let mx = test_family(p.d(), n, random, seed).iter().map(|t| nikolskii_ratio(t, p, q)).try_fold(0.0f64, |a, v| v.map(|v| a.max(v)))?;
            Ok(SweepPoint { n, max_ratio: mx })
        })
        .collect()
}

/// Largest [`bernstein_ratio`] over [`test_family`] for each `N`.
pub fn bernstein_sweep(r: &[f64], alpha: &[f64], p: &ExponentVector, ns: &[u64], random: usize, seed: u64) -> Result<Vec<SweepPoint>> {
    check_ns(ns)?;
    ns.iter()
        .map(|&n| {
            let mx = test_family(p.d(), n, random, seed).iter().map(|t| bernstein_ratio(t, r, alpha, p)).try_fold(0.0f64, |a, v| v.map(|v| a.max(v)))?;
            Ok(SweepPoint { n, max_ratio: mx })
        })
        .collect()
}

/// Largest ratio of consecutive sweep maxima.
pub fn max_growth(points: &[SweepPoint]) -> f64 {
    points.windows(2).map(|w| w[1].max_ratio / w[0].max_ratio).fold(f64::NEG_INFINITY, f64::max)
}
