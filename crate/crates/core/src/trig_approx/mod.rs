//! Periodic kernels, de la Vallée Poussin operators and fractional Weyl
//! calculus on `T^d = [0, 2π]^d`, plus empirical checks of the Nikol'skii and
//! Bernstein inequalities.
//!
//! Every operator acts in coefficient space through a multiplier. Norms use
//! grid quadrature under the normalized measure `dx / 2π` per axis.

mod poly;
mod rates;
mod sweeps;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{dyadic_degrees, Smoothness};
use crate::mixed_norm::{ExponentVector, Tensor};

pub use poly::{for_each_frequency, grid_norm, quad_grid, Coef, ExactTrigPoly, Poly, QComplex, TrigPoly};
pub use rates::{approximation_rate, h_class_check, HCheck, PackagedFunction, RateReport};
pub use sweeps::{
    bernstein_sweep, dirichlet_poly, fejer_poly, max_growth, nikolskii_sweep, random_real_poly, test_family, top_harmonic, SweepPoint,
};

/// Default number of Bernoulli terms.
pub const BERNOULLI_TERMS: usize = 10_000;

/// `𝒦_{m−1}(x) = sin²(mx/2) / (m sin²(x/2))`, equal to `m` on `2πZ`.
pub fn fejer(m: u64, x: f64) -> f64 {
    assert!(m >= 1, "Fejér order must be >= 1");
    let s = (x / 2.0).sin();
    if s.abs() < 1e-6 {
        // the cosine sum is exact and stable near the singularity
        let mf = m as f64;
        return 1.0 + 2.0 * (1..m).map(|k| (1.0 - k as f64 / mf) * (k as f64 * x).cos()).sum::<f64>();
    }
    let t = (m as f64 * x / 2.0).sin();
    t * t / (m as f64 * s * s)
}

/// `𝒱_m = 2𝒦_{2m−1} − 𝒦_{m−1}`.
pub fn vallee_poussin(m: u64, x: f64) -> f64 {
    2.0 * fejer(2 * m, x) - fejer(m, x)
}

/// `Π_j 𝒱_{N_j}(x_j)`.
pub fn vallee_poussin_product(n: &[u64], x: &[f64]) -> f64 {
    n.iter().zip(x).map(|(&m, &xj)| vallee_poussin(m, xj)).product()
}

/// Fourier coefficient of `𝒦_{m−1}` at `k`.
pub fn fejer_multiplier(m: u64, k: i64) -> f64 {
    (1.0 - k.unsigned_abs() as f64 / m as f64).max(0.0)
}

/// Fourier coefficient of `𝒱_m` at `k` as an exact ratio: 1 on `|k| ≤ m`,
/// `(2m − |k|)/m` up to `2m`, 0 beyond.
pub fn vp_ratio(m: u64, k: i64) -> (i128, i128) {
    let a = k.unsigned_abs();
    if a <= m {
        (1, 1)
    } else if a < 2 * m {
        ((2 * m - a) as i128, m as i128)
    } else {
        (0, 1)
    }
}

pub fn vp_multiplier(m: u64, k: i64) -> f64 {
    let (a, b) = vp_ratio(m, k);
    a as f64 / b as f64
}

fn check_orders(n: &[u64], d: usize) -> Result<()> {
    if n.len() != d {
        return Err(Error::DimensionMismatch(format!("N has {} entries, polynomial d = {d}", n.len())));
    }
    if n.contains(&0) {
        return Err(Error::InvalidInput("de la Vallée Poussin orders must be >= 1".into()));
    }
    Ok(())
}

/// `V_{N̄} f = f * 𝒱_{N̄}`, computed coefficientwise. The result lies in
/// `𝒯(2N̄ − 1̄, d)` and is exact over [`ExactTrigPoly`].
pub fn vp_operator<C: Coef>(f: &Poly<C>, n: &[u64]) -> Result<Poly<C>> {
    check_orders(n, f.d())?;
    let degree: Vec<u64> = f.degree().iter().zip(n).map(|(&a, &m)| a.min(2 * m - 1)).collect();
    Ok(f.multiply(&degree, true, |k, c| {
        let (mut num, mut den) = (1i128, 1i128);
        for (&kj, &m) in k.iter().zip(n) {
            let (a, b) = vp_ratio(m, kj);
            num *= a;
            den *= b;
        }
        c.scale_ratio(num, den)
    }))
}

/// `V_{N̄}` applied to grid samples. The grid must have at least `4N_j + 1`
/// points per axis, and the samples are taken to be band-limited to
/// `2N̄ − 1̄`.
pub fn vp_sampled(samples: &Tensor, n: &[u64]) -> Result<TrigPoly> {
    let grid = samples.shape();
    check_orders(n, grid.len())?;
    if let Some(j) = (0..grid.len()).find(|&j| grid[j] < 4 * n[j] as usize + 1) {
        return Err(Error::Aliasing(format!("axis {j}: {} samples, need >= 4N+1 = {}", grid[j], 4 * n[j] + 1)));
    }
    let vals: Vec<Complex64> = samples.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let deg: Vec<u64> = n.iter().map(|&m| 2 * m - 1).collect();
    let f = TrigPoly::from_samples(&vals, grid, &deg, true)?;
    vp_operator(&f, n)
}

/// `⌊2^{β̄m}⌋` for the smoothness vector.
pub fn dyadic_orders(r: &Smoothness, m: u32) -> Vec<u64> {
    dyadic_degrees(&r.beta(), m)
}

/// `V(r̄, m) = V_{⌊2^{β̄m}⌋}`.
pub fn vp_dyadic<C: Coef>(f: &Poly<C>, r: &Smoothness, m: u32) -> Result<Poly<C>> {
    if r.d() != f.d() {
        return Err(Error::DimensionMismatch(format!("smoothness has d = {}, polynomial d = {}", r.d(), f.d())));
    }
    vp_operator(f, &dyadic_orders(r, m))
}

/// `A(r̄, m) = V(r̄, m) − V(r̄, m − 1)`, and `V(r̄, 0)` for `m = 0`.
pub fn dyadic_block<C: Coef>(f: &Poly<C>, r: &Smoothness, m: u32) -> Result<Poly<C>> {
    let cur = vp_dyadic(f, r, m)?;
    if m == 0 {
        return Ok(cur);
    }
    cur.sub(&vp_dyadic(f, r, m - 1)?)
}

/// Value of a Bernoulli partial sum with its tail bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BernoulliValue {
    pub value: f64,
    /// `2 Σ_{k>T} k^{−r} ≤ 2T^{1−r}/(r−1)`; absent for `r ≤ 1`, where the
    /// series converges only in `L_1`.
    pub tail_bound: Option<f64>,
}

/// `F_r(x, α) ≈ 1 + 2 Σ_{k≤T} k^{−r} cos(kx − απ/2)`.
pub fn bernoulli_kernel(r: f64, alpha: f64, x: f64, truncation: usize) -> Result<BernoulliValue> {
    if !(r > 0.0) || truncation == 0 {
        return Err(Error::InvalidInput(format!("need r > 0 and truncation >= 1, got r = {r}, T = {truncation}")));
    }
    let ph = alpha * PI / 2.0;
    // sum small terms first
    let s: f64 = (1..=truncation).rev().map(|k| (k as f64).powf(-r) * (k as f64 * x - ph).cos()).sum();
    let tail_bound = (r > 1.0).then(|| 2.0 * (truncation as f64).powf(1.0 - r) / (r - 1.0));
    Ok(BernoulliValue { value: 1.0 + 2.0 * s, tail_bound })
}

fn phase(k: i64, alpha: f64) -> Complex64 {
    Complex64::from_polar(1.0, k.signum() as f64 * alpha * PI / 2.0)
}

fn check_axis(t: &TrigPoly, j: usize) -> Result<()> {
    if j >= t.d() {
        return Err(Error::DimensionMismatch(format!("axis {j} out of range for d = {}", t.d())));
    }
    Ok(())
}

/// `I^r_α t = t * F_r(·, α)` along axis `j`: `c_k ↦ |k_j|^{−r} e^{−i sgn(k_j) απ/2} c_k`,
/// with the mean along `j` kept.
pub fn bernoulli_convolution(t: &TrigPoly, j: usize, r: f64, alpha: f64) -> Result<TrigPoly> {
    check_axis(t, j)?;
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("Bernoulli convolution needs r > 0, got {r}")));
    }
    Ok(t.multiply(t.degree(), true, |k, c| if k[j] == 0 { *c } else { c * (k[j].unsigned_abs() as f64).powf(-r) * phase(k[j], -alpha) }))
}

/// Weyl derivative along axis `j`: `c_k ↦ |k_j|^r e^{i sgn(k_j) απ/2} c_k`.
///
/// For `r > 0` the harmonics with `k_j = 0` are sent to 0 (zero-mean
/// convention); for `r = 0` they are kept.
pub fn weyl_derivative(t: &TrigPoly, j: usize, r: f64, alpha: f64) -> Result<TrigPoly> {
    check_axis(t, j)?;
    if !(r >= 0.0) {
        return Err(Error::InvalidInput(format!("Weyl derivative needs r >= 0, got {r}")));
    }
    Ok(t.multiply(t.degree(), true, |k, c| {
        if k[j] == 0 {
            if r == 0.0 {
                *c
            } else {
                Complex64::new(0.0, 0.0)
            }
        } else {
            c * (k[j].unsigned_abs() as f64).powf(r) * phase(k[j], alpha)
        }
    }))
}

/// Fourier coefficient of `𝒱^r_n(·, α)` at `k`.
pub fn vrn_multiplier(n: u64, r: f64, alpha: f64, k: i64) -> Complex64 {
    let a = k.unsigned_abs();
    if a == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let w = if a <= n {
        1.0
    } else if a < 2 * n {
        1.0 - (a - n) as f64 / n as f64
    } else {
        0.0
    };
    phase(k, alpha) * (a as f64).powf(r) * w
}

/// `D^{r̄}_{ᾱ} t = t * 𝒱^{r̄}_{N̄}(·, ᾱ)` with `N̄` the degree of `t`.
pub fn multiplier_derivative(t: &TrigPoly, r: &[f64], alpha: &[f64]) -> Result<TrigPoly> {
    if r.len() != t.d() || alpha.len() != t.d() {
        return Err(Error::DimensionMismatch(format!("r and α need {} entries", t.d())));
    }
    if r.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::InvalidInput("smoothness must be >= 0".into()));
    }
    let n: Vec<u64> = t.degree().iter().map(|&v| v.max(1)).collect();
    Ok(t.multiply(t.degree(), true, |k, c| {
        let mut m = Complex64::new(1.0, 0.0);
        for j in 0..k.len() {
            m *= vrn_multiplier(n[j], r[j], alpha[j], k[j]);
        }
        c * m
    }))
}

/// Kernel descriptions for evaluation and multiplier lookup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `𝒦_{m−1}`.
    Fejer { m: u64 },
    /// `𝒱_m`.
    ValleePoussin { m: u64 },
    Bernoulli { r: f64, alpha: f64, truncation: usize },
    /// `𝒱^r_n(·, α)`.
    MultiplierVrn { r: f64, alpha: f64, n: u64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            KernelSpec::Fejer { m } | KernelSpec::ValleePoussin { m } => m >= 1,
            KernelSpec::Bernoulli { r, truncation, .. } => r > 0.0 && truncation >= 10 * (r.ceil() as usize).max(1),
            KernelSpec::MultiplierVrn { r, n, .. } => r >= 0.0 && n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid kernel {self:?}")))
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            KernelSpec::Fejer { m } => fejer(m, x),
            KernelSpec::ValleePoussin { m } => vallee_poussin(m, x),
            KernelSpec::Bernoulli { r, alpha, truncation } => bernoulli_kernel(r, alpha, x, truncation)?.value,
            KernelSpec::MultiplierVrn { r, alpha, n } => {
                (1 - 2 * n as i64..2 * n as i64).map(|k| (vrn_multiplier(n, r, alpha, k) * Complex64::from_polar(1.0, k as f64 * x)).re).sum()
            }
        })
    }

    /// Fourier coefficient at `k` (the Bernoulli one untruncated).
    pub fn coefficient(&self, k: i64) -> Result<Complex64> {
        self.validate()?;
        Ok(match *self {
            KernelSpec::Fejer { m } => Complex64::new(fejer_multiplier(m, k), 0.0),
            KernelSpec::ValleePoussin { m } => Complex64::new(vp_multiplier(m, k), 0.0),
            KernelSpec::Bernoulli { r, alpha, .. } => {
                if k == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    phase(k, -alpha) * (k.unsigned_abs() as f64).powf(-r)
                }
            }
            KernelSpec::MultiplierVrn { r, alpha, n } => vrn_multiplier(n, r, alpha, k),
        })
    }
}

/// `‖t‖_{q̄} / (‖t‖_{p̄} Π N_j^{(1/p_j − 1/q_j)_+})`, `N_j = max(deg_j, 1)`.
pub fn nikolskii_ratio(t: &TrigPoly, p: &ExponentVector, q: &ExponentVector) -> Result<f64> {
    if t.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (rp, rq) = (p.recips_f64(), q.recips_f64());
    let factor: f64 = t.degree().iter().zip(rp.iter().zip(&rq)).map(|(&n, (a, b))| (n.max(1) as f64).powf((a - b).max(0.0))).product();
    Ok(t.norm(q)? / (t.norm(p)? * factor))
}

/// `‖D^{r̄}_{ᾱ} t‖_{p̄} / (‖t‖_{p̄} Π N_j^{r_j})`, `N_j = max(deg_j, 1)`.
pub fn bernstein_ratio(t: &TrigPoly, r: &[f64], alpha: &[f64], p: &ExponentVector) -> Result<f64> {
    if t.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if r.iter().zip(alpha).any(|(&rj, &aj)| rj == 0.0 && aj != 0.0) {
        return Err(Error::InvalidInput("α_j must vanish where r_j = 0".into()));
    }
    let dt = multiplier_derivative(t, r, alpha)?;
    let factor: f64 = t.degree().iter().zip(r).map(|(&n, &rj)| (n.max(1) as f64).powf(rj)).product();
    Ok(dt.norm(p)? / (t.norm(p)? * factor))
}

/// `max_x Σ_{0 ≤ l ≤ 2π/h} 𝒦_{m−1}(x − lh) / m` over `grid` points in
/// `[0, 2π)`, for `window.0 ≤ mh ≤ window.1`.
pub fn fejer_shift_sum_check(m: u64, h: f64, grid: usize, window: (f64, f64)) -> Result<f64> {
    if m == 0 || !(h > 0.0) || grid == 0 {
        return Err(Error::InvalidInput(format!("need m >= 1, h > 0, grid >= 1; got m = {m}, h = {h}, grid = {grid}")));
    }
    let mh = m as f64 * h;
    if mh < window.0 || mh > window.1 {
        return Err(Error::Window(format!("m·h = {mh} outside [{}, {}]", window.0, window.1)));
    }
    let shifts = ((2.0 * PI / h) * (1.0 + 1e-12)).floor() as usize;
    let mut best = f64::NEG_INFINITY;
    for g in 0..grid {
        let x = 2.0 * PI * g as f64 / grid as f64;
        let s: f64 = (0..=shifts).map(|l| fejer(m, x - l as f64 * h)).sum();
        best = best.max(s);
    }
    Ok(best / m as f64)
}

/// `Δ^{l,j}_h` on periodic grid samples, with `h = shift · 2π / G_j`.
pub fn finite_difference(f: &Tensor, shift: usize, j: usize, l: usize) -> Result<Tensor> {
    if j >= f.d() {
        return Err(Error::DimensionMismatch(format!("axis {j} out of range for d = {}", f.d())));
    }
    if l == 0 {
        return Err(Error::InvalidInput("difference order must be >= 1".into()));
    }
    let shape = f.shape().to_vec();
    let g = shape[j];
    let stride: usize = shape[..j].iter().product();
    let mut cur = f.data().to_vec();
    for _ in 0..l {
        let next: Vec<f64> = (0..cur.len())
            .map(|i| {
                let ij = (i / stride) % g;
                let moved = i - ij * stride + ((ij + shift) % g) * stride;
                cur[moved] - cur[i]
            })
            .collect();
        cur = next;
    }
    Tensor::new(shape, cur)
}

/// `Δ^{l,j}_h` on a polynomial: `c_k ↦ (e^{i k_j h} − 1)^l c_k`.
pub fn finite_difference_poly(t: &TrigPoly, h: f64, j: usize, l: u32) -> Result<TrigPoly> {
    check_axis(t, j)?;
    Ok(t.multiply(t.degree(), true, |k, c| c * (Complex64::from_polar(1.0, k[j] as f64 * h) - 1.0).powu(l)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &[&str]) -> ExponentVector {
        ExponentVector::parse(s).unwrap()
    }

    fn cosine(n: u64) -> TrigPoly {
        TrigPoly::from_fn(vec![n], true, |k| Complex64::new(if k[0].unsigned_abs() == n { 0.5 } else { 0.0 }, 0.0)).unwrap()
    }

    #[test]
    fn fejer_values() {
        for m in 1..6 {
            assert_eq!(fejer(m, 0.0), m as f64);
            assert!((fejer(m, 2.0 * PI) - m as f64).abs() < 1e-9);
        }
        for x in [0.1, 1.0, 3.0, -2.0] {
            assert!((fejer(1, x) - 1.0).abs() < 1e-14);
            // closed form against the cosine sum
            let sum = 1.0 + 2.0 * (1..5).map(|k| (1.0 - k as f64 / 5.0) * (k as f64 * x).cos()).sum::<f64>();
            assert!((fejer(5, x) - sum).abs() < 1e-12);
        }
        // continuity across the switch to the cosine sum
        assert!((fejer(7, 2.1e-6) - fejer(7, 1.9e-6)).abs() < 1e-6);
    }

    #[test]
    fn kernel_means_are_one() {
        let g = 4096;
        for m in [1, 3, 8] {
            let mf: f64 = (0..g).map(|i| fejer(m, 2.0 * PI * i as f64 / g as f64)).sum::<f64>() / g as f64;
            let mv: f64 = (0..g).map(|i| vallee_poussin(m, 2.0 * PI * i as f64 / g as f64)).sum::<f64>() / g as f64;
            assert!((mf - 1.0).abs() < 1e-10 && (mv - 1.0).abs() < 1e-10);
            assert!((vallee_poussin(m, 0.7) - vallee_poussin(m, -0.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn vp_multiplier_shape() {
        // quadrature of 𝒱_4 against e^{−ikx}
        let g = 64;
        for k in -9i64..=9 {
            let c: f64 = (0..g).map(|i| {
                let x = 2.0 * PI * i as f64 / g as f64;
                vallee_poussin(4, x) * (k as f64 * x).cos()
            }).sum::<f64>() / g as f64;
            assert!((c - vp_multiplier(4, k)).abs() < 1e-12, "k = {k}: {c}");
        }
        assert_eq!(vp_ratio(4, 6), (2, 4));
    }

    #[test]
    fn vp_reproduces_and_kills() {
        let t = TrigPoly::from_fn(vec![3, 2], false, |k| Complex64::new(k[0] as f64 + 0.5, k[1] as f64)).unwrap();
        let v = vp_operator(&t, &[3, 2]).unwrap();
        assert_eq!(v, t);
        let top = TrigPoly::from_fn(vec![6], false, |k| Complex64::new(if k[0] == 6 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        assert!(vp_operator(&top, &[3]).unwrap().is_zero());
        let one = TrigPoly::from_fn(vec![0], true, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(vp_operator(&one, &[1]).unwrap(), one);
        assert_eq!(vp_operator(&cosine(9), &[4]).unwrap().degree(), &[7]);
    }

    #[test]
    fn sampled_vp_matches_coefficient_path() {
        let t = TrigPoly::from_fn(vec![5], true, |k| Complex64::new(1.0 / (1 + k[0].abs()) as f64, 0.0)).unwrap();
        let s = t.sample(&[21]).unwrap();
        let samples = Tensor::new(vec![21], s.iter().map(|c| c.re).collect()).unwrap();
        let a = vp_sampled(&samples, &[3]).unwrap();
        let b = vp_operator(&t, &[3]).unwrap();
        assert!(a.sub(&b).unwrap().l2_norm() < 1e-13);
        assert!(matches!(vp_sampled(&samples, &[6]), Err(Error::Aliasing(_))));
    }

    #[test]
    fn bernoulli_against_closed_form() {
        // Σ cos(kx)/k² = π²/6 − πx/2 + x²/4 on [0, 2π]
        for x in [0.5, 1.0, 2.0, 3.0, 5.5] {
            let v = bernoulli_kernel(2.0, 0.0, x, BERNOULLI_TERMS).unwrap();
            let want = 1.0 + 2.0 * (PI * PI / 6.0 - PI * x / 2.0 + x * x / 4.0);
            assert!((v.value - want).abs() < 1e-6, "x = {x}");
            assert!(v.tail_bound.unwrap() <= 2e-4 + 1e-12);
        }
        assert!(bernoulli_kernel(0.5, 0.0, 1.0, 100).unwrap().tail_bound.is_none());
        let g = 1001;
        let mean: f64 = (0..g).map(|i| bernoulli_kernel(1.5, 0.7, 2.0 * PI * i as f64 / g as f64, 1000).unwrap().value).sum::<f64>() / g as f64;
        assert!((mean - 1.0).abs() < 1e-8);
        // large r: dominated by the first harmonic
        let v = bernoulli_kernel(40.0, 1.0, 0.3, 50).unwrap().value;
        assert!((v - (1.0 + 2.0 * (0.3 - PI / 2.0).cos())).abs() < 1e-11);
    }

    #[test]
    fn weyl_derivative_examples() {
        let t = TrigPoly::from_fn(vec![2, 1], false, |k| Complex64::new(k[0] as f64, 1.0 + k[1] as f64)).unwrap();
        assert_eq!(weyl_derivative(&t, 0, 0.0, 0.0).unwrap(), t);
        // cos 2x ↦ −2 sin 2x
        let d = weyl_derivative(&cosine(2), 0, 1.0, 1.0).unwrap();
        assert!((d.get(&[2]) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((d.get(&[-2]) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        for x in [0.3, 1.7] {
            assert!((d.eval(&[x]).re + 2.0 * (2.0 * x).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_spec_consistency() {
        for spec in [KernelSpec::Fejer { m: 4 }, KernelSpec::ValleePoussin { m: 3 }, KernelSpec::MultiplierVrn { r: 1.5, alpha: 0.5, n: 3 }] {
            let g = 32;
            for k in -7i64..=7 {
                let c: Complex64 = (0..g).map(|i| {
                    let x = 2.0 * PI * i as f64 / g as f64;
                    Complex64::from_polar(spec.eval(x).unwrap(), -(k as f64) * x)
                }).sum::<Complex64>() / g as f64;
                assert!((c - spec.coefficient(k).unwrap()).norm() < 1e-11, "{spec:?} k = {k}");
            }
        }
        assert!(KernelSpec::Bernoulli { r: 2.0, alpha: 0.0, truncation: 19 }.validate().is_err());
        assert!(KernelSpec::Fejer { m: 0 }.validate().is_err());
    }

    #[test]
    fn inequality_ratio_examples() {
        let one = TrigPoly::from_fn(vec![0, 0], true, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((nikolskii_ratio(&one, &ev(&["1", "2"]), &ev(&["inf", "4"])).unwrap() - 1.0).abs() < 1e-14);
        let h = TrigPoly::from_fn(vec![8], false, |k| Complex64::new(if k[0] == 8 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        assert!((nikolskii_ratio(&h, &ev(&["2"]), &ev(&["1"])).unwrap() - 1.0).abs() < 1e-14);
        assert!((bernstein_ratio(&h, &[1.5], &[0.5], &ev(&["3"])).unwrap() - 1.0).abs() < 1e-12);
        let h = TrigPoly::from_fn(vec![8], false, |k| Complex64::new(if k[0] == 4 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        assert!((bernstein_ratio(&h, &[2.0], &[0.0], &ev(&["2"])).unwrap() - 0.25).abs() < 1e-12);
        let t = cosine(3).add(&cosine(1)).unwrap();
        assert!((bernstein_ratio(&t, &[0.0], &[0.0], &ev(&["4"])).unwrap() - 1.0).abs() < 1e-13);
        assert!(matches!(nikolskii_ratio(&TrigPoly::zeros(vec![2]).unwrap(), &ev(&["2"]), &ev(&["2"])), Err(Error::ZeroPolynomial)));
        assert!(bernstein_ratio(&t, &[0.0], &[1.0], &ev(&["2"])).is_err());
    }

    #[test]
    fn fejer_shift_sums() {
        let v = fejer_shift_sum_check(8, PI / 8.0, 512, (1.0, 2.0 * PI)).unwrap();
        assert!((v - 3.0).abs() < 1e-9 && v <= 4.0);
        assert!((fejer_shift_sum_check(1, PI, 16, (1.0, 2.0 * PI)).unwrap() - 3.0).abs() < 1e-12);
        assert!(matches!(fejer_shift_sum_check(8, 0.01, 16, (1.0, 2.0 * PI)), Err(Error::Window(_))));
    }

    #[test]
    fn finite_differences() {
        let g = 64;
        let c = Tensor::from_fn(vec![g, 3], |_| 2.5).unwrap();
        assert!(finite_difference(&c, 3, 0, 1).unwrap().data().iter().all(|&v| v == 0.0));
        let f = Tensor::from_fn(vec![g], |i| (2.0 * PI * i[0] as f64 / g as f64).cos()).unwrap();
        let h = 2.0 * PI * 2.0 / g as f64;
        let d2 = finite_difference(&f, 2, 0, 2).unwrap();
        let mx = d2.data().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!((mx - 4.0 * (h / 2.0).sin().powi(2)).abs() < 1e-12 && mx <= h * h);
        let fp = finite_difference_poly(&cosine(1), h, 0, 2).unwrap();
        let s = fp.sample(&[g]).unwrap();
        for (a, b) in s.iter().zip(d2.data()) {
            assert!((a.re - b).abs() < 1e-12);
        }
        // linearity
        let g2 = Tensor::from_fn(vec![g], |i| (i[0] as f64).sqrt()).unwrap();
        let lhs = finite_difference(&f.scaled(2.0).add(&g2).unwrap(), 5, 0, 3).unwrap();
        let rhs = finite_difference(&f, 5, 0, 3).unwrap().scaled(2.0).add(&finite_difference(&g2, 5, 0, 3).unwrap()).unwrap();
        for (a, b) in lhs.data().iter().zip(rhs.data()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
