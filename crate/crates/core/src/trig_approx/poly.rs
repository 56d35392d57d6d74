use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed_norm::{mixed_norm_raw, ExponentVector};

/// Coefficient field for [`Poly`]: `f64` complex numbers or exact Gaussian
/// rationals.
pub trait Coef: Clone + PartialEq + fmt::Debug {
    fn czero() -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
    /// Multiplication by the rational `num/den`.
    fn scale_ratio(&self, num: i128, den: i128) -> Self;
    /// Equality up to `tol` relative to `scale`; exact types ignore both.
    fn near(&self, o: &Self, tol: f64, scale: f64) -> bool;
    fn modulus(&self) -> f64;
}

impl Coef for Complex64 {
    fn czero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn vanishes(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn sub(&self, o: &Self) -> Self {
        self - o
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn scale_ratio(&self, num: i128, den: i128) -> Self {
        if num == den {
            *self
        } else {
            self * (num as f64 / den as f64)
        }
    }

    fn near(&self, o: &Self, tol: f64, scale: f64) -> bool {
        (self - o).norm() <= tol * scale
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }
}

/// Exact `a + ib` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl QComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        QComplex { re, im }
    }

    pub fn from_ints(re: (i64, i64), im: (i64, i64)) -> Self {
        let q = |(a, b): (i64, i64)| BigRational::new(BigInt::from(a), BigInt::from(b));
        QComplex { re: q(re), im: q(im) }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl Coef for QComplex {
    fn czero() -> Self {
        QComplex { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn vanishes(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        QComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Self) -> Self {
        QComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn conj(&self) -> Self {
        QComplex { re: self.re.clone(), im: -&self.im }
    }

    fn scale_ratio(&self, num: i128, den: i128) -> Self {
        let f = BigRational::new(BigInt::from(num), BigInt::from(den));
        QComplex { re: &self.re * &f, im: &self.im * &f }
    }

    fn near(&self, o: &Self, _tol: f64, _scale: f64) -> bool {
        self == o
    }

    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }
}

/// A trigonometric polynomial with harmonics in `Π [−N_j, N_j]`.
///
/// Coefficients are stored in lexicographic frequency order: `k_1` varies
/// slowest and `k_d` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    degree: Vec<u64>,
    coeff: Vec<C>,
    real: bool,
}

pub type TrigPoly = Poly<Complex64>;
pub type ExactTrigPoly = Poly<QComplex>;

fn extents(degree: &[u64]) -> Vec<usize> {
    degree.iter().map(|&n| 2 * n as usize + 1).collect()
}

/// Calls `f` with every frequency vector in lexicographic order.
pub fn for_each_frequency(degree: &[u64], mut f: impl FnMut(&[i64])) {
    let mut k: Vec<i64> = degree.iter().map(|&n| -(n as i64)).collect();
    loop {
        f(&k);
        let mut j = degree.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if k[j] < degree[j] as i64 {
                k[j] += 1;
                break;
            }
            k[j] = -(degree[j] as i64);
        }
    }
}

impl<C: Coef> Poly<C> {
    pub fn new(degree: Vec<u64>, coeff: Vec<C>, real: bool) -> Result<Self> {
        if degree.is_empty() {
            return Err(Error::InvalidInput("a polynomial needs d >= 1".into()));
        }
        let len: usize = extents(&degree).iter().product();
        if coeff.len() != len {
            return Err(Error::DimensionMismatch(format!("degree {degree:?} needs {len} coefficients, got {}", coeff.len())));
        }
        let p = Poly { degree, coeff, real };
        if real {
            let scale = p.coeff.iter().map(Coef::modulus).fold(0.0, f64::max);
            for (i, c) in p.coeff.iter().enumerate() {
                let mirror = &p.coeff[len - 1 - i];
                if !c.near(&mirror.conj(), 1e-12, scale) {
                    return Err(Error::InvalidInput("realness flag set but coefficients are not Hermitian".into()));
                }
            }
        }
        Ok(p)
    }

    pub fn zeros(degree: Vec<u64>) -> Result<Self> {
        let len: usize = extents(&degree).iter().product();
        Self::new(degree, vec![C::czero(); len], true)
    }

    pub fn from_fn(degree: Vec<u64>, real: bool, mut f: impl FnMut(&[i64]) -> C) -> Result<Self> {
        let mut coeff = Vec::new();
        for_each_frequency(&degree, |k| coeff.push(f(k)));
        Self::new(degree, coeff, real)
    }

    pub fn degree(&self) -> &[u64] {
        &self.degree
    }

    pub fn d(&self) -> usize {
        self.degree.len()
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeff
    }

    pub fn index(&self, k: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for (&kj, &n) in k.iter().zip(&self.degree) {
            if kj.unsigned_abs() > n {
                return None;
            }
            idx = idx * (2 * n as usize + 1) + (kj + n as i64) as usize;
        }
        Some(idx)
    }

    /// `c_k̄`, zero outside the rectangle.
    pub fn get(&self, k: &[i64]) -> C {
        self.index(k).map(|i| self.coeff[i].clone()).unwrap_or_else(C::czero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.iter().all(Coef::vanishes)
    }

    /// Copies into the rectangle `degree`, dropping harmonics outside it.
    pub fn truncated(&self, degree: &[u64]) -> Self {
        let coeff = {
            let mut v = Vec::new();
            for_each_frequency(degree, |k| v.push(self.get(k)));
            v
        };
        Poly { degree: degree.to_vec(), coeff, real: self.real }
    }

    /// Multiplies `c_k̄` by `m(k̄)`; the result lives on `degree`.
    pub fn multiply(&self, degree: &[u64], real: bool, mut m: impl FnMut(&[i64], &C) -> C) -> Self {
        let mut coeff = Vec::new();
        for_each_frequency(degree, |k| {
            let c = self.get(k);
            coeff.push(if c.vanishes() { c } else { m(k, &c) });
        });
        Poly { degree: degree.to_vec(), coeff, real: self.real && real }
    }

    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Result<Self> {
        if self.d() != o.d() {
            return Err(Error::DimensionMismatch(format!("d = {} vs d = {}", self.d(), o.d())));
        }
        let degree: Vec<u64> = self.degree.iter().zip(&o.degree).map(|(a, b)| *a.max(b)).collect();
        let mut coeff = Vec::new();
        for_each_frequency(&degree, |k| coeff.push(f(&self.get(k), &o.get(k))));
        Ok(Poly { degree, coeff, real: self.real && o.real })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    /// Equality of the coefficient functions, ignoring storage rectangles.
    pub fn same_coefficients(&self, o: &Self) -> bool {
        self.sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl ExactTrigPoly {
    pub fn to_float(&self) -> TrigPoly {
        Poly { degree: self.degree.clone(), coeff: self.coeff.iter().map(QComplex::to_complex).collect(), real: self.real }
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    degree: Vec<u64>,
    coeff: Vec<[f64; 2]>,
    #[serde(default)]
    real: bool,
}

/// Grid size `factor·N_j + 1` per axis.
pub fn quad_grid(degree: &[u64], factor: usize) -> Vec<usize> {
    degree.iter().map(|&n| factor * n as usize + 1).collect()
}

/// In-place DFT along every axis of a tensor stored with axis 0 fastest.
fn fft_nd(data: &mut [Complex64], grid: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let mut stride = 1;
    for &g in grid {
        if g > 1 {
            let fft = if inverse { planner.plan_fft_inverse(g) } else { planner.plan_fft_forward(g) };
            let mut line = vec![Complex64::zero(); g];
            let block = stride * g;
            for base in (0..data.len()).step_by(block) {
                for off in 0..stride {
                    for (i, v) in line.iter_mut().enumerate() {
                        *v = data[base + off + i * stride];
                    }
                    fft.process(&mut line);
                    for (i, v) in line.iter().enumerate() {
                        data[base + off + i * stride] = *v;
                    }
                }
            }
        }
        stride *= g;
    }
}

/// Flat offset on a grid tensor (axis 0 fastest) of the residues `k_j mod G_j`.
fn grid_offset(k: &[i64], grid: &[usize]) -> usize {
    let mut off = 0;
    let mut stride = 1;
    for (&kj, &g) in k.iter().zip(grid) {
        off += kj.rem_euclid(g as i64) as usize * stride;
        stride *= g;
    }
    off
}

impl TrigPoly {
    pub fn to_json(&self) -> Result<String> {
        let j = PolyJson { degree: self.degree.clone(), coeff: self.coeff.iter().map(|c| [c.re, c.im]).collect(), real: self.real };
        Ok(serde_json::to_string(&j)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PolyJson = serde_json::from_str(s)?;
        Self::new(j.degree, j.coeff.into_iter().map(|[a, b]| Complex64::new(a, b)).collect(), j.real)
    }

    /// Direct evaluation at one point.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let mut s = Complex64::zero();
        let mut i = 0;
        for_each_frequency(&self.degree, |k| {
            let c = self.coeff[i];
            i += 1;
            if !c.is_zero() {
                let ph: f64 = k.iter().zip(x).map(|(a, b)| *a as f64 * b).sum();
                s += c * Complex64::from_polar(1.0, ph);
            }
        });
        s
    }

    /// Values at `x_l = 2π l_j / G_j`, as a grid tensor with axis 0 fastest.
    pub fn sample(&self, grid: &[usize]) -> Result<Vec<Complex64>> {
        if grid.len() != self.d() {
            return Err(Error::DimensionMismatch(format!("grid has d = {}, polynomial d = {}", grid.len(), self.d())));
        }
        if let Some(j) = (0..self.d()).find(|&j| grid[j] < 2 * self.degree[j] as usize + 1) {
            return Err(Error::Aliasing(format!("axis {j}: grid {} < 2N+1 = {}", grid[j], 2 * self.degree[j] + 1)));
        }
        let len: usize = grid.iter().product();
        let mut data = vec![Complex64::zero(); len];
        let mut i = 0;
        for_each_frequency(&self.degree, |k| {
            data[grid_offset(k, grid)] += self.coeff[i];
            i += 1;
        });
        fft_nd(&mut data, grid, true);
        Ok(data)
    }

    /// Discrete Fourier analysis of grid samples, keeping `|k_j| ≤ N_j`.
    /// Exact for inputs in `𝒯(N̄, d)` once `G_j ≥ 2N_j + 1`.
    pub fn from_samples(samples: &[Complex64], grid: &[usize], degree: &[u64], real: bool) -> Result<Self> {
        if grid.len() != degree.len() || samples.len() != grid.iter().product::<usize>() {
            return Err(Error::DimensionMismatch(format!("{} samples on grid {grid:?}", samples.len())));
        }
        if let Some(j) = (0..grid.len()).find(|&j| grid[j] < 2 * degree[j] as usize + 1) {
            return Err(Error::Aliasing(format!("axis {j}: grid {} < 2N+1 = {}", grid[j], 2 * degree[j] + 1)));
        }
        let mut data = samples.to_vec();
        fft_nd(&mut data, grid, false);
        let scale = 1.0 / samples.len() as f64;
        let mut coeff = Vec::new();
        for_each_frequency(degree, |k| coeff.push(data[grid_offset(k, grid)] * scale));
        let mut p = Poly { degree: degree.to_vec(), coeff, real: false };
        if real {
            // symmetrize away rounding noise
            let n = p.coeff.len();
            let sym: Vec<Complex64> = (0..n).map(|i| (p.coeff[i] + p.coeff[n - 1 - i].conj()) * 0.5).collect();
            p.coeff = sym;
            p.real = true;
        }
        Ok(p)
    }

    /// `‖t‖_{L_p̄}` with normalized measure, by quadrature on `grid`.
    pub fn norm_on_grid(&self, p: &ExponentVector, grid: &[usize]) -> Result<f64> {
        if p.d() != self.d() {
            return Err(Error::DimensionMismatch(format!("exponents have d = {}, polynomial d = {}", p.d(), self.d())));
        }
        let vals: Vec<f64> = self.sample(grid)?.iter().map(|c| c.norm()).collect();
        Ok(grid_norm(&vals, grid, &p.recips_f64()))
    }

    /// Quadrature on `8N_j + 1` points per axis.
    pub fn norm(&self, p: &ExponentVector) -> Result<f64> {
        self.norm_on_grid(p, &quad_grid(&self.degree, 8))
    }

    /// `‖t‖_{L_2}` from Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeff.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Mixed norm of grid values under the normalized measure.
pub fn grid_norm(values: &[f64], grid: &[usize], recips: &[f64]) -> f64 {
    let w: f64 = grid.iter().zip(recips).map(|(&g, r)| (g as f64).powf(-r)).product();
    mixed_norm_raw(grid, values, recips) * w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn layout_is_lexicographic() {
        let mut seen = Vec::new();
        for_each_frequency(&[1, 2], |k| seen.push(k.to_vec()));
        assert_eq!(seen.len(), 15);
        assert_eq!(seen[0], vec![-1, -2]);
        assert_eq!(seen[1], vec![-1, -1]);
        assert_eq!(seen[5], vec![0, -2]);
        let p = TrigPoly::from_fn(vec![1, 2], false, |k| c(k[0] as f64, k[1] as f64)).unwrap();
        assert_eq!(p.get(&[1, -1]), c(1.0, -1.0));
        assert_eq!(p.get(&[2, 0]), c(0.0, 0.0));
    }

    #[test]
    fn realness_is_checked() {
        assert!(TrigPoly::new(vec![1], vec![c(1.0, 1.0), c(2.0, 0.0), c(1.0, -1.0)], true).is_ok());
        assert!(TrigPoly::new(vec![1], vec![c(1.0, 1.0), c(2.0, 0.0), c(1.0, 1.0)], true).is_err());
        assert!(TrigPoly::new(vec![1], vec![c(0.0, 0.0); 2], false).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = TrigPoly::new(vec![1], vec![c(0.5, 0.0), c(1.0, 0.0), c(0.5, 0.0)], true).unwrap();
        let s = p.to_json().unwrap();
        assert!(s.contains("\"degree\":[1]"));
        assert_eq!(TrigPoly::from_json(&s).unwrap(), p);
    }

    #[test]
    fn sampling_matches_direct_evaluation() {
        let p = TrigPoly::from_fn(vec![2, 1], false, |k| c(1.0 / (1 + k[0].abs() + k[1].abs()) as f64, 0.3 * k[1] as f64)).unwrap();
        let grid = [7, 5];
        let s = p.sample(&grid).unwrap();
        for i1 in 0..5 {
            for i0 in 0..7 {
                let x = [2.0 * std::f64::consts::PI * i0 as f64 / 7.0, 2.0 * std::f64::consts::PI * i1 as f64 / 5.0];
                assert!((s[i0 + 7 * i1] - p.eval(&x)).norm() < 1e-12);
            }
        }
        let back = TrigPoly::from_samples(&s, &grid, &[2, 1], false).unwrap();
        for (a, b) in back.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!(matches!(p.sample(&[4, 5]), Err(Error::Aliasing(_))));
    }

    #[test]
    fn norms_of_cosine() {
        // cos x: L2 = 1/√2, L∞ = 1, L4 = (3/8)^{1/4}
        let p = TrigPoly::new(vec![1], vec![c(0.5, 0.0), c(0.0, 0.0), c(0.5, 0.0)], true).unwrap();
        assert!((p.norm(&ExponentVector::from_ints(&[2]).unwrap()).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((p.l2_norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((p.norm(&ExponentVector::parse(&["inf"]).unwrap()).unwrap() - 1.0).abs() < 1e-14);
        assert!((p.norm(&ExponentVector::from_ints(&[4]).unwrap()).unwrap() - 0.375f64.powf(0.25)).abs() < 1e-14);
    }

    #[test]
    fn exact_arithmetic() {
        let a = ExactTrigPoly::from_fn(vec![1], false, |k| QComplex::from_ints((k[0], 3), (1, 2))).unwrap();
        let b = a.add(&a).unwrap().sub(&a).unwrap();
        assert!(b.same_coefficients(&a));
        let half = a.multiply(&[1], true, |_, c| c.scale_ratio(1, 2));
        assert_eq!(half.get(&[1]), QComplex::from_ints((1, 6), (1, 4)));
        assert_eq!(a.to_float().get(&[-1]), c(-1.0 / 3.0, 0.5));
    }
}
