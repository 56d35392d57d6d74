//! Iterated (anisotropic) norms on finite tensors.
//!
//! `‖x‖_{p̄}` reduces axis 0 with `p_0`, then the resulting array's axis 0
//! (originally axis 1) with `p_1`, and so on. Counting measure throughout.

mod exponent;
mod tensor;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

pub use exponent::{dual_exponents, Exponent, ExponentVector};
pub use tensor::Tensor;

use crate::arith::Real;
use crate::error::{Error, Result};

/// Relative tolerance for norm comparisons.
pub const EPS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Reduce {
    One,
    Two,
    Inf,
    Power(f64),
}

impl Reduce {
    fn from_recip(recip: f64) -> Reduce {
        if recip == 1.0 {
            Reduce::One
        } else if recip == 0.5 {
            Reduce::Two
        } else if recip == 0.0 {
            Reduce::Inf
        } else {
            Reduce::Power(1.0 / recip)
        }
    }

    fn norm(self, u: &[f64]) -> f64 {
        match self {
            Reduce::One => u.iter().map(|v| v.abs()).sum(),
            Reduce::Two => u.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Reduce::Inf => u.iter().fold(0.0, |m, v| m.max(v.abs())),
            Reduce::Power(p) => {
                let m = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if m == 0.0 {
                    return 0.0;
                }
                let s: f64 = u.iter().map(|v| (v.abs() / m).powf(p)).sum();
                m * s.powf(1.0 / p)
            }
        }
    }

    /// Writes a subgradient of `u ↦ ‖u‖` at `u` (whose norm is `nrm`) into `g`.
    fn grad(self, u: &[f64], nrm: f64, g: &mut [f64]) {
        if nrm == 0.0 {
            g.fill(0.0);
            return;
        }
        match self {
            Reduce::One => {
                for (gi, v) in g.iter_mut().zip(u) {
                    *gi = sign(*v);
                }
            }
            Reduce::Two => {
                for (gi, v) in g.iter_mut().zip(u) {
                    *gi = v / nrm;
                }
            }
            Reduce::Inf => {
                g.fill(0.0);
                let (i, _) = u
                    .iter()
                    .enumerate()
                    .fold((0, -1.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
                g[i] = sign(u[i]);
            }
            Reduce::Power(p) => {
                for (gi, v) in g.iter_mut().zip(u) {
                    *gi = sign(*v) * (v.abs() / nrm).powf(p - 1.0);
                }
            }
        }
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn check(x: &Tensor, p: &ExponentVector) -> Result<()> {
    if x.d() != p.d() {
        return Err(Error::DimensionMismatch(format!("tensor has d = {}, exponents have d = {}", x.d(), p.d())));
    }
    if x.data().iter().any(|v| v.is_nan()) {
        return Err(Error::NaN);
    }
    Ok(())
}

/// Unchecked iterated norm on raw storage; `recips[j] = 1/p_j`.
pub fn mixed_norm_raw(shape: &[usize], data: &[f64], recips: &[f64]) -> f64 {
    let mut cur: Vec<f64> = Vec::new();
    let mut src = data;
    for (&k, &r) in shape.iter().zip(recips) {
        let red = Reduce::from_recip(r);
        cur = src.chunks(k).map(|c| red.norm(c)).collect();
        src = &cur;
    }
    cur.first().copied().unwrap_or(0.0)
}

/// Iterated norm and one subgradient, on raw storage. `grad` must have the
/// length of `data`.
pub fn mixed_norm_grad_raw(shape: &[usize], data: &[f64], recips: &[f64], grad: &mut [f64]) -> f64 {
    let d = shape.len();
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    levels.push(data.to_vec());
    for j in 0..d {
        let red = Reduce::from_recip(recips[j]);
        let next = levels[j].chunks(shape[j]).map(|c| red.norm(c)).collect();
        levels.push(next);
    }
    let value = levels[d][0];
    let mut upstream = vec![1.0];
    for j in (0..d).rev() {
        let red = Reduce::from_recip(recips[j]);
        let input = &levels[j];
        let mut local = vec![0.0; input.len()];
        for (c, (u, g)) in input.chunks(shape[j]).zip(local.chunks_mut(shape[j])).enumerate() {
            red.grad(u, levels[j + 1][c], g);
            for gi in g.iter_mut() {
                *gi *= upstream[c];
            }
        }
        upstream = local;
    }
    grad.copy_from_slice(&upstream);
    value
}

/// `‖x‖_{p̄}` with axis 0 innermost.
pub fn mixed_norm(x: &Tensor, p: &ExponentVector) -> Result<f64> {
    check(x, p)?;
    Ok(mixed_norm_raw(x.shape(), x.data(), &p.recips_f64()))
}

/// `‖x‖_{p̄}` together with a subgradient tensor.
pub fn mixed_norm_with_grad(x: &Tensor, p: &ExponentVector) -> Result<(f64, Tensor)> {
    check(x, p)?;
    let mut g = vec![0.0; x.len()];
    let v = mixed_norm_grad_raw(x.shape(), x.data(), &p.recips_f64(), &mut g);
    Ok((v, Tensor::new(x.shape().to_vec(), g)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `‖x‖_{p̃′} ≤ ‖x‖_{q̄′}^{1−ω} ‖x‖_{2̄}^{ω}` where `1/p̃_j = (1−ω)/q_j + ω/2`.
pub fn holder_interpolation_check(x: &Tensor, q: &ExponentVector, omega: f64) -> Result<HolderReport> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::InvalidInput(format!("omega = {omega} outside [0, 1]")));
    }
    let half = Real::ratio(1, 2);
    if q.iter().any(|e| e.recip() > &half) {
        return Err(Error::InvalidInput("interpolation check needs q_j >= 2".into()));
    }
    let w = Real::from_f64(omega);
    let one_minus = Real::one() - &w;
    let p_tilde = ExponentVector::from_recips(
        q.iter().map(|e| &one_minus * e.recip() + &w * &half).collect(),
    )?;
    let lhs = mixed_norm(x, &dual_exponents(&p_tilde))?;
    let qd = mixed_norm(x, &dual_exponents(q))?;
    let two = mixed_norm(x, &ExponentVector::uniform(x.d(), Exponent::int(2))?)?;
    let rhs = match omega {
        w if w == 0.0 => qd,
        w if w == 1.0 => two,
        w => qd.powf(1.0 - w) * two.powf(w),
    };
    Ok(HolderReport { lhs, rhs, holds: lhs <= rhs * (1.0 + EPS_TOL) })
}

/// Largest `⟨x, y⟩` found over `trials` sampled points `y` of the unit ball
/// of `l_{p̄′}`. Never exceeds `‖x‖_{p̄}` up to rounding.
pub fn norm_duality_lower(x: &Tensor, p: &ExponentVector, trials: usize, seed: u64) -> Result<f64> {
    check(x, p)?;
    let trials = trials.max(1);
    let dual = dual_exponents(p).recips_f64();
    let shape = x.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grad = vec![0.0; x.len()];
    mixed_norm_grad_raw(shape, x.data(), &p.recips_f64(), &mut grad);
    let mut best = 0.0f64;
    let mut y = vec![0.0; x.len()];
    for t in 0..trials {
        // Alternate pure Gaussian directions with perturbations of the
        // norming functional at decreasing noise levels.
        let noise = if t % 2 == 0 { f64::INFINITY } else { 2f64.powi(-((t / 2) as i32 % 40)) };
        for (i, yi) in y.iter_mut().enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            *yi = if noise.is_infinite() { z } else { grad[i] + noise * z };
        }
        let ny = mixed_norm_raw(shape, &y, &dual);
        if ny == 0.0 {
            continue;
        }
        let ip: f64 = x.data().iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().abs() / ny;
        best = best.max(ip);
    }
    Ok(best)
}
