//! Numerical brackets for `d_n(B_{p̄}^{k̄}, l_{q̄}^{k̄})` on tiny instances.
//!
//! Upper values come from optimizing an explicit subspace against a finite
//! point list, so they bound the width of `conv(±points)` from above. Lower
//! values come from averaging over the signed-permutation orbit of a V-set.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ball_widths::{lower_bound_plan, phi, vset_l2_lower, vset_order, BallProblem, VSet};
use crate::error::{Error, Result};
use crate::mixed_norm::{mixed_norm_grad_raw, mixed_norm_raw, ExponentVector, Tensor};

const RANK_TOL: f64 = 1e-8;
const BETAS: [f64; 6] = [4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0];

/// An `n`-dimensional subspace of `R^K`, `K = Π k_j`, kept with an
/// orthonormal basis.
#[derive(Clone, Debug)]
pub struct SubspaceCandidate {
    shape: Vec<usize>,
    basis: DMatrix<f64>,
    ortho: DMatrix<f64>,
    /// Largest residual observed against the point list that produced it.
    pub quality: f64,
}

impl SubspaceCandidate {
    /// Columns of `basis` span the subspace; rank is checked at `1e-8`
    /// relative to the largest singular value.
    pub fn new(shape: Vec<usize>, basis: DMatrix<f64>) -> Result<Self> {
        let k: usize = shape.iter().product();
        if shape.is_empty() || basis.nrows() != k {
            return Err(Error::DimensionMismatch(format!("basis has {} rows, shape {shape:?} needs {k}", basis.nrows())));
        }
        if basis.ncols() > k {
            return Err(Error::InvalidInput(format!("{} columns exceed ambient dimension {k}", basis.ncols())));
        }
        if basis.iter().any(|v| !v.is_finite()) {
            return Err(Error::NaN);
        }
        let ortho = if basis.ncols() == 0 {
            DMatrix::zeros(k, 0)
        } else {
            let sv = basis.clone().singular_values();
            let (mx, mn) = sv.iter().fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
            if mx == 0.0 || mn / mx < RANK_TOL {
                return Err(Error::RankDeficient(if mx == 0.0 { 0.0 } else { mn / mx }));
            }
            basis.clone().qr().q()
        };
        Ok(SubspaceCandidate { shape, basis, ortho, quality: f64::NAN })
    }

    pub fn from_columns(cols: &[Tensor]) -> Result<Self> {
        let first = cols.first().ok_or_else(|| Error::InvalidInput("no columns given".into()))?;
        let shape = first.shape().to_vec();
        if cols.iter().any(|c| c.shape() != shape.as_slice()) {
            return Err(Error::DimensionMismatch("columns have different shapes".into()));
        }
        let k = first.len();
        let basis = DMatrix::from_fn(k, cols.len(), |i, j| cols[j].data()[i]);
        Self::new(shape, basis)
    }

    /// The zero subspace.
    pub fn empty(shape: Vec<usize>) -> Result<Self> {
        let k = shape.iter().product();
        Self::new(shape, DMatrix::zeros(k, 0))
    }

    fn from_orthonormal(shape: Vec<usize>, ortho: DMatrix<f64>, quality: f64) -> Self {
        SubspaceCandidate { shape, basis: ortho.clone(), ortho, quality }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn orthonormal(&self) -> &DMatrix<f64> {
        &self.ortho
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub restarts: usize,
    pub outer_iterations: usize,
    pub inner_tolerance: f64,
    pub point_budget: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { restarts: 4, outer_iterations: 240, inner_tolerance: 1e-7, point_budget: 512, seed: 0 }
    }
}

impl OracleConfig {
    pub fn small(seed: u64) -> Self {
        OracleConfig { restarts: 2, outer_iterations: 120, point_budget: 256, seed, ..Default::default() }
    }

    pub fn full(seed: u64) -> Self {
        OracleConfig { restarts: 8, outer_iterations: 600, point_budget: 2048, seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.outer_iterations == 0 || self.point_budget == 0 {
            return Err(Error::InvalidInput("restarts, outer_iterations and point_budget must be positive".into()));
        }
        if !(self.inner_tolerance > 0.0 && self.inner_tolerance < 1e-3) {
            return Err(Error::InvalidInput(format!("inner_tolerance must lie in (0, 1e-3), got {}", self.inner_tolerance)));
        }
        Ok(())
    }
}

/// Result of `min_c ‖x − Qc‖_{q̄}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distance {
    /// Attained residual norm, an upper bound for the distance.
    pub value: f64,
    /// Dual certificate, a lower bound for the distance.
    pub lower: f64,
    /// Coefficients in the orthonormal basis.
    pub coeffs: Vec<f64>,
    pub iterations: usize,
}

struct Norms {
    shape: Vec<usize>,
    recips: Vec<f64>,
    dual: Vec<f64>,
    euclid: bool,
    smooth: bool,
}

impl Norms {
    fn new(shape: &[usize], q: &ExponentVector) -> Self {
        let recips = q.recips_f64();
        let dual = recips.iter().map(|r| 1.0 - r).collect();
        let euclid = recips.iter().all(|&r| r == 0.5);
        let smooth = recips.iter().all(|&r| r > 0.0 && r < 1.0);
        Norms { shape: shape.to_vec(), recips, dual, euclid, smooth }
    }

    fn norm(&self, x: &[f64]) -> f64 {
        mixed_norm_raw(&self.shape, x, &self.recips)
    }
}

struct Inner {
    value: f64,
    lower: f64,
    c: Vec<f64>,
    g: Vec<f64>,
    iterations: usize,
}

fn residual(q: &DMatrix<f64>, x: &[f64], c: &[f64], r: &mut [f64]) {
    r.copy_from_slice(x);
    let k = x.len();
    for (col, &cj) in q.as_slice().chunks_exact(k).zip(c) {
        if cj != 0.0 {
            for (ri, qi) in r.iter_mut().zip(col) {
                *ri -= cj * qi;
            }
        }
    }
}

fn qt_times(q: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let k = v.len();
    q.as_slice().chunks_exact(k.max(1)).take(q.ncols()).map(|col| col.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `⟨g', x⟩ / ‖g'‖_{q̄'}` with `g'` the part of `g` orthogonal to `Q`.
fn certificate(nm: &Norms, q: &DMatrix<f64>, x: &[f64], g: &[f64]) -> f64 {
    let mut gp = g.to_vec();
    let coef = qt_times(q, g);
    residual(q, g, &coef, &mut gp);
    let dn = mixed_norm_raw(&nm.shape, &gp, &nm.dual);
    if dn > 0.0 {
        (dot(&gp, x) / dn).max(0.0)
    } else {
        0.0
    }
}

fn eval(nm: &Norms, recips: &[f64], q: &DMatrix<f64>, x: &[f64], c: &[f64], r: &mut [f64], g: &mut [f64]) -> (f64, Vec<f64>) {
    residual(q, x, c, r);
    let v = mixed_norm_grad_raw(&nm.shape, r, recips, g);
    let gc = qt_times(q, g).into_iter().map(|t| -t).collect();
    (v, gc)
}

/// Quasi-Newton descent on `c ↦ ‖x − Qc‖` with Armijo backtracking.
fn bfgs(nm: &Norms, recips: &[f64], q: &DMatrix<f64>, x: &[f64], c0: Vec<f64>, tol: f64, xnorm: f64, max_iter: usize) -> (Vec<f64>, usize) {
    let n = c0.len();
    let k = x.len();
    let (mut r, mut g) = (vec![0.0; k], vec![0.0; k]);
    let mut c = c0;
    let (mut f, mut gc) = eval(nm, recips, q, x, &c, &mut r, &mut g);
    // inverse Hessian guess scaled like |c| / |∇f| so the solve is homogeneous in x
    let h0 = xnorm.max(f64::MIN_POSITIVE);
    let mut h = DMatrix::<f64>::identity(n, n) * h0;
    let mut it = 0;
    while it < max_iter {
        it += 1;
        if f <= 1e-3 * tol * xnorm {
            break;
        }
        if recips == nm.recips.as_slice() && f - certificate(nm, q, x, &g) <= tol * f {
            break;
        }
        let mut d: Vec<f64> = (0..n).map(|i| -(0..n).map(|j| h[(i, j)] * gc[j]).sum::<f64>()).collect();
        let mut slope = dot(&d, &gc);
        if slope >= 0.0 {
            h = DMatrix::identity(n, n) * h0;
            d = gc.iter().map(|v| -v * h0).collect();
            slope = -h0 * dot(&gc, &gc);
        }
        if slope == 0.0 {
            break;
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..50 {
            let cn: Vec<f64> = c.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            let (fnew, gnew) = eval(nm, recips, q, x, &cn, &mut r, &mut g);
            if fnew <= f + 1e-4 * t * slope {
                accepted = Some((cn, fnew, gnew));
                break;
            }
            t *= 0.5;
        }
        let Some((cn, fnew, gnew)) = accepted else {
            // restore g for the current point
            eval(nm, recips, q, x, &c, &mut r, &mut g);
            break;
        };
        let s: Vec<f64> = cn.iter().zip(&c).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gnew.iter().zip(&gc).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            let hy: Vec<f64> = (0..n).map(|i| (0..n).map(|j| h[(i, j)] * y[j]).sum()).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] += ((sy + yhy) * s[i] * s[j]) / (sy * sy) - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }
        let done = f - fnew <= 1e-16 * f;
        c = cn;
        f = fnew;
        gc = gnew;
        if done {
            break;
        }
    }
    (c, it)
}

/// Coordinate pattern search on the true norm, for non-smooth exponents.
fn polish(nm: &Norms, q: &DMatrix<f64>, x: &[f64], c: &mut [f64], scale: f64) -> usize {
    let k = x.len();
    let mut r = vec![0.0; k];
    let val = |c: &[f64], r: &mut [f64]| {
        residual(q, x, c, r);
        nm.norm(r)
    };
    let mut f = val(c, &mut r);
    let mut h = 0.1 * scale.max(f);
    let mut evals = 0;
    while h > 1e-12 * scale.max(1e-300) && evals < 20_000 {
        let mut improved = false;
        for j in 0..c.len() {
            for sgn in [1.0, -1.0] {
                let old = c[j];
                c[j] = old + sgn * h;
                let fv = val(c, &mut r);
                evals += 1;
                if fv < f {
                    f = fv;
                    improved = true;
                    break;
                }
                c[j] = old;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    evals
}

fn solve(nm: &Norms, q: &DMatrix<f64>, x: &[f64], warm: Option<&[f64]>, tol: f64) -> Inner {
    let k = x.len();
    let n = q.ncols();
    let mut r = vec![0.0; k];
    let mut g = vec![0.0; k];
    if n == 0 || nm.euclid {
        let c = qt_times(q, x);
        residual(q, x, &c, &mut r);
        let value = mixed_norm_grad_raw(&nm.shape, &r, &nm.recips, &mut g);
        return Inner { value, lower: value, c, g, iterations: 0 };
    }
    let xnorm = nm.norm(x);
    let c0 = warm.map(|w| w.to_vec()).unwrap_or_else(|| qt_times(q, x));
    let (c, iterations) = if nm.smooth {
        bfgs(nm, &nm.recips, q, x, c0, tol, xnorm, 200)
    } else {
        let mut c = c0;
        let mut its = 0;
        for m in [16.0, 64.0, 256.0] {
            let sur: Vec<f64> = nm.recips.iter().map(|&v| v.clamp(1.0 / m, 1.0 - 1.0 / m)).collect();
            let (cn, i) = bfgs(nm, &sur, q, x, c, tol, xnorm, 200);
            c = cn;
            its += i;
        }
        its += polish(nm, q, x, &mut c, xnorm);
        (c, its)
    };
    residual(q, x, &c, &mut r);
    let value = mixed_norm_grad_raw(&nm.shape, &r, &nm.recips, &mut g);
    let lower = certificate(nm, q, x, &g).min(value);
    Inner { value, lower, c, g, iterations }
}

/// `inf_{y ∈ L} ‖x − y‖_{q̄}`, solved to relative accuracy `tol`.
pub fn distance_to_subspace(x: &Tensor, l: &SubspaceCandidate, q: &ExponentVector, tol: f64) -> Result<Distance> {
    if x.shape() != l.shape() {
        return Err(Error::DimensionMismatch(format!("point shape {:?} vs subspace shape {:?}", x.shape(), l.shape())));
    }
    if q.d() != x.d() {
        return Err(Error::DimensionMismatch(format!("tensor has d = {}, exponents have d = {}", x.d(), q.d())));
    }
    if x.data().iter().any(|v| v.is_nan()) {
        return Err(Error::NaN);
    }
    let nm = Norms::new(x.shape(), q);
    let out = solve(&nm, &l.ortho, x.data(), None, tol);
    Ok(Distance { value: out.value, lower: out.lower, coeffs: out.c, iterations: out.iterations })
}

#[derive(Clone, Debug)]
pub struct WidthEstimate {
    /// `max_i dist(x_i, L)` for the returned witness.
    pub value: f64,
    pub witness: SubspaceCandidate,
    /// Index of the point attaining `value`.
    pub worst_point: usize,
    /// Accepted outer steps summed over restarts.
    pub iterations: usize,
}

struct State {
    q: DMatrix<f64>,
    coeffs: Vec<Vec<f64>>,
    delta: Vec<f64>,
    grads: Vec<Vec<f64>>,
}

fn eval_all(nm: &Norms, q: DMatrix<f64>, pts: &[Vec<f64>], warm: Option<&[Vec<f64>]>, tol: f64) -> State {
    let mut st = State { q, coeffs: Vec::with_capacity(pts.len()), delta: Vec::with_capacity(pts.len()), grads: Vec::with_capacity(pts.len()) };
    for (i, x) in pts.iter().enumerate() {
        let out = solve(nm, &st.q, x, warm.map(|w| w[i].as_slice()), tol);
        st.coeffs.push(out.c);
        st.delta.push(out.value);
        st.grads.push(out.g);
    }
    st
}

fn max_of(v: &[f64]) -> (usize, f64) {
    v.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &x)| if x > bv { (i, x) } else { (bi, bv) })
}

/// `(S/β) log Σ exp(β δ_i / S)` and its weights.
fn soft_max(delta: &[f64], beta: f64, scale: f64) -> (f64, Vec<f64>) {
    let (_, m) = max_of(delta);
    let e: Vec<f64> = delta.iter().map(|d| (beta * (d - m) / scale).exp()).collect();
    let z: f64 = e.iter().sum();
    (m + scale / beta * z.ln(), e.into_iter().map(|v| v / z).collect())
}

/// Thin QR with a conditioning check on `R`.
fn orthonormalize(y: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let qr = y.qr();
    let r = qr.r();
    let diag: Vec<f64> = r.diagonal().iter().map(|v| v.abs()).collect();
    let mx = diag.iter().cloned().fold(0.0, f64::max);
    let mn = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if mx == 0.0 || !(mn / mx > 1e-10) {
        return None;
    }
    Some(qr.q())
}

fn gaussian(k: usize, n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(k, n, |_, _| StandardNormal.sample(rng))
}

/// Extends orthonormal columns by Gram-Schmidt against random directions,
/// leaving the given columns untouched.
fn extend(base: &DMatrix<f64>, n: usize, rng: &mut ChaCha8Rng) -> Option<DMatrix<f64>> {
    let k = base.nrows();
    let keep = base.ncols().min(n);
    let mut cols: Vec<Vec<f64>> = (0..keep).map(|j| base.column(j).iter().copied().collect()).collect();
    let mut tries = 0;
    while cols.len() < n {
        tries += 1;
        if tries > 10 * n + 10 {
            return None;
        }
        let mut v: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let a = dot(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= a * ci;
                }
            }
        }
        let nv = dot(&v, &v).sqrt();
        if nv > 1e-6 {
            cols.push(v.into_iter().map(|t| t / nv).collect());
        }
    }
    Some(DMatrix::from_fn(k, n, |i, j| cols[j][i]))
}

struct RestartOut {
    value: f64,
    q: DMatrix<f64>,
    worst: usize,
    steps: usize,
}

fn run_restart(nm: &Norms, pts: &[Vec<f64>], n: usize, cfg: &OracleConfig, scale: f64, idx: usize, warm: Option<&SubspaceCandidate>) -> Result<RestartOut> {
    let k = pts[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(idx as u64 + 1);
    let tol = cfg.inner_tolerance;
    let mut st = match warm.filter(|_| idx == 0) {
        Some(w) => {
            let wq = w.ortho.clone();
            let q = extend(&wq, n, &mut rng).ok_or_else(|| Error::Budget("could not extend the warm start to rank n".into()))?;
            // solve on the warm basis first so the padded coefficients start no worse
            let old = eval_all(nm, wq, pts, None, tol);
            let padded: Vec<Vec<f64>> = old.coeffs.iter().map(|c| (0..n).map(|j| c.get(j).copied().unwrap_or(0.0)).collect()).collect();
            eval_all(nm, q, pts, Some(&padded), tol)
        }
        None => {
            let mut q = None;
            for _ in 0..10 {
                if let Some(o) = orthonormalize(gaussian(k, n, &mut rng)) {
                    q = Some(o);
                    break;
                }
            }
            let q = q.ok_or_else(|| Error::Budget("random initialization never reached rank n".into()))?;
            eval_all(nm, q, pts, None, tol)
        }
    };
    let (mut worst, mut best) = max_of(&st.delta);
    let mut best_q = st.q.clone();
    let mut steps = 0;
    let per_stage = (cfg.outer_iterations / BETAS.len()).max(1);
    let mut eta = 0.5 / scale;
    for &beta in &BETAS {
        for _ in 0..per_stage {
            let (f, w) = soft_max(&st.delta, beta, scale);
            let mut grad = DMatrix::<f64>::zeros(k, n);
            for ((wi, gi), ci) in w.iter().zip(&st.grads).zip(&st.coeffs) {
                if *wi < 1e-14 {
                    continue;
                }
                for j in 0..n {
                    let a = wi * ci[j];
                    for (gr, gv) in grad.column_mut(j).iter_mut().zip(gi) {
                        *gr -= a * gv;
                    }
                }
            }
            let proj = st.q.transpose() * &grad;
            grad -= &st.q * proj;
            let gn2 = grad.norm_squared();
            if gn2 <= 1e-28 * scale * scale {
                break;
            }
            let mut next = None;
            for _ in 0..30 {
                let y = &st.q - &grad * eta;
                if let Some(qn) = orthonormalize(y) {
                    let map = qn.transpose() * &st.q;
                    let warm: Vec<Vec<f64>> = st
                        .coeffs
                        .iter()
                        .map(|c| (0..n).map(|i| (0..n).map(|j| map[(i, j)] * c[j]).sum()).collect())
                        .collect();
                    let cand = eval_all(nm, qn, pts, Some(&warm), tol);
                    if soft_max(&cand.delta, beta, scale).0 <= f - 1e-4 * eta * gn2 {
                        next = Some(cand);
                        break;
                    }
                }
                eta *= 0.5;
            }
            let Some(cand) = next else { break };
            st = cand;
            steps += 1;
            eta *= 1.5;
            let (wi, m) = max_of(&st.delta);
            if m < best {
                best = m;
                worst = wi;
                best_q = st.q.clone();
            }
        }
    }
    Ok(RestartOut { value: best, q: best_q, worst, steps })
}

/// Minimizes `max_i dist(x_i, L)` over `n`-dimensional `L`.
///
/// The value is attained by the returned witness, so it bounds the width of
/// `conv(±points)` from above; for a full ball it is only an estimate unless
/// the points contain all extreme points. A warm start seeds restart 0 with
/// its basis extended by random directions.
pub fn width_upper(points: &[Tensor], n: usize, q: &ExponentVector, cfg: &OracleConfig, warm: Option<&SubspaceCandidate>) -> Result<WidthEstimate> {
    cfg.validate()?;
    let first = points.first().ok_or_else(|| Error::InvalidInput("empty point list".into()))?;
    let shape = first.shape().to_vec();
    if points.iter().any(|p| p.shape() != shape.as_slice()) {
        return Err(Error::DimensionMismatch("points have different shapes".into()));
    }
    if q.d() != shape.len() {
        return Err(Error::DimensionMismatch(format!("points have d = {}, exponents have d = {}", shape.len(), q.d())));
    }
    if points.iter().any(|p| p.data().iter().any(|v| v.is_nan())) {
        return Err(Error::NaN);
    }
    let k = first.len();
    if n > k {
        return Err(Error::InvalidInput(format!("n = {n} exceeds K = {k}")));
    }
    if let Some(w) = warm {
        if w.shape() != shape.as_slice() {
            return Err(Error::DimensionMismatch("warm start has a different shape".into()));
        }
    }
    let nm = Norms::new(&shape, q);
    let pts: Vec<Vec<f64>> = points.iter().map(|p| p.data().to_vec()).collect();
    let norms: Vec<f64> = pts.iter().map(|x| nm.norm(x)).collect();
    let (top, scale) = max_of(&norms);
    if n == k || scale == 0.0 {
        let q = if n == 0 { DMatrix::zeros(k, 0) } else { DMatrix::identity(k, n) };
        let value = if n == k { 0.0 } else { scale };
        return Ok(WidthEstimate { value, witness: SubspaceCandidate::from_orthonormal(shape, q, value), worst_point: top, iterations: 0 });
    }
    if n == 0 {
        return Ok(WidthEstimate { value: scale, witness: SubspaceCandidate::from_orthonormal(shape, DMatrix::zeros(k, 0), scale), worst_point: top, iterations: 0 });
    }
    let outs: Vec<Result<RestartOut>> = (0..cfg.restarts).into_par_iter().map(|i| run_restart(&nm, &pts, n, cfg, scale, i, warm)).collect();
    let mut best: Option<RestartOut> = None;
    let mut steps = 0;
    for o in outs {
        let o = o?;
        steps += o.steps;
        if best.as_ref().is_none_or(|b| o.value < b.value) {
            best = Some(o);
        }
    }
    let b = best.expect("restarts > 0");
    Ok(WidthEstimate { value: b.value, witness: SubspaceCandidate::from_orthonormal(shape, b.q, b.value), worst_point: b.worst, iterations: steps })
}

/// Lower values for `d_n(V(s̄), l_{q̄})`, with `V` unnormalized.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VSetLower {
    /// The two-branch order with constants dropped; the exact Euclidean value
    /// when every `q_j = 2`.
    pub closed_form: f64,
    /// `Π k_j^{1/q_j − 1/2} · Π s_j^{1/2} √(1 − n/K)`, a rigorous bound.
    pub certified: f64,
}

pub fn width_lower_vset(v: &VSet, n: usize, q: &ExponentVector) -> Result<VSetLower> {
    if q.d() != v.k.len() {
        return Err(Error::DimensionMismatch(format!("V-set has d = {}, exponents have d = {}", v.k.len(), q.d())));
    }
    let rq = q.recips_f64();
    if rq.iter().any(|&r| r > 0.5) {
        return Err(Error::Pattern("the V-set bound needs every q_j >= 2".into()));
    }
    let l2 = vset_l2_lower(v, n);
    let closed_form = if rq.iter().all(|&r| r == 0.5) { l2 } else { vset_order(v, n, q) };
    let certified = v.k.iter().zip(&rq).map(|(&k, r)| (k as f64).powf(r - 0.5)).product::<f64>() * l2;
    Ok(VSetLower { closed_form, certified })
}

fn combinations(k: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..=k - (s - cur.len()) {
            cur.push(i);
            rec(i + 1, k, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, s, &mut Vec::new(), &mut out);
    out
}

fn binom(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn outer_product(factors: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![1.0];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for &a in f {
            next.extend(out.iter().map(|b| b * a));
        }
        out = next;
    }
    out
}

/// Number of orbit points of `x̂(s̄)`, counting `±x` once.
pub fn vset_orbit_size(v: &VSet) -> u128 {
    v.k.iter().zip(&v.s).map(|(&k, &s)| binom(k, s).saturating_mul(1u128 << (s - 1).min(100))).fold(1u128, |a, b| a.saturating_mul(b))
}

/// All signed, permuted copies of `x̂(s̄)`, one of each `±` pair.
pub fn vset_orbit(v: &VSet) -> Vec<Tensor> {
    let axis: Vec<Vec<Vec<f64>>> = v
        .k
        .iter()
        .zip(&v.s)
        .map(|(&k, &s)| {
            let mut out = Vec::new();
            for sup in combinations(k, s) {
                for mask in 0..(1u64 << (s - 1)) {
                    let mut e = vec![0.0; k];
                    for (b, &i) in sup.iter().enumerate() {
                        e[i] = if b > 0 && mask >> (b - 1) & 1 == 1 { -1.0 } else { 1.0 };
                    }
                    out.push(e);
                }
            }
            out
        })
        .collect();
    let mut pts = Vec::new();
    let mut pick = vec![0usize; axis.len()];
    loop {
        let factors: Vec<Vec<f64>> = pick.iter().zip(&axis).map(|(&i, a)| a[i].clone()).collect();
        pts.push(Tensor::new(v.k.clone(), outer_product(&factors)).expect("orbit shape"));
        let mut j = 0;
        while j < pick.len() {
            pick[j] += 1;
            if pick[j] < axis[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
        if j == pick.len() {
            return pts;
        }
    }
}

/// Extreme points of `B_{p̄}^{k̄}` when every `p_j ∈ {1, ∞}` and there are at
/// most `limit` of them up to sign.
pub fn ball_extreme_points(k: &[usize], p: &ExponentVector, limit: usize) -> Option<Vec<Tensor>> {
    if p.d() != k.len() {
        return None;
    }
    let rp = p.recips_f64();
    if rp.iter().any(|&r| r != 0.0 && r != 1.0) {
        return None;
    }
    let mut count: u128 = 2;
    for (&kj, &r) in k.iter().zip(&rp) {
        count = if r == 1.0 { count.saturating_mul(kj as u128) } else { count.checked_pow(kj as u32).unwrap_or(u128::MAX) };
        if count / 2 > limit as u128 {
            return None;
        }
    }
    let mut level: Vec<Vec<f64>> = vec![vec![1.0], vec![-1.0]];
    for (&kj, &r) in k.iter().zip(&rp) {
        let len = level[0].len();
        let mut next = Vec::new();
        if r == 1.0 {
            for i in 0..kj {
                for y in &level {
                    let mut v = vec![0.0; len * kj];
                    v[i * len..(i + 1) * len].copy_from_slice(y);
                    next.push(v);
                }
            }
        } else {
            let mut pick = vec![0usize; kj];
            loop {
                next.push(pick.iter().flat_map(|&i| level[i].iter().copied()).collect());
                let mut j = 0;
                while j < kj {
                    pick[j] += 1;
                    if pick[j] < level.len() {
                        break;
                    }
                    pick[j] = 0;
                    j += 1;
                }
                if j == kj {
                    break;
                }
            }
        }
        level = next;
    }
    let pts = level
        .into_iter()
        .filter(|v| v.iter().find(|&&e| e != 0.0).is_some_and(|&e| e > 0.0))
        .map(|v| Tensor::new(k.to_vec(), v).expect("ball shape"))
        .collect();
    Some(pts)
}

fn normalize(mut x: Vec<f64>, shape: &[usize], rp: &[f64]) -> Vec<f64> {
    let nx = mixed_norm_raw(shape, &x, rp);
    if nx > 0.0 {
        x.iter_mut().for_each(|v| *v /= nx);
    }
    x
}

/// Pushes `x` toward the boundary point of `B_{p̄}` farthest from `L`.
///
/// Each step moves to the norming point of the current residual functional,
/// which never decreases the distance since the distance is convex.
pub fn refine_ball_point(x: &Tensor, l: &SubspaceCandidate, p: &ExponentVector, q: &ExponentVector, steps: usize, tol: f64) -> Result<(Tensor, f64)> {
    if x.shape() != l.shape() || p.d() != x.d() || q.d() != x.d() {
        return Err(Error::DimensionMismatch("point, subspace and exponents disagree".into()));
    }
    let nm = Norms::new(x.shape(), q);
    let rp = p.recips_f64();
    let dual_p: Vec<f64> = rp.iter().map(|r| 1.0 - r).collect();
    let mut cur = x.data().to_vec();
    let mut out = solve(&nm, &l.ortho, &cur, None, tol);
    for _ in 0..steps {
        let mut gp = out.g.clone();
        let coef = qt_times(&l.ortho, &out.g);
        residual(&l.ortho, &out.g, &coef, &mut gp);
        let mut y = vec![0.0; gp.len()];
        if mixed_norm_grad_raw(x.shape(), &gp, &dual_p, &mut y) == 0.0 {
            break;
        }
        let y = normalize(y, x.shape(), &rp);
        let cand = solve(&nm, &l.ortho, &y, None, tol);
        if cand.value <= out.value * (1.0 + 1e-12) {
            break;
        }
        cur = y;
        out = cand;
    }
    Ok((Tensor::new(x.shape().to_vec(), cur)?, out.value))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub hash: String,
    pub k: Vec<u64>,
    pub n: u64,
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub phi: f64,
    /// Certified V-set value for the best orbit that fits the point budget.
    pub lower: f64,
    pub upper: f64,
    /// Two-branch V-set order at the planned `s̄`, normalized into the ball.
    pub predicted_lower: f64,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
    pub s_lower: Vec<usize>,
    pub s_plan: Vec<u64>,
    pub points: usize,
    /// Whether the point list holds every extreme point of the ball.
    pub exhaustive: bool,
    pub iterations: usize,
    pub holds: bool,
}

/// 27 desk-scale problems with `K ≤ 16`, `n ∈ {1, 2, 4}` (capped at `K/2`),
/// `p_j ∈ {1, 3/2, 2, 4, ∞}` and `q_j ∈ {2, 4}`.
pub fn desk_grid() -> Vec<BallProblem> {
    const SHAPES: [&[u64]; 9] = [&[8], &[16], &[2, 2], &[2, 4], &[4, 2], &[4, 4], &[2, 8], &[2, 2, 2], &[2, 2, 4]];
    const P: [&str; 5] = ["1", "2", "4", "inf", "3/2"];
    const Q: [&str; 2] = ["2", "4"];
    let mut out = Vec::new();
    for (i, k) in SHAPES.iter().enumerate() {
        let total: u64 = k.iter().product();
        for t in 0..3 {
            let n = [1u64, 2, 4][t].min(total / 2);
            let p: Vec<&str> = (0..k.len()).map(|j| P[(i + t + j) % P.len()]).collect();
            let q: Vec<&str> = (0..k.len()).map(|j| Q[(i + 2 * t + j) % Q.len()]).collect();
            let p = ExponentVector::parse(&p).expect("valid literal");
            let q = ExponentVector::parse(&q).expect("valid literal");
            out.push(BallProblem::new(k.to_vec(), n, p, q).expect("valid literal"));
        }
    }
    out
}

pub fn problem_hash(prob: &BallProblem) -> String {
    let canon = serde_json::json!({
        "k": prob.k,
        "n": prob.n,
        "p": prob.p.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "q": prob.q.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    });
    let digest = Sha256::digest(canon.to_string().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn best_vset(prob: &BallProblem, budget: usize) -> Result<(VSet, f64)> {
    let k: Vec<usize> = prob.k.iter().map(|&v| v as usize).collect();
    let rp = prob.p.recips_f64();
    let mut best: Option<(VSet, f64)> = None;
    let mut s = vec![1usize; k.len()];
    loop {
        let v = VSet::new(k.clone(), s.clone())?;
        if vset_orbit_size(&v) <= budget as u128 {
            let low = width_lower_vset(&v, prob.n as usize, &prob.q)?.certified;
            let val = low * s.iter().zip(&rp).map(|(&sj, r)| (sj as f64).powf(-r)).product::<f64>();
            if best.as_ref().is_none_or(|(_, b)| val > *b * (1.0 + 1e-12)) {
                best = Some((v, val));
            }
        }
        let mut j = 0;
        while j < s.len() {
            s[j] += 1;
            if s[j] <= k[j] {
                break;
            }
            s[j] = 1;
            j += 1;
        }
        if j == s.len() {
            break;
        }
    }
    best.ok_or_else(|| Error::Budget(format!("no V-set orbit fits {budget} points")))
}

/// Joins `Φ`, a certified V-set lower value and the numerical upper value.
///
/// The point list always contains the full orbit used for `lower`, so
/// `lower ≤ upper` holds whenever the optimizer reports honestly.
pub fn sandwich_report(prob: &BallProblem, cfg: &OracleConfig) -> Result<SandwichReport> {
    cfg.validate()?;
    let kk = prob.total();
    if kk > 64 || prob.n > 8 {
        return Err(Error::DeskScale(format!("need K <= 64 and n <= 8, got K = {kk}, n = {}", prob.n)));
    }
    let ph = phi(prob)?;
    let plan = lower_bound_plan(prob)?;
    let k: Vec<usize> = prob.k.iter().map(|&v| v as usize).collect();
    let rp = prob.p.recips_f64();
    let n = prob.n as usize;

    let (vset, lower) = best_vset(prob, cfg.point_budget)?;
    let scale_v = vset.s.iter().zip(&rp).map(|(&s, r)| (s as f64).powf(*r)).product::<f64>();
    let mut points: Vec<Tensor> = vset_orbit(&vset).into_iter().map(|t| t.scaled(1.0 / scale_v)).collect();

    let plan_v = VSet::new(k.clone(), plan.s.iter().map(|&s| s as usize).collect())?;
    let predicted_lower = width_lower_vset(&plan_v, n, &prob.q)?.closed_form * plan_v.s.iter().zip(&rp).map(|(&s, r)| (s as f64).powf(-r)).product::<f64>();

    let room = cfg.point_budget.saturating_sub(points.len()).max(1);
    let ext = ball_extreme_points(&k, &prob.p, room);
    let exhaustive = ext.is_some();
    let mut sampled = 0..0;
    match ext {
        Some(e) => points.extend(e),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
            let m = room.min(8 * kk as usize);
            let start = points.len();
            for _ in 0..m {
                let g: Vec<f64> = (0..kk).map(|_| StandardNormal.sample(&mut rng)).collect();
                points.push(Tensor::new(k.clone(), normalize(g, &k, &rp))?);
            }
            sampled = start..points.len();
        }
    }

    let mut est = width_upper(&points, n, &prob.q, cfg, None)?;
    let mut iterations = est.iterations;
    if !exhaustive {
        for _ in 0..2 {
            for i in sampled.clone() {
                let (y, _) = refine_ball_point(&points[i], &est.witness, &prob.p, &prob.q, 8, cfg.inner_tolerance)?;
                points[i] = y;
            }
            let next = width_upper(&points, n, &prob.q, cfg, Some(&est.witness))?;
            iterations += next.iterations;
            est = next;
        }
    }
    // A finite sample lets the last subspace dodge it, so push the samples
    // outward once more against the final witness.
    let mut upper = est.value;
    for i in sampled {
        let (_, dist) = refine_ball_point(&points[i], &est.witness, &prob.p, &prob.q, 8, cfg.inner_tolerance)?;
        upper = upper.max(dist);
    }
    let phi_v = ph.value_f64;
    Ok(SandwichReport {
        hash: problem_hash(prob),
        k: prob.k.clone(),
        n: prob.n,
        p: prob.p.iter().map(|e| e.to_string()).collect(),
        q: prob.q.iter().map(|e| e.to_string()).collect(),
        phi: phi_v,
        lower,
        upper,
        predicted_lower,
        ratio_lower: lower / phi_v,
        ratio_upper: upper / phi_v,
        s_lower: vset.s,
        s_plan: plan.s,
        points: points.len(),
        exhaustive,
        iterations,
        holds: lower <= upper * (1.0 + 1e-6),
    })
}

pub const LEDGER_HEADER: [&str; 14] = ["hash", "k", "n", "p", "q", "phi", "lower", "upper", "predicted_lower", "ratio_lower", "ratio_upper", "seed", "restarts", "iterations"];

/// Appends one row per report, writing the header when the file is new.
pub fn append_ledger(path: &Path, reports: &[SandwichReport], cfg: &OracleConfig) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record(LEDGER_HEADER)?;
    }
    for r in reports {
        w.write_record([
            r.hash.clone(),
            join(&r.k),
            r.n.to_string(),
            r.p.join(" "),
            r.q.join(" "),
            format!("{:.12e}", r.phi),
            format!("{:.12e}", r.lower),
            format!("{:.12e}", r.upper),
            format!("{:.12e}", r.predicted_lower),
            format!("{:.6}", r.ratio_lower),
            format!("{:.6}", r.ratio_upper),
            cfg.seed.to_string(),
            cfg.restarts.to_string(),
            r.iterations.to_string(),
        ])?;
    }
    w.flush()?;
    w.into_inner().map_err(|e| Error::Io(e.into_error()))?.flush()?;
    Ok(())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Reads back a ledger written by [`append_ledger`] as string records.
pub fn read_ledger(path: &Path) -> Result<Vec<Vec<String>>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        out.push(rec?.iter().map(str::to_string).collect());
    }
    Ok(out)
}
