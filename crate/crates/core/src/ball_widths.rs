//! Widths of finite-dimensional mixed-norm balls `B_{p̄}^{k̄}` in `l_{q̄}^{k̄}`.
//!
//! All order functions are returned as exact [`PowerProduct`]s of the
//! integers `k_j` and `n`. Sorted positions `i = 0..d` refer to `σ` order.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{PowerProduct, Real};
use crate::error::{Error, Result};
use crate::exponents::{sorted_profile, SortedProfile};
use crate::mixed_norm::{ExponentVector, Tensor};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallProblem {
    pub k: Vec<u64>,
    pub n: u64,
    pub p: ExponentVector,
    pub q: ExponentVector,
}

impl BallProblem {
    pub fn new(k: Vec<u64>, n: u64, p: ExponentVector, q: ExponentVector) -> Result<Self> {
        if k.is_empty() || k.iter().any(|&v| v == 0) {
            return Err(Error::InvalidInput(format!("k = {k:?} must be positive integers")));
        }
        if p.d() != k.len() || q.d() != k.len() {
            return Err(Error::DimensionMismatch(format!("k has d = {}, p has {}, q has {}", k.len(), p.d(), q.d())));
        }
        let total = k.iter().try_fold(1u64, |a, &b| a.checked_mul(b)).ok_or_else(|| Error::InvalidInput("k product overflows".into()))?;
        if 2 * n > total {
            return Err(Error::InvalidInput(format!("n = {n} exceeds k_1...k_d / 2 = {}", total as f64 / 2.0)));
        }
        Ok(BallProblem { k, n, p, q })
    }

    /// Like [`BallProblem::new`] but without the `n ≤ K/2` check, so the
    /// order formulas can be evaluated outside the range where they are
    /// known to describe the width.
    pub fn new_unguarded(k: Vec<u64>, n: u64, p: ExponentVector, q: ExponentVector) -> Result<Self> {
        let total: u64 = k.iter().product();
        let probe = BallProblem::new(k, n.min(total / 2), p, q)?;
        Ok(BallProblem { n, ..probe })
    }

    pub fn d(&self) -> usize {
        self.k.len()
    }

    /// `K = k_1 ⋯ k_d`.
    pub fn total(&self) -> u64 {
        self.k.iter().product()
    }
}

fn kpow(k: u64, e: &Real) -> PowerProduct {
    PowerProduct::pow_int(k, e)
}

fn half() -> Real {
    Real::ratio(1, 2)
}

/// `n^{−1/2}`, `None` meaning `+∞` at `n = 0`.
fn n_inv_sqrt(n: u64) -> Option<PowerProduct> {
    (n > 0).then(|| PowerProduct::pow_int(n, &Real::ratio(-1, 2)))
}

/// Quantities in `σ` order.
struct Ctx<'a> {
    prob: &'a BallProblem,
    prof: SortedProfile,
}

impl<'a> Ctx<'a> {
    fn new(prob: &'a BallProblem) -> Result<Self> {
        Ok(Ctx { prob, prof: sorted_profile(&prob.p, &prob.q)? })
    }

    fn k(&self, i: usize) -> u64 {
        self.prob.k[self.prof.sigma[i]]
    }

    fn rp(&self, i: usize) -> Real {
        self.prob.p.get(self.prof.sigma[i]).recip().clone()
    }

    fn rq(&self, i: usize) -> Real {
        self.prob.q.get(self.prof.sigma[i]).recip().clone()
    }

    fn omega(&self, i: usize) -> Real {
        self.prof.sorted_omega(i).clone()
    }

    /// `Π_{i ∈ range} k_i^{1/q_i − 1/p_i}`, or with `p*` if `star`.
    fn gap(&self, range: std::ops::Range<usize>, star: bool) -> PowerProduct {
        range.fold(PowerProduct::one(), |acc, i| {
            let rp = if star { self.rp(i).min(half()) } else { self.rp(i) };
            acc.mul(&kpow(self.k(i), &(self.rq(i) - rp)))
        })
    }

    /// `n^{−1/2} Π_{i<m} k_i^{1/2} Π_{i≥m} k_i^{1/q_i}`.
    fn base(&self, m: usize) -> Option<PowerProduct> {
        let mut out = n_inv_sqrt(self.prob.n)?;
        for i in 0..self.prof.d() {
            let e = if i < m { half() } else { self.rq(i) };
            out = out.mul(&kpow(self.k(i), &e));
        }
        Some(out)
    }

    /// `Π_{i<m} k_i · Π_{i≥m} k_i^{2/q_i}`.
    fn window(&self, m: usize) -> PowerProduct {
        (0..self.prof.d()).fold(PowerProduct::one(), |acc, i| {
            let e = if i < m { Real::one() } else { Real::int(2) * self.rq(i) };
            acc.mul(&kpow(self.k(i), &e))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiArgmin {
    /// The constant `1` inside the outer minimum.
    One,
    /// The term with index `t ∈ {μ+1, …, d}`.
    T(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiForm {
    /// Minimum over `t ∈ {μ+1, …, d}` with `p* = max(p, 2)`.
    AllTerms,
    /// `ν < d`: minimum over `t ∈ {μ+1, …, ν}` plus one closing term.
    ClosingTerm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiReport {
    pub value: PowerProduct,
    pub value_f64: f64,
    pub argmin: PhiArgmin,
    pub form: PhiForm,
    /// The value from the all-terms form, which must equal `value`.
    pub all_terms_value: PowerProduct,
}

fn pick_min(cands: Vec<(PhiArgmin, Option<PowerProduct>)>) -> (PhiArgmin, PowerProduct) {
    let mut best = (PhiArgmin::One, PowerProduct::one());
    for (tag, v) in cands {
        if let Some(v) = v {
            if v.exact_cmp(&best.1) == Ordering::Less {
                best = (tag, v);
            }
        }
    }
    best
}

fn phi_report(prob: &BallProblem) -> Result<PhiReport> {
    let ctx = Ctx::new(prob)?;
    let (d, mu, nu) = (ctx.prof.d(), ctx.prof.mu, ctx.prof.nu);
    let lead = ctx.gap(0..mu, false);
    let term = |t: usize, star: bool| -> Option<PowerProduct> {
        let w = ctx.omega(t - 1);
        let b = ctx.base(t - 1).map(|b| b.powr(&w));
        let b = match b {
            Some(b) => b,
            None if w.is_zero() => PowerProduct::one(),
            None => return None,
        };
        Some(ctx.gap(mu..t - 1, star).mul(&b))
    };
    let all: Vec<_> = (mu + 1..=d).map(|t| (PhiArgmin::T(t), term(t, true))).collect();
    let (arg_all, min_all) = pick_min(all);
    let all_terms_value = lead.mul(&min_all);
    let (argmin, value, form) = if nu < d {
        let mut cands: Vec<_> = (mu + 1..=nu).map(|t| (PhiArgmin::T(t), term(t, false))).collect();
        let closing = ctx.base(nu).map(|b| ctx.gap(mu..nu, false).mul(&b));
        cands.push((PhiArgmin::T(nu + 1), closing));
        let (a, m) = pick_min(cands);
        (a, lead.mul(&m), PhiForm::ClosingTerm)
    } else {
        (arg_all, all_terms_value.clone(), PhiForm::AllTerms)
    };
    let value_f64 = value.to_f64();
    Ok(PhiReport { value, value_f64, argmin, form, all_terms_value })
}

fn require_theorem3(prob: &BallProblem) -> Result<()> {
    let half = half();
    if let Some(e) = prob.q.iter().find(|e| e.is_infinite() || e.recip() > &half) {
        return Err(Error::InvalidInput(format!("needs 2 <= q_j < inf, got q = {e}")));
    }
    Ok(())
}

/// The order function `Φ_{p̄,q̄}(k̄, n)` of `d_n(B_{p̄}^{k̄}, l_{q̄}^{k̄})`.
/// Ties go to the constant branch, then to the smallest `t`.
pub fn phi(prob: &BallProblem) -> Result<PhiReport> {
    require_theorem3(prob)?;
    phi_report(prob)
}

/// `Π_{j≥ν} k_j^{1/q_j − 1/p_j}` when `p_j ≤ q_j ≤ 2` for `j < ν` and
/// `q_j ≤ p_j` for `j ≥ ν`.
pub fn prop2_order(prob: &BallProblem, nu: usize) -> Result<PowerProduct> {
    let d = prob.d();
    if nu > d {
        return Err(Error::Pattern(format!("nu = {nu} exceeds d = {d}")));
    }
    let half = half();
    let mut out = PowerProduct::one();
    for j in 0..d {
        let (rp, rq) = (prob.p.get(j).recip(), prob.q.get(j).recip());
        let ok = if j < nu { rp >= rq && rq >= &half } else { rq >= rp };
        if !ok {
            let want = if j < nu { "p <= q <= 2" } else { "q <= p" };
            return Err(Error::Pattern(format!("axis {j}: need {want}, got p = {}, q = {}", prob.p.get(j), prob.q.get(j))));
        }
        if j >= nu {
            out = out.mul(&kpow(prob.k[j], &(rq - rp)));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerRegime {
    /// `n` at most the window with the `μ` leading axes full.
    Saturated,
    /// `n` in the window of index `t ∈ {μ+1, …, ν}`; one axis partially filled.
    Window { t: usize },
    /// `ν < d` and `n` beyond the last window.
    Large,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerPlan {
    /// Block sizes in original axis order.
    pub s: Vec<u64>,
    pub predicted: PowerProduct,
    pub predicted_f64: f64,
    pub regime: LowerRegime,
}

/// Chooses the V-set block `s̄` whose scaled copy inside `B_{p̄}` certifies
/// the lower order, and returns the lower bound it predicts (constants dropped).
pub fn lower_bound_plan(prob: &BallProblem) -> Result<LowerPlan> {
    require_theorem3(prob)?;
    let ctx = Ctx::new(prob)?;
    let (d, mu, nu) = (ctx.prof.d(), ctx.prof.mu, ctx.prof.nu);
    let n = PowerProduct::from_int(prob.n.max(1));
    let mut s_sorted = vec![1u64; d];
    let le = |a: &PowerProduct, b: &PowerProduct| a.exact_cmp(b) != Ordering::Greater;
    let (regime, predicted) = if prob.n == 0 || le(&n, &ctx.window(mu)) {
        (0..mu).for_each(|i| s_sorted[i] = ctx.k(i));
        (LowerRegime::Saturated, ctx.gap(0..mu, false))
    } else if let Some(t) = (mu + 1..=nu).find(|&t| le(&n, &ctx.window(t))) {
        let i = t - 1;
        (0..i).for_each(|j| s_sorted[j] = ctx.k(j));
        let base = ctx.base(i).expect("n > 0 here");
        let expo = (half() - ctx.rq(i)).recip()?;
        // l = base^{−1/(1/2 − 1/q)}
        let l = base.powr(&-expo);
        s_sorted[i] = l.ceil().clamp(1, ctx.k(i));
        let pred = ctx.gap(0..i, false).mul(&base.powr(&ctx.omega(i)));
        (LowerRegime::Window { t }, pred)
    } else {
        debug_assert!(nu < d, "windows cover n <= K");
        (0..nu).for_each(|i| s_sorted[i] = ctx.k(i));
        let pred = ctx.gap(0..nu, false).mul(&ctx.base(nu).expect("n > 0 here"));
        (LowerRegime::Large, pred)
    };
    let mut s = vec![1u64; d];
    for (i, &ax) in ctx.prof.sigma.iter().enumerate() {
        s[ax] = s_sorted[i];
    }
    let predicted_f64 = predicted.to_f64();
    Ok(LowerPlan { s, predicted, predicted_f64, regime })
}

/// Conv hull of all signed, permuted copies of the corner block `x̂(s̄)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VSet {
    pub k: Vec<usize>,
    pub s: Vec<usize>,
}

impl VSet {
    pub fn new(k: Vec<usize>, s: Vec<usize>) -> Result<Self> {
        if k.is_empty() || k.len() != s.len() {
            return Err(Error::DimensionMismatch(format!("k = {k:?}, s = {s:?}")));
        }
        if k.iter().zip(&s).any(|(&kj, &sj)| sj == 0 || sj > kj) {
            return Err(Error::InvalidInput(format!("need 1 <= s_j <= k_j, got k = {k:?}, s = {s:?}")));
        }
        Ok(VSet { k, s })
    }

    pub fn total(&self) -> usize {
        self.k.iter().product()
    }

    /// `x̂(s̄)`: ones on `Π [0, s_j)`, zeros elsewhere.
    pub fn corner(&self) -> Tensor {
        Tensor::from_fn(self.k.clone(), |i| if i.iter().zip(&self.s).all(|(a, b)| a < b) { 1.0 } else { 0.0 }).expect("valid shape")
    }
}

/// An element of the group acting on `R^{k_1 × ⋯ × k_d}` by permuting and
/// sign-flipping each axis independently.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignedPermutation {
    pub perms: Vec<Vec<usize>>,
    pub signs: Vec<Vec<i8>>,
}

impl SignedPermutation {
    pub fn identity(k: &[usize]) -> Self {
        SignedPermutation { perms: k.iter().map(|&kj| (0..kj).collect()).collect(), signs: k.iter().map(|&kj| vec![1; kj]).collect() }
    }

    pub fn random(k: &[usize], rng: &mut impl Rng) -> Self {
        let mut g = Self::identity(k);
        for (perm, sg) in g.perms.iter_mut().zip(g.signs.iter_mut()) {
            perm.shuffle(rng);
            for v in sg.iter_mut() {
                *v = if rng.random::<bool>() { 1 } else { -1 };
            }
        }
        g
    }

    /// `g(x)_{i} = Π_j ε_{j,i_j} · x_{σ_1(i_1), …, σ_d(i_d)}`.
    pub fn apply(&self, x: &Tensor) -> Tensor {
        let mut src = vec![0usize; x.d()];
        Tensor::from_fn(x.shape().to_vec(), |idx| {
            let mut sign = 1.0;
            for (j, &i) in idx.iter().enumerate() {
                src[j] = self.perms[j][i];
                sign *= self.signs[j][i] as f64;
            }
            sign * x.get(&src)
        })
        .expect("same shape")
    }
}

/// `g(x̂(s̄))` for a given group element.
pub fn vset_extreme_point(v: &VSet, g: &SignedPermutation) -> Tensor {
    g.apply(&v.corner())
}

/// `g(x̂(s̄))` for a `g` drawn uniformly from the seed.
pub fn vset_extreme_point_seeded(v: &VSet, seed: u64) -> Tensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vset_extreme_point(v, &SignedPermutation::random(&v.k, &mut rng))
}

/// `Π s_j^{1/2} · √(1 − n/K)`, the exact Euclidean lower bound for `d_n(V)`.
pub fn vset_l2_lower(v: &VSet, n: usize) -> f64 {
    let k = v.total();
    let frac = 1.0 - (n.min(k) as f64) / k as f64;
    v.s.iter().map(|&s| (s as f64).sqrt()).product::<f64>() * frac.sqrt()
}

/// The two-branch lower order for `d_n(V, l_{q̄})` with constants dropped:
/// `Π s^{1/q}` below the threshold `Π k^{2/q} s^{1−2/q}`, and
/// `n^{−1/2} Π k^{1/q} s^{1/2}` above it.
pub fn vset_order(v: &VSet, n: usize, q: &ExponentVector) -> f64 {
    let rq = q.recips_f64();
    let thr: f64 = v.k.iter().zip(&v.s).zip(&rq).map(|((&k, &s), r)| (k as f64).powf(2.0 * r) * (s as f64).powf(1.0 - 2.0 * r)).product();
    if (n as f64) <= thr {
        v.s.iter().zip(&rq).map(|(&s, r)| (s as f64).powf(*r)).product()
    } else {
        (n as f64).powf(-0.5) * v.k.iter().zip(&v.s).zip(&rq).map(|((&k, &s), r)| (k as f64).powf(*r) * (s as f64).sqrt()).product::<f64>()
    }
}
