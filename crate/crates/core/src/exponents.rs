//! Width exponents of anisotropic Sobolev and Nikol'skii classes.
//!
//! Everything here is a rational function of `1/p_j`, `1/q_j`, `1/r_j` and
//! is evaluated in [`Real`], so boundary conditions are decided exactly for
//! rational input. Index `t` counts how many axes (in `σ` order) sit in the
//! first group, so `t` ranges over `0..=d` as in the formulas.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{PowerProduct, Real};
use crate::error::{Error, Result};
use crate::mixed_norm::{Exponent, ExponentVector};

fn half() -> Real {
    Real::ratio(1, 2)
}

/// `ω_{p,q}`; at `p = q = 2` the `p ≤ 2` branch applies and gives 1.
pub fn omega(p: &Exponent, q: &Exponent) -> Result<Real> {
    let (rp, rq) = (p.recip(), q.recip());
    if rq.is_zero() || rq > &half() {
        return Err(Error::InvalidInput(format!("omega needs 2 <= q < inf, got q = {q}")));
    }
    Ok(if rp >= &half() {
        Real::one()
    } else if rp < rq {
        Real::zero()
    } else {
        (rp - rq) / (half() - rq)
    })
}

/// `⟨p̄⟩_I` from the reciprocals `1/p_j`. `None` stands for `+∞`
/// (every `p_j` in `I` infinite); the empty set gives 1.
pub fn harmonic_mean_recips(recips: &[Real], idx: &[usize]) -> Option<Real> {
    if idx.is_empty() {
        return Some(Real::one());
    }
    let s: Real = idx.iter().map(|&j| recips[j].clone()).sum();
    if s.is_zero() {
        None
    } else {
        Some(Real::int(idx.len() as i64) / s)
    }
}

pub fn harmonic_mean(p: &ExponentVector, idx: &[usize]) -> Option<Real> {
    harmonic_mean_recips(&p.recips(), idx)
}

/// Entrywise product `a ∘ b` on reciprocal representations.
pub fn compose_recips(a: &[Real], b: &[Real]) -> Vec<Real> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Positive smoothness vector `r̄`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Smoothness(Vec<Real>);

impl Smoothness {
    pub fn new(r: Vec<Real>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::InvalidInput("smoothness vector must have d >= 1".into()));
        }
        if let Some(v) = r.iter().find(|v| !v.is_positive()) {
            return Err(Error::InvalidInput(format!("smoothness {v} is not > 0")));
        }
        Ok(Smoothness(r))
    }

    pub fn parse(values: &[&str]) -> Result<Self> {
        Self::new(values.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Real::from_f64(v)).collect())
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Real] {
        &self.0
    }

    pub fn recips(&self) -> Vec<Real> {
        self.0.iter().map(|v| v.recip().expect("positive")).collect()
    }

    pub fn scaled(&self, c: &Real) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v * c).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Smoothness(perm.iter().map(|&i| self.0[i].clone()).collect())
    }

    /// `⟨r̄⟩`, the harmonic mean over all axes.
    pub fn mean(&self) -> Real {
        harmonic_mean_recips(&self.recips(), &(0..self.d()).collect::<Vec<_>>()).expect("finite")
    }

    /// `β_j = (1/r_j) / Σ 1/r_i`, so that `β_j r_j = ⟨r̄⟩/d` on every axis.
    pub fn beta(&self) -> Vec<Real> {
        let rr = self.recips();
        let total: Real = rr.iter().cloned().sum();
        rr.iter().map(|v| v / &total).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SortedProfile {
    pub omega: Vec<Real>,
    /// `sigma[i]` is the original axis at sorted position `i`.
    pub sigma: Vec<usize>,
    pub mu: usize,
    pub nu: usize,
    pub j_set: Vec<usize>,
}

impl SortedProfile {
    pub fn d(&self) -> usize {
        self.omega.len()
    }

    /// Whether `d` was added to `J` beyond `{μ, …, ν}`.
    pub fn has_extra_d(&self) -> bool {
        self.nu < self.d() && self.j_set.last() == Some(&self.d())
    }

    /// Original axes `I(a+1, b) = {σ(a+1), …, σ(b)}`.
    pub fn index_set(&self, a: usize, b: usize) -> Vec<usize> {
        self.sigma[a..b].to_vec()
    }

    /// `ω` in sorted order.
    pub fn sorted_omega(&self, i: usize) -> &Real {
        &self.omega[self.sigma[i]]
    }
}

fn check_d(p: &ExponentVector, q: &ExponentVector, r: Option<&Smoothness>) -> Result<usize> {
    let d = p.d();
    if q.d() != d || r.is_some_and(|r| r.d() != d) {
        return Err(Error::DimensionMismatch(format!(
            "p has d = {d}, q has d = {}, r has d = {:?}",
            q.d(),
            r.map(Smoothness::d)
        )));
    }
    Ok(d)
}

pub fn sorted_profile(p: &ExponentVector, q: &ExponentVector) -> Result<SortedProfile> {
    let d = check_d(p, q, None)?;
    let omega: Vec<Real> = p.iter().zip(q.iter()).map(|(a, b)| omega(a, b)).collect::<Result<_>>()?;
    let mut sigma: Vec<usize> = (0..d).collect();
    sigma.sort_by(|&a, &b| omega[a].total_cmp(&omega[b]).then(a.cmp(&b)));
    let mu = omega.iter().filter(|w| w.is_zero()).count();
    let nu = omega.iter().filter(|w| w < &&Real::one()).count();
    let mut j_set: Vec<usize> = (mu..=nu).collect();
    let half = half();
    if nu < d && sigma[nu..].iter().any(|&j| q.get(j).recip() < &half) {
        j_set.push(d);
    }
    Ok(SortedProfile { omega, sigma, mu, nu, j_set })
}

/// Per-axis reciprocal quantities in `σ` order.
struct Sorted {
    /// `1/r`
    a: Vec<Real>,
    /// `1/(r q)`
    b: Vec<Real>,
    /// `1/(r p)`
    c: Vec<Real>,
    /// `Σ 1/r_j = d/⟨r̄⟩`
    total: Real,
}

impl Sorted {
    fn new(p: &ExponentVector, q: &ExponentVector, r: &Smoothness, prof: &SortedProfile) -> Sorted {
        let rr = r.recips();
        let a: Vec<Real> = prof.sigma.iter().map(|&j| rr[j].clone()).collect();
        let b = prof.sigma.iter().map(|&j| &rr[j] * q.get(j).recip()).collect();
        let c = prof.sigma.iter().map(|&j| &rr[j] * p.get(j).recip()).collect();
        let total = a.iter().cloned().sum();
        Sorted { a, b, c, total }
    }

    fn sum(v: &[Real]) -> Real {
        v.iter().cloned().sum()
    }

    /// `1 + Σ_{i ≥ t} (1/(rq) − 1/(rp))`.
    fn numer(&self, t: usize) -> Real {
        Real::one() + Self::sum(&self.b[t..]) - Self::sum(&self.c[t..])
    }

    /// `Σ_{i<t} 1/r + 2 Σ_{i≥t} 1/(rq)`.
    fn denom(&self, t: usize) -> Real {
        Self::sum(&self.a[..t]) + Real::int(2) * Self::sum(&self.b[t..])
    }
}

/// `θ_t` for `t ∈ J`.
pub fn theta_t(
    p: &ExponentVector,
    q: &ExponentVector,
    r: &Smoothness,
    t: usize,
    prof: &SortedProfile,
) -> Result<Real> {
    check_d(p, q, Some(r))?;
    if !prof.j_set.contains(&t) {
        return Err(Error::NotInJ { t, allowed: prof.j_set.clone() });
    }
    let s = Sorted::new(p, q, r, prof);
    Ok(theta_sorted(&s, prof, t))
}

fn theta_sorted(s: &Sorted, prof: &SortedProfile, t: usize) -> Real {
    if t == prof.d() && prof.has_extra_d() {
        let nu = prof.nu;
        (Real::one() + half() * Sorted::sum(&s.a[nu..]) - Sorted::sum(&s.c[nu..])) / &s.total
    } else {
        s.numer(t) / s.denom(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conditions {
    pub emb_cond_ok: bool,
    pub strict_min_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WidthOrder {
    pub exponent: Real,
    pub argmin_index: usize,
    pub all_theta: BTreeMap<usize, Real>,
    pub conditions: Conditions,
    pub regime_note: String,
}

/// The compact-embedding quantity `1 + Σ_{i>μ} (1/(rq) − 1/(rp))`.
pub fn embedding_margin(p: &ExponentVector, q: &ExponentVector, r: &Smoothness) -> Result<Real> {
    check_d(p, q, Some(r))?;
    let prof = sorted_profile(p, q)?;
    Ok(Sorted::new(p, q, r, &prof).numer(prof.mu))
}

/// Exponent of `d_n(W^{r̄}_{p̄}, L_{q̄}) ≍ n^{−θ}` for `2 ≤ q_j < ∞`.
pub fn theorem1_exponent(p: &ExponentVector, q: &ExponentVector, r: &Smoothness) -> Result<WidthOrder> {
    check_d(p, q, Some(r))?;
    let prof = sorted_profile(p, q)?;
    let s = Sorted::new(p, q, r, &prof);
    let margin = s.numer(prof.mu);
    if !margin.is_positive() {
        return Err(Error::NotCompact {
            condition: "1 + sum_{j>mu} (1/(r_j q_j) - 1/(r_j p_j))".into(),
            value: margin.to_string(),
        });
    }
    let all_theta: BTreeMap<usize, Real> = prof.j_set.iter().map(|&t| (t, theta_sorted(&s, &prof, t))).collect();
    let (&argmin, min) = all_theta
        .iter()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(b.0)))
        .expect("J is nonempty");
    let ties = all_theta.values().filter(|v| v.total_cmp(min) == Ordering::Equal).count();
    let strict = ties == 1;
    let d = prof.d();
    let regime_note = if !strict {
        format!("minimum attained at {ties} indices; outside the strict-minimum hypothesis")
    } else if argmin == d {
        "t = d: large smoothness".to_string()
    } else if prof.mu == d {
        "t = mu = d: every p_j > q_j".to_string()
    } else {
        format!("t = {argmin}: small smoothness")
    };
    Ok(WidthOrder {
        exponent: min.clone(),
        argmin_index: argmin,
        all_theta,
        conditions: Conditions { emb_cond_ok: true, strict_min_ok: strict },
        regime_note,
    })
}

/// Exponent when `p_j ≤ q_j ≤ 2` for `j < ν` and `q_j ≤ p_j` for `j ≥ ν`
/// (original axis order).
pub fn theorem2_exponent(p: &ExponentVector, q: &ExponentVector, r: &Smoothness, nu: usize) -> Result<WidthOrder> {
    let d = check_d(p, q, Some(r))?;
    if nu > d {
        return Err(Error::Pattern(format!("nu = {nu} exceeds d = {d}")));
    }
    let half = half();
    for j in 0..d {
        let (rp, rq) = (p.get(j).recip(), q.get(j).recip());
        let ok = if j < nu { rp >= rq && rq >= &half } else { rq >= rp };
        if !ok {
            let want = if j < nu { "p <= q <= 2" } else { "q <= p" };
            return Err(Error::Pattern(format!("axis {j}: need {want}, got p = {}, q = {}", p.get(j), q.get(j))));
        }
    }
    let rr = r.recips();
    let total: Real = rr.iter().cloned().sum();
    let corr: Real = (0..nu).map(|j| &rr[j] * (q.get(j).recip() - p.get(j).recip())).sum();
    let theta = (Real::one() + corr) / total;
    if !theta.is_positive() {
        return Err(Error::NotCompact {
            condition: "(<r>/d) (1 + sum_{j<=nu} (1/(r_j q_j) - 1/(r_j p_j)))".into(),
            value: theta.to_string(),
        });
    }
    Ok(WidthOrder {
        exponent: theta.clone(),
        argmin_index: nu,
        all_theta: BTreeMap::from([(nu, theta)]),
        conditions: Conditions { emb_cond_ok: true, strict_min_ok: true },
        regime_note: format!("p <= q <= 2 on the first {nu} axes, q <= p on the rest"),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicSchedule {
    pub beta: Vec<Real>,
    pub r_mean: Real,
    pub gamma: Real,
    pub gamma0: Real,
}

impl DyadicSchedule {
    /// `⟨r̄⟩/d`, the common value of `β_j r_j`.
    pub fn rate(&self) -> Real {
        &self.r_mean / Real::int(self.beta.len() as i64)
    }
}

pub fn dyadic_schedule(p: &ExponentVector, q: &ExponentVector, r: &Smoothness) -> Result<DyadicSchedule> {
    let d = check_d(p, q, Some(r))?;
    let rr = r.recips();
    let total: Real = rr.iter().cloned().sum();
    let beta = r.beta();
    let diff: Vec<Real> = (0..d).map(|j| p.get(j).recip() - q.get(j).recip()).collect();
    let gamma = Real::one() - (0..d).map(|j| &rr[j] * &diff[j]).sum::<Real>();
    let gamma0 = Real::one() - (0..d).map(|j| &rr[j] * diff[j].pos_part()).sum::<Real>();
    Ok(DyadicSchedule { beta, r_mean: Real::int(d as i64) / total, gamma, gamma0 })
}

/// `⌊2^{β_j m}⌋` per axis, decided exactly for rational `β`.
pub fn dyadic_degrees(beta: &[Real], m: u32) -> Vec<u64> {
    beta.iter().map(|b| PowerProduct::pow_int(2, &(b * Real::int(m as i64))).floor()).collect()
}

/// One affine piece `h_t(s) = slope·s + intercept`. `t = −1` stands for `μ − 1`
/// when `μ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HPiece {
    pub t: i64,
    pub slope: Real,
    pub intercept: Real,
}

impl HPiece {
    pub fn eval(&self, s: &Real) -> Real {
        &self.slope * s + &self.intercept
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HMinimization {
    pub s_star: Real,
    pub value: Real,
    /// `s_t` for `t ∈ J`.
    pub breakpoints: BTreeMap<usize, Real>,
    pub pieces: Vec<HPiece>,
}

/// Minimizes `h = max_{t+1 ∈ J} h_t` over `[1, s_μ]`. The result equals
/// `min_{t∈J} θ_t`, which makes this an independent route to the exponent.
pub fn h_family_minimize(p: &ExponentVector, q: &ExponentVector, r: &Smoothness) -> Result<HMinimization> {
    theorem1_exponent(p, q, r)?;
    let prof = sorted_profile(p, q)?;
    let s = Sorted::new(p, q, r, &prof);
    let d = prof.d();
    let (mu, nu) = (prof.mu, prof.nu);
    let h = half();
    let breakpoints: BTreeMap<usize, Real> = prof
        .j_set
        .iter()
        .map(|&t| {
            let v = if t == d && prof.has_extra_d() { Real::one() } else { &s.total / s.denom(t) };
            (t, v)
        })
        .collect();
    let mut pieces = Vec::new();
    for &t1 in &prof.j_set {
        let piece = if t1 == mu {
            HPiece { t: mu as i64 - 1, slope: s.numer(mu) / &s.total, intercept: Real::zero() }
        } else if t1 == d && prof.has_extra_d() {
            let slope = (Real::one() - &h * Sorted::sum(&s.a[..nu]) - Sorted::sum(&s.c[nu..])) / &s.total;
            HPiece { t: d as i64 - 1, slope, intercept: h.clone() }
        } else {
            let t = t1 - 1;
            let w = prof.sorted_omega(t).clone();
            let inner = (&h * Sorted::sum(&s.a[..t]) + Sorted::sum(&s.b[t..])) / &s.total;
            HPiece { t: t as i64, slope: s.numer(t) / &s.total - &w * inner, intercept: w * &h }
        };
        pieces.push(piece);
    }
    let lo = Real::one();
    let hi = breakpoints[&mu].clone();
    let mut cands = vec![lo.clone(), hi.clone()];
    cands.extend(breakpoints.values().cloned());
    for (i, a) in pieces.iter().enumerate() {
        for b in &pieces[i + 1..] {
            let ds = &a.slope - &b.slope;
            if !ds.is_zero() {
                cands.push((&b.intercept - &a.intercept) / ds);
            }
        }
    }
    let hmax = |x: &Real| pieces.iter().map(|pc| pc.eval(x)).reduce(Real::max).expect("nonempty");
    let mut best: Option<(Real, Real)> = None;
    for c in cands.into_iter().filter(|c| c >= &lo && c <= &hi) {
        let v = hmax(&c);
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((c, v));
        }
    }
    let (s_star, value) = best.expect("interval endpoints are candidates");
    Ok(HMinimization { s_star, value, breakpoints, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &[&str]) -> ExponentVector {
        ExponentVector::parse(s).unwrap()
    }

    fn r(s: &[&str]) -> Smoothness {
        Smoothness::parse(s).unwrap()
    }

    fn q(v: &str) -> Real {
        v.parse().unwrap()
    }

    #[test]
    fn omega_values() {
        let o = |p: &str, qq: &str| omega(&p.parse().unwrap(), &qq.parse().unwrap()).unwrap();
        assert_eq!(o("1", "2"), Real::one());
        assert_eq!(o("5", "4"), Real::zero());
        assert_eq!(o("3", "6"), q("1/2"));
        assert_eq!(o("2", "2"), Real::one());
        assert_eq!(o("inf", "4"), Real::zero());
        assert!(omega(&Exponent::int(2), &Exponent::infinity()).is_err());
        assert!(omega(&Exponent::int(2), &"3/2".parse().unwrap()).is_err());
    }

    #[test]
    fn harmonic_means() {
        assert_eq!(harmonic_mean(&ev(&["2", "2"]), &[0, 1]), Some(q("2")));
        assert_eq!(harmonic_mean(&ev(&["2", "2"]), &[]), Some(Real::one()));
        assert_eq!(harmonic_mean(&ev(&["1", "3"]), &[0, 1]), Some(q("3/2")));
        assert_eq!(harmonic_mean(&ev(&["inf"]), &[0]), None);
    }

    #[test]
    fn profiles() {
        let pr = sorted_profile(&ev(&["4", "1"]), &ev(&["2", "4"])).unwrap();
        assert_eq!((pr.sigma.clone(), pr.mu, pr.nu, pr.j_set.clone()), (vec![0, 1], 1, 1, vec![1, 2]));
        let pr = sorted_profile(&ev(&["1", "2"]), &ev(&["4", "4"])).unwrap();
        assert_eq!((pr.mu, pr.nu), (0, 0));
        let pr = sorted_profile(&ev(&["8", "inf"]), &ev(&["4", "4"])).unwrap();
        assert_eq!((pr.mu, pr.nu, pr.j_set), (2, 2, vec![2]));
        // reversed ω order
        let pr = sorted_profile(&ev(&["1", "3"]), &ev(&["4", "6"])).unwrap();
        assert_eq!(pr.sigma, vec![1, 0]);
        assert_eq!(pr.index_set(0, 1), vec![1]);
    }

    #[test]
    fn theta_one_dimensional() {
        // p <= 2 < q: θ_0 = q(r − 1/p + 1/q)/2, θ_1 = r + 1/2 − 1/p
        let (p, qq, rr) = (ev(&["3/2"]), ev(&["6"]), r(&["5/4"]));
        let pr = sorted_profile(&p, &qq).unwrap();
        assert_eq!(pr.j_set, vec![0, 1]);
        let t0 = theta_t(&p, &qq, &rr, 0, &pr).unwrap();
        let t1 = theta_t(&p, &qq, &rr, 1, &pr).unwrap();
        assert_eq!(t0, q("6") * (q("5/4") - q("2/3") + q("1/6")) / q("2"));
        assert_eq!(t1, q("5/4") + q("1/2") - q("2/3"));
        assert!(matches!(theta_t(&p, &qq, &rr, 2, &pr), Err(Error::NotInJ { .. })));
    }

    #[test]
    fn theta_all_omega_zero() {
        let (p, qq, rr) = (ev(&["8", "inf"]), ev(&["4", "4"]), r(&["1", "3"]));
        let pr = sorted_profile(&p, &qq).unwrap();
        assert_eq!(theta_t(&p, &qq, &rr, 2, &pr).unwrap(), q("3/4"));
    }

    #[test]
    fn theorem1_examples() {
        let w = theorem1_exponent(&ev(&["2"]), &ev(&["2"]), &r(&["1"])).unwrap();
        assert_eq!(w.exponent, Real::one());
        assert_eq!(w.all_theta.keys().copied().collect::<Vec<_>>(), vec![0]);
        let w = theorem1_exponent(&ev(&["1"]), &ev(&["4"]), &r(&["2"])).unwrap();
        assert_eq!(w.all_theta[&0], q("5/2"));
        assert_eq!(w.all_theta[&1], q("3/2"));
        assert_eq!((w.argmin_index, w.exponent.clone()), (1, q("3/2")));
        assert!(w.conditions.strict_min_ok);
        let e = theorem1_exponent(&ev(&["1"]), &ev(&["4"]), &r(&["0.3"])).unwrap_err();
        assert!(e.to_string().starts_with("not compactly embedded"));
    }

    #[test]
    fn theorem1_tie_is_flagged() {
        // p = 1, q = 4: θ_0 = 2r − 3/2 and θ_1 = r − 1/2 meet at r = 1
        let w = theorem1_exponent(&ev(&["1"]), &ev(&["4"]), &r(&["1"])).unwrap();
        assert_eq!(w.all_theta[&0], w.all_theta[&1]);
        assert!(!w.conditions.strict_min_ok);
        assert_eq!(w.argmin_index, 0);
    }

    #[test]
    fn theorem2_examples() {
        let w = theorem2_exponent(&ev(&["4", "3"]), &ev(&["2", "2"]), &r(&["1", "3"]), 0).unwrap();
        assert_eq!(w.exponent, q("3/4"));
        let w = theorem2_exponent(&ev(&["1"]), &ev(&["3/2"]), &r(&["2"]), 1).unwrap();
        assert_eq!(w.exponent, q("2") + q("2/3") - q("1"));
        let w = theorem2_exponent(&ev(&["1", "2"]), &ev(&["2", "2"]), &r(&["1", "1"]), 1).unwrap();
        assert_eq!(w.exponent, q("1/4"));
        assert!(matches!(theorem2_exponent(&ev(&["2"]), &ev(&["1"]), &r(&["1"]), 1), Err(Error::Pattern(_))));
        assert!(theorem2_exponent(&ev(&["1"]), &ev(&["2"]), &r(&["1/4"]), 1).is_err());
    }

    #[test]
    fn schedules() {
        let s = dyadic_schedule(&ev(&["2", "2"]), &ev(&["2", "2"]), &r(&["1", "1"])).unwrap();
        assert_eq!(s.beta, vec![q("1/2"), q("1/2")]);
        assert_eq!((s.gamma.clone(), s.gamma0.clone()), (Real::one(), Real::one()));
        let s = dyadic_schedule(&ev(&["1", "4"]), &ev(&["2", "2"]), &r(&["1", "3"])).unwrap();
        assert_eq!(s.beta, vec![q("3/4"), q("1/4")]);
        assert_eq!(s.r_mean, q("3/2"));
        assert_eq!(s.rate(), q("3/4"));
        assert_eq!(s.gamma0, q("1/2"));
        assert_eq!(s.gamma, q("1/2") + q("1/12"));
        assert_eq!(dyadic_degrees(&s.beta, 4), vec![8, 2]);
        assert_eq!(dyadic_degrees(&s.beta, 0), vec![1, 1]);
    }

    #[test]
    fn h_family_examples() {
        let m = h_family_minimize(&ev(&["1"]), &ev(&["4"]), &r(&["2"])).unwrap();
        assert_eq!(m.value, q("3/2"));
        assert_eq!(m.s_star, Real::one());
        assert_eq!(m.breakpoints[&1], Real::one());
        // s_μ = 1: q = 2 on every remaining axis
        let (p, qq, rr) = (ev(&["4", "1"]), ev(&["2", "2"]), r(&["1", "2"]));
        let m = h_family_minimize(&p, &qq, &rr).unwrap();
        let pr = sorted_profile(&p, &qq).unwrap();
        assert_eq!(m.breakpoints[&pr.mu], Real::one());
        assert_eq!(m.value, theta_t(&p, &qq, &rr, pr.mu, &pr).unwrap());
    }

    #[test]
    fn h_family_matches_theta_min_on_a_grid() {
        let ps = ["1", "3/2", "2", "3", "4", "6", "inf"];
        let qs = ["2", "3", "4", "6"];
        let rs = ["1/2", "1", "3/2", "3"];
        for p0 in ps {
            for p1 in ps {
                for q0 in qs {
                    for q1 in qs {
                        for r0 in rs {
                            let (p, qq, rr) = (ev(&[p0, p1]), ev(&[q0, q1]), r(&[r0, "1"]));
                            let Ok(w) = theorem1_exponent(&p, &qq, &rr) else { continue };
                            let m = h_family_minimize(&p, &qq, &rr).unwrap();
                            assert_eq!(m.value, w.exponent, "p={p0},{p1} q={q0},{q1} r={r0}");
                        }
                    }
                }
            }
        }
    }
}
