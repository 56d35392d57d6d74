//! Empirical approximation rates of `V(r̄, m)` on packaged test functions.

use std::f64::consts::PI;

use serde::{Serialize, Serializer};

use super::{dyadic_orders, grid_norm, vp_dyadic, vp_multiplier, TrigPoly};
use crate::error::{Error, Result};
use crate::exponents::Smoothness;
use crate::mixed_norm::ExponentVector;

/// Cosine series `Σ a cos(k x)` on one axis.
type Series = Vec<(u64, f64)>;

/// Test functions with known Hölder–Nikol'skii smoothness.
#[derive(Clone, Debug, PartialEq)]
pub enum PackagedFunction {
    /// `Σ_{s≥1} 2^{−rs} cos(2^s x)`.
    Lacunary1d { r: f64 },
    /// `g_{r_1}(x_1) + g_{r_2}(x_2)` with `g_r` the one-dimensional lacunary series.
    LacunarySum2d { r: [f64; 2] },
    /// `g_{r_1}(x_1) · g_{r_2}(x_2)`.
    LacunaryTensor2d { r: [f64; 2] },
    Polynomial(TrigPoly),
}

impl PackagedFunction {
    pub fn name(&self) -> String {
        match self {
            PackagedFunction::Lacunary1d { r } => format!("lacunary1d(r={r})"),
            PackagedFunction::LacunarySum2d { r } => format!("lacunary_sum2d(r={},{})", r[0], r[1]),
            PackagedFunction::LacunaryTensor2d { r } => format!("lacunary_tensor2d(r={},{})", r[0], r[1]),
            PackagedFunction::Polynomial(t) => format!("polynomial(deg={:?})", t.degree()),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            PackagedFunction::Lacunary1d { .. } => 1,
            PackagedFunction::LacunarySum2d { .. } | PackagedFunction::LacunaryTensor2d { .. } => 2,
            PackagedFunction::Polynomial(t) => t.d(),
        }
    }

    /// The smoothness the function is built to have.
    pub fn native_smoothness(&self) -> Option<Vec<f64>> {
        match self {
            PackagedFunction::Lacunary1d { r } => Some(vec![*r]),
            PackagedFunction::LacunarySum2d { r } | PackagedFunction::LacunaryTensor2d { r } => Some(r.to_vec()),
            PackagedFunction::Polynomial(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(r) = self.native_smoothness() {
            if r.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                return Err(Error::InvalidInput(format!("{}: smoothness must be finite and > 0", self.name())));
            }
        }
        Ok(())
    }

    /// Sums of products of cosine series, with lacunary levels `s ≤ levels[j]`.
    fn separable(&self, levels: &[u32]) -> Vec<Vec<Series>> {
        let lac = |r: f64, top: u32| -> Series { (1..=top).map(|s| (1u64 << s, 2f64.powf(-r * s as f64))).collect() };
        let one: Series = vec![(0, 1.0)];
        match self {
            PackagedFunction::Lacunary1d { r } => vec![vec![lac(*r, levels[0])]],
            PackagedFunction::LacunarySum2d { r } => {
                vec![vec![lac(r[0], levels[0]), one.clone()], vec![one, lac(r[1], levels[1])]]
            }
            PackagedFunction::LacunaryTensor2d { r } => vec![vec![lac(r[0], levels[0]), lac(r[1], levels[1])]],
            PackagedFunction::Polynomial(_) => unreachable!("polynomials are handled in coefficient space"),
        }
    }

    fn eval_separable(terms: &[Vec<Series>], x: &[f64]) -> f64 {
        terms
            .iter()
            .map(|t| t.iter().zip(x).map(|(s, &xj)| s.iter().map(|&(k, a)| a * (k as f64 * xj).cos()).sum::<f64>()).product::<f64>())
            .sum()
    }
}

/// Lacunary levels kept on each axis: `s ≤ ⌈β_j (m_max + 4)⌉`.
fn levels(r: &Smoothness, m_max: u32) -> Vec<u32> {
    r.beta().iter().map(|b| (b.to_f64() * (m_max + 4) as f64 - 1e-9).ceil().max(1.0) as u32).collect()
}

fn check_shapes(f: &PackagedFunction, r: &Smoothness, p: &ExponentVector) -> Result<()> {
    f.validate()?;
    if r.d() != f.d() || p.d() != f.d() {
        return Err(Error::DimensionMismatch(format!("{} has d = {}, got r with {} and p with {} entries", f.name(), f.d(), r.d(), p.d())));
    }
    Ok(())
}

/// Outcome of the difference-quotient membership heuristic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HCheck {
    /// Per axis: `(h, ‖Δ^{l_j,j}_h f‖_p̄ / h^{r_j})` for `h = π 2^{−s}`.
    pub quotients: Vec<Vec<(f64, f64)>>,
    pub member: bool,
}

/// Necessary check for `f ∈ H^{r̄}_{p̄}`: the quotients `‖Δ^{l_j,j}_h f‖ / h^{r_j}`,
/// `l_j = ⌊r_j⌋ + 1`, must not grow as `h` shrinks. Flags a failure when the
/// maximum over the smaller half of the `h` range exceeds 4 times the
/// maximum over the larger half.
pub fn h_class_check(f: &PackagedFunction, r: &Smoothness, p: &ExponentVector, m_max: u32) -> Result<HCheck> {
    check_shapes(f, r, p)?;
    if let PackagedFunction::Polynomial(_) = f {
        return Ok(HCheck { quotients: vec![Vec::new(); f.d()], member: true });
    }
    let lv = levels(r, m_max);
    let terms = f.separable(&lv);
    let d = f.d();
    let cap = if d == 1 { 1025 } else { 129 };
    let grid: Vec<usize> = lv.iter().map(|&s| ((4usize << s) + 1).min(cap)).collect();
    let total: usize = grid.iter().product();
    let recips = p.recips_f64();
    let rv: Vec<f64> = r.values().iter().map(|v| v.to_f64()).collect();
    let mut quotients = Vec::with_capacity(d);
    let mut member = true;
    for j in 0..d {
        let l = rv[j].floor() as u32 + 1;
        let binom: Vec<f64> = (0..=l).map(|i| binomial(l, i) * if (l - i) % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut q = Vec::new();
        for s in 1..=lv[j] + 2 {
            let h = PI * 2f64.powi(-(s as i32));
            let mut vals = vec![0.0; total];
            let mut x = vec![0.0; d];
            for (flat, v) in vals.iter_mut().enumerate() {
                let mut rem = flat;
                for a in 0..d {
                    x[a] = 2.0 * PI * (rem % grid[a]) as f64 / grid[a] as f64;
                    rem /= grid[a];
                }
                let x0 = x[j];
                let mut acc = 0.0;
                for (i, &c) in binom.iter().enumerate() {
                    x[j] = x0 + i as f64 * h;
                    acc += c * PackagedFunction::eval_separable(&terms, &x);
                }
                *v = acc.abs();
            }
            q.push((h, grid_norm(&vals, &grid, &recips) / h.powf(rv[j])));
        }
        let half = q.len() / 2;
        let large = q[..half].iter().map(|v| v.1).fold(0.0, f64::max);
        let small = q[half..].iter().map(|v| v.1).fold(0.0, f64::max);
        member &= small <= 4.0 * large;
        quotients.push(q);
    }
    Ok(HCheck { quotients, member })
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ser_slope<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(if *v < 0.0 { "-inf" } else { "inf" })
    }
}

/// Fitted decay of `‖f − V(r̄, m)f‖_{L_p̄}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub function: String,
    pub r: Vec<f64>,
    pub p: Vec<String>,
    /// `−⟨r̄⟩/d`.
    pub target: f64,
    /// Least-squares slope of `log₂` error against `m`; `−∞` when the errors vanish.
    #[serde(serialize_with = "ser_slope")]
    pub slope: f64,
    /// `(m, error)` for `m = 2..=m_max`.
    pub errors: Vec<(u32, f64)>,
    /// `slope ≤ target + 0.1`.
    pub holds: bool,
}

impl RateReport {
    pub fn csv_header() -> &'static str {
        "function,r,p,m,error,slope,target,holds"
    }

    pub fn csv_rows(&self) -> Vec<String> {
        let r = self.r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";");
        let p = self.p.join(";");
        self.errors
            .iter()
            .map(|(m, e)| format!("{},{r},{p},{m},{e:e},{},{},{}", self.function, self.slope, self.target, self.holds))
            .collect()
    }
}

/// Errors `‖f − V(r̄, m)f‖_{L_p̄}` for `m = 2..=m_max`, their fitted slope and
/// the contract `slope ≤ −⟨r̄⟩/d + 0.1`.
///
/// `f` is first screened by [`h_class_check`]; failure gives
/// [`Error::NotMember`].
pub fn approximation_rate(f: &PackagedFunction, r: &Smoothness, p: &ExponentVector, m_max: u32) -> Result<RateReport> {
    check_shapes(f, r, p)?;
    if !(3..=20).contains(&m_max) {
        return Err(Error::InvalidInput(format!("m_max must lie in 3..=20, got {m_max}")));
    }
    let check = h_class_check(f, r, p, m_max)?;
    if !check.member {
        return Err(Error::NotMember(format!("{} does not look like a member of H^r_p for r = {:?}", f.name(), r.values())));
    }
    let ms: Vec<u32> = (2..=m_max).collect();
    let errors: Vec<(u32, f64)> = match f {
        PackagedFunction::Polynomial(t) => {
            let scale = t.norm(p)?.max(f64::MIN_POSITIVE);
            ms.iter()
                .map(|&m| {
                    let e = t.sub(&pad(&vp_dyadic(t, r, m)?, t.degree()))?.norm(p)?;
                    Ok((m, if e <= 1e-13 * scale { 0.0 } else { e }))
                })
                .collect::<Result<_>>()?
        }
        _ => separable_errors(f, r, p, &ms)?,
    };
    let pts: Vec<(f64, f64)> = errors.iter().filter(|e| e.1 > 0.0).map(|&(m, e)| (m as f64, e.log2())).collect();
    let slope = if pts.len() < 2 { f64::NEG_INFINITY } else { fit_slope(&pts) };
    let target = -r.mean().to_f64() / r.d() as f64;
    Ok(RateReport {
        function: f.name(),
        r: r.values().iter().map(|v| v.to_f64()).collect(),
        p: p.iter().map(|e| e.to_string()).collect(),
        target,
        slope,
        errors,
        holds: slope <= target + 0.1,
    })
}

fn pad(t: &TrigPoly, degree: &[u64]) -> TrigPoly {
    TrigPoly::from_fn(degree.to_vec(), t.is_real(), |k| t.get(k)).expect("padding keeps symmetry")
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Grid errors for separable functions: `V` acts on each factor separately,
/// so `f − Vf = Σ_terms (Π g_j − Π V_j g_j)` is sampled from 1-D tables.
fn separable_errors(f: &PackagedFunction, r: &Smoothness, p: &ExponentVector, ms: &[u32]) -> Result<Vec<(u32, f64)>> {
    let lv = levels(r, *ms.last().expect("nonempty"));
    let terms = f.separable(&lv);
    let d = f.d();
    let grid: Vec<usize> = lv.iter().map(|&s| (4usize << s) + 1).collect();
    let total: usize = grid.iter().product();
    let recips = p.recips_f64();
    // cos tables per (term, axis, harmonic)
    let tables: Vec<Vec<Vec<Vec<f64>>>> = terms
        .iter()
        .map(|t| {
            t.iter()
                .enumerate()
                .map(|(j, s)| s.iter().map(|&(k, a)| (0..grid[j]).map(|i| a * (2.0 * PI * (k as usize * i % grid[j]) as f64 / grid[j] as f64).cos()).collect()).collect())
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(ms.len());
    for &m in ms {
        let n = dyadic_orders(r, m);
        let mut vals = vec![0.0; total];
        for (t, tab) in terms.iter().zip(&tables) {
            let mut full = Vec::with_capacity(d);
            let mut appr = Vec::with_capacity(d);
            for j in 0..d {
                let mut g = vec![0.0; grid[j]];
                let mut vg = vec![0.0; grid[j]];
                for (&(k, _), col) in t[j].iter().zip(&tab[j]) {
                    let mult = vp_multiplier(n[j], k as i64);
                    for i in 0..grid[j] {
                        g[i] += col[i];
                        vg[i] += mult * col[i];
                    }
                }
                full.push(g);
                appr.push(vg);
            }
            for (flat, v) in vals.iter_mut().enumerate() {
                let (mut a, mut b, mut rem) = (1.0, 1.0, flat);
                for j in 0..d {
                    let i = rem % grid[j];
                    rem /= grid[j];
                    a *= full[j][i];
                    b *= appr[j][i];
                }
                *v += a - b;
            }
        }
        for v in vals.iter_mut() {
            *v = v.abs();
        }
        out.push((m, grid_norm(&vals, &grid, &recips)));
    }
    Ok(out)
}
