//! Property suites behind `kwidth verify`.

use std::f64::consts::PI;

use clap::ValueEnum;
use kwidth::exponents::Smoothness;
use kwidth::mixed_norm::{dual_exponents, holder_interpolation_check, mixed_norm, norm_duality_lower, ExponentVector, Tensor};
use kwidth::trig_approx::{
    approximation_rate, bernoulli_convolution, bernoulli_kernel, bernstein_sweep, dyadic_block, fejer, fejer_shift_sum_check, max_growth,
    nikolskii_sweep, quad_grid, random_real_poly, vallee_poussin, vp_dyadic, vp_multiplier, vp_operator, weyl_derivative, ExactTrigPoly,
    PackagedFunction, QComplex, BERNOULLI_TERMS,
};
use kwidth::width_oracle::{desk_grid, sandwich_report, OracleConfig, SandwichReport};
use kwidth::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Norms,
    Interp,
    Sandwich,
    Kernels,
    Rates,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Budget {
    Small,
    Full,
}

impl Budget {
    pub fn oracle(self, seed: u64) -> OracleConfig {
        match self {
            Budget::Small => OracleConfig::small(seed),
            Budget::Full => OracleConfig { seed, ..OracleConfig::default() },
        }
    }
}

/// One checked property. `ok` means `value ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub suite: String,
    pub property: String,
    pub case: String,
    pub cases: usize,
    pub value: f64,
    pub bound: f64,
    pub ok: bool,
}

impl Row {
    fn new(suite: Suite, property: &str, case: impl Into<String>, cases: usize, value: f64, bound: f64) -> Row {
        let name = suite.to_possible_value().expect("no skipped variants").get_name().to_string();
        Row { suite: name, property: property.into(), case: case.into(), cases, value, bound, ok: value <= bound }
    }
}

pub fn rows_table(rows: &[Row]) -> Table {
    let mut t = Table::new(&["suite", "property", "case", "cases", "value", "bound", "ok"]);
    for r in rows {
        t.push(vec![r.suite.clone(), r.property.clone(), r.case.clone(), r.cases.to_string(), format!("{:.6e}", r.value), format!("{:.6e}", r.bound), r.ok.to_string()]);
    }
    t
}

/// Rows of the suite; `sandwich` also returns the oracle reports for the ledger.
pub fn run(suite: Suite, seed: u64, budget: Budget) -> Result<(Vec<Row>, Vec<SandwichReport>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match suite {
        Suite::Norms => (norms(&mut rng, seed, budget)?, Vec::new()),
        Suite::Interp => (interp(&mut rng, budget)?, Vec::new()),
        Suite::Sandwich => sandwich(seed, budget)?,
        Suite::Kernels => (kernels(&mut rng, seed, budget)?, Vec::new()),
        Suite::Rates => (rates(budget)?, Vec::new()),
    })
}

const EXPS: [&str; 6] = ["1", "3/2", "2", "3", "4", "inf"];

fn random_tensor(rng: &mut ChaCha8Rng) -> Tensor {
    let d = rng.random_range(1..=3);
    let shape: Vec<usize> = (0..d).map(|_| rng.random_range(1..=4)).collect();
    let len = shape.iter().product();
    Tensor::new(shape, (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()).expect("sizes match")
}

fn exps(idx: &[usize]) -> ExponentVector {
    ExponentVector::parse(&idx.iter().map(|&i| EXPS[i]).collect::<Vec<_>>()).expect("valid literal")
}

fn norms(rng: &mut ChaCha8Rng, seed: u64, budget: Budget) -> Result<Vec<Row>> {
    let count = if budget == Budget::Small { 200 } else { 1000 };
    let mut worst = [0.0f64; 5];
    for i in 0..count {
        let x = random_tensor(rng);
        let y = Tensor::new(x.shape().to_vec(), (0..x.len()).map(|_| rng.random_range(-1.0..1.0)).collect())?;
        let pi: Vec<usize> = (0..x.d()).map(|_| rng.random_range(0..EXPS.len())).collect();
        let qi: Vec<usize> = pi.iter().map(|&a| rng.random_range(a..EXPS.len())).collect();
        let (p, q) = (exps(&pi), exps(&qi));
        let nx = mixed_norm(&x, &p)?;
        let ny = mixed_norm(&y, &p)?;
        let ratio = |a: f64, b: f64| if b == 0.0 { if a == 0.0 { 1.0 } else { f64::INFINITY } } else { a / b };
        worst[0] = worst[0].max(ratio(mixed_norm(&x.add(&y)?, &p)?, nx + ny));
        let c = rng.random_range(-3.0..3.0);
        worst[1] = worst[1].max((mixed_norm(&x.scaled(c), &p)? - c.abs() * nx).abs() / nx.max(1e-300));
        worst[2] = worst[2].max(ratio(mixed_norm(&x, &q)?, nx));
        worst[3] = worst[3].max(ratio(x.dot(&y)?.abs(), nx * mixed_norm(&y, &dual_exponents(&p))?));
        worst[4] = worst[4].max(ratio(norm_duality_lower(&x, &p, 16, seed.wrapping_add(i as u64))?, nx));
    }
    let tol = 1.0 + 1e-12;
    Ok(vec![
        Row::new(Suite::Norms, "triangle inequality of the mixed norm", "random tensors, d <= 3", count, worst[0], tol),
        Row::new(Suite::Norms, "absolute homogeneity", "random tensors, |c| < 3", count, worst[1], 1e-12),
        Row::new(Suite::Norms, "monotone decrease in the exponents", "p <= q entrywise", count, worst[2], tol),
        Row::new(Suite::Norms, "Hölder pairing with the dual exponents", "random pairs", count, worst[3], tol),
        Row::new(Suite::Norms, "sampled dual functionals stay below the norm", "16 trials each", count, worst[4], tol),
    ])
}

fn interp(rng: &mut ChaCha8Rng, budget: Budget) -> Result<Vec<Row>> {
    let count = if budget == Budget::Small { 1000 } else { 5000 };
    let qs = ["2", "3", "4", "8", "inf"];
    let (mut worst, mut violations) = (0.0f64, 0usize);
    for _ in 0..count {
        let x = random_tensor(rng);
        let q = ExponentVector::parse(&(0..x.d()).map(|_| qs[rng.random_range(0..qs.len())]).collect::<Vec<_>>())?;
        let omega = rng.random_range(0.0..=1.0);
        let h = holder_interpolation_check(&x, &q, omega)?;
        if !h.holds {
            violations += 1;
        }
        if h.rhs > 0.0 {
            worst = worst.max(h.lhs / h.rhs);
        }
    }
    Ok(vec![
        Row::new(Suite::Interp, "Hölder interpolation of dual mixed norms", "worst lhs/rhs", count, worst, 1.0 + 1e-9),
        Row::new(Suite::Interp, "Hölder interpolation of dual mixed norms", "violations", count, violations as f64, 0.0),
    ])
}

fn describe(r: &SandwichReport) -> String {
    let k: Vec<String> = r.k.iter().map(|v| v.to_string()).collect();
    format!("k=({}) n={} p=({}) q=({})", k.join(","), r.n, r.p.join(","), r.q.join(","))
}

fn sandwich(seed: u64, budget: Budget) -> Result<(Vec<Row>, Vec<SandwichReport>)> {
    let cfg = budget.oracle(seed);
    let grid = desk_grid();
    let probs: Vec<_> = match budget {
        // one n per shape, cycling through the three
        Budget::Small => grid.into_iter().enumerate().filter(|(i, _)| i % 3 == (i / 3) % 3).map(|(_, p)| p).collect(),
        Budget::Full => grid,
    };
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for prob in &probs {
        let r = sandwich_report(prob, &cfg)?;
        let case = describe(&r);
        rows.push(Row::new(Suite::Sandwich, "V-set lower bound below the numerical upper bound", case.clone(), 1, r.lower / r.upper, 1.0 + 1e-6));
        rows.push(Row::new(Suite::Sandwich, "sandwich ratio upper/lower", case, 1, r.upper / r.lower, 8.0));
        reports.push(r);
    }
    Ok((rows, reports))
}

fn random_exact(degree: Vec<u64>, rng: &mut ChaCha8Rng) -> ExactTrigPoly {
    ExactTrigPoly::from_fn(degree, false, |_| QComplex::from_ints((rng.random_range(-9..=9), rng.random_range(1..=7)), (rng.random_range(-9..=9), rng.random_range(1..=7))))
        .expect("sizes match")
}

fn kernels(rng: &mut ChaCha8Rng, seed: u64, budget: Budget) -> Result<Vec<Row>> {
    let s = Suite::Kernels;
    let mut rows = Vec::new();
    let g = 4096;
    let xs: Vec<f64> = (0..g).map(|i| 2.0 * PI * i as f64 / g as f64).collect();
    let mean_err = [1u64, 3, 8, 16]
        .iter()
        .map(|&m| {
            let f = xs.iter().map(|&x| fejer(m, x)).sum::<f64>() / g as f64;
            let v = xs.iter().map(|&x| vallee_poussin(m, x)).sum::<f64>() / g as f64;
            (f - 1.0).abs().max((v - 1.0).abs())
        })
        .fold(0.0, f64::max);
    rows.push(Row::new(s, "Fejér and de la Vallée Poussin kernels have unit mean", "m in {1,3,8,16}", 4, mean_err, 1e-10));

    let mut mult_err = 0.0f64;
    for m in [2u64, 4, 8] {
        for k in -(2 * m as i64 + 2)..=(2 * m as i64 + 2) {
            let c = xs.iter().map(|&x| vallee_poussin(m, x) * (k as f64 * x).cos()).sum::<f64>() / g as f64;
            mult_err = mult_err.max((c - vp_multiplier(m, k)).abs());
        }
    }
    rows.push(Row::new(s, "de la Vallée Poussin multiplier: 1 on the band, linear decay to 2m", "m in {2,4,8}", 3, mult_err, 1e-10));

    let per_d = if budget == Budget::Small { 30 } else { 100 };
    let (mut repro_fail, mut tele_fail) = (0usize, 0usize);
    for d in 1..=3usize {
        let r = Smoothness::from_f64(&[1.0, 2.0, 1.5][..d])?;
        for _ in 0..per_d {
            let n: Vec<u64> = (0..d).map(|_| rng.random_range(1..=3)).collect();
            let t = random_exact(n.clone(), rng);
            if vp_operator(&t, &n)? != t {
                repro_fail += 1;
            }
            let f = random_exact((0..d).map(|_| rng.random_range(0..=6)).collect(), rng);
            let mut acc = dyadic_block(&f, &r, 0)?;
            for m in 1..=4 {
                let a = dyadic_block(&f, &r, m)?;
                let deg: Vec<u64> = acc.degree().iter().zip(a.degree()).map(|(x, y)| *x.max(y)).collect();
                acc = acc.truncated(&deg).add(&a.truncated(&deg))?;
            }
            if !acc.same_coefficients(&vp_dyadic(&f, &r, 4)?.truncated(acc.degree())) {
                tele_fail += 1;
            }
        }
    }
    rows.push(Row::new(s, "V_N reproduces T(N) exactly", "random rational polynomials, d <= 3", 3 * per_d, repro_fail as f64, 0.0));
    rows.push(Row::new(s, "dyadic blocks telescope to V(r,M)", "M = 4, d <= 3", 3 * per_d, tele_fail as f64, 0.0));

    let mut inv = 0.0f64;
    let mut cases = 0;
    for r in [0.5, 1.0, 2.0] {
        for alpha in [0.0, 1.0, r] {
            for _ in 0..5 {
                let d = rng.random_range(1..=2);
                let j = rng.random_range(0..d);
                let deg: Vec<u64> = (0..d).map(|_| rng.random_range(1..=6)).collect();
                let t = random_real_poly(&deg, rng).multiply(&deg, true, |k, c| if k[j] == 0 { c * 0.0 } else { *c });
                let a = weyl_derivative(&bernoulli_convolution(&t, j, r, alpha)?, j, r, alpha)?;
                inv = inv.max(a.sub(&t)?.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max));
                cases += 1;
            }
        }
    }
    rows.push(Row::new(s, "Weyl derivative inverts the Bernoulli convolution", "zero-mean polynomials", cases, inv, 1e-10));

    let bern = [0.5, 1.0, 2.0, 3.0, 5.5]
        .iter()
        .map(|&x| {
            let v = bernoulli_kernel(2.0, 0.0, x, BERNOULLI_TERMS).map(|b| b.value).unwrap_or(f64::NAN);
            (v - 1.0 - 2.0 * (PI * PI / 6.0 - PI * x / 2.0 + x * x / 4.0)).abs()
        })
        .fold(0.0, f64::max);
    rows.push(Row::new(s, "Bernoulli kernel F_2 matches its closed form", "5 points, T = 10^4", 5, bern, 1e-6));

    rows.push(Row::new(s, "Fejér shifted sums bounded", "m = 8, h = pi/8", 1, fejer_shift_sum_check(8, PI / 8.0, 1024, (1.0, 2.0 * PI))?, 4.0));
    let shift: Vec<f64> = [4u64, 8, 16, 32, 64].iter().map(|&m| fejer_shift_sum_check(m, PI / m as f64, 1024, (1.0, 2.0 * PI))).collect::<Result<_>>()?;
    let shift_growth = shift.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    rows.push(Row::new(s, "Fejér shifted sums stable under doubling m", "mh = pi, m = 4..64", 5, shift_growth, 1.05));

    let ns = [4u64, 8, 16, 32];
    let random = if budget == Budget::Small { 2 } else { 6 };
    for (p, q) in [(&["1"][..], &["inf"][..]), (&["2"], &["4"]), (&["4"], &["2"]), (&["1", "2"], &["inf", "4"])] {
        let sw = nikolskii_sweep(&ExponentVector::parse(p)?, &ExponentVector::parse(q)?, &ns, random, seed)?;
        rows.push(Row::new(s, "Nikol'skii ratio growth per degree doubling", format!("p=({}) q=({}) N=4..32", p.join(","), q.join(",")), ns.len(), max_growth(&sw), 1.05));
    }
    for (r, a, p) in [(&[1.0][..], &[1.0][..], &["2"][..]), (&[1.5], &[0.5], &["1"]), (&[1.0, 0.5], &[1.0, 0.5], &["2", "inf"])] {
        let sw = bernstein_sweep(r, a, &ExponentVector::parse(p)?, &ns, random, seed)?;
        rows.push(Row::new(s, "Bernstein ratio growth per degree doubling", format!("r={r:?} alpha={a:?} p=({})", p.join(",")), ns.len(), max_growth(&sw), 1.05));
    }

    let mut settle = 0.0f64;
    for p in [["2", "2"], ["4", "4"]] {
        let p = ExponentVector::parse(&p)?;
        let t = random_real_poly(&[3, 2], rng);
        let a = t.norm_on_grid(&p, &quad_grid(t.degree(), 8))?;
        let b = t.norm_on_grid(&p, &quad_grid(t.degree(), 16))?;
        settle = settle.max((a - b).abs());
    }
    rows.push(Row::new(s, "grid quadrature settles from 8N+1 to 16N+1 points", "p in {(2,2),(4,4)}", 2, settle, 1e-8));
    Ok(rows)
}

fn rates(budget: Budget) -> Result<Vec<Row>> {
    let funcs = [
        (PackagedFunction::Lacunary1d { r: 0.5 }, vec![0.5]),
        (PackagedFunction::Lacunary1d { r: 1.0 }, vec![1.0]),
        (PackagedFunction::Lacunary1d { r: 2.5 }, vec![2.5]),
        (PackagedFunction::LacunarySum2d { r: [1.0, 2.0] }, vec![1.0, 2.0]),
        (PackagedFunction::LacunaryTensor2d { r: [1.0, 2.0] }, vec![1.0, 2.0]),
    ];
    let ps: &[&str] = if budget == Budget::Small { &["2", "inf"] } else { &["2", "4", "inf"] };
    let mut rows = Vec::new();
    for (f, r) in &funcs {
        let r = Smoothness::from_f64(r)?;
        for p in ps {
            let pv = ExponentVector::uniform(f.d(), p.parse()?)?;
            let rep = approximation_rate(f, &r, &pv, 10)?;
            rows.push(Row::new(Suite::Rates, "V(r,m) error decays like 2^(-<r>m/d)", format!("{} p={p} m=2..10", rep.function), rep.errors.len(), rep.slope, rep.target + 0.1));
        }
    }
    Ok(rows)
}
