use kwidth::ball_widths::{lower_bound_plan, phi, BallProblem, LowerRegime, PhiForm};
use kwidth::mixed_norm::ExponentVector;
use proptest::prelude::*;

const PS: [&str; 8] = ["1", "3/2", "2", "3", "4", "6", "8", "inf"];
const QS: [&str; 4] = ["2", "3", "4", "8"];

/// Direct log-space evaluation of the order function, written from the
/// displayed formula with 1-based indices and its own sorting.
fn phi_oracle(k: &[u64], n: u64, p: &[f64], q: &[f64]) -> f64 {
    let d = k.len();
    let om = |p: f64, q: f64| {
        if p <= 2.0 {
            1.0
        } else if p > q {
            0.0
        } else {
            (1.0 / p - 1.0 / q) / (0.5 - 1.0 / q)
        }
    };
    let w: Vec<f64> = (0..d).map(|j| om(p[j], q[j])).collect();
    let mut s: Vec<usize> = (0..d).collect();
    s.sort_by(|&a, &b| w[a].partial_cmp(&w[b]).unwrap());
    let sig = |j: usize| s[j - 1];
    let lk = |j: usize| (k[sig(j)] as f64).ln();
    let mu = w.iter().filter(|&&v| v == 0.0).count();
    let mut lead = 0.0;
    for j in 1..=mu {
        lead += lk(j) * (1.0 / q[sig(j)] - 1.0 / p[sig(j)]);
    }
    let mut best = 0.0f64;
    for t in mu + 1..=d {
        let wt = w[sig(t)];
        let mut v = 0.0;
        for j in mu + 1..t {
            v += lk(j) * (1.0 / q[sig(j)] - 1.0 / p[sig(j)].max(2.0));
        }
        let mut base = -0.5 * (n as f64).ln();
        for j in 1..t {
            base += 0.5 * lk(j);
        }
        for j in t..=d {
            base += lk(j) / q[sig(j)];
        }
        if n == 0 {
            if wt > 0.0 {
                continue;
            }
            base = 0.0;
        }
        best = best.min(v + wt * base);
    }
    (lead + best).exp()
}

fn problems() -> impl Strategy<Value = BallProblem> {
    (1usize..=3)
        .prop_flat_map(|d| {
            (
                prop::collection::vec(1u64..=12, d),
                prop::collection::vec(0..PS.len(), d),
                prop::collection::vec(0..QS.len(), d),
                0.0f64..=1.0,
            )
        })
        .prop_map(|(k, pi, qi, frac)| {
            let total: u64 = k.iter().product();
            let n = (frac * (total / 2) as f64).floor() as u64;
            let p = ExponentVector::parse(&pi.iter().map(|&i| PS[i]).collect::<Vec<_>>()).unwrap();
            let q = ExponentVector::parse(&qi.iter().map(|&i| QS[i]).collect::<Vec<_>>()).unwrap();
            BallProblem::new(k, n, p, q).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_log_space_oracle(prob in problems()) {
        let r = phi(&prob).unwrap();
        let want = phi_oracle(&prob.k, prob.n, &prob.p.values_f64(), &prob.q.values_f64());
        prop_assert!((r.value_f64 - want).abs() <= 1e-12 * want.max(1.0), "{} vs {}", r.value_f64, want);
    }

    #[test]
    fn both_forms_agree(prob in problems()) {
        let r = phi(&prob).unwrap();
        prop_assert_eq!(&r.value, &r.all_terms_value);
        if r.form == PhiForm::AllTerms {
            prop_assert_eq!(prob.p.iter().zip(prob.q.iter()).filter(|(p, q)| p.recip() >= &kwidth::arith::Real::ratio(1, 2) && q.recip() < &kwidth::arith::Real::ratio(1, 2)).count(), 0);
        }
    }

    #[test]
    fn nonincreasing_in_n(prob in problems()) {
        let total = prob.total();
        let mut prev = None;
        for n in 0..=total / 2 {
            let pr = BallProblem { n, ..prob.clone() };
            let v = phi(&pr).unwrap().value;
            if let Some(pv) = &prev {
                prop_assert!(v.exact_cmp(pv) != std::cmp::Ordering::Greater);
            }
            prev = Some(v);
        }
    }

    #[test]
    fn permutation_invariance(prob in problems(), seed in any::<u64>()) {
        let d = prob.d();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut s = seed;
        for i in (1..d).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= 3;
        }
        let k2 = perm.iter().map(|&i| prob.k[i]).collect();
        let p2 = BallProblem::new(k2, prob.n, prob.p.permuted(&perm), prob.q.permuted(&perm)).unwrap();
        prop_assert_eq!(phi(&prob).unwrap().value, phi(&p2).unwrap().value);
    }

    #[test]
    fn plan_matches_phi(prob in problems()) {
        let plan = lower_bound_plan(&prob).unwrap();
        let r = phi(&prob).unwrap();
        // Every regime reproduces the order function exactly.
        prop_assert_eq!(&plan.predicted, &r.value, "{:?}", plan.regime);
        for (s, k) in plan.s.iter().zip(&prob.k) {
            prop_assert!(*s >= 1 && s <= k);
        }
        if let LowerRegime::Window { t } = plan.regime {
            prop_assert!(t >= 1 && t <= prob.d());
        }
    }
}

#[test]
fn gluskin_grid_is_exact() {
    use kwidth::arith::{PowerProduct, Real};
    for big_n in 1..=64u64 {
        for q in [2i64, 3, 4, 8] {
            for n in 0..=big_n / 2 {
                let prob = BallProblem::new(vec![big_n], n, ExponentVector::from_ints(&[2]).unwrap(), ExponentVector::from_ints(&[q]).unwrap()).unwrap();
                let got = phi(&prob).unwrap().value;
                let want = if n == 0 {
                    PowerProduct::one()
                } else {
                    let t = PowerProduct::pow_int(n, &Real::ratio(-1, 2)).mul(&PowerProduct::pow_int(big_n, &Real::ratio(1, q)));
                    if t.cmp_one() == std::cmp::Ordering::Less { t } else { PowerProduct::one() }
                };
                assert_eq!(got, want, "N={big_n} n={n} q={q}");
            }
        }
    }
}
