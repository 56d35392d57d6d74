use kwidth::exponents::Smoothness;
use kwidth::mixed_norm::ExponentVector;
use kwidth::trig_approx::{
    approximation_rate, bernoulli_convolution, bernstein_ratio, dyadic_block, dyadic_orders, fejer_shift_sum_check, nikolskii_ratio, quad_grid,
    vp_dyadic, vp_operator, weyl_derivative, ExactTrigPoly, PackagedFunction, QComplex, TrigPoly,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn ev(s: &[&str]) -> ExponentVector {
    ExponentVector::parse(s).unwrap()
}

fn random_exact(degree: Vec<u64>, rng: &mut ChaCha8Rng) -> ExactTrigPoly {
    ExactTrigPoly::from_fn(degree, false, |_| QComplex::from_ints((rng.random_range(-9..=9), rng.random_range(1..=7)), (rng.random_range(-9..=9), rng.random_range(1..=7)))).unwrap()
}

fn random_real(degree: Vec<u64>, zero_mean_axis: Option<usize>, rng: &mut ChaCha8Rng) -> TrigPoly {
    let c = TrigPoly::from_fn(degree.clone(), false, |k| {
        if zero_mean_axis.is_some_and(|j| k[j] == 0) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }
    })
    .unwrap();
    // symmetrize into a real polynomial
    TrigPoly::from_fn(degree, true, |k| {
        let neg: Vec<i64> = k.iter().map(|v| -v).collect();
        (c.get(k) + c.get(&neg).conj()) * 0.5
    })
    .unwrap()
}

#[test]
fn vp_reproduces_and_telescopes_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for d in 1..=3usize {
        let r = Smoothness::from_f64(&[1.0, 2.0, 1.5][..d]).unwrap();
        for _ in 0..100 {
            let n: Vec<u64> = (0..d).map(|_| rng.random_range(1..=3)).collect();
            let t = random_exact(n.clone(), &mut rng);
            assert_eq!(vp_operator(&t, &n).unwrap(), t);
            let big: Vec<u64> = (0..d).map(|_| rng.random_range(0..=6)).collect();
            let f = random_exact(big, &mut rng);
            let m_top = 4;
            let mut acc = dyadic_block(&f, &r, 0).unwrap();
            for m in 1..=m_top {
                let a = dyadic_block(&f, &r, m).unwrap();
                let deg: Vec<u64> = acc.degree().iter().zip(a.degree()).map(|(x, y)| *x.max(y)).collect();
                acc = acc.truncated(&deg).add(&a.truncated(&deg)).unwrap();
            }
            assert!(acc.same_coefficients(&vp_dyadic(&f, &r, m_top).unwrap().truncated(acc.degree())));
        }
    }
}

#[test]
fn dyadic_block_kills_low_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let r = Smoothness::parse(&["1", "2"]).unwrap();
    for m in 1..=6 {
        let low = dyadic_orders(&r, m - 1);
        let t = random_exact(low, &mut rng);
        assert!(dyadic_block(&t, &r, m).unwrap().is_zero(), "m = {m}");
    }
}

#[test]
fn weyl_inverts_bernoulli_convolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for r in [0.5, 1.0, 2.0] {
        for alpha in [0.0, 1.0, r] {
            for d in 1..=2usize {
                for _ in 0..10 {
                    let j = rng.random_range(0..d);
                    let deg: Vec<u64> = (0..d).map(|_| rng.random_range(1..=6)).collect();
                    let t = random_real(deg, Some(j), &mut rng);
                    let a = weyl_derivative(&bernoulli_convolution(&t, j, r, alpha).unwrap(), j, r, alpha).unwrap();
                    let b = bernoulli_convolution(&weyl_derivative(&t, j, r, alpha).unwrap(), j, r, alpha).unwrap();
                    for x in [&a, &b] {
                        let err = x.sub(&t).unwrap().coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
                        assert!(err < 1e-10, "r = {r}, α = {alpha}: {err}");
                    }
                }
            }
        }
    }
}

#[test]
fn grid_norms_settle_under_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    // equal even exponents are integrated exactly; other cases only converge
    for (p, tol) in [(["2", "2"], 1e-8), (["4", "4"], 1e-8), (["4", "2"], 1e-3), (["1", "3"], 1e-2), (["inf", "2"], 5e-2)] {
        let p = ev(&p);
        let t = random_real(vec![3, 2], None, &mut rng);
        let a = t.norm_on_grid(&p, &quad_grid(t.degree(), 8)).unwrap();
        let b = t.norm_on_grid(&p, &quad_grid(t.degree(), 16)).unwrap();
        assert!((a - b).abs() < tol * b, "{p:?}: {a} vs {b}");
    }
}

#[test]
fn inequality_ratios_stay_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pairs = [(ev(&["1"]), ev(&["inf"])), (ev(&["2"]), ev(&["4"])), (ev(&["4"]), ev(&["2"]))];
    for (p, q) in &pairs {
        let mut prev = 0.0;
        for n in [4u64, 8, 16, 32] {
            let mx = (0..6).map(|_| nikolskii_ratio(&random_real(vec![n], None, &mut rng), p, q).unwrap()).fold(0.0, f64::max);
            assert!(mx < 4.0, "{mx}");
            prev = mx.max(prev);
        }
        assert!(prev > 0.0);
    }
    for n in [4u64, 8, 16, 32] {
        let t = random_real(vec![n, 2], None, &mut rng);
        let v = bernstein_ratio(&t, &[1.5, 0.5], &[0.5, 0.0], &ev(&["2", "3"])).unwrap();
        assert!(v < 8.0, "{v}");
    }
}

#[test]
fn fejer_shift_sum_stays_bounded_when_m_doubles() {
    let mut vals = Vec::new();
    for m in [4u64, 8, 16, 32, 64] {
        vals.push(fejer_shift_sum_check(m, PI / m as f64, 1024, (1.0, 2.0 * PI)).unwrap());
    }
    for w in vals.windows(2) {
        assert!((w[1] - w[0]).abs() < 0.05 * w[0], "{vals:?}");
    }
}

#[test]
fn packaged_rates_meet_the_contract() {
    let cases = [
        (PackagedFunction::Lacunary1d { r: 0.5 }, vec!["0.5"]),
        (PackagedFunction::Lacunary1d { r: 1.0 }, vec!["1"]),
        (PackagedFunction::Lacunary1d { r: 2.5 }, vec!["5/2"]),
        (PackagedFunction::LacunarySum2d { r: [1.0, 2.0] }, vec!["1", "2"]),
        (PackagedFunction::LacunaryTensor2d { r: [1.0, 2.0] }, vec!["1", "2"]),
    ];
    for (f, r) in cases {
        let r = Smoothness::parse(&r).unwrap();
        for p in ["2", "4", "inf"] {
            let p = ExponentVector::uniform(f.d(), p.parse().unwrap()).unwrap();
            let rep = approximation_rate(&f, &r, &p, 10).unwrap();
            assert!(rep.holds, "{} p = {:?}: slope {} target {}", rep.function, rep.p, rep.slope, rep.target);
            assert!(rep.slope >= rep.target - 0.3, "{} suspiciously fast: {}", rep.function, rep.slope);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vp_output_degree_is_capped(n in 1u64..5, deg in 0u64..12, seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_real(vec![deg], None, &mut rng);
        let v = vp_operator(&t, &[n]).unwrap();
        prop_assert_eq!(v.degree()[0], deg.min(2 * n - 1));
        prop_assert!(v.is_real());
        // 𝒱_n has L_1 norm ≤ 3
        for p in ["1", "2", "inf"] {
            let p = ev(&[p]);
            prop_assert!(v.norm(&p).unwrap() <= 3.0 * t.norm(&p).unwrap() + 1e-12);
        }
    }
}
