use kwidth::ball_widths::{phi, BallProblem};
use kwidth::mixed_norm::{mixed_norm, ExponentVector, Tensor};
use kwidth::width_oracle::{distance_to_subspace, sandwich_report, width_upper, OracleConfig, SubspaceCandidate};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

const QS: [&str; 5] = ["2", "3", "4", "8", "inf"];

fn tensor(shape: Vec<usize>, vals: &[f64]) -> Tensor {
    let len: usize = shape.iter().product();
    Tensor::new(shape, vals[..len].to_vec()).unwrap()
}

fn case() -> impl Strategy<Value = (Vec<usize>, Vec<f64>, Vec<f64>, usize, ExponentVector)> {
    (prop::collection::vec(1usize..=3, 1..=3), 0usize..3)
        .prop_flat_map(|(shape, n)| {
            let len: usize = shape.iter().product();
            let d = shape.len();
            (
                Just(shape),
                prop::collection::vec(-2.0f64..2.0, len),
                prop::collection::vec(-1.0f64..1.0, len * 3),
                Just(n.min(len)),
                prop::collection::vec(0..QS.len(), d),
            )
        })
        .prop_map(|(shape, x, b, n, qi)| (shape, x, b, n, ExponentVector::parse(&qi.iter().map(|&i| QS[i]).collect::<Vec<_>>()).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn distance_is_at_most_the_norm((shape, x, b, n, q) in case()) {
        let k = x.len();
        let x = tensor(shape.clone(), &x);
        let l = match SubspaceCandidate::new(shape, DMatrix::from_column_slice(k, n, &b[..k * n])) {
            Ok(l) => l,
            Err(_) => return Ok(()),
        };
        let d = distance_to_subspace(&x, &l, &q, 1e-8).unwrap();
        let nx = mixed_norm(&x, &q).unwrap();
        prop_assert!(d.value <= nx * (1.0 + 1e-12) + 1e-15);
        prop_assert!(d.lower <= d.value);
        if n == 0 {
            prop_assert_eq!(d.value, nx);
        }
    }

    #[test]
    fn euclidean_distance_matches_least_squares((shape, x, b, n, _q) in case()) {
        let k = x.len();
        let bm = DMatrix::from_column_slice(k, n, &b[..k * n]);
        let Ok(l) = SubspaceCandidate::new(shape.clone(), bm.clone()) else { return Ok(()) };
        let xt = tensor(shape.clone(), &x);
        let q = ExponentVector::uniform(shape.len(), kwidth::mixed_norm::Exponent::int(2)).unwrap();
        let d = distance_to_subspace(&xt, &l, &q, 1e-8).unwrap().value;
        let xv = DVector::from_column_slice(&x);
        let want = if n == 0 {
            xv.norm()
        } else {
            let c = bm.clone().svd(true, true).solve(&xv, 1e-14).unwrap();
            (xv - bm * c).norm()
        };
        prop_assert!((d - want).abs() <= 1e-8, "{} vs {}", d, want);
    }
}

fn random_points(k: &[usize], m: usize, seed: u64) -> Vec<Tensor> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let len: usize = k.iter().product();
    (0..m).map(|_| Tensor::new(k.to_vec(), (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()).collect()
}

#[test]
fn nonincreasing_in_n_with_warm_starts() {
    let cfg = OracleConfig { restarts: 2, outer_iterations: 60, ..OracleConfig::small(7) };
    for q in [["2", "2"], ["4", "3"]] {
        let q = ExponentVector::parse(&q).unwrap();
        let pts = random_points(&[3, 3], 24, 11);
        let mut prev = width_upper(&pts, 0, &q, &cfg, None).unwrap();
        for n in 1..=9 {
            let cur = width_upper(&pts, n, &q, &cfg, Some(&prev.witness)).unwrap();
            assert!(cur.value <= prev.value * (1.0 + 1e-6), "n = {n}: {} > {}", cur.value, prev.value);
            assert_eq!(cur.witness.dim(), n);
            prev = cur;
        }
        assert_eq!(prev.value, 0.0);
    }
}

#[test]
fn homogeneous_in_the_point_set() {
    let cfg = OracleConfig { restarts: 2, outer_iterations: 60, ..OracleConfig::small(5) };
    let q = ExponentVector::parse(&["4", "2"]).unwrap();
    let pts = random_points(&[2, 3], 12, 3);
    let base = width_upper(&pts, 2, &q, &cfg, None).unwrap().value;
    for alpha in [-2.0, 0.5, 3.0] {
        let scaled: Vec<Tensor> = pts.iter().map(|t| t.scaled(alpha)).collect();
        let v = width_upper(&scaled, 2, &q, &cfg, None).unwrap().value;
        assert!((v - alpha.abs() * base).abs() <= 1e-6 * v, "alpha = {alpha}: {v} vs {}", alpha.abs() * base);
    }
}

#[test]
fn deterministic_for_fixed_seed() {
    let cfg = OracleConfig::small(9);
    let q = ExponentVector::parse(&["4"]).unwrap();
    let pts = random_points(&[6], 10, 1);
    let a = width_upper(&pts, 2, &q, &cfg, None).unwrap();
    let b = width_upper(&pts, 2, &q, &cfg, None).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.witness.orthonormal(), b.witness.orthonormal());
}

#[test]
fn euclidean_ball_has_width_one() {
    for n in 1..=4u64 {
        let prob = BallProblem::new(vec![8], n, ExponentVector::parse(&["2"]).unwrap(), ExponentVector::parse(&["2"]).unwrap()).unwrap();
        let r = sandwich_report(&prob, &OracleConfig::small(2)).unwrap();
        assert_eq!(r.phi, 1.0);
        assert!((r.lower - (1.0 - n as f64 / 8.0).sqrt()).abs() < 1e-12);
        assert!(r.upper > 0.95 && r.upper <= 1.0 + 1e-9, "n = {n}: {}", r.upper);
    }
}

#[test]
fn octahedron_sandwich_is_tight() {
    let prob = BallProblem::new(vec![4], 1, ExponentVector::parse(&["1"]).unwrap(), ExponentVector::parse(&["2"]).unwrap()).unwrap();
    let r = sandwich_report(&prob, &OracleConfig::default()).unwrap();
    assert!(r.exhaustive);
    assert!((r.lower - 0.75f64.sqrt()).abs() < 1e-12);
    assert!((r.upper - r.lower).abs() < 1e-6, "{r:?}");
}

#[test]
fn mixed_sandwich_brackets_phi() {
    let prob = BallProblem::new(vec![2, 2], 2, ExponentVector::parse(&["2", "2"]).unwrap(), ExponentVector::parse(&["4", "4"]).unwrap()).unwrap();
    let r = sandwich_report(&prob, &OracleConfig::default()).unwrap();
    let ph = phi(&prob).unwrap().value_f64;
    assert!(r.holds);
    // [lower, upper] meets [Φ/4, 4Φ]
    assert!(r.lower <= 4.0 * ph && r.upper >= ph / 4.0, "{r:?}");
}
