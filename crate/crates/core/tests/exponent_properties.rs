use kwidth::arith::Real;
use kwidth::exponents::{
    dyadic_schedule, h_family_minimize, sorted_profile, theorem1_exponent, theorem2_exponent, theta_t, Smoothness,
};
use kwidth::mixed_norm::ExponentVector;
use proptest::prelude::*;

const PS: [&str; 9] = ["1", "3/2", "2", "5/2", "3", "4", "6", "8", "inf"];
const QS: [&str; 5] = ["2", "3", "4", "6", "8"];
const RS: [&str; 8] = ["1/4", "1/2", "2/3", "1", "3/2", "2", "5/2", "4"];

fn params() -> impl Strategy<Value = (ExponentVector, ExponentVector, Smoothness)> {
    (1usize..=4).prop_flat_map(|d| {
        (
            prop::collection::vec(0..PS.len(), d),
            prop::collection::vec(0..QS.len(), d),
            prop::collection::vec(0..RS.len(), d),
        )
            .prop_map(|(pi, qi, ri)| {
                let p = ExponentVector::parse(&pi.iter().map(|&i| PS[i]).collect::<Vec<_>>()).unwrap();
                let q = ExponentVector::parse(&qi.iter().map(|&i| QS[i]).collect::<Vec<_>>()).unwrap();
                let r = Smoothness::parse(&ri.iter().map(|&i| RS[i]).collect::<Vec<_>>()).unwrap();
                (p, q, r)
            })
    })
}

fn perm_of(d: usize, mut seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        perm.swap(i, (seed % (i as u64 + 1)) as usize);
        seed /= 5;
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn h_minimum_equals_theta_minimum((p, q, r) in params()) {
        if let Ok(w) = theorem1_exponent(&p, &q, &r) {
            let m = h_family_minimize(&p, &q, &r).unwrap();
            let min = w.all_theta.values().cloned().reduce(Real::min).unwrap();
            prop_assert_eq!(&m.value, &min);
            prop_assert_eq!(&m.value, &w.exponent);
        }
    }

    #[test]
    fn permutation_equivariance((p, q, r) in params(), seed in any::<u64>()) {
        let perm = perm_of(p.d(), seed);
        let (pp, qp, rp) = (p.permuted(&perm), q.permuted(&perm), r.permuted(&perm));
        let a = sorted_profile(&p, &q).unwrap();
        let b = sorted_profile(&pp, &qp).unwrap();
        prop_assert_eq!((a.mu, a.nu, &a.j_set), (b.mu, b.nu, &b.j_set));
        // σ is carried along: the sorted ω sequences coincide
        let sa: Vec<_> = (0..p.d()).map(|i| a.sorted_omega(i).clone()).collect();
        let sb: Vec<_> = (0..p.d()).map(|i| b.sorted_omega(i).clone()).collect();
        prop_assert_eq!(&sa, &sb);
        // θ_t depends on which axes fill the first t slots, so it is only
        // determined when t does not split a block of tied ω values.
        for &t in &a.j_set {
            if t == 0 || t == p.d() || sa[t - 1] != sa[t] {
                prop_assert_eq!(theta_t(&p, &q, &r, t, &a).unwrap(), theta_t(&pp, &qp, &rp, t, &b).unwrap());
            }
        }
        match (theorem1_exponent(&p, &q, &r), theorem1_exponent(&pp, &qp, &rp)) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x.exponent, y.exponent),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "embedding condition is not permutation invariant"),
        }
    }

    #[test]
    fn theta_is_affine_in_smoothness_scale((p, q, r) in params()) {
        let prof = sorted_profile(&p, &q).unwrap();
        let cs = [Real::one(), Real::int(2), Real::int(5)];
        for &t in &prof.j_set {
            let th: Vec<Real> = cs.iter().map(|c| theta_t(&p, &q, &r.scaled(c).unwrap(), t, &prof).unwrap()).collect();
            // (θ(5) − θ(2)) / 3 == θ(2) − θ(1)
            prop_assert_eq!((&th[2] - &th[1]) / Real::int(3), &th[1] - &th[0]);
        }
        // θ_d(c r) − c⟨r⟩/d does not depend on c
        if prof.j_set.contains(&p.d()) {
            let d = Real::int(p.d() as i64);
            let off = |c: &Real| {
                let rc = r.scaled(c).unwrap();
                theta_t(&p, &q, &rc, p.d(), &prof).unwrap() - rc.mean() / &d
            };
            prop_assert_eq!(off(&cs[0]), off(&cs[2]));
        }
    }

    #[test]
    fn breakpoints_decrease((p, q, r) in params()) {
        if let Ok(m) = h_family_minimize(&p, &q, &r) {
            let prof = sorted_profile(&p, &q).unwrap();
            for t in prof.mu..prof.nu {
                let (a, b) = (&m.breakpoints[&t], &m.breakpoints[&(t + 1)]);
                prop_assert!(a >= b);
                if q.get(prof.sigma[t]).recip() < &Real::ratio(1, 2) {
                    prop_assert!(a > b);
                }
            }
            prop_assert!(m.s_star >= Real::one() && m.s_star <= m.breakpoints[&prof.mu]);
        }
    }

    #[test]
    fn schedule_identities((p, q, r) in params()) {
        let s = dyadic_schedule(&p, &q, &r).unwrap();
        prop_assert_eq!(s.beta.iter().cloned().sum::<Real>(), Real::one());
        for (b, rj) in s.beta.iter().zip(r.values()) {
            prop_assert_eq!(b * rj, s.rate());
        }
        prop_assert!(s.gamma0 <= s.gamma);
        if p.iter().zip(q.iter()).all(|(a, b)| a.recip() >= b.recip()) {
            prop_assert_eq!(&s.gamma, &s.gamma0);
        }
    }

    #[test]
    fn theorem2_scales_with_smoothness(ri in prop::collection::vec(0..RS.len(), 1..4), c in 1i64..6) {
        // ν = 0 leaves no correction, so θ is exactly ⟨r̄⟩/d and scales by c
        let d = ri.len();
        let r = Smoothness::parse(&ri.iter().map(|&i| RS[i]).collect::<Vec<_>>()).unwrap();
        let p = ExponentVector::from_ints(&vec![4; d]).unwrap();
        let q = ExponentVector::from_ints(&vec![2; d]).unwrap();
        let c = Real::int(c);
        let a = theorem2_exponent(&p, &q, &r, 0).unwrap().exponent;
        let b = theorem2_exponent(&p, &q, &r.scaled(&c).unwrap(), 0).unwrap().exponent;
        prop_assert_eq!(b, a * c);
    }
}

#[test]
fn tied_omegas_agree_outside_the_tie() {
    // axes 0 and 1 share ω = 1/2; swapping them changes θ_1 only
    let p = ExponentVector::parse(&["3", "3", "1"]).unwrap();
    let q = ExponentVector::parse(&["6", "6", "4"]).unwrap();
    let r = Smoothness::parse(&["1", "2", "3/2"]).unwrap();
    let w = theorem1_exponent(&p, &q, &r).unwrap();
    let perm = [1, 0, 2];
    let w2 = theorem1_exponent(&p.permuted(&perm), &q.permuted(&perm), &r.permuted(&perm)).unwrap();
    for t in [0, 2, 3] {
        assert_eq!(w.all_theta[&t], w2.all_theta[&t]);
    }
    assert_ne!(w.all_theta[&1], w2.all_theta[&1]);
    assert_eq!(w.exponent, w2.exponent);
}
