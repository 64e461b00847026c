//! Property-based invariants of the coordinate chart and the field
//! representation.

use hopfion_core::*;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = std::f64::consts::TAU;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn chart_round_trip(
        eta in 1e-6..18.0f64,
        xi in -PI..PI,
        phi in 0.0..TWO_PI,
        a in 0.1..10.0f64,
    ) {
        let scale = Scale::new(a).unwrap();
        let p = ToroidalPoint::new(eta, xi, phi).unwrap();
        let c = to_cartesian(&p, scale).unwrap();
        let back = to_toroidal(&c, scale).unwrap();
        let again = to_cartesian(&back, scale).unwrap();
        let norm = c.norm().max(a);
        prop_assert!(again.dist(&c) / norm < 1e-12);
    }

    #[test]
    fn tau_is_positive_off_the_excluded_point(
        eta in 0.0..20.0f64,
        xi in -PI..PI,
    ) {
        let p = ToroidalPoint::new(eta, xi, 0.0).unwrap();
        if eta != 0.0 || xi != 0.0 {
            prop_assert!(p.tau() > 0.0);
        }
    }

    #[test]
    fn unit_vector_has_unit_norm(
        eta in 0.0..25.0f64,
        xi in -PI..PI,
        phi in 0.0..TWO_PI,
        q_idx in 0usize..3,
    ) {
        let (m, n) = [(4i64, 1i64), (2, 1), (4, 3)][q_idx];
        let spec = ModelSpec::new(vec![0.75], vec![m], vec![n], Scale::new(1.0).unwrap()).unwrap();
        let sol = HopfionSolution::closed_form(spec).unwrap();
        let p = ToroidalPoint::new(eta, xi, phi).unwrap();
        let v = sol.eval_n(0, &p);
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_profile_is_monotone(
        q in 0.05..0.95f64,
        eta1 in 0.0..15.0f64,
        delta in 1e-6..5.0f64,
    ) {
        let prof = closed_form_profile(q).unwrap();
        let s1 = prof.s(eta1);
        let s2 = prof.s(eta1 + delta);
        prop_assert!((0.0..=1.0).contains(&s1));
        prop_assert!(s2 >= s1 - 1e-12);
    }

    #[test]
    fn stereographic_round_trip(
        eta in 0.05..12.0f64,
        xi in -PI..PI,
        phi in 0.0..TWO_PI,
    ) {
        let spec = ModelSpec::new(vec![0.75], vec![2], vec![1], Scale::new(1.0).unwrap()).unwrap();
        let sol = HopfionSolution::closed_form(spec).unwrap();
        let p = ToroidalPoint::new(eta, xi, phi).unwrap();
        let u = sol.eval_u(0, &p).unwrap();
        let back = u_from_unit_vector(sol.eval_n(0, &p));
        prop_assert!((u - back).norm() <= 1e-12 * (1.0 + u.norm_sqr()));
    }

    #[test]
    fn k_identities_are_algebraic(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let field = PolynomialField::random(&mut rng);
        use rand::Rng;
        let p = CartesianPoint::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let grad = field.grad(&p);
        let (kdu, kdus) = k_contractions(&grad);
        let k = k_vector(&grad);
        let scale = (k.iter().map(|c| c.norm_sqr()).sum::<f64>()
            * grad.iter().map(|c| c.norm_sqr()).sum::<f64>())
        .sqrt()
            + 1e-30;
        prop_assert!(kdu.norm() <= 1e-10 * scale);
        prop_assert!(kdus.im.abs() <= 1e-10 * scale);
        prop_assert!(kdus.re >= -1e-10 * scale);
    }
}
