use antonym_core::functions::{antonymous_from_family, observable_from_family};
use antonym_core::json;
use antonym_core::oracle::oracle_spectrum;
use antonym_core::random::{
    random_chain, random_orthogonal_projections, random_projection_any_rank, random_test_operator, random_unit_vector,
};
use antonym_core::verify::{self, Suite, VerifyConfig};
use antonym_core::{
    antonymous, approximate, evaluate_step, from_opposite, observable, opposite_of, phi, phi_inv, restrict,
    step_decomposition, Dichotomy, Hermitian32, Hermitian64, LeftFamily32, LeftFamily64, Projection64, Quasipoint32,
    Quasipoint64, RightFamily64, StepFunction64,
};
use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leq_is_a_partial_order(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng(seed);
        let (p, q, r) = random_chain::<f64, _>(&mut rng, n);
        prop_assert!(p.leq(&p).unwrap());
        prop_assert!(p.leq(&q).unwrap() && q.leq(&r).unwrap() && p.leq(&r).unwrap());
        let x = random_projection_any_rank::<f64, _>(&mut rng, n);
        if x.leq(&p).unwrap() && p.leq(&x).unwrap() {
            prop_assert!(x.approx_eq(&p));
        }
    }

    #[test]
    fn meet_and_join_are_bounds(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng(seed);
        let p = random_projection_any_rank::<f64, _>(&mut rng, n);
        let q = random_projection_any_rank::<f64, _>(&mut rng, n);
        let m = p.meet(&q).unwrap();
        let j = p.join(&q).unwrap();
        prop_assert!(m.leq(&p).unwrap() && m.leq(&q).unwrap());
        prop_assert!(p.leq(&j).unwrap() && q.leq(&j).unwrap());
        prop_assert!(m.approx_eq(&q.meet(&p).unwrap()));
        prop_assert!(m.complement().approx_eq(&p.complement().join(&q.complement()).unwrap()));
    }

    #[test]
    fn distributive_on_diagonal_projections(masks in prop::collection::vec(prop::collection::vec(any::<bool>(), 5), 3)) {
        let [p, q, r] = [0, 1, 2].map(|i| Projection64::diagonal(&masks[i]));
        let left = p.meet(&q.join(&r).unwrap()).unwrap();
        let right = p.meet(&q).unwrap().join(&p.meet(&r).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right));
    }

    #[test]
    fn spectral_families_are_monotone(seed in any::<u64>(), n in 1usize..=6, l1 in -6.0f64..6.0, l2 in -6.0f64..6.0) {
        let mut rng = rng(seed);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let (lo, hi) = if l1 < l2 { (l1, l2) } else { (l2, l1) };
        let f = LeftFamily64::of(&a);
        let e = RightFamily64::of(&a);
        prop_assert!(f.evaluate(lo).leq(&f.evaluate(hi)).unwrap());
        prop_assert!(e.evaluate(lo).leq(&e.evaluate(hi)).unwrap());
        prop_assert!(f.evaluate(lo).leq(&e.evaluate(lo)).unwrap());
    }

    #[test]
    fn spectral_round_trips(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng(seed);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let f = LeftFamily64::of(&a);
        prop_assert_eq!(&phi(phi_inv(f.clone())), &f);
        prop_assert!(from_opposite(&opposite_of(&f)).unwrap().approx_eq(&f));
        let d = antonym_core::spectral::operator_distance(&f.reconstruct(), &a).unwrap();
        prop_assert!(d <= antonym_core::spectral::reconstruction_tolerance(&a));
    }

    #[test]
    fn quasipoints_are_filters(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng(seed);
        let x = random_unit_vector::<f64, _>(&mut rng, n);
        let q = Quasipoint64::atomic(x.clone()).unwrap();
        let line = Projection64::onto_line(&x).unwrap();
        let p = line.join(&random_projection_any_rank(&mut rng, n)).unwrap();
        let r = line.join(&random_projection_any_rank(&mut rng, n)).unwrap();
        prop_assert!(q.contains(&p).unwrap() && q.contains(&r).unwrap());
        prop_assert!(q.contains(&p.meet(&r).unwrap()).unwrap());
        prop_assert!(q.contains(&p.join(&random_projection_any_rank(&mut rng, n)).unwrap()).unwrap());
        let other = random_projection_any_rank::<f64, _>(&mut rng, n);
        prop_assert_ne!(q.dichotomy(&other).unwrap(), Dichotomy::Both);
        prop_assert!(!q.contains(&Projection64::zero(n)).unwrap());
    }

    #[test]
    fn functions_match_the_oracle(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = rng(seed);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let x = random_unit_vector::<f64, _>(&mut rng, n);
        let q = Quasipoint64::atomic(x.clone()).unwrap();
        let o = oracle_spectrum(&a, &x);
        assert_abs_diff_eq!(antonymous(&a, &q).unwrap(), o.min_support(1e-8).unwrap(), epsilon = 1e-9);
        assert_abs_diff_eq!(observable(&a, &q).unwrap(), o.max_support(1e-8).unwrap(), epsilon = 1e-9);
        prop_assert_eq!(
            antonymous_from_family(&LeftFamily64::of(&a), &q).unwrap(),
            StepFunction64::antonymous_of(&a).evaluate(&q).unwrap()
        );
        prop_assert_eq!(
            observable_from_family(&RightFamily64::of(&a), &q).unwrap(),
            StepFunction64::observable_of(&a).evaluate(&q).unwrap()
        );
    }

    #[test]
    fn step_decomposition_matches_direct_evaluation(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng(seed);
        let k = rng.random_range(1..=n);
        let cover = rng.random_bool(0.5);
        let projs = random_orthogonal_projections::<f64, _>(&mut rng, n, k, cover);
        let coeffs = [-2.0, -0.5, 1.0, 2.5, 4.0, 7.0][..k].to_vec();
        let dec = step_decomposition(&coeffs, &projs).unwrap();
        let q = Quasipoint64::atomic(random_unit_vector(&mut rng, n)).unwrap();
        assert_abs_diff_eq!(evaluate_step(&dec.function, &q).unwrap(), antonymous(&dec.operator(), &q).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn approximation_bound(seed in any::<u64>(), n in 1usize..=6, eps in 0.005f64..1.0) {
        let mut rng = rng(seed);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let ap = approximate(&a, eps).unwrap();
        prop_assert!(ap.sup_deviation < eps);
        let q = Quasipoint64::atomic(random_unit_vector(&mut rng, n)).unwrap();
        prop_assert!((evaluate_step(&ap.step, &q).unwrap() - antonymous(&a, &q).unwrap()).abs() < eps);
    }

    #[test]
    fn restrictions_validate(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng(seed);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let g = opposite_of(&LeftFamily64::of(&a));
        let (p, q, _) = random_chain::<f64, _>(&mut rng, n);
        let gq = restrict(&g, &q).unwrap();
        prop_assert!(gq.validate().is_ok());
        prop_assert!(restrict(&gq, &p).unwrap().approx_eq(&restrict(&g, &p).unwrap()));
    }

    #[test]
    fn json_round_trips_are_bit_identical(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = rng(seed);
        let a = random_test_operator::<f64, _>(&mut rng, n);
        let text = json::to_canonical_string(&json::hermitian_to_json(&a));
        let back: Hermitian64 = json::hermitian_from_json(&json::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(json::to_canonical_string(&json::hermitian_to_json(&back)), text);

        let f = LeftFamily64::of(&a);
        let back: LeftFamily64 = json::spectral_family_from_json(&json::parse(&json::to_canonical_string(&json::spectral_family_to_json(&f))).unwrap()).unwrap();
        prop_assert_eq!(back, f.clone());
        let g = opposite_of(&f);
        prop_assert_eq!(json::opposite_from_json::<f64>(&json::opposite_to_json(&g)).unwrap(), g);
        let s = StepFunction64::observable_of(&a);
        prop_assert_eq!(json::step_function_from_json::<f64>(&json::step_function_to_json(&s)).unwrap(), s);
        let q = Quasipoint64::atomic(random_unit_vector(&mut rng, n)).unwrap();
        prop_assert_eq!(json::quasipoint_from_json::<f64>(&json::quasipoint_to_json(&q), n).unwrap(), q);
    }

    #[test]
    fn single_precision_agrees_with_double(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = rng(seed);
        let a64 = random_test_operator::<f64, _>(&mut rng, n);
        let x64 = random_unit_vector::<f64, _>(&mut rng, n);
        let a32 = Hermitian32::new(a64.matrix().map(|z| nalgebra::Complex::new(z.re as f32, z.im as f32))).unwrap();
        let x32 = x64.map(|z| nalgebra::Complex::new(z.re as f32, z.im as f32));
        let x32 = x32.unscale(x32.norm());
        let q32 = Quasipoint32::atomic(x32).unwrap();
        let g32 = antonymous_from_family(&LeftFamily32::of(&a32), &q32).unwrap();
        let sp: Vec<f64> = LeftFamily64::of(&a64).breakpoints().to_vec();
        // Supports may differ near the coarser f32 threshold, but values are eigenvalues.
        prop_assert!(sp.iter().any(|&l| (l - g32 as f64).abs() < 1e-3), "{} not near {:?}", g32, sp);
    }
}

#[test]
fn verify_reports_serialize_identically_for_equal_seeds() {
    let cfg = VerifyConfig { max_dim: 5, trials: 10, seed: 42 };
    let a = serde_json::to_string(&verify::run(Suite::All, &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&verify::run(Suite::All, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let other = serde_json::to_string(&verify::run(Suite::All, &VerifyConfig { seed: 43, ..cfg }).unwrap()).unwrap();
    assert_ne!(a, other);
}
