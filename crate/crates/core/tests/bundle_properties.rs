use proptest::prelude::*;
use waistwidth::bundlemetric::{bump, fiber_witness_bundle, phi1, BundleConstruction, JacobianMode};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bump_in_unit_interval_and_monotone(r in 0.1f64..5.0, a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(phi1(hi) <= phi1(lo));
        let v = bump(r, &[lo, 0.0]);
        prop_assert!((0.0..=1.0).contains(&v));
        if lo <= r { prop_assert_eq!(v, 1.0); }
        if lo >= 1.1 * r { prop_assert_eq!(v, 0.0); }
    }

    #[test]
    fn metric_prime_between_eps_and_one(eps in 0.01f64..0.99, x in prop::collection::vec(-8.0f64..8.0, 4)) {
        let b = BundleConstruction::new(1, 1, eps).unwrap();
        let ev = b.metric_prime(&x).symmetric_eigen().eigenvalues;
        prop_assert!(ev.min() >= eps * (1.0 - 1e-12));
        prop_assert!(ev.max() <= 1.0 + 1e-12);
    }

    #[test]
    fn phi_is_a_fiberwise_translation(f in prop::collection::vec(-3.0f64..3.0, 3), y0 in -4.0f64..4.0, dy in -2.0f64..2.0) {
        let b = BundleConstruction::new(1, 1, 0.2).unwrap();
        let mut x0 = f.clone();
        x0.push(y0);
        let mut x1 = f.clone();
        x1.push(y0 + dy);
        let d = b.p_tau(&x1)[0] - b.p_tau(&x0)[0];
        prop_assert!((d - dy).abs() < 1e-12);
    }

    #[test]
    fn pullback_is_spd_off_faces(x in prop::collection::vec(-2.5f64..2.5, 4)) {
        let b = BundleConstruction::new(1, 1, 0.3).unwrap().with_mode(JacobianMode::Mollified(0.003));
        let g = b.metric_pullback(&x).unwrap();
        prop_assert!((&g - g.transpose()).abs().max() < 1e-9);
        prop_assert!(g.symmetric_eigen().eigenvalues.min() > 0.0);
    }
}

#[test]
fn witness_fibers_contained_for_random_bases() {
    for (k, y) in [(0usize, -3.7), (1, 0.4), (1, 2.9)] {
        let b = BundleConstruction::new(1, k, 0.1).unwrap();
        let w = fiber_witness_bundle(&b, &[y], 3000, 17).unwrap();
        assert_eq!(w.containment_violations, 0, "k={k} y={y}");
        assert!(w.non_star_width < b.eps);
    }
}
