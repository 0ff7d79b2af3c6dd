use std::f64::consts::{FRAC_PI_2, PI};

use bloch_core::special_fn::*;
use bloch_oracles as oracle;
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
}

#[test]
fn f_and_k_match_quadrature_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let phi = uniform(&mut rng, 0.0, FRAC_PI_2);
        let k = uniform(&mut rng, 0.0, 0.99);
        let err = (incomplete_f(phi, k).unwrap() - oracle::elliptic_f(phi, k)).abs();
        worst = worst.max(err);
        let err = (complete_k(k).unwrap() - oracle::elliptic_k(k)).abs();
        worst = worst.max(err);
    }
    assert!(worst <= 1e-12, "max error {worst:e}");
}

#[test]
fn complete_is_incomplete_at_quarter_period() {
    for i in 0..100 {
        let k = i as f64 / 100.0;
        let diff = complete_k(k).unwrap() - incomplete_f(FRAC_PI_2, k).unwrap();
        assert!(diff.abs() <= 1e-13, "k = {k}: {diff:e}");
    }
}

#[test]
fn theta_series_matches_product() {
    for qi in 1..=90 {
        let q = qi as f64 / 100.0;
        for vi in 0..16 {
            let v = vi as f64 * PI / 15.0;
            let (s, p) = (theta4(v, q).unwrap(), oracle::theta4_product(v, q));
            // The 64-term cap truncates the series for q close to 1.
            if q.powi(65 * 65) < 1e-16 {
                assert!((s - p).abs() <= 1e-12, "q = {q}, v = {v}: {s} vs {p}");
            }
        }
    }
}

#[test]
fn nome_matches_quadrature() {
    for &k in &[0.05, 0.1268, 0.5, 0.9] {
        assert!((nome(k).unwrap() - oracle::nome(k)).abs() <= 1e-14);
    }
}

#[test]
fn zeta_is_log_derivative_of_theta() {
    let h = 1e-6;
    for &k in &[0.1, 0.5, 0.9] {
        let m = EllipticModulus::new(k).unwrap();
        for i in 0..=40 {
            let u = 2.0 * m.big_k * i as f64 / 40.0;
            let fd = (m.theta(u + h).ln() - m.theta(u - h).ln()) / (2.0 * h);
            let z = m.zeta(u);
            assert!((z - fd).abs() <= 1e-8, "k = {k}, u = {u}: {z} vs {fd}");
        }
    }
}

#[test]
fn zeta_reference_values() {
    // Z(u) = E(am u) − (E/K)·u, with the amplitude found by bisection on
    // the quadrature F.
    for &(k, u) in &[(0.1, 0.3), (0.5, 0.3), (0.9, 0.3), (0.5, 1.2)] {
        let (mut lo, mut hi) = (0.0, FRAC_PI_2);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if oracle::elliptic_f(mid, k) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let am = 0.5 * (lo + hi);
        let expect = oracle::elliptic_e(am, k)
            - oracle::elliptic_e(FRAC_PI_2, k) / oracle::elliptic_k(k) * u;
        let got = jacobi_zeta(u, k).unwrap();
        assert!((got - expect).abs() < 1e-12, "k = {k}, u = {u}: {got} vs {expect}");
    }
}

proptest! {
    #[test]
    fn modulus_invariants(k in 1e-6f64..0.999) {
        let m = EllipticModulus::new(k).unwrap();
        prop_assert!((m.k * m.k + m.k_complement * m.k_complement - 1.0).abs() <= 1e-15);
        prop_assert!(m.q > 0.0 && m.q < 1.0);
        prop_assert!(m.big_k >= FRAC_PI_2);
        prop_assert!((m.q - (-PI * m.big_k_complement / m.big_k).exp()).abs() <= 1e-15);
    }

    #[test]
    fn complete_k_increases(a in 0.0f64..0.998, d in 1e-4f64..1e-3) {
        prop_assert!(complete_k(a + d).unwrap() > complete_k(a).unwrap());
    }

    #[test]
    fn incomplete_f_increases_in_phi(phi in 0.0f64..1.5, k in 0.0f64..0.99) {
        prop_assert!(incomplete_f(phi + 0.05, k).unwrap() > incomplete_f(phi, k).unwrap());
    }

    #[test]
    fn zeta_is_odd_and_periodic(u in -3.0f64..3.0, k in 0.01f64..0.95) {
        let m = EllipticModulus::new(k).unwrap();
        prop_assert!((m.zeta(-u) + m.zeta(u)).abs() <= 1e-12);
        prop_assert!((m.zeta(u + 2.0 * m.big_k) - m.zeta(u)).abs() <= 1e-12);
    }

    #[test]
    fn theta_is_even_and_periodic(u in -3.0f64..3.0, k in 0.01f64..0.95) {
        let m = EllipticModulus::new(k).unwrap();
        prop_assert!((m.theta(-u) - m.theta(u)).abs() <= 1e-14);
        prop_assert!((m.theta(u + 2.0 * m.big_k) - m.theta(u)).abs() <= 1e-13);
        prop_assert!(m.theta(u) > 0.0);
    }

    #[test]
    fn out_of_domain_modulus_is_rejected(k in prop_oneof![-10.0f64..0.0, 1.0f64..10.0]) {
        prop_assert!(complete_k(k).is_err());
        prop_assert!(incomplete_f(0.5, k).is_err());
        prop_assert!(jacobi_zeta(0.5, k).is_err());
    }
}
