use etheta_analytic::{
    bessel_derivative_closed_form, bessel_derivative_finite_difference, bessel_k, c_nj, cnj_sums, iint_grid,
    verify_bessel_derivative, verify_cnj_identity, verify_iint,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// `K_{3/2}(x) = √(π/2x) e^{−x} (1 + 1/x)`.
fn k_three_halves(x: f64) -> f64 {
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 1.0 / x)
}

#[test]
fn full_grid() {
    let grid = iint_grid();
    assert_eq!(grid.len(), 18);
    for (ell, m, beta) in grid {
        let r = verify_iint(ell, m, beta).unwrap();
        assert!(r.residual < 1e-6, "ℓ = {ell}, m = {m}, β = {beta}: {}", r.residual);
        assert!(r.modulus_residual < 1e-6 && r.phase_residual < 1e-6);
        if m % 2 == 1 {
            assert!(r.quadrature[0].abs() < 1e-8);
            // the other sign convention for the phase is off by a full sign flip
            assert!(r.residual_with_i_pow_m > 1.0);
        } else {
            assert!(r.quadrature[1].abs() < 1e-8);
        }
    }
}

#[test]
fn derivative_tolerances() {
    for (n, b, u, tol) in [(1, 6, 2.0, 1e-5), (2, 8, 1.5, 1e-4), (3, 10, 3.0, 1e-3)] {
        let r = verify_bessel_derivative(n, b, u).unwrap();
        assert!(r.residual < tol, "n = {n}: {}", r.residual);
    }
}

#[test]
fn first_derivative_is_classical() {
    // (u^b K_b)' = −u^b K_{b−1}
    for (b, u) in [(2, 0.8), (6, 2.0), (9, 4.5)] {
        let want = -(u as f64).powi(b as i32) * bessel_k(b as f64 - 1.0, u).unwrap();
        let got = bessel_derivative_closed_form(1, b, u).unwrap();
        assert!(((got - want) / want).abs() < 1e-10, "b = {b}, u = {u}");
    }
}

#[test]
fn cnj_identity_and_values() {
    for m in 0..=20 {
        assert!(verify_cnj_identity(m), "m = {m}");
        assert_eq!(cnj_sums(m)[0], BigInt::from(1));
    }
    assert_eq!(c_nj(4, 1), BigInt::from(6));
    assert_eq!(c_nj(6, 3), BigInt::from(15));
    assert_eq!(c_nj(3, 2), BigInt::from(0));
}

#[test]
fn bad_arguments() {
    assert!(bessel_k(1.0, -1.0).is_err());
    assert!(verify_iint(4, 0, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn half_integer_order(x in 0.05f64..40.0) {
        let want = k_three_halves(x);
        prop_assert!(((bessel_k(1.5, x).unwrap() - want) / want).abs() < 1e-9);
    }

    #[test]
    fn three_term_recurrence(nu in 0.0f64..12.0, x in 0.1f64..25.0) {
        let lhs = bessel_k(nu + 1.0, x).unwrap();
        let rhs = bessel_k(nu - 1.0, x).unwrap() + 2.0 * nu / x * bessel_k(nu, x).unwrap();
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-8);
    }

    #[test]
    fn closed_form_tracks_difference_quotient(b in 3u32..9, u in 0.8f64..4.0) {
        let c = bessel_derivative_closed_form(1, b, u).unwrap();
        let f = bessel_derivative_finite_difference(1, b, u).unwrap();
        prop_assert!(((c - f) / c).abs() < 1e-5);
    }

    #[test]
    fn cnj_identity_beyond_twenty(m in 21u32..48) {
        prop_assert!(verify_cnj_identity(m));
    }
}

#[test]
fn integral_at_other_betas() {
    for beta in [0.7, 3.0, 8.0] {
        for m in 0..=2 {
            let r = verify_iint(4, m, beta).unwrap();
            assert!(r.residual < 1e-6, "m = {m}, β = {beta}: {}", r.residual);
        }
    }
}
