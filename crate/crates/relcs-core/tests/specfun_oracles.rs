//! Independent oracles for the special functions.
//!
//! Every frozen constant in here was produced by the oracle directly above
//! it (series with a truncation bound, an asymptotic expansion, or a
//! quadrature of a defining integral) and is asserted against both the
//! oracle (validating the frozen digits) and the library implementation.
//! The oracles deliberately take different routes than the implementation:
//! the cosh-kernel integral and the large-x asymptotic series for the
//! Macdonald functions (the library uses an ascending series and a
//! continued fraction), a Maclaurin series for erf (the library defers to
//! libm), and a sqrt-kernel Gaussian quadrature for Tricomi U (the library
//! integrates a Gamma-weighted mean).

use relcs_core::quad::{self, QuadratureConfig};
use relcs_core::specfun::{bessel_k_scaled, confluent_u, erf};

/// `e^x K_nu(x)` through the cosh-kernel integral
/// `int_0^inf e^{-x(cosh t - 1)} cosh(nu t) dt`.
fn bessel_k_scaled_cosh_oracle(nu: u32, x: f64) -> f64 {
    let cut = ((1.0 + 60.0 / x) + ((1.0 + 60.0 / x) * (1.0 + 60.0 / x) - 1.0).sqrt()).ln() + 1.0;
    let cfg = QuadratureConfig {
        rel_tol: 1e-13,
        abs_tol: 1e-16,
        max_subdivisions: 2000,
        tail_cut: Some(cut),
    };
    let f = move |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu as f64 * t).cosh();
    quad::integrate_half_line(f, 0.0, &cfg).unwrap().value
}

/// `e^x K_nu(x)` for large `x` from the divergent asymptotic series,
/// truncated at its smallest term.
fn bessel_k_scaled_asymptotic_oracle(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (kf * 8.0 * x);
        if term.abs() > prev {
            break; // smallest term reached; stop before divergence
        }
        sum += term;
        prev = term.abs();
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * sum
}

#[test]
fn scaled_k0_and_k1_frozen_values() {
    // cosh-kernel oracle at x = 1 (usable at small x where the asymptotic
    // series is not)
    let k0_oracle = bessel_k_scaled_cosh_oracle(0, 1.0);
    let k1_oracle = bessel_k_scaled_cosh_oracle(1, 1.0);
    const K0_AT_1: f64 = 1.144_463_079_806_895_0; // e * 0.42102443824...
    const K1_AT_1: f64 = 1.636_153_486_263_258_2; // e * 0.60190723020...
    assert!(
        (k0_oracle - K0_AT_1).abs() < 1e-12,
        "oracle drifted: {k0_oracle}"
    );
    assert!(
        (k1_oracle - K1_AT_1).abs() < 1e-12,
        "oracle drifted: {k1_oracle}"
    );
    assert!((bessel_k_scaled(0, 1.0).unwrap() - K0_AT_1).abs() < 1e-13 * K0_AT_1);
    assert!((bessel_k_scaled(1, 1.0).unwrap() - K1_AT_1).abs() < 1e-13 * K1_AT_1);
}

#[test]
fn scaled_k2_from_the_recurrence() {
    // scaled K2(1) = scaled K0(1) + 2 scaled K1(1)
    let expect = bessel_k_scaled(0, 1.0).unwrap() + 2.0 * bessel_k_scaled(1, 1.0).unwrap();
    let k2 = bessel_k_scaled(2, 1.0).unwrap();
    assert!((k2 - expect).abs() < 1e-15 * expect);
    const K2_AT_1: f64 = 4.416_770_052_333_411_5;
    assert!((k2 - K2_AT_1).abs() < 1e-13 * K2_AT_1);
}

#[test]
fn scaled_bessel_vs_cosh_oracle_across_the_range() {
    for nu in 0..=2u32 {
        for &x in &[1e-2, 0.3, 1.0, 1.9, 2.1, 5.0, 20.0, 128.0, 1000.0] {
            let lib = bessel_k_scaled(nu, x).unwrap();
            let oracle = bessel_k_scaled_cosh_oracle(nu, x);
            assert!(
                (lib - oracle).abs() <= 1e-12 * oracle,
                "nu={nu} x={x}: {lib} vs {oracle}"
            );
        }
    }
}

#[test]
fn scaled_bessel_vs_asymptotic_oracle_at_large_argument() {
    for nu in 0..=2u32 {
        for &x in &[30.0, 76.8, 128.0, 1e3, 1e4] {
            let lib = bessel_k_scaled(nu, x).unwrap();
            let oracle = bessel_k_scaled_asymptotic_oracle(nu, x);
            assert!(
                (lib - oracle).abs() <= 1e-12 * oracle,
                "nu={nu} x={x}: {lib} vs {oracle}"
            );
        }
    }
}

#[test]
fn tricomi_u_matches_the_sqrt_kernel_quadrature() {
    // int e^{-beta x^2} sqrt(x^2 + 1) dx = sqrt(pi) U(-1/2, 0, beta) at
    // beta = 1: the brute-force left side pins U(-1/2, 0, 1)
    let cfg = QuadratureConfig::default()
        .with_rel_tol(1e-13)
        .with_tail_cut(14.0);
    let lhs = quad::integrate_line(|x| (-x * x).exp() * x.hypot(1.0), &cfg)
        .unwrap()
        .value;
    let oracle = lhs / std::f64::consts::PI.sqrt();
    const U_HALF_0_1: f64 = 1.200_346_934_790_947_7;
    assert!(
        (oracle - U_HALF_0_1).abs() < 1e-12,
        "oracle drifted: {oracle}"
    );
    let lib = confluent_u(-0.5, 0.0, 1.0).unwrap();
    assert!((lib - U_HALF_0_1).abs() < 1e-10 * U_HALF_0_1, "got {lib}");
}

#[test]
fn tricomi_u_large_order_frozen_value() {
    // deep-series territory: n = 200 at z = 64
    const U_M200: f64 = 16.257_636_136_421_173;
    let lib = confluent_u(-0.5, -200.0, 64.0).unwrap();
    assert!((lib - U_M200).abs() < 1e-9 * U_M200, "got {lib}");
}

#[test]
fn tricomi_u_reflection_identity_grid() {
    // U(-1/2, -n, z) = z^{n+1} U(n + 1/2, n + 2, z)
    for &z in &[0.5, 1.0, 5.0, 50.0] {
        for &n in &[0u32, 1, 2, 5] {
            let lhs = confluent_u(-0.5, -(n as f64), z).unwrap();
            let rhs =
                z.powi(n as i32 + 1) * confluent_u(n as f64 + 0.5, n as f64 + 2.0, z).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-9 * lhs.abs(),
                "z={z} n={n}: {lhs} vs {rhs}"
            );
        }
    }
}

/// 5-point first/second derivative stencils for the derivative identity.
fn d1(f: impl Fn(f64) -> f64, z: f64, h: f64) -> f64 {
    (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h)
}

fn d2(f: impl Fn(f64) -> f64, z: f64, h: f64) -> f64 {
    (-f(z + 2.0 * h) + 16.0 * f(z + h) - 30.0 * f(z) + 16.0 * f(z - h) - f(z - 2.0 * h))
        / (12.0 * h * h)
}

#[test]
fn tricomi_u_derivative_identity_by_finite_differences() {
    // d^n/dz^n [z^{b-1} U(a,b,z)] = (-1)^n (a-b+1)_n z^{b-n-1} U(a, b-n, z)
    for &(a, b) in &[(-0.5, 0.0), (0.5, 0.0)] {
        for &z in &[1.0f64, 10.0] {
            let f = |t: f64| t.powf(b - 1.0) * confluent_u(a, b, t).unwrap();
            let h = 0.02 * z;

            let poch1 = a - b + 1.0;
            let rhs1 = -poch1 * z.powf(b - 2.0) * confluent_u(a, b - 1.0, z).unwrap();
            let lhs1 = d1(f, z, h);
            assert!(
                (lhs1 - rhs1).abs() <= 1e-5 * rhs1.abs(),
                "first derivative at a={a} b={b} z={z}: {lhs1} vs {rhs1}"
            );

            let poch2 = poch1 * (a - b + 2.0);
            let rhs2 = poch2 * z.powf(b - 3.0) * confluent_u(a, b - 2.0, z).unwrap();
            let lhs2 = d2(f, z, h);
            assert!(
                (lhs2 - rhs2).abs() <= 1e-5 * rhs2.abs(),
                "second derivative at a={a} b={b} z={z}: {lhs2} vs {rhs2}"
            );
        }
    }
}

/// Maclaurin series for erf with a truncation bound: the terms alternate,
/// so stopping when a term falls below the target bounds the remainder.
fn erf_taylor_oracle(x: f64) -> f64 {
    let mut term = x;
    let mut sum = 0.0;
    for n in 0..60 {
        let nf = n as f64;
        let contrib = term / (2.0 * nf + 1.0);
        sum += contrib;
        if contrib.abs() < 1e-18 {
            break;
        }
        term *= -x * x / (nf + 1.0);
    }
    2.0 / std::f64::consts::PI.sqrt() * sum
}

#[test]
fn erf_frozen_value_from_the_taylor_oracle() {
    const ERF_1: f64 = 0.842_700_792_949_714_9;
    let oracle = erf_taylor_oracle(1.0);
    assert!((oracle - ERF_1).abs() < 1e-15, "oracle drifted: {oracle}");
    assert!((erf(1.0) - ERF_1).abs() < 1e-14);
}

#[test]
fn erf_matches_its_defining_integral_on_a_grid() {
    let cfg = QuadratureConfig::default().with_rel_tol(1e-13);
    for i in 0..20 {
        let x = -4.0 + 8.0 * i as f64 / 19.0;
        let (lo, hi) = if x >= 0.0 { (0.0, x) } else { (x, 0.0) };
        let integral = if lo == hi {
            0.0
        } else {
            let v = quad::integrate_interval(|t: f64| (-t * t).exp(), lo, hi, &cfg)
                .unwrap()
                .value;
            if x >= 0.0 {
                v
            } else {
                -v
            }
        };
        let expect = 2.0 / std::f64::consts::PI.sqrt() * integral;
        assert!(
            (erf(x) - expect).abs() < 1e-12,
            "x={x}: {} vs {expect}",
            erf(x)
        );
    }
}
