//! The four integral identities that tie the quadrature engine to the
//! special functions, each checked as an equality between the brute-force
//! integral and the closed form over a parameter grid spanning the
//! preconditions, plus the structural properties of the engine itself.

use proptest::prelude::*;
use relcs_core::quad::{self, QuadratureConfig};
use relcs_core::specfun::{bessel_k_scaled, confluent_u, erfc};

const SQRT_PI: f64 = 1.772_453_850_905_516;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default().with_rel_tol(1e-12)
}

#[test]
fn gaussian_sqrt_kernel_equals_tricomi_u() {
    // int e^{-b x^2} sqrt(x^2 + g^2) dx = (sqrt(pi)/b) U(-1/2, 0, b g^2),
    // valid for b > 0, g^2 > 0
    let mut points = 0;
    for &b in &[0.3f64, 0.7, 1.0, 2.0, 5.0] {
        for &g in &[0.5, 1.0, 1.5, 2.0, 4.0, 8.0] {
            let z = b * g * g;
            if !(0.1..=200.0).contains(&z) {
                continue;
            }
            let c = cfg().with_tail_cut(14.0 / b.sqrt() + g);
            let lhs = quad::integrate_line(move |x| (-b * x * x).exp() * x.hypot(g), &c)
                .unwrap()
                .value;
            let rhs = SQRT_PI / b * confluent_u(-0.5, 0.0, z).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * rhs,
                "b={b} g={g}: {lhs} vs {rhs}"
            );
            points += 1;
        }
    }
    assert!(points >= 27, "grid too thin: {points}");
}

#[test]
fn half_line_first_moment_equals_the_erf_form() {
    // int_0^inf x e^{-m x^2 - 2 n x} dx
    //   = 1/(2m) - (n/(2m)) sqrt(pi/m) e^{n^2/m} (1 - erf(n/sqrt(m)))
    let mut points = 0;
    for &m in &[0.3f64, 0.7, 1.0, 2.0, 5.0] {
        for &n in &[0.1, 0.3, 0.7, 1.5, 3.0, 5.0] {
            if n / m.sqrt() > 5.0 {
                continue; // keep e^{n^2/m} erfc representable without scaling
            }
            let c = cfg().with_tail_cut(14.0 / m.sqrt() + 1.0);
            let lhs =
                quad::integrate_half_line(move |x| x * (-m * x * x - 2.0 * n * x).exp(), 0.0, &c)
                    .unwrap()
                    .value;
            // 1 - erf(s) evaluated as erfc(s): the subtraction would cost
            // ~s^2/ln(10) digits
            let s = n / m.sqrt();
            let rhs = 0.5 / m
                - n / (2.0 * m) * (std::f64::consts::PI / m).sqrt() * (s * s).exp() * erfc(s);
            assert!(
                (lhs - rhs).abs() <= 1e-8 * rhs.abs(),
                "m={m} n={n}: {lhs} vs {rhs}"
            );
            points += 1;
        }
    }
    assert!(points >= 27, "grid too thin: {points}");
}

#[test]
fn cosh_kernel_equals_k1() {
    // int_0^inf e^{-m sqrt(x^2+v^2)} cosh(r x) dx
    //   = m v / sqrt(m^2 - r^2) K_1(v sqrt(m^2 - r^2)),  m > |r|, v > 0
    let mut points = 0;
    for &m in &[1.5, 2.0, 4.0, 8.0] {
        for &frac in &[0.0, 0.4, 0.8] {
            for &v in &[0.5, 1.0, 2.0] {
                let r = frac * m;
                let c = cfg().with_tail_cut(60.0 / (m - r));
                let lhs = quad::integrate_half_line(
                    move |x| (-m * x.hypot(v)).exp() * (r * x).cosh(),
                    0.0,
                    &c,
                )
                .unwrap()
                .value;
                let root = (m * m - r * r).sqrt();
                let arg = v * root;
                let k1 = bessel_k_scaled(1, arg).unwrap() * (-arg).exp();
                let rhs = m * v / root * k1;
                assert!(
                    (lhs - rhs).abs() <= 1e-8 * rhs,
                    "m={m} r={r} v={v}: {lhs} vs {rhs}"
                );
                points += 1;
            }
        }
    }
    assert!(points >= 27, "grid too thin: {points}");
}

#[test]
fn cosh_kernel_with_inverse_root_equals_k0() {
    // int_0^inf e^{-m sqrt(x^2+v^2)}/sqrt(x^2+v^2) cosh(r x) dx
    //   = K_0(v sqrt(m^2 - r^2))
    let mut points = 0;
    for &m in &[1.5, 2.0, 4.0, 8.0] {
        for &frac in &[0.0, 0.4, 0.8] {
            for &v in &[0.5, 1.0, 2.0] {
                let r = frac * m;
                let c = cfg().with_tail_cut(60.0 / (m - r));
                let lhs = quad::integrate_half_line(
                    move |x| {
                        let root = x.hypot(v);
                        (-m * root).exp() / root * (r * x).cosh()
                    },
                    0.0,
                    &c,
                )
                .unwrap()
                .value;
                let arg = v * (m * m - r * r).sqrt();
                let rhs = bessel_k_scaled(0, arg).unwrap() * (-arg).exp();
                assert!(
                    (lhs - rhs).abs() <= 1e-8 * rhs,
                    "m={m} r={r} v={v}: {lhs} vs {rhs}"
                );
                points += 1;
            }
        }
    }
    assert!(points >= 27, "grid too thin: {points}");
}

#[test]
fn specific_cosh_kernel_values() {
    // mu = 2, nu = 1, rho = 1: (2/sqrt(3)) K_1(sqrt(3)) and K_0(sqrt(3))
    let c = cfg().with_tail_cut(60.0);
    let k1_form = quad::integrate_half_line(|x| (-2.0 * x.hypot(1.0)).exp() * x.cosh(), 0.0, &c)
        .unwrap()
        .value;
    const TWO_OVER_SQRT3_K1_SQRT3: f64 = 0.231_330_894_322_656_93;
    assert!(
        (k1_form - TWO_OVER_SQRT3_K1_SQRT3).abs() < 1e-12,
        "got {k1_form}"
    );

    let k0_form = quad::integrate_half_line(
        |x| {
            let root = x.hypot(1.0);
            (-2.0 * root).exp() / root * x.cosh()
        },
        0.0,
        &c,
    )
    .unwrap()
    .value;
    const K0_SQRT3: f64 = 0.158_931_898_339_830_52;
    assert!((k0_form - K0_SQRT3).abs() < 1e-12, "got {k0_form}");
}

#[test]
fn absolute_moment_example_has_the_erf_value() {
    // int |x| e^{-(x-2)^2} dx = 2 sqrt(pi) erf(2) + e^{-4}
    let c = cfg().with_tail_cut(16.0);
    let lhs = quad::integrate_line(|x| x.abs() * (-(x - 2.0) * (x - 2.0)).exp(), &c)
        .unwrap()
        .value;
    const EXPECT: f64 = 3.546_641_201_938_420_9;
    assert!((lhs - EXPECT).abs() < 1e-10, "got {lhs}");
}

#[test]
fn refinement_never_worsens_the_result() {
    // reference at the tightest tolerance; walking rel_tol down from 1e-3
    // by halving must never move the value away from it
    let f = |x: f64| (-x * x).exp() * x.hypot(1.0);
    let reference = {
        let c = QuadratureConfig::default()
            .with_rel_tol(1e-13)
            .with_tail_cut(14.0);
        quad::integrate_line(f, &c).unwrap().value
    };
    let mut tol = 1e-3;
    let mut prev_err = f64::INFINITY;
    while tol > 1e-10 {
        let c = QuadratureConfig::default()
            .with_rel_tol(tol)
            .with_tail_cut(14.0);
        let err = (quad::integrate_line(f, &c).unwrap().value - reference).abs();
        assert!(
            err <= prev_err + 1e-15,
            "refinement regressed at rel_tol={tol}: {err} > {prev_err}"
        );
        prev_err = err;
        tol *= 0.5;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // linearity of the engine on random Gaussian-decay integrands
    #[test]
    fn integration_is_linear(
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
        s1 in -2.0f64..2.0,
        s2 in -2.0f64..2.0,
        width in 0.5f64..2.0,
    ) {
        let c = cfg().with_tail_cut(20.0);
        let f = move |x: f64| (-(x - s1) * (x - s1)).exp();
        let g = move |x: f64| (-width * (x - s2) * (x - s2)).exp() * x;
        let combined = move |x: f64| alpha * f(x) + beta * g(x);
        let int_f = quad::integrate_line(f, &c).unwrap().value;
        let int_g = quad::integrate_line(g, &c).unwrap().value;
        let int_c = quad::integrate_line(combined, &c).unwrap().value;
        let expect = alpha * int_f + beta * int_g;
        prop_assert!(
            (int_c - expect).abs() <= 1e-9 * (1.0 + expect.abs()),
            "{} vs {}", int_c, expect
        );
    }
}
