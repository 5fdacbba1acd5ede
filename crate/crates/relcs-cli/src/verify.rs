//! The verification suite: every invariant and oracle comparison of the
//! numeric modules as a named check with a measured residual and a
//! tolerance, runnable per suite or wholesale.

use anyhow::Result;

use relcs_core::canonical::{self, CanonicalState, EnergyMethod};
use relcs_core::lorentzian::{self, LorentzianState};
use relcs_core::poincare::{self, group, PoincareState};
use relcs_core::quad::{self, QuadratureConfig};
use relcs_core::specfun::{bessel_k_scaled, confluent_u, erf, erfc, pochhammer, pochhammer_ln};
use relcs_core::{PhaseGrid, Scale};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Canonical,
    Lorentzian,
    Poincare,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Canonical => "canonical",
            Suite::Lorentzian => "lorentzian",
            Suite::Poincare => "poincare",
        }
    }

    pub fn all() -> [Suite; 4] {
        [
            Suite::Specfun,
            Suite::Canonical,
            Suite::Lorentzian,
            Suite::Poincare,
        ]
    }
}

impl std::str::FromStr for Suite {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "specfun" => Ok(Suite::Specfun),
            "canonical" => Ok(Suite::Canonical),
            "lorentzian" => Ok(Suite::Lorentzian),
            "poincare" => Ok(Suite::Poincare),
            other => {
                anyhow::bail!("unknown suite `{other}` (all|specfun|canonical|lorentzian|poincare)")
            }
        }
    }
}

/// Whether a check's tolerance is relative or absolute; `--tol` overrides
/// loosen per kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TolKind {
    Rel,
    Abs,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TolOverrides {
    pub rel: Option<f64>,
    pub abs: Option<f64>,
}

impl TolOverrides {
    fn effective(&self, kind: TolKind, default: f64) -> f64 {
        let over = match kind {
            TolKind::Rel => self.rel,
            TolKind::Abs => self.abs,
        };
        match over {
            Some(t) => t.max(default),
            None => default,
        }
    }
}

pub struct Check {
    pub id: &'static str,
    pub suite: Suite,
    pub kind: TolKind,
    pub default_tol: f64,
    pub run: fn() -> Result<(f64, String)>,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub suite: Suite,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

/// Runs the selected suites in declaration order.
pub fn run_suites(suites: &[Suite], tol: &TolOverrides) -> Vec<Result<CheckOutcome>> {
    checks()
        .into_iter()
        .filter(|c| suites.contains(&c.suite))
        .map(|c| {
            let (residual, detail) = (c.run)()?;
            let tolerance = tol.effective(c.kind, c.default_tol);
            Ok(CheckOutcome {
                id: c.id,
                suite: c.suite,
                residual,
                tolerance,
                pass: residual <= tolerance,
                detail,
            })
        })
        .collect()
}

fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn mixed_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

// deterministic xorshift for the sampled checks
struct Rng(u64);

impl Rng {
    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

fn checks() -> Vec<Check> {
    vec![
        // ---- specfun ----------------------------------------------------
        Check {
            id: "specfun/bessel-frozen-values",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-12,
            run: || {
                let k0 = bessel_k_scaled(0, 1.0)?;
                let k1 = bessel_k_scaled(1, 1.0)?;
                let k2 = bessel_k_scaled(2, 1.0)?;
                let res = rel_dev(k0, 1.144_463_079_806_895_0)
                    .max(rel_dev(k1, 1.636_153_486_263_258_2))
                    .max(rel_dev(k2, 4.416_770_052_333_411_5));
                Ok((res, format!("K0s(1)={k0:.15}")))
            },
        },
        Check {
            id: "specfun/bessel-recurrence",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-12,
            run: || {
                let mut worst = 0.0f64;
                for &x in &[1e-6, 1e-3, 0.1, 1.0, 2.0, 5.0, 20.0, 128.0, 1e3, 1e4] {
                    for nu in 1..=4u32 {
                        let km = bessel_k_scaled(nu - 1, x)?;
                        let k = bessel_k_scaled(nu, x)?;
                        let kp = bessel_k_scaled(nu + 1, x)?;
                        worst = worst.max(rel_dev(kp, km + 2.0 * nu as f64 / x * k));
                    }
                }
                Ok((worst, "three-term ladder over x in [1e-6, 1e4]".into()))
            },
        },
        Check {
            id: "specfun/bessel-vs-cosh-integral",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-12,
            run: || {
                let mut worst = 0.0f64;
                for nu in 0..=2u32 {
                    for &x in &[0.01, 0.3, 1.0, 2.1, 20.0, 128.0, 1000.0] {
                        let lib = bessel_k_scaled(nu, x)?;
                        let c = 60.0 / x + 1.0;
                        let cut = (c + 1.0 + ((c + 1.0) * (c + 1.0) - 1.0).sqrt()).ln() + 1.0;
                        let cfg = QuadratureConfig {
                            rel_tol: 1e-13,
                            abs_tol: 1e-16,
                            max_subdivisions: 2000,
                            tail_cut: Some(cut),
                        };
                        let oracle = quad::integrate_half_line(
                            move |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu as f64 * t).cosh(),
                            0.0,
                            &cfg,
                        )?
                        .value;
                        worst = worst.max(rel_dev(lib, oracle));
                    }
                }
                Ok((worst, "scaled K_nu against its cosh-kernel integral".into()))
            },
        },
        Check {
            id: "specfun/u-reflection",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-9,
            run: || {
                let mut worst = 0.0f64;
                for &z in &[0.5, 1.0, 5.0, 50.0] {
                    for &n in &[0i32, 1, 2, 5] {
                        let lhs = confluent_u(-0.5, -n as f64, z)?;
                        let rhs = z.powi(n + 1) * confluent_u(n as f64 + 0.5, n as f64 + 2.0, z)?;
                        worst = worst.max(rel_dev(lhs, rhs));
                    }
                }
                Ok((worst, "U(-1/2,-n,z) = z^{n+1} U(n+1/2,n+2,z)".into()))
            },
        },
        Check {
            id: "specfun/u-recurrence",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-11,
            run: || {
                let mut worst = 0.0f64;
                for &z in &[0.5, 1.0, 5.0, 50.0, 128.0] {
                    let lhs = confluent_u(-0.5, -1.0, z)?;
                    let rhs = confluent_u(-0.5, 0.0, z)? + 0.5 * confluent_u(0.5, 0.0, z)?;
                    worst = worst.max(rel_dev(lhs, rhs));
                }
                Ok((worst, "U(a,b,z) - a U(a+1,b,z) - U(a,b-1,z) = 0".into()))
            },
        },
        Check {
            id: "specfun/u-derivative-fd",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-5,
            run: || {
                let mut worst = 0.0f64;
                for &(a, b) in &[(-0.5, 0.0), (0.5, 0.0)] {
                    for &z in &[1.0f64, 10.0] {
                        let f = |t: f64| t.powf(b - 1.0) * confluent_u(a, b, t).unwrap();
                        let h = 0.02 * z;
                        let d1 = (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h)
                            + f(z - 2.0 * h))
                            / (12.0 * h);
                        let rhs1 = -(a - b + 1.0) * z.powf(b - 2.0) * confluent_u(a, b - 1.0, z)?;
                        worst = worst.max(rel_dev(d1, rhs1));
                        let d2 = (-f(z + 2.0 * h) + 16.0 * f(z + h) - 30.0 * f(z)
                            + 16.0 * f(z - h)
                            - f(z - 2.0 * h))
                            / (12.0 * h * h);
                        let rhs2 = (a - b + 1.0)
                            * (a - b + 2.0)
                            * z.powf(b - 3.0)
                            * confluent_u(a, b - 2.0, z)?;
                        worst = worst.max(rel_dev(d2, rhs2));
                    }
                }
                Ok((
                    worst,
                    "derivative ladder by 5-point stencils, n = 1, 2".into(),
                ))
            },
        },
        Check {
            id: "specfun/u-frozen-values",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-9,
            run: || {
                let res = rel_dev(confluent_u(-0.5, 0.0, 1.0)?, 1.200_346_934_790_947_7)
                    .max(rel_dev(
                        confluent_u(-0.5, -200.0, 64.0)?,
                        16.257_636_136_421_173,
                    ))
                    .max(rel_dev(confluent_u(0.0, -3.0, 7.0)?, 1.0));
                Ok((res, "U(-1/2,0,1), U(-1/2,-200,64), U(0,.,.)".into()))
            },
        },
        Check {
            id: "specfun/erf-defining-integral",
            suite: Suite::Specfun,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let cfg = QuadratureConfig::default().with_rel_tol(1e-13);
                let mut worst = 0.0f64;
                for i in 0..20 {
                    let x = -4.0 + 8.0 * i as f64 / 19.0;
                    let (lo, hi, sign) = if x >= 0.0 {
                        (0.0, x, 1.0)
                    } else {
                        (x, 0.0, -1.0)
                    };
                    let integral = if lo == hi {
                        0.0
                    } else {
                        sign * quad::integrate_interval(|t: f64| (-t * t).exp(), lo, hi, &cfg)?
                            .value
                    };
                    let expect = 2.0 / std::f64::consts::PI.sqrt() * integral;
                    worst = worst.max((erf(x) - expect).abs());
                }
                Ok((worst, "20-point grid on [-4, 4]".into()))
            },
        },
        Check {
            id: "specfun/erf-odd-saturation",
            suite: Suite::Specfun,
            kind: TolKind::Abs,
            default_tol: 1e-14,
            run: || {
                let mut worst = (erf(10.0) - 1.0).abs().max(erf(0.0).abs());
                for &x in &[0.3, 1.0, 2.5, 7.0] {
                    worst = worst.max((erf(-x) + erf(x)).abs());
                }
                Ok((worst, "odd symmetry and saturation".into()))
            },
        },
        Check {
            id: "specfun/pochhammer-values",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-13,
            run: || {
                let mut worst = rel_dev(pochhammer(3.5, 0), 1.0)
                    .max(rel_dev(pochhammer(1.0, 5), 120.0))
                    .max(rel_dev(pochhammer(-0.5, 3), -0.375));
                let (sign, ln_abs) = pochhammer_ln(1.0, 200);
                let ln_expect = (1..=200u32).map(|k| (k as f64).ln()).sum::<f64>();
                worst = worst.max(rel_dev(ln_abs, ln_expect));
                if sign != 1 || pochhammer(-2.0, 4) != 0.0 {
                    worst = f64::INFINITY;
                }
                Ok((worst, "(3.5)_0, (1)_5, (-1/2)_3, log-domain (1)_200".into()))
            },
        },
        Check {
            id: "specfun/quad-gauss-sqrt-vs-u",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-8,
            run: || {
                let mut worst = 0.0f64;
                let mut points = 0;
                for &b in &[0.3f64, 0.7, 1.0, 2.0, 5.0] {
                    for &g in &[0.5f64, 1.0, 1.5, 2.0, 4.0, 8.0] {
                        let z = b * g * g;
                        if !(0.1..=200.0).contains(&z) {
                            continue;
                        }
                        let cfg = QuadratureConfig::default()
                            .with_rel_tol(1e-12)
                            .with_tail_cut(14.0 / b.sqrt() + g);
                        let lhs =
                            quad::integrate_line(move |x| (-b * x * x).exp() * x.hypot(g), &cfg)?
                                .value;
                        let rhs = std::f64::consts::PI.sqrt() / b * confluent_u(-0.5, 0.0, z)?;
                        worst = worst.max(rel_dev(lhs, rhs));
                        points += 1;
                    }
                }
                Ok((worst, format!("{points} grid points")))
            },
        },
        Check {
            id: "specfun/quad-halfline-moment-vs-erf",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-8,
            run: || {
                let mut worst = 0.0f64;
                let mut points = 0;
                for &m in &[0.3f64, 0.7, 1.0, 2.0, 5.0] {
                    for &n in &[0.1f64, 0.3, 0.7, 1.5, 3.0, 5.0] {
                        let s = n / m.sqrt();
                        if s > 5.0 {
                            continue;
                        }
                        let cfg = QuadratureConfig::default()
                            .with_rel_tol(1e-12)
                            .with_tail_cut(14.0 / m.sqrt() + 1.0);
                        let lhs = quad::integrate_half_line(
                            move |x| x * (-m * x * x - 2.0 * n * x).exp(),
                            0.0,
                            &cfg,
                        )?
                        .value;
                        let rhs = 0.5 / m
                            - n / (2.0 * m)
                                * (std::f64::consts::PI / m).sqrt()
                                * (s * s).exp()
                                * erfc(s);
                        worst = worst.max(rel_dev(lhs, rhs));
                        points += 1;
                    }
                }
                Ok((worst, format!("{points} grid points")))
            },
        },
        Check {
            id: "specfun/quad-cosh-vs-k1",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-8,
            run: || cosh_kernel_check(false),
        },
        Check {
            id: "specfun/quad-cosh-vs-k0",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-8,
            run: || cosh_kernel_check(true),
        },
        Check {
            id: "specfun/quad-linearity",
            suite: Suite::Specfun,
            kind: TolKind::Rel,
            default_tol: 1e-9,
            run: || {
                let mut rng = Rng(0x5eed_1234_abcd_ef01);
                let cfg = QuadratureConfig::default()
                    .with_rel_tol(1e-12)
                    .with_tail_cut(20.0);
                let mut worst = 0.0f64;
                for _ in 0..24 {
                    let alpha = rng.in_range(-3.0, 3.0);
                    let beta = rng.in_range(-3.0, 3.0);
                    let s1 = rng.in_range(-2.0, 2.0);
                    let s2 = rng.in_range(-2.0, 2.0);
                    let w = rng.in_range(0.5, 2.0);
                    let f = move |x: f64| (-(x - s1) * (x - s1)).exp();
                    let g = move |x: f64| (-w * (x - s2) * (x - s2)).exp() * x;
                    let int_f = quad::integrate_line(f, &cfg)?.value;
                    let int_g = quad::integrate_line(g, &cfg)?.value;
                    let int_c =
                        quad::integrate_line(move |x| alpha * f(x) + beta * g(x), &cfg)?.value;
                    let expect = alpha * int_f + beta * int_g;
                    worst = worst.max((int_c - expect).abs() / (1.0 + expect.abs()));
                }
                Ok((worst, "24 random Gaussian-decay pairs".into()))
            },
        },
        Check {
            id: "specfun/quad-refinement-monotonicity",
            suite: Suite::Specfun,
            kind: TolKind::Abs,
            default_tol: 1e-15,
            run: || {
                let f = |x: f64| (-x * x).exp() * x.hypot(1.0);
                let reference = quad::integrate_line(
                    f,
                    &QuadratureConfig::default()
                        .with_rel_tol(1e-13)
                        .with_tail_cut(14.0),
                )?
                .value;
                let mut tol = 1e-3;
                let mut prev = f64::INFINITY;
                let mut worst_regression = 0.0f64;
                while tol > 1e-10 {
                    let c = QuadratureConfig::default()
                        .with_rel_tol(tol)
                        .with_tail_cut(14.0);
                    let err = (quad::integrate_line(f, &c)?.value - reference).abs();
                    worst_regression = worst_regression.max(err - prev);
                    prev = err;
                    tol *= 0.5;
                }
                Ok((
                    worst_regression.max(0.0),
                    "halving rel_tol never worsens".into(),
                ))
            },
        },
        // ---- canonical --------------------------------------------------
        Check {
            id: "canonical/norm",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-10,
            run: || {
                let cfg = QuadratureConfig::default();
                let mut worst = 0.0f64;
                for (x, p) in [(0.0, 0.0), (2.0, -1.5), (-4.0, 7.0)] {
                    let n =
                        canonical::wavefunction(&CanonicalState::new(x, p)).norm_squared(&cfg)?;
                    worst = worst.max((n - 1.0).abs());
                }
                Ok((worst, "unit norm under the flat measure".into()))
            },
        },
        Check {
            id: "canonical/overlap-vs-quadrature",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-10,
            run: || {
                let cfg = QuadratureConfig::default();
                let pairs = [
                    (CanonicalState::new(0.0, 0.0), CanonicalState::new(1.0, 0.5)),
                    (
                        CanonicalState::new(-2.0, 1.0),
                        CanonicalState::new(0.5, -1.5),
                    ),
                    (CanonicalState::new(0.3, 2.0), CanonicalState::new(0.3, 2.0)),
                ];
                let mut worst = 0.0f64;
                for (a, b) in pairs {
                    let closed = canonical::overlap(&a, &b);
                    let numeric =
                        canonical::wavefunction(&a).inner(&canonical::wavefunction(&b), &cfg)?;
                    worst = worst.max((closed - numeric).norm());
                }
                Ok((
                    worst,
                    "closed overlap against the inner-product integral".into(),
                ))
            },
        },
        Check {
            id: "canonical/energy-series-vs-quadrature",
            suite: Suite::Canonical,
            kind: TolKind::Rel,
            default_tol: 1e-8,
            run: || {
                let mut worst = 0.0f64;
                for &r in &[1.0, 2.0, 5.0, 8.0] {
                    for &p in &[0.0, 0.5, 1.0, 2.0, 4.0] {
                        let s = canonical::mean_energy_massive(p, r, EnergyMethod::Series)?;
                        let q = canonical::mean_energy_massive(p, r, EnergyMethod::Quadrature)?;
                        worst = worst.max(rel_dev(s, q));
                    }
                }
                Ok((worst, "20-point (r, pbar) grid".into()))
            },
        },
        Check {
            id: "canonical/velocity-series-vs-quadrature",
            suite: Suite::Canonical,
            kind: TolKind::Rel,
            default_tol: 1e-8,
            run: || {
                let mut worst = 0.0f64;
                for &r in &[1.0, 2.0, 5.0, 8.0] {
                    for &p in &[0.0, 0.5, 1.0, 2.0, 4.0] {
                        let s = canonical::mean_velocity(p, r, EnergyMethod::Series)?;
                        let q = canonical::mean_velocity(p, r, EnergyMethod::Quadrature)?;
                        worst = worst.max((s - q).abs() / q.abs().max(1e-3));
                    }
                }
                Ok((worst, "20-point (r, pbar) grid".into()))
            },
        },
        Check {
            id: "canonical/velocity-is-energy-slope",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-6,
            run: || {
                let h = 1e-3;
                let mut worst = 0.0f64;
                for &r in &[1.0, 3.0, 8.0] {
                    for &p in &[0.0, 0.7, 2.0] {
                        let v = canonical::mean_velocity(p, r, EnergyMethod::Quadrature)?;
                        let ep =
                            canonical::mean_energy_massive(p + h, r, EnergyMethod::Quadrature)?;
                        let em =
                            canonical::mean_energy_massive(p - h, r, EnergyMethod::Quadrature)?;
                        worst = worst.max((v - r * (ep - em) / (2.0 * h)).abs());
                    }
                }
                Ok((worst, "central differences of the mean energy".into()))
            },
        },
        Check {
            id: "canonical/parity",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let mut worst = 0.0f64;
                for &r in &[2.0, 8.0] {
                    for &p in &[0.5, 1.0, 3.0] {
                        let ep = canonical::mean_energy_massive(p, r, EnergyMethod::Quadrature)?;
                        let em = canonical::mean_energy_massive(-p, r, EnergyMethod::Quadrature)?;
                        worst = worst.max((ep - em).abs() / ep);
                        let vp = canonical::mean_velocity(p, r, EnergyMethod::Quadrature)?;
                        let vm = canonical::mean_velocity(-p, r, EnergyMethod::Quadrature)?;
                        worst = worst.max((vp + vm).abs());
                    }
                }
                Ok((worst, "energy even, velocity odd".into()))
            },
        },
        Check {
            id: "canonical/nonrelativistic-limit",
            suite: Suite::Canonical,
            kind: TolKind::Rel,
            default_tol: 1e-3,
            run: || {
                let r = 50.0;
                let mut worst = 0.0f64;
                for &p in &[0.0, 0.5, 1.0] {
                    let e = canonical::mean_energy_massive(p, r, EnergyMethod::Quadrature)?;
                    let expect = 0.5 * (p / r) * (p / r) + 0.25 / (r * r);
                    worst = worst.max(rel_dev(e - 1.0, expect));
                }
                Ok((
                    worst,
                    "kinetic term plus zero-point spread at r = 50".into(),
                ))
            },
        },
        Check {
            id: "canonical/massless-closed-vs-oracle",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-10,
            run: || {
                let mut worst = 0.0f64;
                for &s in &[0.0, 0.4, 1.3195, 3.0, 6.0] {
                    let e = canonical::mean_energy_massless(s);
                    worst = worst.max((e - canonical::mean_energy_massless_oracle(s)?).abs());
                }
                Ok((worst, "erf form against the split-kink quadrature".into()))
            },
        },
        Check {
            id: "canonical/massless-floor-and-monotone-approach",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let mut worst = 0.0f64;
                let mut prev = f64::INFINITY;
                for &s in &[0.0, 0.4, 0.8, 1.3195, 2.0, 3.0, 5.0] {
                    let e = canonical::mean_energy_massless(s);
                    worst = worst.max(s - e); // energy must stay above |s|
                    let dev = (e - s) / e;
                    worst = worst.max(dev - prev); // deviation must shrink
                    prev = dev;
                }
                Ok((
                    worst.max(0.0),
                    "E >= |s| with shrinking relative excess".into(),
                ))
            },
        },
        Check {
            id: "canonical/uncertainty-product",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-9,
            run: || {
                let mut rng = Rng(0xfeed_beef_0451_cafe);
                let mut worst = 0.0f64;
                for _ in 0..10 {
                    let st = CanonicalState::new(rng.in_range(-5.0, 5.0), rng.in_range(-7.0, 7.0));
                    let (vx, vp, prod) = canonical::uncertainty_product(&st)?;
                    worst = worst
                        .max((vx - 0.5).abs())
                        .max((vp - 0.5).abs())
                        .max((prod - 0.25).abs());
                }
                Ok((worst, "(1/2, 1/2, 1/4) for 10 random labels".into()))
            },
        },
        Check {
            id: "canonical/completeness",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-6,
            run: || {
                let grid = PhaseGrid::default();
                let phi = canonical::wavefunction(&CanonicalState::new(0.0, 0.0));
                let psi = canonical::wavefunction(&CanonicalState::new(1.0, -0.5));
                let e1 = canonical::identity_resolution_check(&phi, &phi, &grid)?;
                let e2 = canonical::identity_resolution_check(&phi, &psi, &grid)?;
                Ok((
                    e1.max(e2),
                    "phase-space reconstruction of two inner products".into(),
                ))
            },
        },
        Check {
            id: "canonical/rest-energy-threshold-window",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let dev_at = |r: f64| -> Result<f64> {
                    let e = canonical::mean_energy_massive(0.0, r, EnergyMethod::Series)?;
                    Ok((e - 1.0) / e)
                };
                let d5 = dev_at(5.0)?;
                let mut residual = (0.005 - d5).max(d5 - 0.015).max(0.0);
                let mut prev = d5;
                for &r in &[6.0, 8.0, 12.0, 20.0] {
                    let d = dev_at(r)?;
                    residual = residual.max(d - prev);
                    prev = d;
                }
                Ok((
                    residual,
                    format!("deviation at r=5 is {d5:.6}, decreasing beyond"),
                ))
            },
        },
        Check {
            id: "canonical/massless-threshold-window",
            suite: Suite::Canonical,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let s0 = 2.0 * std::f64::consts::PI * 0.21;
                let dev_at = |s: f64| {
                    let e = canonical::mean_energy_massless(s);
                    (e - s) / e
                };
                let d = dev_at(s0);
                let mut residual = (d - 0.02f64).max(0.0);
                let mut prev = d;
                for &s in &[1.5, 2.0, 3.0, 5.0] {
                    let dd = dev_at(s);
                    residual = residual.max(dd - prev);
                    prev = dd;
                }
                Ok((residual, format!("deviation at sbar=2*pi*0.21 is {d:.6}")))
            },
        },
        // ---- lorentzian -------------------------------------------------
        Check {
            id: "lorentzian/norm",
            suite: Suite::Lorentzian,
            kind: TolKind::Abs,
            default_tol: 1e-9,
            run: || {
                let cfg = QuadratureConfig::default();
                let mut worst = 0.0f64;
                for (x, b, r) in [
                    (0.0, 0.0, 1.0),
                    (1.5, 0.6, 8.0),
                    (0.0, -0.8, 2.0),
                    (0.0, 0.999, 8.0),
                ] {
                    let s = LorentzianState::new(&Scale::massive(r)?, x, b)?;
                    let n = lorentzian::wavefunction(&s).norm_squared(&cfg)?;
                    worst = worst.max((n - 1.0).abs());
                }
                Ok((worst, "unit norm including the near-lightcone label".into()))
            },
        },
        Check {
            id: "lorentzian/eigen-residual",
            suite: Suite::Lorentzian,
            kind: TolKind::Abs,
            default_tol: 1e-6,
            run: || {
                let mut worst = 0.0f64;
                for &b in &[0.0, 0.4, 0.8] {
                    for &r in &[2.0, 8.0] {
                        let s = LorentzianState::new(&Scale::massive(r)?, 0.0, b)?;
                        let grid = lorentzian::default_grid(&s);
                        worst = worst.max(lorentzian::eigen_residual(&s, &grid)?);
                    }
                }
                Ok((
                    worst,
                    "complexifier eigenvalue residual on the default grids".into(),
                ))
            },
        },
        Check {
            id: "lorentzian/commutator-grid-oracle",
            suite: Suite::Lorentzian,
            kind: TolKind::Rel,
            default_tol: 1e-6,
            run: || {
                let mut worst = 0.0f64;
                for (b, r) in [(0.0, 1.0), (0.4, 3.0), (0.8, 8.0)] {
                    let s = LorentzianState::new(&Scale::massive(r)?, 0.0, b)?;
                    let grid = lorentzian::default_grid(&s);
                    let closed = lorentzian::commutator_average(b, r)?;
                    let numeric = lorentzian::oracle::commutator_average(&s, &grid)?;
                    worst = worst.max(rel_dev(closed, numeric));
                }
                Ok((worst, "2 Im <x v> on the grid vs the brace factor".into()))
            },
        },
        Check {
            id: "lorentzian/variances-grid-oracle",
            suite: Suite::Lorentzian,
            kind: TolKind::Rel,
            default_tol: 1e-6,
            run: || {
                let mut worst = 0.0f64;
                for (b, r) in [(0.0, 2.0), (0.4, 3.0), (0.8, 8.0)] {
                    let s = LorentzianState::new(&Scale::massive(r)?, 0.0, b)?;
                    let grid = lorentzian::default_grid(&s);
                    let (vx, vv, _) = lorentzian::variances_xv(b, r)?;
                    let (gx, gv) = lorentzian::oracle::variances_xv(&s, &grid)?;
                    worst = worst.max(rel_dev(vx, gx)).max(rel_dev(vv, gv));
                }
                Ok((
                    worst,
                    "position and velocity variances from the grid".into(),
                ))
            },
        },
        Check {
            id: "lorentzian/robertson-saturation",
            suite: Suite::Lorentzian,
            kind: TolKind::Rel,
            default_tol: 1e-10,
            run: || {
                let mut worst = 0.0f64;
                for &b in &[0.0, 0.4, 0.8] {
                    for &r in &[2.0, 8.0] {
                        let (_, _, prod) = lorentzian::variances_xv(b, r)?;
                        let comm = lorentzian::commutator_average(b, r)?;
                        worst = worst.max(rel_dev(prod, 0.25 * comm * comm * r * r));
                    }
                }
                Ok((worst, "(dx)^2 (dv)^2 = (1/4)|<[x,v]>|^2".into()))
            },
        },
        Check {
            id: "lorentzian/moments-vs-oracle-grid",
            suite: Suite::Lorentzian,
            kind: TolKind::Rel,
            default_tol: 1e-6,
            run: || {
                let mut worst = 0.0f64;
                for &r in &[1.0, 2.0, 8.0] {
                    let scale = Scale::massive(r)?;
                    for &b in &[0.0, 0.2, -0.2, 0.5, -0.5, 0.8, -0.8, 0.95, -0.95] {
                        let s = LorentzianState::new(&scale, 0.0, b)?;
                        worst = worst.max(mixed_dev(
                            lorentzian::mean_momentum(b, r)?,
                            lorentzian::oracle::mean_momentum(&s)?,
                        ));
                        worst = worst.max(rel_dev(
                            lorentzian::mean_energy(b, r)?,
                            lorentzian::oracle::mean_energy(&s)?,
                        ));
                        worst = worst.max(rel_dev(
                            lorentzian::momentum_variance(b, r)?,
                            lorentzian::oracle::momentum_variance(&s)?,
                        ));
                    }
                }
                Ok((worst, "27-point (beta, r) grid, three moments each".into()))
            },
        },
        Check {
            id: "lorentzian/overlap-properties",
            suite: Suite::Lorentzian,
            kind: TolKind::Abs,
            default_tol: 1e-8,
            run: || {
                let scale = Scale::massive(3.0)?;
                let a = LorentzianState::new(&scale, -0.7, 0.5)?;
                let b = LorentzianState::new(&scale, -0.7, -0.3)?;
                let c = LorentzianState::new(&scale, 1.2, 0.1)?;
                let mut worst =
                    (lorentzian::overlap(&a, &a)? - relcs_core::C64::new(1.0, 0.0)).norm();
                let oab = lorentzian::overlap(&a, &b)?;
                worst = worst.max((oab - lorentzian::overlap(&b, &a)?.conj()).norm());
                worst = worst.max((oab.norm() - 1.0).max(0.0));
                worst =
                    worst.max((oab.re - lorentzian::overlap_closed_form_real_slice(&a, &b)?).abs());
                worst = worst.max((lorentzian::overlap(&a, &c)?.norm() - 1.0).max(0.0));
                Ok((
                    worst,
                    "normalization, hermiticity, closed real slice".into(),
                ))
            },
        },
        Check {
            id: "lorentzian/nonrelativistic-limit",
            suite: Suite::Lorentzian,
            kind: TolKind::Abs,
            default_tol: 5e-3,
            run: || {
                let r: f64 = 30.0;
                let beta = 1.0 / r;
                let (vx, _, _) = lorentzian::variances_xv(beta, r)?;
                let vp = lorentzian::momentum_variance(beta, r)? * r * r;
                let worst = (vx - 0.5).abs().max((vp - 0.5).abs());
                Ok((worst, "variances approach 1/2 at r = 30".into()))
            },
        },
        Check {
            id: "lorentzian/dispersion-identity",
            suite: Suite::Lorentzian,
            kind: TolKind::Rel,
            default_tol: 1e-12,
            run: || {
                let mut worst = 0.0f64;
                for (b, r) in [(0.0, 1.0), (0.3, 2.0), (0.8, 8.0)] {
                    let e = lorentzian::mean_energy(b, r)?;
                    let p = lorentzian::mean_momentum(b, r)?;
                    let w = 2.0 * r * r * (1.0 - b * b).sqrt();
                    let k21 = bessel_k_scaled(2, w)? / bessel_k_scaled(1, w)?;
                    let lhs = (e + 0.5 / (r * r)) * (e + 0.5 / (r * r)) - p * p;
                    worst = worst.max(rel_dev(lhs, k21 * k21));
                }
                Ok((worst, "(E + 1/(2r^2))^2 - p^2 = (K2/K1)^2".into()))
            },
        },
        Check {
            id: "lorentzian/classical-averages-at-r8",
            suite: Suite::Lorentzian,
            kind: TolKind::Rel,
            default_tol: 0.015,
            run: || {
                let r = 8.0;
                let mut worst = 0.0f64;
                let mut lines = Vec::new();
                for &b in &[0.2, 0.5, 0.8] {
                    let s0 = (1.0f64 - b * b).sqrt();
                    let p = lorentzian::mean_momentum(b, r)?;
                    let dp = (p - b / s0).abs() / p;
                    let e = lorentzian::mean_energy(b, r)?;
                    let de = (e - 1.0 / s0).abs() / (1.0 / s0);
                    lines.push(format!("beta={b}: dp={dp:.5} de={de:.5}"));
                    worst = worst.max(dp).max(de);
                }
                Ok((worst, lines.join("; ")))
            },
        },
        Check {
            id: "lorentzian/figure-shapes",
            suite: Suite::Lorentzian,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let r = 8.0;
                let mut residual = 0.0f64;
                let mut prev_vp = -f64::INFINITY;
                let mut prev_prod = -f64::INFINITY;
                let mut beta = 0.0;
                while beta <= 0.9501 {
                    let (vx, _, _) = lorentzian::variances_xv(beta, r)?;
                    residual = residual.max(vx - 0.5); // localization beats canonical
                    let vp = lorentzian::momentum_variance(beta, r)? * r * r;
                    let prod = vx * vp;
                    residual = residual.max(prev_vp - vp).max(prev_prod - prod); // both grow
                    prev_vp = vp;
                    prev_prod = prod;
                    beta += 0.05;
                }
                Ok((
                    residual.max(0.0),
                    "var_x < 1/2; var_p and product grow with |beta|".into(),
                ))
            },
        },
        // ---- poincare ---------------------------------------------------
        Check {
            id: "poincare/norm-both-measures",
            suite: Suite::Poincare,
            kind: TolKind::Abs,
            default_tol: 1e-10,
            run: || {
                let cfg = QuadratureConfig::default();
                let mut worst = 0.0f64;
                for (x, p, r) in [(0.0, 0.0, 1.0), (0.0, 1.5, 8.0), (2.0, -0.7, 2.0)] {
                    let s = PoincareState::new(&Scale::massive(r)?, x, p)?;
                    worst = worst
                        .max((poincare::wavefunction(&s).norm_squared(&cfg)? - 1.0).abs())
                        .max((poincare::wavefunction_flat(&s).norm_squared(&cfg)? - 1.0).abs());
                }
                Ok((worst, "invariant and flat-image normalization".into()))
            },
        },
        Check {
            id: "poincare/label-round-trip",
            suite: Suite::Poincare,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let mut worst = 0.0f64;
                for (x, p, r) in [(0.0, 0.7, 8.0), (3.0, -2.0, 2.0), (-1.0, 0.0, 1.0)] {
                    let s = PoincareState::new(&Scale::massive(r)?, x, p)?;
                    worst = worst.max((poincare::mean_position(&s) - x).abs());
                    worst = worst.max((poincare::mean_momentum(&s)? - p).abs() / p.abs().max(1.0));
                }
                Ok((
                    worst,
                    "labels return as NW-position and momentum means".into(),
                ))
            },
        },
        Check {
            id: "poincare/effective-mass-properties",
            suite: Suite::Poincare,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let mut residual = 0.0f64;
                let mut prev = f64::INFINITY;
                for &r in &[0.5, 1.0, 2.0, 8.0, 50.0] {
                    let m = poincare::effective_mass(r)?;
                    residual = residual.max(1.0 - m); // must exceed 1
                    residual = residual.max(m - prev); // must decrease
                    prev = m;
                }
                residual = residual.max(poincare::effective_mass(50.0)? - 1.0 - 1e-4);
                Ok((residual.max(0.0), "m_eff > 1, decreasing, -> 1".into()))
            },
        },
        Check {
            id: "poincare/position-variance-nw-oracle",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-6,
            run: || {
                let cfg = QuadratureConfig::default();
                let mut worst = 0.0f64;
                for (p, r) in [(0.0, 8.0), (0.4, 2.0), (1.2, 2.0)] {
                    let s = PoincareState::new(&Scale::massive(r)?, 0.0, p)?;
                    let closed = poincare::position_variance(&s, &cfg)?;
                    let grid = poincare::default_grid(&s);
                    let oracle = poincare::oracle::position_variance_nw(&s, &grid)?;
                    worst = worst.max(rel_dev(closed, oracle));
                }
                Ok((worst, "NW variance integral vs the grid operator".into()))
            },
        },
        Check {
            id: "poincare/position-variance-xbar-independence",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-12,
            run: || {
                let cfg = QuadratureConfig::default();
                let scale = Scale::massive(2.0)?;
                let a = poincare::position_variance(&PoincareState::new(&scale, 0.0, 0.4)?, &cfg)?;
                let b = poincare::position_variance(&PoincareState::new(&scale, 5.0, 0.4)?, &cfg)?;
                Ok((rel_dev(a, b), "variance blind to the position label".into()))
            },
        },
        Check {
            id: "poincare/moments-vs-oracle-grid",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-6,
            run: || {
                let mut worst = 0.0f64;
                for &r in &[1.0, 2.0, 8.0] {
                    let scale = Scale::massive(r)?;
                    for &p in &[0.0, 0.7, -0.7, 1.5, 3.0] {
                        let s = PoincareState::new(&scale, 0.0, p)?;
                        worst = worst.max(mixed_dev(
                            poincare::mean_momentum(&s)?,
                            poincare::oracle::mean_momentum(&s)?,
                        ));
                        worst = worst.max(rel_dev(
                            poincare::mean_energy(&s),
                            poincare::oracle::mean_energy(&s)?,
                        ));
                        worst = worst.max(rel_dev(
                            poincare::momentum_variance(&s)?,
                            poincare::oracle::momentum_variance(&s)?,
                        ));
                    }
                }
                Ok((worst, "15-point (pbar, r) grid, three moments each".into()))
            },
        },
        Check {
            id: "poincare/velocity-vs-oracle",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-6,
            run: || {
                let cfg = QuadratureConfig::default();
                let mut worst = 0.0f64;
                for &r in &[1.0, 2.0, 8.0] {
                    let scale = Scale::massive(r)?;
                    for &p in &[0.5, 1.5, -2.0] {
                        let s = PoincareState::new(&scale, 0.0, p)?;
                        let v = poincare::mean_velocity(&s, &cfg)?;
                        let o = poincare::oracle::mean_velocity(&s)?;
                        worst = worst.max(rel_dev(v, o));
                    }
                }
                Ok((
                    worst,
                    "Macdonald-kernel integral vs moment quadrature".into(),
                ))
            },
        },
        Check {
            id: "poincare/measure-equivalence",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-8,
            run: || {
                let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
                let mut worst = 0.0f64;
                for (p, r) in [(0.0, 1.0), (0.7, 8.0), (1.5, 2.0)] {
                    let s = PoincareState::new(&Scale::massive(r)?, 0.8, p)?;
                    let inv = poincare::wavefunction(&s);
                    let flat = poincare::wavefunction_flat(&s);
                    for f in [
                        Box::new(move |u: f64| u / r) as Box<dyn Fn(f64) -> f64>,
                        Box::new(move |u: f64| u.hypot(r) / r),
                        Box::new(move |u: f64| u / u.hypot(r)),
                    ] {
                        let a = inv.moment(&f, &cfg)?;
                        let b = flat.moment(&f, &cfg)?;
                        worst = worst.max(mixed_dev(a, b));
                    }
                    let grid = poincare::default_grid(&s);
                    worst = worst.max(mixed_dev(
                        poincare::oracle::mean_position_nw(&s, &grid)?,
                        poincare::oracle::mean_position_flat(&s, &grid)?,
                    ));
                }
                Ok((
                    worst,
                    "flat image and invariant original agree on moments".into(),
                ))
            },
        },
        Check {
            id: "poincare/dispersion-effective-mass",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-10,
            run: || {
                let mut worst = 0.0f64;
                for &r in &[1.0, 2.0, 8.0] {
                    let m_eff = poincare::effective_mass(r)?;
                    let scale = Scale::massive(r)?;
                    for &p in &[0.0, 0.7, 2.0] {
                        let s = PoincareState::new(&scale, 0.0, p)?;
                        let e = poincare::mean_energy(&s);
                        let pm = poincare::mean_momentum(&s)?;
                        worst = worst.max(rel_dev((e * e - pm * pm).sqrt(), m_eff));
                    }
                }
                Ok((worst, "sqrt(E^2 - p^2) is the renormalized mass".into()))
            },
        },
        Check {
            id: "poincare/overlap-properties",
            suite: Suite::Poincare,
            kind: TolKind::Abs,
            default_tol: 1e-8,
            run: || {
                let scale = Scale::massive(2.0)?;
                let a = PoincareState::new(&scale, 0.0, 0.3)?;
                let b = PoincareState::new(&scale, 1.5, -0.4)?;
                let c = PoincareState::new(&scale, 0.0, 1.1)?;
                let mut worst =
                    (poincare::overlap(&a, &a)? - relcs_core::C64::new(1.0, 0.0)).norm();
                let oab = poincare::overlap(&a, &b)?;
                worst = worst.max((oab - poincare::overlap(&b, &a)?.conj()).norm());
                worst = worst.max((oab.norm() - 1.0).max(0.0));
                let oac = poincare::overlap(&a, &c)?;
                worst = worst
                    .max((oac.re - poincare::overlap_closed_form_real_slice(&a, &c)?).abs())
                    .max(oac.im.abs());
                Ok((
                    worst,
                    "normalization, hermiticity, closed real slice".into(),
                ))
            },
        },
        Check {
            id: "poincare/completeness",
            suite: Suite::Poincare,
            kind: TolKind::Abs,
            default_tol: 1e-5,
            run: || {
                let r = 2.0;
                let grid = completeness_grid(r);
                let phi = poincare::probe_family_state(r * r, 0.0, r)?;
                let psi = poincare::probe_family_state(1.3 * r * r, 0.6, r)?;
                let e1 = poincare::identity_resolution_check(&phi, &phi, &grid, r)?;
                let e2 = poincare::identity_resolution_check(&phi, &psi, &grid, r)?;
                Ok((e1.max(e2), "weighted phase-space reconstruction".into()))
            },
        },
        Check {
            id: "poincare/completeness-negative-control",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-4,
            run: || {
                let r = 2.0;
                let grid = completeness_grid(r);
                let rho = poincare::rho(r)?;
                let phi = poincare::probe_family_state(r * r, 0.0, r)?;
                let with = poincare::identity_reconstruction(&phi, &phi, &grid, r, rho * rho)?;
                let without = poincare::identity_reconstruction(&phi, &phi, &grid, r, 1.0)?;
                // dropping the weight must inflate the result by 1/rho^2
                let factor = without.reconstructed.re / with.reconstructed.re;
                Ok((
                    rel_dev(factor, 1.0 / (rho * rho)),
                    format!("inflation factor {factor:.8}"),
                ))
            },
        },
        Check {
            id: "poincare/section-factorization",
            suite: Suite::Poincare,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let mut rng = Rng(0x0123_4567_89ab_cdef);
                let mut worst = 0.0f64;
                for _ in 0..100 {
                    let k = rng.in_range(-5.0, 5.0);
                    let t = rng.in_range(-3.0, 3.0);
                    let x = rng.in_range(-3.0, 3.0);
                    let m = rng.in_range(0.3, 3.0);
                    worst = worst.max(group::section_factorization_check(k, [t, x], m)?);
                }
                Ok((worst, "100 random samples".into()))
            },
        },
        Check {
            id: "poincare/group-action-vs-closed-form",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-12,
            run: || {
                let section = group::BoostSection::new(1.7, 0.8, 0.0, 1.2)?;
                let kappa = 1.5;
                let mut worst = 0.0f64;
                for i in 0..101 {
                    let p = -5.0 + 0.1 * i as f64;
                    let gen = group::generate_from_section(&section, kappa, p)?;
                    let closed = group::closed_form_tau0(&section, kappa, p)?;
                    worst = worst.max((gen - closed).norm() / closed.norm());
                }
                Ok((worst, "tau = 0 action on a 101-point momentum grid".into()))
            },
        },
        Check {
            id: "poincare/kaiser-dictionary",
            suite: Suite::Poincare,
            kind: TolKind::Rel,
            default_tol: 1e-12,
            run: || {
                let m = 1.2;
                let kappa = 1.5;
                let section = group::BoostSection::new(0.9, -0.4, 0.0, m)?;
                let b = section.k / (kappa * m);
                let eta = 1.0 / kappa;
                let mut worst = 0.0f64;
                for i in 0..101 {
                    let p = -4.0 + 0.08 * i as f64;
                    let gen = group::generate_from_section(&section, kappa, p)?;
                    let kai = group::kaiser_amplitude(section.q, b, eta, m, p)?;
                    worst = worst.max((gen - kai).norm() / kai.norm());
                }
                Ok((
                    worst,
                    "analytic-signal form equals the generated state".into(),
                ))
            },
        },
        Check {
            id: "poincare/figure-shapes",
            suite: Suite::Poincare,
            kind: TolKind::Abs,
            default_tol: 1e-12,
            run: || {
                let r = 8.0;
                let cfg = QuadratureConfig::default();
                let scale = Scale::massive(r)?;
                let mut residual = 0.0f64;
                let mut central: Vec<f64> = Vec::new();
                for i in 0..41 {
                    let sbar = -10.0 + 0.5 * i as f64;
                    let s = PoincareState::new(&scale, 0.0, sbar / r)?;
                    let vx = poincare::position_variance(&s, &cfg)?;
                    residual = residual.max(vx - 0.5); // better localization
                    if sbar.abs() <= 5.0 {
                        let vp = poincare::momentum_variance(&s)? * r * r;
                        central.push(vx * vp);
                    }
                }
                let max = central.iter().cloned().fold(f64::MIN, f64::max);
                let min = central.iter().cloned().fold(f64::MAX, f64::min);
                let variation = (max - min) / max;
                // frozen regression bound for the central plateau, measured
                // from this implementation's own reference run
                residual = residual.max(variation - PLATEAU_VARIATION_BOUND);
                Ok((
                    residual.max(0.0),
                    format!("central variation {variation:.5} (bound {PLATEAU_VARIATION_BOUND})"),
                ))
            },
        },
    ]
}

/// Frozen regression bound on the relative variation of the Poincare
/// variance product over the central half of the r = 8 sweep.  The
/// reference run measures 0.009530 on the 401-point sweep (the product
/// stays within [0.25002, 0.25243]); the bound adds 10% headroom.
pub const PLATEAU_VARIATION_BOUND: f64 = 0.0105;

/// Reference grid for the Poincare completeness checks.  The kernel decays
/// only like `exp(-sqrt(2 g B1))` along the node momentum, so the momentum
/// window must reach `sigma p/hbar ~ 12` before truncation drops under the
/// acceptance gate (the reference run measures a 4e-7 reconstruction
/// deviation here, 25x inside the 1e-5 requirement).
pub fn completeness_grid(r: f64) -> PhaseGrid {
    PhaseGrid {
        x_center: 0.0,
        p_center: 0.0,
        x_half: 8.0,
        p_half: 12.0 / r,
        nx: 81,
        np: 121,
        tol: 1e-6,
    }
}

fn cosh_kernel_check(inverse_root: bool) -> Result<(f64, String)> {
    let mut worst = 0.0f64;
    let mut points = 0;
    for &m in &[1.5f64, 2.0, 4.0, 8.0] {
        for &frac in &[0.0, 0.4, 0.8] {
            for &v in &[0.5f64, 1.0, 2.0] {
                let rr = frac * m;
                let cfg = QuadratureConfig::default()
                    .with_rel_tol(1e-12)
                    .with_tail_cut(60.0 / (m - rr));
                let lhs = if inverse_root {
                    quad::integrate_half_line(
                        move |x| {
                            let root = x.hypot(v);
                            (-m * root).exp() / root * (rr * x).cosh()
                        },
                        0.0,
                        &cfg,
                    )?
                    .value
                } else {
                    quad::integrate_half_line(
                        move |x| (-m * x.hypot(v)).exp() * (rr * x).cosh(),
                        0.0,
                        &cfg,
                    )?
                    .value
                };
                let root = (m * m - rr * rr).sqrt();
                let arg = v * root;
                let rhs = if inverse_root {
                    bessel_k_scaled(0, arg)? * (-arg).exp()
                } else {
                    m * v / root * bessel_k_scaled(1, arg)? * (-arg).exp()
                };
                worst = worst.max(rel_dev(lhs, rhs));
                points += 1;
            }
        }
    }
    Ok((worst, format!("{points} grid points")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_overrides_only_loosen() {
        let t = TolOverrides {
            rel: Some(1e-6),
            abs: None,
        };
        assert_eq!(t.effective(TolKind::Rel, 1e-8), 1e-6);
        assert_eq!(t.effective(TolKind::Rel, 1e-3), 1e-3);
        assert_eq!(t.effective(TolKind::Abs, 1e-10), 1e-10);
    }

    #[test]
    fn specfun_suite_is_green() {
        let outcomes = run_suites(&[Suite::Specfun], &TolOverrides::default());
        for o in outcomes {
            let o = o.unwrap();
            assert!(
                o.pass,
                "{} residual {} > tol {} ({})",
                o.id, o.residual, o.tolerance, o.detail
            );
        }
    }

    #[test]
    fn xorshift_is_deterministic() {
        let mut a = Rng(42);
        let mut b = Rng(42);
        for _ in 0..10 {
            assert_eq!(a.next_f64(), b.next_f64());
        }
    }
}
