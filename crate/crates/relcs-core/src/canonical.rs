//! Canonical (Gaussian) coherent states in the flat momentum measure and
//! the averages of relativistic observables taken in them.
//!
//! States are labelled by `(xbar, pbar) = (x/sigma, sigma*p/hbar)`; the
//! complex label is `z = (xbar + i pbar)/sqrt(2)`.  The amplitude is the
//! displaced Gaussian
//!
//! ```text
//! psi(u) = pi^{-1/4} exp(-(u - pbar)^2 / 2 - i xbar u)
//! ```
//!
//! normalized under the flat measure.  The relativistic mean energy and
//! velocity exist both as a power series over Tricomi-U values and as a
//! direct Gaussian quadrature; the two routes are kept independent so each
//! can serve as the other's oracle.

use crate::error::{CoreError, Result};
use crate::math::{self, Kahan};
use crate::quad::{self, QuadratureConfig};
use crate::specfun;
use crate::wavefunction::{Measure, Method, MomentReport, MomentumWavefunction, PhaseGrid};
use crate::C64;

/// Half-width of the `u`-window that carries all but ~1e-40 of a canonical
/// state's probability mass.
const GAUSS_SPAN: f64 = 14.0;

/// Phase-space label of one canonical state (dimensionless).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalState {
    /// `x / sigma`
    pub xbar: f64,
    /// `sigma * p / hbar`
    pub pbar: f64,
}

impl CanonicalState {
    pub fn new(xbar: f64, pbar: f64) -> Self {
        Self { xbar, pbar }
    }

    /// Complex label `z = (xbar + i pbar)/sqrt(2)`.
    pub fn z(&self) -> C64 {
        C64::new(self.xbar, self.pbar) / math::SQRT_2
    }

    pub fn from_z(z: C64) -> Self {
        Self {
            xbar: math::SQRT_2 * z.re,
            pbar: math::SQRT_2 * z.im,
        }
    }
}

/// Normalized momentum-space amplitude of a canonical state,
/// `pi^{-1/4} e^{(z^2-|z|^2)/2} e^{-u^2/2 - i sqrt(2) z u}`.  The
/// label-dependent prefactor reduces to the phase `e^{i xbar pbar / 2}` on
/// top of the displaced Gaussian; keeping it makes the closed-form overlap
/// hold in phase, not merely in modulus.
pub fn wavefunction(state: &CanonicalState) -> MomentumWavefunction {
    let s = state.pbar;
    let x = state.xbar;
    let norm = math::powf(math::PI, -0.25);
    let glauber = 0.5 * x * s;
    MomentumWavefunction::new(Measure::Flat, s, GAUSS_SPAN, move |u| {
        let d = u - s;
        let mag = norm * math::exp(-0.5 * d * d);
        let phase = glauber - x * u;
        C64::new(mag * math::cos(phase), mag * math::sin(phase))
    })
}

/// Overlap `<z|w>` of two canonical states in closed form,
/// `exp[-(|z|^2 + |w|^2)/2 + z* w]`; its modulus squared is
/// `exp(-|z - w|^2)`.
pub fn overlap(a: &CanonicalState, b: &CanonicalState) -> C64 {
    let z = a.z();
    let w = b.z();
    (z.conj() * w - 0.5 * (z.norm_sqr() + w.norm_sqr())).exp()
}

/// Which evaluation route to use for the relativistic averages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyMethod {
    /// Power series over `U(+-1/2, -n, r^2)` terms.
    Series,
    /// Direct adaptive quadrature of the Gaussian-weighted integral.
    Quadrature,
}

fn quad_cfg() -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-15,
        max_subdivisions: 2000,
        tail_cut: Some(12.0),
    }
}

/// Mean relativistic energy `<sqrt(p^2 c^2 + m^2 c^4)>` in units of `m c^2`
/// for a massive particle.  `pbar` is `sigma*p/hbar`, `r = sigma/lambda_C`.
///
/// No automatic fallback between routes: the caller picks, and a series
/// that fails to converge is reported as such.
pub fn mean_energy_massive(pbar: f64, r: f64, method: EnergyMethod) -> Result<f64> {
    check_r(r)?;
    match method {
        EnergyMethod::Series => energy_series(pbar, r),
        EnergyMethod::Quadrature => {
            let s = pbar;
            let f = move |y: f64| math::exp(-y * y) * math::hypot(y + s, r);
            Ok(quad::integrate_line(f, &quad_cfg())?.value / (r * math::SQRT_PI))
        }
    }
}

/// Mean relativistic velocity `<c p/sqrt(p^2 + m^2 c^2)>` in units of `c`.
pub fn mean_velocity(pbar: f64, r: f64, method: EnergyMethod) -> Result<f64> {
    check_r(r)?;
    match method {
        EnergyMethod::Series => velocity_series(pbar, r),
        EnergyMethod::Quadrature => {
            let s = pbar;
            let f = move |y: f64| {
                let u = y + s;
                math::exp(-y * y) * u / math::hypot(u, r)
            };
            Ok(quad::integrate_line(f, &quad_cfg())?.value * math::FRAC_1_SQRT_PI)
        }
    }
}

/// Mean energy of a massless particle, `|s| erf(|s|) + e^{-s^2}/sqrt(pi)`
/// in units of `c hbar / sigma`, with `s = sigma*pbar/hbar`.  Even in `s`.
pub fn mean_energy_massless(sbar: f64) -> f64 {
    let s = sbar.abs();
    s * specfun::erf(s) + math::exp(-s * s) * math::FRAC_1_SQRT_PI
}

/// Brute-force quadrature route for the massless mean energy, split at the
/// integrand kink so both half-line pieces are smooth.
pub fn mean_energy_massless_oracle(sbar: f64) -> Result<f64> {
    let s = sbar;
    let cfg = QuadratureConfig::default().with_tail_cut(14.0 + s.abs());
    let plus = quad::integrate_half_line(move |u| u * math::exp(-(u - s) * (u - s)), 0.0, &cfg)?;
    let minus = quad::integrate_half_line(move |u| u * math::exp(-(u + s) * (u + s)), 0.0, &cfg)?;
    Ok((plus.value + minus.value) * math::FRAC_1_SQRT_PI)
}

// Series route limit: terms peak near n = pbar^2, so the working range of
// the plain f64 ladder ends where exp(pbar^2) overflows.
const SERIES_PBAR2_MAX: f64 = 500.0;
const SERIES_N_MAX: u32 = 400;
const SERIES_REL_STOP: f64 = 1e-12;

fn energy_series(pbar: f64, r: f64) -> Result<f64> {
    let s2 = pbar * pbar;
    if s2 > SERIES_PBAR2_MAX {
        return Err(CoreError::Domain {
            what: "series route overflows for |pbar| > ~22; use the quadrature route",
        });
    }
    let z = r * r;
    let mut term = 1.0f64; // pbar^{2n} / n!
    let mut sum = Kahan::new();
    for n in 0..=SERIES_N_MAX {
        let u = specfun::confluent_u(-0.5, -(n as f64), z)?;
        let contrib = term * u;
        sum.add(contrib);
        if contrib < SERIES_REL_STOP * sum.value() && (n as f64) >= s2 {
            return Ok(math::exp(-s2) * sum.value() / r);
        }
        term *= s2 / (n as f64 + 1.0);
    }
    Err(CoreError::Convergence {
        residual: SERIES_REL_STOP,
    })
}

fn velocity_series(pbar: f64, r: f64) -> Result<f64> {
    let s2 = pbar * pbar;
    if s2 > SERIES_PBAR2_MAX {
        return Err(CoreError::Domain {
            what: "series route overflows for |pbar| > ~22; use the quadrature route",
        });
    }
    let z = r * r;
    let mut term = pbar; // pbar^{2n+1} / n!
    let mut sum = Kahan::new();
    for n in 0..=SERIES_N_MAX {
        let u = specfun::confluent_u(0.5, -(n as f64), z)?;
        let contrib = term * u;
        sum.add(contrib);
        if contrib.abs() < SERIES_REL_STOP * sum.value().abs().max(1e-300) && (n as f64) >= s2 {
            return Ok(math::exp(-s2) * sum.value());
        }
        term *= s2 / (n as f64 + 1.0);
    }
    Err(CoreError::Convergence {
        residual: SERIES_REL_STOP,
    })
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(CoreError::Domain {
            what: "requires finite r = sigma/lambda_C > 0",
        });
    }
    Ok(())
}

/// Position and momentum variances of a canonical state by quadrature over
/// the amplitude, as `(var_x, var_p, product)` in `(sigma^2, (hbar/sigma)^2,
/// hbar^2)` units.  State-independently `(1/2, 1/2, 1/4)`; the quadrature
/// route is kept so the analytic values can be asserted against it.
pub fn uncertainty_product(state: &CanonicalState) -> Result<(f64, f64, f64)> {
    let s = state.pbar;
    let x = state.xbar;
    let cfg = quad_cfg();
    let density = move |y: f64| math::exp(-y * y) * math::FRAC_1_SQRT_PI;

    let norm = quad::integrate_line(density, &cfg)?.value;
    // position operator on the amplitude: i d/du psi = (xbar - i(u - pbar)) psi
    let mean_x = x * norm;
    let mean_x2 = quad::integrate_line(move |y| density(y) * (y * y + x * x), &cfg)?.value;
    let var_x = mean_x2 / norm - (mean_x / norm) * (mean_x / norm);

    let mean_p = quad::integrate_line(move |y| density(y) * (y + s), &cfg)?.value / norm;
    let mean_p2 = quad::integrate_line(move |y| density(y) * (y + s) * (y + s), &cfg)?.value / norm;
    let var_p = mean_p2 - mean_p * mean_p;

    Ok((var_x, var_p, var_x * var_p))
}

/// Reconstructs `<phi|psi>` through the overcompleteness relation
/// `(2 pi)^{-1} int dxbar dpbar <phi|xbar,pbar><xbar,pbar|psi>` on a
/// trapezoid grid and returns `|reconstructed - direct|`.
///
/// The discretization error is estimated by comparing against the embedded
/// half-density grid; if that estimate exceeds `grid.tol` the check aborts
/// with a grid-resolution error instead of returning a misleading number.
pub fn identity_resolution_check(
    phi: &MomentumWavefunction,
    psi: &MomentumWavefunction,
    grid: &PhaseGrid,
) -> Result<f64> {
    grid.validate()?;
    if phi.measure() != Measure::Flat || psi.measure() != Measure::Flat {
        return Err(CoreError::Domain {
            what: "canonical completeness check needs flat-measure states",
        });
    }
    let cfg = QuadratureConfig::default();
    let direct = phi.inner(psi, &cfg)?;

    let dx = 2.0 * grid.x_half / (grid.nx - 1) as f64;
    let dp = 2.0 * grid.p_half / (grid.np - 1) as f64;
    let mut full = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    for i in 0..grid.nx {
        let xi = grid.x_center - grid.x_half + dx * i as f64;
        let wxf = if i == 0 || i == grid.nx - 1 { 0.5 } else { 1.0 };
        for j in 0..grid.np {
            let pj = grid.p_center - grid.p_half + dp * j as f64;
            let wpf = if j == 0 || j == grid.np - 1 { 0.5 } else { 1.0 };
            let node = wavefunction(&CanonicalState::new(xi, pj));
            let a = phi.inner(&node, &cfg)?;
            let b = node.inner(psi, &cfg)?;
            let val = a * b;
            full += wxf * wpf * val;
            if i % 2 == 0 && j % 2 == 0 {
                let wxc = if i == 0 || i == grid.nx - 1 { 0.5 } else { 1.0 };
                let wpc = if j == 0 || j == grid.np - 1 { 0.5 } else { 1.0 };
                coarse += wxc * wpc * val;
            }
        }
    }
    let scale = 1.0 / (2.0 * math::PI);
    let fine = full * dx * dp * scale;
    let half = coarse * (2.0 * dx) * (2.0 * dp) * scale;
    let discretization = (fine - half).norm();
    if discretization > grid.tol {
        return Err(CoreError::GridResolution {
            estimate: discretization,
        });
    }
    Ok((fine - direct).norm())
}

/// Assembles the dimensionless moment summary of a massive canonical
/// state: `(E/mc^2, p/mc, v/c, 1/2, 1/2, 1/4)`.
pub fn moment_report(state: &CanonicalState, r: f64, method: EnergyMethod) -> Result<MomentReport> {
    check_r(r)?;
    let report = MomentReport {
        energy: mean_energy_massive(state.pbar, r, method)?,
        momentum: state.pbar / r,
        velocity: mean_velocity(state.pbar, r, method)?,
        var_x: 0.5,
        var_p: 0.5,
        product_xp: 0.25,
        method: match method {
            EnergyMethod::Series => Method::Series,
            EnergyMethod::Quadrature => Method::Oracle,
        },
    };
    report.validate()?;
    Ok(report)
}

/// Smallest `r = sigma/lambda_C` at which the rest-energy deviation
/// `(E - m c^2)/E` at `pbar = 0` drops to `target`, located by bisection to
/// 1e-3 resolution.  The deviation is monotone decreasing in `r`, so the
/// bracket is unambiguous.
pub fn min_r_for_energy_error(target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(CoreError::Domain {
            what: "target relative error must lie in (0, 1)",
        });
    }
    let dev = |r: f64| -> Result<f64> {
        let e = specfun::confluent_u(-0.5, 0.0, r * r)? / r;
        Ok((e - 1.0) / e)
    };
    let (mut lo, mut hi) = (0.5, 200.0);
    if dev(lo)? < target {
        return Ok(lo);
    }
    if dev(hi)? > target {
        return Err(CoreError::Domain {
            what: "target error not reached within r <= 200",
        });
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if dev(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
