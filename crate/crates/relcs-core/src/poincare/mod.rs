//! Poincare coherent states (Kaiser's analytic-signal construction) in the
//! Lorentz-invariant measure, labelled by points `(xbar, pbar)` of the
//! classical phase space.
//!
//! The amplitude, peak-scaled like everywhere else in this crate, is
//!
//! ```text
//! psi(u) = N exp[ r^2 - B0 sqrt(t^2+1) + B1 t - i xbar u ],   t = u/r,
//! B1 = r^2 pbar rho,   B0 = r^2 sqrt(1 + pbar^2 rho^2),
//! rho = K_0(2 r^2) / K_1(2 r^2),   N^2 = 1 / (2 r Ks_0(2 r^2)),
//! ```
//!
//! normalized under `<phi|psi> = int r/sqrt(u^2+r^2) phi* psi du`.  The
//! coefficients `(B0, B1)` invert the mean-momentum ratio by construction,
//! so a state built from `(xbar, pbar)` hands back exactly those labels as
//! its Newton–Wigner position and momentum expectations.
//!
//! [`group`] carries the group-theoretic side: the boost section of the
//! 1+1 Poincare group, the exponential probe, and the generation of these
//! states as `U[sigma_tau(q,k)] |psi_0>`.

pub mod group;

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::gridop::{self, UniformGrid};
use crate::math;
use crate::quad::{self, QuadratureConfig};
use crate::specfun::bessel_k_scaled;
use crate::wavefunction::{Measure, Method, MomentReport, MomentumWavefunction, PhaseGrid, Scale};
use crate::C64;

/// `rho(r) = K_0(2 r^2)/K_1(2 r^2)`, the renormalization ratio entering
/// every Poincare-state formula; lies strictly inside `(0, 1)`.
pub fn rho(r: f64) -> Result<f64> {
    check_r(r)?;
    let w = 2.0 * r * r;
    Ok(bessel_k_scaled(0, w)? / bessel_k_scaled(1, w)?)
}

/// Effective mass in units of `m`: `K_1(2 r^2)/K_0(2 r^2) = 1/rho(r)`.
/// Always above 1, approaching 1 from above as `r` grows.
pub fn effective_mass(r: f64) -> Result<f64> {
    Ok(1.0 / rho(r)?)
}

/// Phase-space label of one Poincare state (dimensionless:
/// `xbar = x/sigma`, `pbar = p/(m c)`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoincareState {
    xbar: f64,
    pbar: f64,
    r: f64,
    rho: f64,
}

impl PoincareState {
    pub fn new(scale: &Scale, xbar: f64, pbar: f64) -> Result<Self> {
        let r = scale.r().ok_or(CoreError::Domain {
            what: "poincare states are built on a unitary representation of mass m > 0",
        })?;
        if !xbar.is_finite() || !pbar.is_finite() {
            return Err(CoreError::Domain {
                what: "labels must be finite",
            });
        }
        Ok(Self {
            xbar,
            pbar,
            r,
            rho: rho(r)?,
        })
    }

    pub fn xbar(&self) -> f64 {
        self.xbar
    }

    pub fn pbar(&self) -> f64 {
        self.pbar
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Timelike pair `(B0, B1)` of the exponent; `B0^2 - B1^2 = r^4`
    /// exactly, the timelike condition.
    pub fn exponent_coefficients(&self) -> (f64, f64) {
        let b1 = self.r * self.r * self.pbar * self.rho;
        let b0 = self.r * self.r * math::hypot(self.pbar * self.rho, 1.0);
        (b0, b1)
    }

    /// Scaled normalization constant `N`.
    pub fn norm_constant(&self) -> f64 {
        let k0 = bessel_k_scaled(0, 2.0 * self.r * self.r).expect("r > 0");
        math::sqrt(1.0 / (2.0 * self.r * k0))
    }
}

/// Normalized amplitude under the invariant measure.
pub fn wavefunction(state: &PoincareState) -> MomentumWavefunction {
    let r = state.r;
    let x = state.xbar;
    let (b0, b1) = state.exponent_coefficients();
    let norm = state.norm_constant();
    let (center, span) = support_window(r, b0, b1);
    MomentumWavefunction::new(Measure::Invariant { r }, center, span, move |u| {
        let t = u / r;
        let mag = norm * math::exp(r * r - b0 * math::hypot(t, 1.0) + b1 * t);
        let phase = -x * u;
        C64::new(mag * math::cos(phase), mag * math::sin(phase))
    })
}

/// The same state mapped to the flat measure through the isomorphism
/// `psi_flat(u) = sqrt(r/sqrt(u^2+r^2)) psi(u)`; physical moments must not
/// care which route is taken.
pub fn wavefunction_flat(state: &PoincareState) -> MomentumWavefunction {
    let r = state.r;
    let x = state.xbar;
    let (b0, b1) = state.exponent_coefficients();
    let norm = state.norm_constant();
    let (center, span) = support_window(r, b0, b1);
    MomentumWavefunction::new(Measure::Flat, center, span, move |u| {
        let t = u / r;
        let mag = norm
            * math::sqrt(r / math::hypot(u, r))
            * math::exp(r * r - b0 * math::hypot(t, 1.0) + b1 * t);
        let phase = -x * u;
        C64::new(mag * math::cos(phase), mag * math::sin(phase))
    })
}

fn support_window(r: f64, b0: f64, b1: f64) -> (f64, f64) {
    let center = b1 / r; // u at the exponent maximum
    let sigma_u = b0 / (math::SQRT_2 * r * r);
    let rate_u = 2.0 * (b0 - b1.abs()) / r; // slowest linear tail of |psi|^2
    let span = 12.0 * sigma_u + 5.0 + 95.0 / rate_u;
    (center, span)
}

/// Mean Newton–Wigner position in `sigma` units; the label comes straight
/// back, which the grid oracle confirms non-trivially.
pub fn mean_position(state: &PoincareState) -> f64 {
    state.xbar
}

/// Mean momentum in `m c` units through the Macdonald ratio
/// `(B1/r^2) K_1(2 r^2)/K_0(2 r^2)`; the parametrization inverts this
/// ratio, so the round trip returns the label to machine precision.
pub fn mean_momentum(state: &PoincareState) -> Result<f64> {
    let w = 2.0 * state.r * state.r;
    let ratio = bessel_k_scaled(1, w)? / bessel_k_scaled(0, w)?;
    let (_, b1) = state.exponent_coefficients();
    Ok(b1 / (state.r * state.r) * ratio)
}

/// Position variance in `sigma^2` units, evaluated as the quadrature of
///
/// ```text
/// (2 r^2 Ks_0(2r^2))^{-1} int G(t)^2 e^{E(t)} dt/sqrt(t^2+1),
/// G(t) = B1 - B0 t/sqrt(t^2+1) - t/(2(t^2+1)),
/// E(t) = 2 (r^2 - B0 sqrt(t^2+1) + B1 t) <= 0.
/// ```
///
/// No simpler closed form exists for this one; the Newton–Wigner term
/// `t/(2(t^2+1))` breaks the Macdonald pattern.  Independent of `xbar`.
pub fn position_variance(state: &PoincareState, cfg: &QuadratureConfig) -> Result<f64> {
    let r = state.r;
    let (b0, b1) = state.exponent_coefficients();
    let k0 = bessel_k_scaled(0, 2.0 * r * r)?;
    let t_center = b1 / (r * r);
    let sigma_t = b0 / (math::SQRT_2 * r * r * r);
    let rate_t = 2.0 * (b0 - b1.abs());
    let span = 12.0 * sigma_t + 2.0 + 95.0 / rate_t;
    let f = move |t: f64| {
        let root = math::hypot(t, 1.0);
        let g = b1 - b0 * t / root - 0.5 * t / (t * t + 1.0);
        let e = 2.0 * (r * r - b0 * root + b1 * t);
        g * g * math::exp(e) / root
    };
    let c = QuadratureConfig {
        tail_cut: Some(span),
        ..*cfg
    };
    let shifted = move |y: f64| f(t_center + y);
    let integral = quad::integrate_line(shifted, &c)?.value;
    Ok(integral / (2.0 * r * r * k0))
}

/// Momentum variance in `(m c)^2` units:
/// `1/(2 r^2 rho) + pbar^2 (rho K_2(2r^2)/K_1(2r^2) - 1)`.
pub fn momentum_variance(state: &PoincareState) -> Result<f64> {
    let r = state.r;
    let w = 2.0 * r * r;
    let k21 = bessel_k_scaled(2, w)? / bessel_k_scaled(1, w)?;
    let p = state.pbar;
    Ok(0.5 / (r * r * state.rho) + p * p * (state.rho * k21 - 1.0))
}

/// Mean energy in `m c^2` units: `sqrt(pbar^2 + 1/rho^2)`.  Together with
/// the mean momentum this gives the effective mass `1/rho`, not `m`: the
/// averages do not satisfy the free dispersion relation.
pub fn mean_energy(state: &PoincareState) -> f64 {
    math::hypot(state.pbar, 1.0 / state.rho)
}

/// Mean velocity in units of `c`, from the semi-infinite Macdonald
/// integral
///
/// ```text
/// v = [2 r^2 pbar / K_1(2 r^2)] int_1^inf K_1(2 r^2 xi)
///     / sqrt(xi^2 + pbar^2 rho^2) dxi,
/// ```
///
/// carried in scaled form.  Odd in `pbar`, strictly subluminal.
pub fn mean_velocity(state: &PoincareState, cfg: &QuadratureConfig) -> Result<f64> {
    let r = state.r;
    let w = 2.0 * r * r;
    let k1 = bessel_k_scaled(1, w)?;
    let p_rho = state.pbar * state.rho;
    let integrand = move |x: f64| {
        let xi = 1.0 + x;
        let k = bessel_k_scaled(1, w * xi).unwrap_or(f64::NAN);
        k * math::exp(-w * x) / math::hypot(xi, p_rho)
    };
    let c = QuadratureConfig {
        tail_cut: Some(50.0 / w + 1.0),
        ..*cfg
    };
    let integral = quad::integrate_half_line(integrand, 0.0, &c)?;
    Ok(w * state.pbar / k1 * integral.value)
}

/// Overlap by quadrature under the invariant measure — the authoritative
/// route; the closed Macdonald form needs `K_0` at a complex argument as
/// soon as the position labels differ, and is cross-checked on its real
/// slice by [`overlap_closed_form_real_slice`].
pub fn overlap(a: &PoincareState, b: &PoincareState) -> Result<C64> {
    if (a.r - b.r).abs() > 1e-12 * a.r.max(1.0) {
        return Err(CoreError::Domain {
            what: "overlap requires a common scale r",
        });
    }
    let cfg = QuadratureConfig::default();
    wavefunction(a).inner(&wavefunction(b), &cfg)
}

/// Closed overlap on the equal-position slice:
/// `K_0( sqrt((B0+B0')^2 - (B1+B1')^2) ) / K_0(2 r^2)` in scaled form.
pub fn overlap_closed_form_real_slice(a: &PoincareState, b: &PoincareState) -> Result<f64> {
    if (a.xbar - b.xbar).abs() > 1e-12 {
        return Err(CoreError::Domain {
            what: "closed-form overlap is evaluated only on the equal-position slice",
        });
    }
    if (a.r - b.r).abs() > 1e-12 * a.r.max(1.0) {
        return Err(CoreError::Domain {
            what: "overlap requires a common scale r",
        });
    }
    let w = 2.0 * a.r * a.r;
    let (b0a, b1a) = a.exponent_coefficients();
    let (b0b, b1b) = b.exponent_coefficients();
    let s0 = b0a + b0b;
    let s1 = b1a + b1b;
    let arg = math::sqrt(s0 * s0 - s1 * s1);
    Ok(bessel_k_scaled(0, arg)? / bessel_k_scaled(0, w)? * math::exp(w - arg))
}

/// Exponential test state `N e^{-g (sqrt(t^2+1) - 1)} e^{-i xbar u}` of the
/// probe family, normalized under the invariant measure; `g > 0` plays the
/// role `r^2` does for the coherent states themselves (the `pbar = 0`
/// Poincare state is exactly `g = r^2`, `xbar = 0`).
pub fn probe_family_state(g: f64, xbar: f64, r: f64) -> Result<MomentumWavefunction> {
    check_r(r)?;
    if !(g > 0.0) {
        return Err(CoreError::Domain {
            what: "probe exponent g must be positive",
        });
    }
    let k0 = bessel_k_scaled(0, 2.0 * g)?;
    let norm = math::sqrt(1.0 / (2.0 * r * k0));
    let sigma_u = r / math::sqrt(g) * math::SQRT_2;
    let span = 12.0 * sigma_u + 5.0 + 95.0 * r / (2.0 * g);
    Ok(MomentumWavefunction::new(
        Measure::Invariant { r },
        0.0,
        span,
        move |u| {
            let t = u / r;
            let mag = norm * math::exp(-g * (math::hypot(t, 1.0) - 1.0));
            let phase = -xbar * u;
            C64::new(mag * math::cos(phase), mag * math::sin(phase))
        },
    ))
}

/// Closed-form inner product of two centered probe-family states,
/// `Ks_0(g1+g2)/sqrt(Ks_0(2 g1) Ks_0(2 g2))` — the cross-validation target
/// for the completeness machinery.
pub fn probe_family_inner(g1: f64, g2: f64) -> Result<f64> {
    let num = bessel_k_scaled(0, g1 + g2)?;
    let d1 = bessel_k_scaled(0, 2.0 * g1)?;
    let d2 = bessel_k_scaled(0, 2.0 * g2)?;
    Ok(num / math::sqrt(d1 * d2))
}

/// Result of one completeness reconstruction.
#[derive(Clone, Copy, Debug)]
pub struct Reconstruction {
    pub reconstructed: C64,
    pub direct: C64,
    pub discretization: f64,
}

/// Reconstructs `<phi|psi>` through the weighted resolution of the
/// identity, `weight * r/(2 pi) * int dxbar dpbar <phi|x,p><x,p|psi>`; the
/// correct weight is `rho(r)^2`.  Exposed with the weight explicit so the
/// negative control (weight omitted) can be exercised.
pub fn identity_reconstruction(
    phi: &MomentumWavefunction,
    psi: &MomentumWavefunction,
    grid: &PhaseGrid,
    r: f64,
    weight: f64,
) -> Result<Reconstruction> {
    grid.validate()?;
    check_r(r)?;
    let scale = Scale::massive(r)?;
    // per-node tolerance: thousands of inner products sum into one number,
    // so 1e-9 each keeps the total well under the 1e-6 grid gate
    let cfg = QuadratureConfig {
        rel_tol: 1e-9,
        abs_tol: 1e-13,
        ..QuadratureConfig::default()
    };
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
            let node = wavefunction(&PoincareState::new(&scale, xi, pj)?);
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
    let pref = weight * r / (2.0 * math::PI);
    let fine = full * dx * dp * pref;
    let half = coarse * (2.0 * dx) * (2.0 * dp) * pref;
    Ok(Reconstruction {
        reconstructed: fine,
        direct,
        discretization: (fine - half).norm(),
    })
}

/// `|reconstructed - direct|` with the correct `rho^2` weight, failing
/// with a grid-resolution error when the discretization estimate exceeds
/// `grid.tol`.
pub fn identity_resolution_check(
    phi: &MomentumWavefunction,
    psi: &MomentumWavefunction,
    grid: &PhaseGrid,
    r: f64,
) -> Result<f64> {
    let w = rho(r)?;
    let rec = identity_reconstruction(phi, psi, grid, r, w * w)?;
    if rec.discretization > grid.tol {
        return Err(CoreError::GridResolution {
            estimate: rec.discretization,
        });
    }
    Ok((rec.reconstructed - rec.direct).norm())
}

/// Assembles the dimensionless moment summary of a Poincare state.  The
/// position variance and velocity only exist in integral form, so the
/// record is tagged as oracle-produced.
pub fn moment_report(state: &PoincareState, cfg: &QuadratureConfig) -> Result<MomentReport> {
    let r = state.r;
    let var_x = position_variance(state, cfg)?;
    let var_p = momentum_variance(state)? * r * r;
    let report = MomentReport {
        energy: mean_energy(state),
        momentum: mean_momentum(state)?,
        velocity: mean_velocity(state, cfg)?,
        var_x,
        var_p,
        product_xp: var_x * var_p,
        method: Method::Oracle,
    };
    report.validate()?;
    Ok(report)
}

/// A grid for the Newton–Wigner finite-difference oracles on this state.
pub fn default_grid(state: &PoincareState) -> UniformGrid {
    let r = state.r;
    let (b0, b1) = state.exponent_coefficients();
    let (center, span) = support_window(r, b0, b1);
    let sigma_u = b0 / (math::SQRT_2 * r * r);
    let osc = 1.0 / state.xbar.abs().max(0.2);
    let h = (sigma_u / 24.0).min(osc / 8.0).min(0.08);
    let n = (2.0 * span / h) as usize + 1;
    UniformGrid {
        u0: center - span,
        h,
        n,
    }
}

/// Grid and moment oracles, independent of the closed forms.
pub mod oracle {
    use super::*;

    fn nw_apply(state: &PoincareState, grid: &UniformGrid) -> Result<(Vec<C64>, Vec<C64>, f64)> {
        let wf = wavefunction(state);
        let vals = gridop::sample(&wf, grid);
        let r = state.r;
        let weight = move |u: f64| r / math::hypot(u, r);
        let norm = gridop::inner_weighted(grid, weight, &vals, &vals).re;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(CoreError::GridResolution {
                estimate: (norm - 1.0).abs(),
            });
        }
        let d = gridop::derivative(&vals, grid.h);
        let i = C64::new(0.0, 1.0);
        let applied: Vec<C64> = (0..grid.n)
            .map(|k| {
                let u = grid.point(k);
                i * d[k] - 0.5 * i * (u / (u * u + r * r)) * vals[k]
            })
            .collect();
        Ok((vals, applied, norm))
    }

    /// `<x_NW>/sigma` by finite differences under the invariant measure.
    pub fn mean_position_nw(state: &PoincareState, grid: &UniformGrid) -> Result<f64> {
        let (vals, applied, norm) = nw_apply(state, grid)?;
        let r = state.r;
        let weight = move |u: f64| r / math::hypot(u, r);
        Ok(gridop::inner_weighted(grid, weight, &vals, &applied).re / norm)
    }

    /// `(dx_NW)^2/sigma^2` by finite differences: `||(x_NW - <x>) psi||^2`
    /// under the invariant measure (the operator is Hermitian there).
    pub fn position_variance_nw(state: &PoincareState, grid: &UniformGrid) -> Result<f64> {
        let (vals, applied, norm) = nw_apply(state, grid)?;
        let r = state.r;
        let weight = move |u: f64| r / math::hypot(u, r);
        let mean = gridop::inner_weighted(grid, weight, &vals, &applied).re / norm;
        let x2 = gridop::inner_weighted(grid, weight, &applied, &applied).re / norm;
        Ok(x2 - mean * mean)
    }

    /// Plain-position route on the flat-measure image of the state: the
    /// measure isomorphism must map Newton–Wigner to `i d/du`.
    pub fn mean_position_flat(state: &PoincareState, grid: &UniformGrid) -> Result<f64> {
        let wf = wavefunction_flat(state);
        let vals = gridop::sample(&wf, grid);
        let norm = gridop::inner_weighted(grid, |_| 1.0, &vals, &vals).re;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(CoreError::GridResolution {
                estimate: (norm - 1.0).abs(),
            });
        }
        let d = gridop::derivative(&vals, grid.h);
        let i = C64::new(0.0, 1.0);
        let applied: Vec<C64> = d.iter().map(|&dk| i * dk).collect();
        Ok(gridop::inner_weighted(grid, |_| 1.0, &vals, &applied).re / norm)
    }

    /// Flat-measure position variance via `||i psi'||^2`.
    pub fn position_variance_flat(state: &PoincareState, grid: &UniformGrid) -> Result<f64> {
        let wf = wavefunction_flat(state);
        let vals = gridop::sample(&wf, grid);
        let norm = gridop::inner_weighted(grid, |_| 1.0, &vals, &vals).re;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(CoreError::GridResolution {
                estimate: (norm - 1.0).abs(),
            });
        }
        let d = gridop::derivative(&vals, grid.h);
        let i = C64::new(0.0, 1.0);
        let applied: Vec<C64> = d.iter().map(|&dk| i * dk).collect();
        let mean = gridop::inner_weighted(grid, |_| 1.0, &vals, &applied).re / norm;
        let x2 = gridop::inner_weighted(grid, |_| 1.0, &applied, &applied).re / norm;
        Ok(x2 - mean * mean)
    }

    /// `<p>/(m c)` by moment quadrature (invariant measure).
    pub fn mean_momentum(state: &PoincareState) -> Result<f64> {
        let r = state.r;
        let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
        wavefunction(state).moment(|u| u / r, &cfg)
    }

    /// `(dp)^2/(m c)^2` by moment quadrature.
    pub fn momentum_variance(state: &PoincareState) -> Result<f64> {
        let r = state.r;
        let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
        let wf = wavefunction(state);
        let m1 = wf.moment(|u| u / r, &cfg)?;
        let m2 = wf.moment(|u| (u / r) * (u / r), &cfg)?;
        Ok(m2 - m1 * m1)
    }

    /// `<E>/(m c^2)` by moment quadrature.
    pub fn mean_energy(state: &PoincareState) -> Result<f64> {
        let r = state.r;
        let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
        wavefunction(state).moment(|u| math::hypot(u, r) / r, &cfg)
    }

    /// `<v>/c` by moment quadrature.
    pub fn mean_velocity(state: &PoincareState) -> Result<f64> {
        let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
        let r = state.r;
        wavefunction(state).moment(move |u| u / math::hypot(u, r), &cfg)
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(CoreError::Domain {
            what: "requires finite r = sigma/lambda_C > 0",
        });
    }
    Ok(())
}
