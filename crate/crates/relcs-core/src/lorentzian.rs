//! Lorentzian coherent states: eigenvectors of the relativistic
//! complexifier `b = (x/sigma + i (sigma/lambda_C) v/c)/sqrt(2)`, labelled
//! by mean position and mean velocity.
//!
//! The momentum amplitude is
//!
//! ```text
//! psi(u) = N exp[ -r^2 ( sqrt(t^2+1) - beta t - sqrt(1-beta^2) ) - i xbar u ],
//! t = u/r,
//! ```
//!
//! i.e. the boosted exponential profile with the peak value factored out so
//! nothing underflows at large `r`; the normalization then reads
//! `N^2 = sqrt(1-beta^2) / (2 r Ks_1(w))` with `w = 2 r^2 sqrt(1-beta^2)`
//! and `Ks_nu = e^x K_nu(x)` the scaled Macdonald function.  Every closed
//! form below consumes only such scaled values, so the exponentials cancel
//! analytically rather than numerically.
//!
//! The family exists for massive particles only: the labels are velocities,
//! and without a mass there is no classical velocity-momentum relation to
//! anchor them.  A massless scale is rejected at construction.

use crate::error::{CoreError, Result};
use crate::gridop::{self, UniformGrid};
use crate::math;
use crate::quad::{self, QuadratureConfig};
use crate::specfun::bessel_k_scaled;
use crate::wavefunction::{Measure, Method, MomentReport, MomentumWavefunction, Scale};
use crate::C64;

/// Label of one Lorentzian state: `(x/sigma, v/c)` plus the scale `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzianState {
    xbar: f64,
    beta: f64,
    r: f64,
}

impl LorentzianState {
    /// Builds a state, rejecting massless scales and superluminal labels.
    pub fn new(scale: &Scale, xbar: f64, beta: f64) -> Result<Self> {
        let r = scale.r().ok_or(CoreError::Domain {
            what: "lorentzian states require a massive scale (no classical velocity-momentum relation exists at m = 0)",
        })?;
        if !(beta.abs() < 1.0) {
            return Err(CoreError::Domain {
                what: "|v/c| must be < 1: a lorentzian label is a subluminal mean velocity",
            });
        }
        if !xbar.is_finite() {
            return Err(CoreError::Domain {
                what: "xbar must be finite",
            });
        }
        Ok(Self { xbar, beta, r })
    }

    pub fn xbar(&self) -> f64 {
        self.xbar
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Complex label `zeta = (xbar + i r beta)/sqrt(2)`.  The existence
    /// constraint `|zeta - zeta*| < sqrt(2) r` is the subluminal condition
    /// enforced at construction.
    pub fn zeta(&self) -> C64 {
        C64::new(self.xbar, self.r * self.beta) / math::SQRT_2
    }

    /// Scaled amplitude normalizer `N` (see the module docs).
    pub fn norm_constant(&self) -> f64 {
        let s0 = math::sqrt(1.0 - self.beta * self.beta);
        let w = 2.0 * self.r * self.r * s0;
        // bessel argument is positive for |beta| < 1, so unwrap is safe
        let k1 = bessel_k_scaled(1, w).expect("w > 0");
        math::sqrt(s0 / (2.0 * self.r * k1))
    }
}

fn brace_cfg(r: f64) -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-18,
        max_subdivisions: 2000,
        tail_cut: Some(50.0 / (2.0 * r * r) + 1.0),
    }
}

/// Normalized momentum-space amplitude of a Lorentzian state (flat measure).
pub fn wavefunction(state: &LorentzianState) -> MomentumWavefunction {
    let r = state.r;
    let beta = state.beta;
    let x = state.xbar;
    let s0 = math::sqrt(1.0 - beta * beta);
    let norm = state.norm_constant();
    let center = r * beta / s0;
    // Gaussian core width plus the exponential tail length down to ~1e-40
    let sigma_u = math::powf(s0, -1.5) / math::SQRT_2;
    let lambda = 2.0 * r * (1.0 - beta.abs());
    let span = 10.0 * sigma_u + 5.0 + 95.0 / lambda;
    MomentumWavefunction::new(Measure::Flat, center, span, move |u| {
        let t = u / r;
        let mag = norm * math::exp(-r * r * (math::hypot(t, 1.0) - beta * t - s0));
        let phase = -x * u;
        C64::new(mag * math::cos(phase), mag * math::sin(phase))
    })
}

/// The shared brace factor of the variance formulas:
///
/// ```text
/// Q = (1-beta^2) - [w / K_1(w)] * int_1^inf K_0(2 r^2 sqrt(xi^2 - beta^2)) dxi
/// ```
///
/// evaluated with scaled Macdonald functions, the exponential deficit
/// `exp(w - 2 r^2 sqrt(xi^2 - beta^2))` carried explicitly in the integrand.
fn brace_factor(beta: f64, r: f64) -> Result<f64> {
    check_label(beta, r)?;
    let b2 = beta * beta;
    let s0 = math::sqrt(1.0 - b2);
    let r2 = 2.0 * r * r;
    let w = r2 * s0;
    let k1 = bessel_k_scaled(1, w)?;
    let integrand = move |x: f64| {
        let xi = 1.0 + x;
        let a = math::sqrt(xi * xi - b2);
        let k0 = bessel_k_scaled(0, r2 * a).unwrap_or(f64::NAN);
        k0 * math::exp(-r2 * (a - s0))
    };
    let tail = quad::integrate_half_line(integrand, 0.0, &brace_cfg(r))?;
    Ok((1.0 - b2) - (w / k1) * tail.value)
}

/// `|<[x, v]>|` in units `sigma^2 c / lambda_C`, i.e. the dimensionless
/// value `2 Q`.  Positive for every valid label.
pub fn commutator_average(beta: f64, r: f64) -> Result<f64> {
    Ok(2.0 * brace_factor(beta, r)?)
}

/// Position and velocity variances `((dx)^2/sigma^2, (dv)^2/c^2)` and their
/// product, all sharing the brace factor; the product saturates the
/// Robertson bound `(1/4)|<[x,v]>|^2` identically.
pub fn variances_xv(beta: f64, r: f64) -> Result<(f64, f64, f64)> {
    let q = brace_factor(beta, r)?;
    let var_x = r * r * q;
    let var_v = q;
    Ok((var_x, var_v, var_x * var_v))
}

/// Mean momentum in units `m c`: `beta/sqrt(1-beta^2) * K_2(w)/K_1(w)`.
/// Odd in `beta`.
pub fn mean_momentum(beta: f64, r: f64) -> Result<f64> {
    check_label(beta, r)?;
    let s0 = math::sqrt(1.0 - beta * beta);
    let w = 2.0 * r * r * s0;
    Ok(beta / s0 * kratio21(w)?)
}

/// Mean energy in units `m c^2`:
/// `K_2(w)/K_1(w) / sqrt(1-beta^2) - 1/(2 r^2)`.  Even in `beta`.
pub fn mean_energy(beta: f64, r: f64) -> Result<f64> {
    check_label(beta, r)?;
    let s0 = math::sqrt(1.0 - beta * beta);
    let w = 2.0 * r * r * s0;
    Ok(kratio21(w)? / s0 - 0.5 / (r * r))
}

/// Momentum variance in units `(m c)^2`.
pub fn momentum_variance(beta: f64, r: f64) -> Result<f64> {
    check_label(beta, r)?;
    let b2 = beta * beta;
    let s0 = math::sqrt(1.0 - b2);
    let w = 2.0 * r * r * s0;
    let k21 = kratio21(w)?;
    let drift = b2 / (1.0 - b2) * (1.0 - k21 * k21);
    let spread = 0.5 / (r * r) * (1.0 + 3.0 * b2) / (s0 * s0 * s0) * k21;
    Ok(drift + spread)
}

fn kratio21(w: f64) -> Result<f64> {
    Ok(bessel_k_scaled(2, w)? / bessel_k_scaled(1, w)?)
}

fn check_label(beta: f64, r: f64) -> Result<()> {
    if !(beta.abs() < 1.0) {
        return Err(CoreError::Domain {
            what: "|v/c| must be < 1: a lorentzian label is a subluminal mean velocity",
        });
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(CoreError::Domain {
            what: "requires finite r = sigma/lambda_C > 0",
        });
    }
    Ok(())
}

/// Overlap `<zeta_a|zeta_b>` by quadrature of the two explicit amplitudes.
///
/// This route is total on valid labels.  The closed Macdonald-function form
/// needs `K_1` at a complex argument as soon as the position labels differ;
/// rather than growing a complex Bessel evaluator, the integral is the
/// authoritative value and [`overlap_closed_form_real_slice`] cross-checks
/// the formula where its argument stays real.
pub fn overlap(a: &LorentzianState, b: &LorentzianState) -> Result<C64> {
    if (a.r - b.r).abs() > 1e-12 * a.r.max(1.0) {
        return Err(CoreError::Domain {
            what: "overlap requires a common scale r",
        });
    }
    let cfg = QuadratureConfig::default();
    wavefunction(a).inner(&wavefunction(b), &cfg)
}

/// Closed form of the overlap on the equal-position slice, where the
/// square-root argument is real: with `s = sqrt(1 - ((beta_a+beta_b)/2)^2)`,
///
/// ```text
/// <a|b> = sqrt( sqrt(1-beta_a^2) sqrt(1-beta_b^2) ) K_1(2 r^2 s)
///         / ( s sqrt(K_1(w_a) K_1(w_b)) )
/// ```
///
/// carried in scaled form with the explicit exponential deficit.  Returns a
/// domain error off the slice or when the constraint `|beta_a + beta_b| < 2`
/// fails (impossible for valid states).
pub fn overlap_closed_form_real_slice(a: &LorentzianState, b: &LorentzianState) -> Result<f64> {
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
    let bsum = 0.5 * (a.beta + b.beta);
    if !(bsum.abs() < 1.0) {
        return Err(CoreError::Domain {
            what: "|beta_a + beta_b| must be < 2",
        });
    }
    let r2 = 2.0 * a.r * a.r;
    let s = math::sqrt(1.0 - bsum * bsum);
    let sa = math::sqrt(1.0 - a.beta * a.beta);
    let sb = math::sqrt(1.0 - b.beta * b.beta);
    let k_arg = bessel_k_scaled(1, r2 * s)?;
    let ka = bessel_k_scaled(1, r2 * sa)?;
    let kb = bessel_k_scaled(1, r2 * sb)?;
    // exp(w_a/2 + w_b/2 - arg) <= 1 by concavity of sqrt(1-x^2)
    let deficit = math::exp(0.5 * r2 * (sa + sb) - r2 * s);
    Ok(math::sqrt(sa * sb) * k_arg / (s * math::sqrt(ka * kb)) * deficit)
}

/// Assembles the dimensionless moment summary of a Lorentzian state; the
/// momentum variance converts to `(sigma dp/hbar)^2` so the product sits in
/// `hbar^2` with the Heisenberg floor at 1/4.
pub fn moment_report(state: &LorentzianState) -> Result<MomentReport> {
    let (beta, r) = (state.beta, state.r);
    let (var_x, _, _) = variances_xv(beta, r)?;
    let var_p = momentum_variance(beta, r)? * r * r;
    let report = MomentReport {
        energy: mean_energy(beta, r)?,
        momentum: mean_momentum(beta, r)?,
        velocity: beta,
        var_x,
        var_p,
        product_xp: var_x * var_p,
        method: Method::ClosedForm,
    };
    report.validate()?;
    Ok(report)
}

/// A grid wide and fine enough for the finite-difference operators on this
/// state: covers the amplitude down to ~1e-40 of its peak and resolves both
/// the envelope and the `exp(-i xbar u)` phase.
pub fn default_grid(state: &LorentzianState) -> UniformGrid {
    let s0 = math::sqrt(1.0 - state.beta * state.beta);
    let sigma_u = math::powf(s0, -1.5) / math::SQRT_2;
    let lambda = 2.0 * state.r * (1.0 - state.beta.abs());
    let center = state.r * state.beta / s0;
    let span = 10.0 * sigma_u + 5.0 + 95.0 / lambda;
    let osc = 1.0 / state.xbar.abs().max(0.2);
    let h = (sigma_u / 24.0).min(osc / 8.0).min(0.08);
    let n = (2.0 * span / h) as usize + 1;
    UniformGrid {
        u0: center - span,
        h,
        n,
    }
}

/// L2 residual of the defining eigenvalue problem,
/// `|| b psi - zeta psi || / || psi ||`, with `x = i d/du` applied by
/// 8th-order finite differences on the grid.  Errors out if the grid fails
/// to resolve the state (discrete norm off unity).
pub fn eigen_residual(state: &LorentzianState, grid: &UniformGrid) -> Result<f64> {
    let wf = wavefunction(state);
    let vals = gridop::sample(&wf, grid);
    let norm = gridop::inner_weighted(grid, |_| 1.0, &vals, &vals).re;
    if (norm - 1.0).abs() > 1e-6 {
        return Err(CoreError::GridResolution {
            estimate: (norm - 1.0).abs(),
        });
    }
    let d = gridop::derivative(&vals, grid.h);
    let zeta = state.zeta();
    let r = state.r;
    let i_over_sqrt2 = C64::new(0.0, 1.0 / math::SQRT_2);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 4..grid.n.saturating_sub(4) {
        let u = grid.point(i);
        let v = r * u / math::hypot(u, r);
        let applied = i_over_sqrt2 * (d[i] + v * vals[i]);
        num += (applied - zeta * vals[i]).norm_sqr();
        den += vals[i].norm_sqr();
    }
    Ok(math::sqrt(num / den))
}

/// Grid-operator and moment-quadrature oracles, independent of the closed
/// Macdonald-function forms they confirm.
pub mod oracle {
    use super::*;

    /// `<p>/(m c)` by direct moment quadrature over the amplitude.
    pub fn mean_momentum(state: &LorentzianState) -> Result<f64> {
        let r = state.r;
        let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
        wavefunction(state).moment(|u| u / r, &cfg)
    }

    /// `<sqrt(p^2 c^2 + m^2 c^4)>/(m c^2)` by moment quadrature.
    pub fn mean_energy(state: &LorentzianState) -> Result<f64> {
        let r = state.r;
        let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
        wavefunction(state).moment(|u| math::hypot(u, r) / r, &cfg)
    }

    /// `(dp)^2/(m c)^2` by moment quadrature.
    pub fn momentum_variance(state: &LorentzianState) -> Result<f64> {
        let r = state.r;
        let cfg = QuadratureConfig::default().with_rel_tol(1e-11);
        let wf = wavefunction(state);
        let m1 = wf.moment(|u| u / r, &cfg)?;
        let m2 = wf.moment(|u| (u / r) * (u / r), &cfg)?;
        Ok(m2 - m1 * m1)
    }

    /// `|<[x, v]>| lambda_C/(sigma^2 c)` from the grid as `2 |Im <x v>|`,
    /// with `x` applied by finite differences.
    pub fn commutator_average(state: &LorentzianState, grid: &UniformGrid) -> Result<f64> {
        let wf = wavefunction(state);
        let vals = gridop::sample(&wf, grid);
        let norm = gridop::inner_weighted(grid, |_| 1.0, &vals, &vals).re;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(CoreError::GridResolution {
                estimate: (norm - 1.0).abs(),
            });
        }
        let r = state.r;
        let v_vals: alloc::vec::Vec<C64> = (0..grid.n)
            .map(|i| {
                let u = grid.point(i);
                vals[i] * (u / math::hypot(u, r))
            })
            .collect();
        let dv = gridop::derivative(&v_vals, grid.h);
        // <x v> / (sigma c) with x/sigma = i d/du and the extra r from v/c
        let m = gridop::inner_weighted(grid, |_| 1.0, &vals, &dv) * C64::new(0.0, 1.0);
        Ok(2.0 * m.im.abs() / (state.r * norm))
    }

    /// `((dx)^2/sigma^2, (dv)^2/c^2)` from the grid, position via finite
    /// differences, velocity as a multiplication operator.
    pub fn variances_xv(state: &LorentzianState, grid: &UniformGrid) -> Result<(f64, f64)> {
        let wf = wavefunction(state);
        let vals = gridop::sample(&wf, grid);
        let norm = gridop::inner_weighted(grid, |_| 1.0, &vals, &vals).re;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(CoreError::GridResolution {
                estimate: (norm - 1.0).abs(),
            });
        }
        let d = gridop::derivative(&vals, grid.h);
        let mean_x = (gridop::inner_weighted(grid, |_| 1.0, &vals, &d) * C64::new(0.0, 1.0)).re;
        let x2 = gridop::inner_weighted(grid, |_| 1.0, &d, &d).re;
        let var_x = x2 / norm - (mean_x / norm) * (mean_x / norm);

        let r = state.r;
        let mut v1 = 0.0;
        let mut v2 = 0.0;
        for i in 0..grid.n {
            let u = grid.point(i);
            let v = u / math::hypot(u, r);
            let wgt = if i == 0 || i == grid.n - 1 { 0.5 } else { 1.0 };
            let rho = wgt * vals[i].norm_sqr() * grid.h;
            v1 += rho * v;
            v2 += rho * v * v;
        }
        let var_v = v2 / norm - (v1 / norm) * (v1 / norm);
        Ok((var_x, var_v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(xbar: f64, beta: f64, r: f64) -> LorentzianState {
        LorentzianState::new(&Scale::massive(r).unwrap(), xbar, beta).unwrap()
    }

    #[test]
    fn massless_scale_is_rejected() {
        assert!(matches!(
            LorentzianState::new(&Scale::Massless, 0.0, 0.5),
            Err(CoreError::Domain { .. })
        ));
    }

    #[test]
    fn superluminal_labels_are_rejected() {
        let scale = Scale::massive(8.0).unwrap();
        assert!(LorentzianState::new(&scale, 0.0, 1.0).is_err());
        assert!(LorentzianState::new(&scale, 0.0, -1.2).is_err());
        assert!(LorentzianState::new(&scale, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn zeta_constraint_is_the_subluminal_condition() {
        let s = state(1.0, 0.7, 3.0);
        let z = s.zeta();
        assert!((z - z.conj()).norm() < math::SQRT_2 * s.r());
    }

    #[test]
    fn norm_constant_at_rest_is_the_k1_value() {
        // beta = 0, r = 1: N^2 = 1/(2 Ks_1(2)), the scaled image of
        // C^2 = lambda_C/(2 K_1(2))
        let s = state(0.0, 0.0, 1.0);
        let n2 = s.norm_constant() * s.norm_constant();
        let expect = 1.0 / (2.0 * bessel_k_scaled(1, 2.0).unwrap());
        assert!((n2 - expect).abs() < 1e-15 * expect);
    }

    #[test]
    fn wavefunction_is_normalized() {
        let cfg = QuadratureConfig::default();
        for (x, b, r) in [
            (0.0, 0.0, 1.0),
            (1.5, 0.6, 8.0),
            (0.0, -0.8, 2.0),
            (0.0, 0.999, 8.0),
        ] {
            let wf = wavefunction(&state(x, b, r));
            let n = wf.norm_squared(&cfg).unwrap();
            assert!((n - 1.0).abs() < 1e-9, "norm {n} at beta={b}, r={r}");
        }
    }

    #[test]
    fn zero_velocity_amplitude_is_real_up_to_the_position_phase() {
        let s = state(1.2, 0.0, 2.0);
        let wf = wavefunction(&s);
        for &u in &[-1.0, 0.3, 2.0] {
            let v = wf.eval(u);
            // strip exp(-i xbar u): remainder must be real positive
            let phase = C64::new(math::cos(s.xbar() * u), math::sin(s.xbar() * u));
            let stripped = v * phase;
            assert!(stripped.im.abs() < 1e-15 * stripped.re);
        }
    }

    #[test]
    fn eigen_residual_is_small_on_the_default_grid() {
        for (x, b, r) in [(0.0, 0.0, 2.0), (1.5, 0.6, 8.0)] {
            let s = state(x, b, r);
            let grid = default_grid(&s);
            let res = eigen_residual(&s, &grid).unwrap();
            assert!(res < 1e-6, "residual {res} at ({x},{b},{r})");
        }
    }

    #[test]
    fn eigen_residual_converges_with_refinement() {
        let s = state(0.5, 0.4, 2.0);
        // deliberately coarse start, still resolving the norm
        let coarse = UniformGrid {
            u0: -14.0,
            h: 0.4,
            n: 76,
        };
        let fine = UniformGrid {
            u0: -14.0,
            h: 0.2,
            n: 151,
        };
        let rc = eigen_residual(&s, &coarse).unwrap();
        let rf = eigen_residual(&s, &fine).unwrap();
        assert!(rc / rf >= 4.0, "refinement gain too small: {rc} -> {rf}");
    }

    #[test]
    fn brace_factor_is_positive_and_matches_the_canonical_limit() {
        // r -> large at beta = 0: r^2 Q -> 1/2
        let q = brace_factor(0.0, 30.0).unwrap();
        assert!((30.0 * 30.0 * q - 0.5).abs() < 5e-3);
        for (b, r) in [(0.0, 1.0), (0.5, 2.0), (0.95, 8.0)] {
            assert!(commutator_average(b, r).unwrap() > 0.0);
        }
    }

    #[test]
    fn robertson_bound_is_saturated_identically() {
        for (b, r) in [(0.0, 1.0), (0.4, 3.0), (0.8, 8.0)] {
            let (vx, vv, prod) = variances_xv(b, r).unwrap();
            let comm = commutator_average(b, r).unwrap();
            let bound = 0.25 * comm * comm * r * r;
            assert!((prod - bound).abs() <= 1e-10 * bound, "b={b} r={r}");
            assert!(vx > 0.0 && vv > 0.0);
        }
    }

    #[test]
    fn grid_oracles_confirm_commutator_and_variances() {
        let s = state(0.0, 0.4, 3.0);
        let grid = default_grid(&s);
        let closed = commutator_average(0.4, 3.0).unwrap();
        let numeric = oracle::commutator_average(&s, &grid).unwrap();
        assert!(
            (closed - numeric).abs() / closed < 1e-6,
            "{closed} vs {numeric}"
        );

        let (vx, vv, _) = variances_xv(0.4, 3.0).unwrap();
        let (gx, gv) = oracle::variances_xv(&s, &grid).unwrap();
        assert!((vx - gx).abs() / vx < 1e-6, "var_x {vx} vs {gx}");
        assert!((vv - gv).abs() / vv < 1e-6, "var_v {vv} vs {gv}");
    }

    #[test]
    fn momentum_is_odd_and_tracks_the_classical_value_at_large_r() {
        assert_eq!(mean_momentum(0.0, 8.0).unwrap(), 0.0);
        let p = mean_momentum(0.5, 8.0).unwrap();
        let pneg = mean_momentum(-0.5, 8.0).unwrap();
        assert!((p + pneg).abs() < 1e-14);
        let classical = 0.5 / math::sqrt(0.75);
        assert!((p - classical).abs() / classical < 0.015, "p = {p}");
    }

    #[test]
    fn energy_reduces_to_the_scaled_bessel_ratio_at_rest() {
        let e = mean_energy(0.0, 8.0).unwrap();
        let expect =
            bessel_k_scaled(2, 128.0).unwrap() / bessel_k_scaled(1, 128.0).unwrap() - 1.0 / 128.0;
        assert!((e - expect).abs() < 1e-14);
        assert!(e > 1.0 && e < 1.01, "e = {e}");
        // even in beta
        let e1 = mean_energy(0.6, 8.0).unwrap();
        let e2 = mean_energy(-0.6, 8.0).unwrap();
        assert!((e1 - e2).abs() < 1e-14);
        assert!((e1 - 1.25).abs() / 1.25 < 0.015);
    }

    #[test]
    fn momentum_variance_at_rest_is_the_pure_spread_term() {
        for &r in &[1.0, 2.0, 8.0] {
            let v = momentum_variance(0.0, r).unwrap();
            let w0 = 2.0 * r * r;
            let expect =
                0.5 / (r * r) * bessel_k_scaled(2, w0).unwrap() / bessel_k_scaled(1, w0).unwrap();
            assert!((v - expect).abs() < 1e-14 * expect.abs().max(1.0));
            assert!(v > 0.0);
        }
    }

    #[test]
    fn momentum_variance_grows_with_speed() {
        let r = 8.0;
        let mut prev = momentum_variance(0.0, r).unwrap();
        for &b in &[0.2, 0.4, 0.6, 0.8, 0.9] {
            let v = momentum_variance(b, r).unwrap();
            assert!(v > prev, "not monotone at beta={b}");
            prev = v;
        }
    }

    #[test]
    fn dispersion_identity_links_energy_and_momentum() {
        // (E + 1/(2r^2))^2 - p^2 = (K2/K1)^2 exactly
        for (b, r) in [(0.3, 2.0), (0.8, 8.0), (0.0, 1.0)] {
            let e = mean_energy(b, r).unwrap();
            let p = mean_momentum(b, r).unwrap();
            let w = 2.0 * r * r * math::sqrt(1.0 - b * b);
            let k21 = bessel_k_scaled(2, w).unwrap() / bessel_k_scaled(1, w).unwrap();
            let lhs = (e + 0.5 / (r * r)) * (e + 0.5 / (r * r)) - p * p;
            assert!((lhs - k21 * k21).abs() < 1e-12 * k21 * k21);
        }
    }

    #[test]
    fn closed_moments_match_the_quadrature_oracles() {
        for (b, r) in [(0.5, 2.0), (-0.8, 8.0), (0.2, 1.0)] {
            let s = state(0.0, b, r);
            let p = mean_momentum(b, r).unwrap();
            let po = oracle::mean_momentum(&s).unwrap();
            assert!((p - po).abs() / po.abs().max(1e-6) < 1e-8, "p: {p} vs {po}");
            let e = mean_energy(b, r).unwrap();
            let eo = oracle::mean_energy(&s).unwrap();
            assert!((e - eo).abs() / eo < 1e-8, "e: {e} vs {eo}");
            let v = momentum_variance(b, r).unwrap();
            let vo = oracle::momentum_variance(&s).unwrap();
            assert!((v - vo).abs() / vo < 1e-7, "varp: {v} vs {vo}");
        }
    }

    #[test]
    fn overlap_normalization_and_hermiticity() {
        let a = state(0.0, 0.3, 2.0);
        let b = state(1.0, -0.2, 2.0);
        let oaa = overlap(&a, &a).unwrap();
        assert!((oaa - C64::new(1.0, 0.0)).norm() < 1e-9);
        let oab = overlap(&a, &b).unwrap();
        let oba = overlap(&b, &a).unwrap();
        assert!((oab - oba.conj()).norm() < 1e-9);
        assert!(oab.norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn overlap_modulus_decreases_with_separation() {
        let a = state(0.0, 0.0, 2.0);
        let mut prev = 1.0;
        for &d in &[0.5, 1.0, 2.0, 4.0] {
            let b = state(d, 0.0, 2.0);
            let o = overlap(&a, &b).unwrap().norm();
            assert!(o < prev, "overlap not decreasing at d={d}");
            prev = o;
        }
    }

    #[test]
    fn closed_form_overlap_agrees_on_the_real_slice() {
        for (ba, bb, r) in [(0.0, 0.5, 2.0), (0.3, -0.6, 3.0), (0.7, 0.7, 8.0)] {
            let a = state(0.4, ba, r);
            let b = state(0.4, bb, r);
            let numeric = overlap(&a, &b).unwrap();
            let closed = overlap_closed_form_real_slice(&a, &b).unwrap();
            assert!(numeric.im.abs() < 1e-9);
            assert!(
                (numeric.re - closed).abs() < 1e-8 * closed.abs().max(1e-3),
                "ba={ba} bb={bb}: {} vs {closed}",
                numeric.re
            );
        }
        // off the slice the closed form declines to answer
        let a = state(0.0, 0.1, 2.0);
        let b = state(1.0, 0.1, 2.0);
        assert!(overlap_closed_form_real_slice(&a, &b).is_err());
    }

    #[test]
    fn moment_report_sits_above_the_heisenberg_floor() {
        for (b, r) in [(0.0, 1.0), (0.5, 8.0), (-0.9, 2.0)] {
            let rep = moment_report(&state(0.3, b, r)).unwrap();
            assert!(
                rep.product_xp >= 0.25 - 1e-9,
                "b={b} r={r}: {}",
                rep.product_xp
            );
            assert_eq!(rep.velocity, b);
        }
    }

    #[test]
    fn nonrelativistic_limit_recovers_canonical_variances() {
        // r = 30, moderate label: var_x -> 1/2 sigma^2, (sigma dp/hbar)^2 -> 1/2
        let r: f64 = 30.0;
        let beta = 1.0 / r; // sigma pbar/hbar ~ 1
        let (vx, _, _) = variances_xv(beta, r).unwrap();
        assert!((vx - 0.5).abs() < 5e-3, "var_x {vx}");
        let vp_mc = momentum_variance(beta, r).unwrap();
        let vp = vp_mc * r * r;
        assert!((vp - 0.5).abs() < 5e-3, "var_p {vp}");
    }
}
