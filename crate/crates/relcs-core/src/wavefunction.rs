//! Shared momentum-space machinery: measures, normalized amplitude
//! evaluators, the scale parameter and the report record.
//!
//! Everything is dimensionless.  Amplitudes are functions of
//! `u = sigma*p/hbar`; the flat scalar product is `int |psi|^2 du` and the
//! invariant one is `int r/sqrt(u^2+r^2) |psi|^2 du` with `r = sigma/lambda_C`
//! (so `p/(m c) = u/r`).

use alloc::boxed::Box;

use crate::error::{CoreError, Result};
use crate::math;
use crate::quad::{self, QuadratureConfig};
use crate::C64;

/// The scalar-product convention an amplitude is normalized under.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Measure {
    /// `<phi|psi> = int phi* psi du`
    Flat,
    /// `<phi|psi> = int r/sqrt(u^2+r^2) phi* psi du`
    Invariant { r: f64 },
}

impl Measure {
    #[inline]
    pub fn weight(&self, u: f64) -> f64 {
        match *self {
            Measure::Flat => 1.0,
            Measure::Invariant { r } => r / math::hypot(u, r),
        }
    }

    fn compatible(&self, other: &Measure) -> bool {
        match (self, other) {
            (Measure::Flat, Measure::Flat) => true,
            (Measure::Invariant { r: a }, Measure::Invariant { r: b }) => {
                (a - b).abs() <= 1e-12 * a.abs().max(1.0)
            }
            _ => false,
        }
    }
}

/// Scale of a state family: the width ratio `r = sigma/lambda_C`, or the
/// massless regime where the Compton wavelength is undefined and
/// `sbar = sigma*pbar/hbar` takes over as the only label.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scale {
    Massive { r: f64 },
    Massless,
}

impl Scale {
    pub fn massive(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(CoreError::Domain {
                what: "scale requires finite r > 0",
            });
        }
        Ok(Scale::Massive { r })
    }

    pub fn r(&self) -> Option<f64> {
        match *self {
            Scale::Massive { r } => Some(r),
            Scale::Massless => None,
        }
    }
}

/// How a reported number was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Series,
    Oracle,
}

/// Dimensionless moment summary of one state.
///
/// Units: energy in `m c^2` (massive) or `c hbar/sigma` (massless), momentum
/// in `m c` (massive) or `hbar/sigma` (massless), velocity in `c`, `var_x`
/// in `sigma^2`, `var_p` in `(hbar/sigma)^2`, the product in `hbar^2` (so the
/// Heisenberg floor sits at 1/4).
#[derive(Clone, Copy, Debug)]
pub struct MomentReport {
    pub energy: f64,
    pub momentum: f64,
    pub velocity: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub product_xp: f64,
    pub method: Method,
}

impl MomentReport {
    /// Checks the record invariants: finiteness and the Heisenberg floor.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.energy,
            self.momentum,
            self.velocity,
            self.var_x,
            self.var_p,
            self.product_xp,
        ];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::Domain {
                what: "moment report contains a non-finite field",
            });
        }
        if self.product_xp < 0.25 - 1e-9 {
            return Err(CoreError::Domain {
                what: "uncertainty product below the Heisenberg floor of 1/4",
            });
        }
        Ok(())
    }
}

/// A normalized momentum-space amplitude together with its measure
/// convention and a localization hint for quadrature.
pub struct MomentumWavefunction {
    measure: Measure,
    amp: Box<dyn Fn(f64) -> C64 + Send + Sync>,
    /// Center of the amplitude's support in `u`.
    center: f64,
    /// Half-width of the window outside which `|psi|^2` is negligible
    /// (below ~1e-40 of its peak).
    span: f64,
}

impl MomentumWavefunction {
    pub fn new(
        measure: Measure,
        center: f64,
        span: f64,
        amp: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            measure,
            amp: Box::new(amp),
            center,
            span,
        }
    }

    #[inline]
    pub fn eval(&self, u: f64) -> C64 {
        (self.amp)(u)
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    /// `int w(u) |psi(u)|^2 du`; equals 1 for a correctly normalized state.
    pub fn norm_squared(&self, cfg: &QuadratureConfig) -> Result<f64> {
        let m = self.measure;
        let f = |u: f64| m.weight(u) * self.eval(u).norm_sqr();
        let c = cfg.with_tail_cut(cfg.tail_cut.unwrap_or(self.span));
        let centered = |y: f64| f(self.center + y);
        Ok(quad::integrate_line(centered, &c)?.value)
    }

    /// Scalar product `<self|other>` under the common measure.
    ///
    /// The integration window is the intersection of the two support
    /// windows: the product carries mass only where both amplitudes are
    /// non-negligible, so this is exact to working precision and spares
    /// the adaptive engine from hunting a narrow overlap inside the union
    /// of two wide supports.
    pub fn inner(&self, other: &Self, cfg: &QuadratureConfig) -> Result<C64> {
        if !self.measure.compatible(&other.measure) {
            return Err(CoreError::Domain {
                what: "inner product requires both states in the same measure",
            });
        }
        let lo = (self.center - self.span).max(other.center - other.span);
        let hi = (self.center + self.span).min(other.center + other.span);
        let (mid, cut) = if hi > lo {
            (0.5 * (lo + hi), 0.5 * (hi - lo) + 2.0)
        } else {
            // disjoint supports: the product is zero to working precision,
            // but integrate a small bridge window anyway
            (0.5 * (lo + hi), 2.0)
        };
        let m = self.measure;
        let f = |u: f64| m.weight(u) * (self.eval(u).conj() * other.eval(u));
        integrate_line_complex(f, mid, cut, cfg)
    }

    /// Expectation of a multiplication operator `g(u)` in this state
    /// (assumes unit norm).
    pub fn moment(&self, g: impl Fn(f64) -> f64, cfg: &QuadratureConfig) -> Result<f64> {
        let m = self.measure;
        let f = |u: f64| m.weight(u) * self.eval(u).norm_sqr() * g(u);
        let c = cfg.with_tail_cut(cfg.tail_cut.unwrap_or(self.span));
        let centered = |y: f64| f(self.center + y);
        Ok(quad::integrate_line(centered, &c)?.value)
    }
}

/// Rectangular phase-space grid for the overcompleteness checks.
///
/// The momentum axis is family-specific: `sigma*p/hbar` for canonical
/// states, `p/(m c)` for Poincare ones.
#[derive(Clone, Copy, Debug)]
pub struct PhaseGrid {
    pub x_center: f64,
    pub p_center: f64,
    pub x_half: f64,
    pub p_half: f64,
    /// Node counts; both must be odd and >= 3 so the embedded half-density
    /// grid reuses the same nodes.
    pub nx: usize,
    pub np: usize,
    /// Richardson estimate above this aborts with a grid-resolution error.
    pub tol: f64,
}

impl Default for PhaseGrid {
    fn default() -> Self {
        Self {
            x_center: 0.0,
            p_center: 0.0,
            x_half: 7.0,
            p_half: 7.0,
            nx: 41,
            np: 41,
            tol: 1e-7,
        }
    }
}

impl PhaseGrid {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.nx < 3 || self.np < 3 || self.nx % 2 == 0 || self.np % 2 == 0 {
            return Err(CoreError::InvalidConfig {
                what: "grid node counts must be odd and >= 3",
            });
        }
        if !(self.x_half > 0.0 && self.p_half > 0.0 && self.tol > 0.0) {
            return Err(CoreError::InvalidConfig {
                what: "grid extents and tol must be positive",
            });
        }
        Ok(())
    }
}

/// Complex line integral of `f` recentered at `center` with window
/// half-width `halfspan`; one adaptive pass carries both components.
pub(crate) fn integrate_line_complex(
    f: impl Fn(f64) -> C64,
    center: f64,
    halfspan: f64,
    cfg: &QuadratureConfig,
) -> Result<C64> {
    let cut = cfg.tail_cut.unwrap_or(halfspan);
    quad::integrate_interval_c64(|y| f(center + y), -cut, cut, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_validates_r() {
        assert!(Scale::massive(0.0).is_err());
        assert!(Scale::massive(-2.0).is_err());
        assert_eq!(Scale::massive(8.0).unwrap().r(), Some(8.0));
        assert_eq!(Scale::Massless.r(), None);
    }

    #[test]
    fn report_enforces_heisenberg_floor() {
        let mut rep = MomentReport {
            energy: 1.0,
            momentum: 0.0,
            velocity: 0.0,
            var_x: 0.5,
            var_p: 0.5,
            product_xp: 0.25,
            method: Method::ClosedForm,
        };
        assert!(rep.validate().is_ok());
        rep.product_xp = 0.2;
        assert!(rep.validate().is_err());
        rep.product_xp = f64::NAN;
        assert!(rep.validate().is_err());
    }

    #[test]
    fn mismatched_measures_are_rejected() {
        let a = MomentumWavefunction::new(Measure::Flat, 0.0, 10.0, |_| C64::new(1.0, 0.0));
        let b = MomentumWavefunction::new(Measure::Invariant { r: 2.0 }, 0.0, 10.0, |_| {
            C64::new(1.0, 0.0)
        });
        let cfg = QuadratureConfig::default();
        assert!(a.inner(&b, &cfg).is_err());
    }
}
