//! Numerics for relativistic coherent states of a spinless Salpeter particle.
//!
//! Three families of states are covered, each in the momentum representation:
//!
//! * **canonical** — Gaussian minimum-uncertainty states under the flat
//!   momentum measure,
//! * **lorentzian** — eigenvectors of the relativistic complexifier, with
//!   observables in closed Macdonald-function form,
//! * **poincare** — group-generated (Kaiser analytic-signal) states
//!   under the Lorentz-invariant measure.
//!
//! Every closed-form expectation value shipped here has an independent
//! brute-force quadrature route next to it, so each family can be
//! cross-validated end to end.  The building blocks live in [`specfun`]
//! (exponentially scaled Macdonald functions, the confluent hypergeometric
//! function U, erf, Pochhammer) and [`quad`] (adaptive Gauss–Kronrod on the
//! line and half line).
//!
//! The crate is `no_std` (with `alloc`); all float math routes through
//! `libm`.  Dimensionless conventions used throughout:
//!
//! * momenta as `u = sigma*p/hbar`, or `t = p/(m c) = u/r`,
//! * positions as `x/sigma`,
//! * the single scale `r = sigma/lambda_C` selecting the relativistic regime,
//! * energies in `m c^2` (massive) or `c hbar/sigma` (massless).
//!
//! ```
//! use relcs_core::{lorentzian, Scale};
//!
//! // a Lorentzian state at v = 0.6 c with sigma = 8 Compton wavelengths
//! let scale = Scale::massive(8.0).unwrap();
//! let state = lorentzian::LorentzianState::new(&scale, 0.0, 0.6).unwrap();
//!
//! // its mean energy is within 1.5% of the classical 1/sqrt(1 - 0.36)
//! let energy = lorentzian::mean_energy(state.beta(), state.r()).unwrap();
//! assert!((energy - 1.25).abs() / 1.25 < 0.015);
//!
//! // and its variances saturate the Robertson position-velocity bound
//! let (vx, vv, product) = lorentzian::variances_xv(0.6, 8.0).unwrap();
//! let comm = lorentzian::commutator_average(0.6, 8.0).unwrap();
//! assert!((product - 0.25 * comm * comm * 64.0).abs() < 1e-12);
//! assert_eq!(product, vx * vv);
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod canonical;
pub mod error;
pub mod gridop;
pub mod lorentzian;
mod math;
pub mod poincare;
pub mod quad;
pub mod specfun;
pub mod wavefunction;

pub use error::CoreError;
pub use quad::{QuadratureConfig, QuadratureResult};
pub use wavefunction::{Measure, Method, MomentReport, MomentumWavefunction, PhaseGrid, Scale};

/// Complex double, the amplitude type used by every wavefunction evaluator.
pub type C64 = num_complex::Complex<f64>;
