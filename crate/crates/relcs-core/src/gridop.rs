//! Uniform momentum grids and high-order finite-difference operators.
//!
//! These back the grid-based oracles: applying `x = i d/du` (or the
//! Newton–Wigner correction) to a sampled amplitude without touching the
//! closed-form derivative, so that operator identities can be confirmed by
//! a route independent of the analytic one.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::wavefunction::MomentumWavefunction;
use crate::C64;

/// Uniform grid `u_i = u0 + i h`, `i = 0..n`.
#[derive(Clone, Copy, Debug)]
pub struct UniformGrid {
    pub u0: f64,
    pub h: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(u_min: f64, u_max: f64, n: usize) -> Result<Self> {
        if !(u_min < u_max) || n < 16 {
            return Err(CoreError::InvalidConfig {
                what: "grid needs u_min < u_max and n >= 16",
            });
        }
        Ok(Self {
            u0: u_min,
            h: (u_max - u_min) / (n - 1) as f64,
            n,
        })
    }

    /// Same window, half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            u0: self.u0,
            h: 0.5 * self.h,
            n: 2 * self.n - 1,
        }
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.u0 + self.h * i as f64
    }
}

/// Samples an amplitude on the grid.
pub fn sample(wf: &MomentumWavefunction, grid: &UniformGrid) -> Vec<C64> {
    (0..grid.n).map(|i| wf.eval(grid.point(i))).collect()
}

// 8th-order central first-derivative stencil.
const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// 8th-order centered first derivative; out-of-range samples are treated
/// as zero, which is exact to working precision when the window holds the
/// amplitude's full support.
pub fn derivative(values: &[C64], h: f64) -> Vec<C64> {
    let n = values.len();
    let get = |i: isize| -> C64 {
        if i < 0 || i as usize >= n {
            C64::new(0.0, 0.0)
        } else {
            values[i as usize]
        }
    };
    (0..n as isize)
        .map(|i| {
            let mut acc = C64::new(0.0, 0.0);
            for (k, c) in D1.iter().enumerate() {
                let k = k as isize + 1;
                acc += *c * (get(i + k) - get(i - k));
            }
            acc / h
        })
        .collect()
}

/// Trapezoid inner product `sum w(u_i) conj(a_i) b_i h` with endpoint
/// halving; `weight` carries the measure factor.
pub fn inner_weighted(
    grid: &UniformGrid,
    weight: impl Fn(f64) -> f64,
    a: &[C64],
    b: &[C64],
) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..grid.n {
        let w = if i == 0 || i == grid.n - 1 { 0.5 } else { 1.0 };
        acc += w * weight(grid.point(i)) * (a[i].conj() * b[i]);
    }
    acc * grid.h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;
    use crate::wavefunction::Measure;

    #[test]
    fn derivative_of_a_gaussian_is_eighth_order() {
        let err_at = |h: f64| -> f64 {
            let n = (12.0 / h) as usize | 1;
            let grid = UniformGrid { u0: -6.0, h, n };
            let vals: Vec<C64> = (0..n)
                .map(|i| C64::new(math::exp(-grid.point(i) * grid.point(i)), 0.0))
                .collect();
            let d = derivative(&vals, h);
            (8..n - 8)
                .map(|i| {
                    let u = grid.point(i);
                    let exact = -2.0 * u * math::exp(-u * u);
                    (d[i].re - exact).abs()
                })
                .fold(0.0, f64::max)
        };
        let coarse = err_at(0.2);
        let fine = err_at(0.1);
        assert!(coarse / fine > 150.0, "order too low: {coarse} / {fine}");
    }

    #[test]
    fn trapezoid_inner_product_on_a_gaussian() {
        let grid = UniformGrid::new(-10.0, 10.0, 801).unwrap();
        let wf = MomentumWavefunction::new(Measure::Flat, 0.0, 10.0, |u| {
            C64::new(math::powf(math::PI, -0.25) * math::exp(-0.5 * u * u), 0.0)
        });
        let vals = sample(&wf, &grid);
        let n = inner_weighted(&grid, |_| 1.0, &vals, &vals);
        assert!((n.re - 1.0).abs() < 1e-12);
        assert!(n.im.abs() < 1e-15);
    }
}
