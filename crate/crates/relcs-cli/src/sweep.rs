//! Figure-data sweeps: evaluates quantities along one phase-space axis and
//! writes an RFC-4180-style CSV, byte-identical across runs for the same
//! spec.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use relcs_core::lorentzian;
use relcs_core::poincare::{self, PoincareState};
use relcs_core::quad::QuadratureConfig;
use relcs_core::Scale;

use crate::report::{compute_report, Family, Quantity, StateSpec};

/// Axis along which a sweep runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `v/c`, open interval (-1, 1)
    Beta,
    /// `p/(m c)`
    Pbar,
    /// `sigma p/hbar`
    Sbar,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Beta => "beta",
            Axis::Pbar => "pbar",
            Axis::Sbar => "sbar",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(Axis::Beta),
            "pbar" => Ok(Axis::Pbar),
            "sbar" => Ok(Axis::Sbar),
            other => bail!("unknown axis `{other}` (beta|pbar|sbar)"),
        }
    }
}

/// Full description of one sweep.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub family: Family,
    pub r: f64,
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub quantities: Vec<Quantity>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) {
            bail!("sweep range needs lo < hi");
        }
        if self.points < 2 {
            bail!("sweep needs at least 2 points");
        }
        if self.axis == Axis::Beta && (self.lo <= -1.0 || self.hi >= 1.0) {
            bail!("beta sweep range must lie inside (-1, 1): |v/c| < 1");
        }
        if !(self.r > 0.0) {
            bail!("sweep needs r > 0");
        }
        if self.quantities.is_empty() {
            bail!("sweep needs at least one quantity");
        }
        Ok(())
    }

    /// The six figure presets: Lorentzian variances and their product
    /// against `v/c` (1-3), Poincare variances and product against
    /// `sigma p/hbar` (4-6), all at `r = 8` unless overridden.
    pub fn figure(id: u8, r_override: Option<f64>) -> Result<SweepSpec> {
        let r = r_override.unwrap_or(8.0);
        let spec = match id {
            1..=3 => {
                let quantities = vec![match id {
                    1 => Quantity::VarX,
                    2 => Quantity::VarP,
                    _ => Quantity::ProductXp,
                }];
                // 399 uniform interior points of (-1, 1): -0.995 .. 0.995
                SweepSpec {
                    family: Family::Lorentzian,
                    r,
                    axis: Axis::Beta,
                    lo: -0.995,
                    hi: 0.995,
                    points: 399,
                    quantities,
                }
            }
            4..=6 => {
                let quantities = vec![match id {
                    4 => Quantity::VarX,
                    5 => Quantity::VarP,
                    _ => Quantity::ProductXp,
                }];
                SweepSpec {
                    family: Family::Poincare,
                    r,
                    axis: Axis::Sbar,
                    lo: -10.0,
                    hi: 10.0,
                    points: 401,
                    quantities,
                }
            }
            other => bail!("unknown figure {other} (1..6)"),
        };
        Ok(spec)
    }

    pub fn axis_values(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.lo + step * i as f64)
            .collect()
    }
}

/// 12 significant digits, locale-independent; reparsing and reformatting
/// reproduces the same bytes.
pub fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

/// Evaluates one sweep row.
fn evaluate_point(spec: &SweepSpec, axis_value: f64) -> Result<Vec<f64>> {
    // fast paths for the variance quantities so figure sweeps stay cheap
    let cfg = QuadratureConfig::default();
    let mut out = Vec::with_capacity(spec.quantities.len());
    match spec.family {
        Family::Lorentzian => {
            let beta = match spec.axis {
                Axis::Beta => axis_value,
                _ => bail!("lorentzian sweeps run over beta"),
            };
            for q in &spec.quantities {
                let v = match q {
                    Quantity::VarX => lorentzian::variances_xv(beta, spec.r)?.0,
                    Quantity::VarP => {
                        lorentzian::momentum_variance(beta, spec.r)? * spec.r * spec.r
                    }
                    Quantity::ProductXp => {
                        let vx = lorentzian::variances_xv(beta, spec.r)?.0;
                        let vp = lorentzian::momentum_variance(beta, spec.r)? * spec.r * spec.r;
                        vx * vp
                    }
                    Quantity::VarV => lorentzian::variances_xv(beta, spec.r)?.1,
                    Quantity::Energy => lorentzian::mean_energy(beta, spec.r)?,
                    Quantity::Momentum => lorentzian::mean_momentum(beta, spec.r)?,
                    Quantity::Velocity => beta,
                };
                out.push(v);
            }
        }
        Family::Poincare => {
            let pbar = match spec.axis {
                Axis::Pbar => axis_value,
                Axis::Sbar => axis_value / spec.r,
                Axis::Beta => bail!("poincare sweeps run over pbar or sbar"),
            };
            let scale = Scale::massive(spec.r)?;
            let state = PoincareState::new(&scale, 0.0, pbar)?;
            for q in &spec.quantities {
                let v = match q {
                    Quantity::VarX => poincare::position_variance(&state, &cfg)?,
                    Quantity::VarP => poincare::momentum_variance(&state)? * spec.r * spec.r,
                    Quantity::ProductXp => {
                        poincare::position_variance(&state, &cfg)?
                            * poincare::momentum_variance(&state)?
                            * spec.r
                            * spec.r
                    }
                    Quantity::Energy => poincare::mean_energy(&state),
                    Quantity::Momentum => poincare::mean_momentum(&state)?,
                    Quantity::Velocity => poincare::mean_velocity(&state, &cfg)?,
                    Quantity::VarV => bail!("var_v is a lorentzian quantity"),
                };
                out.push(v);
            }
        }
        Family::Canonical => {
            let (r, label) = match spec.axis {
                Axis::Pbar => (Some(spec.r), axis_value),
                Axis::Sbar => (Some(spec.r), axis_value / spec.r),
                Axis::Beta => bail!("canonical sweeps run over pbar or sbar"),
            };
            let st = StateSpec {
                family: Family::Canonical,
                r,
                xbar: 0.0,
                label,
            };
            let report = compute_report(&st, &spec.quantities, false, None)?;
            for (_, qr) in report.quantities {
                out.push(qr.value);
            }
        }
    }
    Ok(out)
}

/// Runs the sweep in parallel (rows land in axis order regardless of
/// completion order) and renders the CSV.  A constraint violation at any
/// point aborts the whole sweep, naming the offending point.
pub fn run_sweep(spec: &SweepSpec) -> Result<String> {
    spec.validate()?;
    let axis = spec.axis_values();
    let rows: Vec<Vec<f64>> = axis
        .par_iter()
        .map(|&a| {
            evaluate_point(spec, a)
                .with_context(|| format!("sweep point {}={}", spec.axis.name(), a))
        })
        .collect::<Result<_>>()?;

    let mut csv = String::new();
    csv.push_str(spec.axis.name());
    for q in &spec.quantities {
        csv.push(',');
        csv.push_str(q.name());
    }
    // dashed-line references of the figures: the canonical variance and
    // product are 1/2 and 1/4 in these units for every state
    csv.push_str(",canonical_variance_ref,canonical_product_ref\r\n");
    for (a, row) in axis.iter().zip(rows.iter()) {
        csv.push_str(&format_value(*a));
        for v in row {
            csv.push(',');
            csv.push_str(&format_value(*v));
        }
        csv.push_str(",5.00000000000e-1,2.50000000000e-1\r\n");
    }
    Ok(csv)
}
