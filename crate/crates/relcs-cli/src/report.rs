//! Single-state reports: evaluates the requested quantities for one state
//! and serializes them as one JSON object.

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use relcs_core::canonical::{self, CanonicalState, EnergyMethod};
use relcs_core::lorentzian::{self, LorentzianState};
use relcs_core::poincare::{self, PoincareState};
use relcs_core::quad::QuadratureConfig;
use relcs_core::Scale;

use crate::config::Constants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Canonical,
    Lorentzian,
    Poincare,
}

impl std::str::FromStr for Family {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Family::Canonical),
            "lorentzian" => Ok(Family::Lorentzian),
            "poincare" => Ok(Family::Poincare),
            other => bail!("unknown family `{other}` (canonical|lorentzian|poincare)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Energy,
    Momentum,
    Velocity,
    VarX,
    VarP,
    VarV,
    ProductXp,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Energy,
        Quantity::Momentum,
        Quantity::Velocity,
        Quantity::VarX,
        Quantity::VarP,
        Quantity::VarV,
        Quantity::ProductXp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Energy => "energy",
            Quantity::Momentum => "momentum",
            Quantity::Velocity => "velocity",
            Quantity::VarX => "var_x",
            Quantity::VarP => "var_p",
            Quantity::VarV => "var_v",
            Quantity::ProductXp => "product_xp",
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .iter()
            .copied()
            .find(|q| q.name() == s)
            .ok_or_else(|| anyhow!("unknown quantity `{s}`"))
    }
}

/// One state to report on, in the dimensionless conventions.
#[derive(Clone, Copy, Debug)]
pub struct StateSpec {
    pub family: Family,
    /// `None` marks the massless regime (canonical only).
    pub r: Option<f64>,
    pub xbar: f64,
    /// Family label along the momentum-like axis: `pbar` (units m c) for
    /// canonical/poincare, `beta` for lorentzian, `sbar` for massless.
    pub label: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantityRecord {
    pub value: f64,
    pub units: &'static str,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub si_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub si_units: Option<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportRecord {
    pub family: Family,
    pub regime: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub xbar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sbar: Option<f64>,
    pub quantities: Vec<(String, QuantityRecord)>,
}

impl ReportRecord {
    /// Every reported number must be finite; a NaN leaking into the output
    /// is a bug, not a value.
    pub fn validate(&self) -> Result<()> {
        for (name, q) in &self.quantities {
            if !q.value.is_finite() {
                bail!("quantity {name} is not finite");
            }
            if let Some(d) = q.oracle_delta {
                if !d.is_finite() {
                    bail!("oracle delta of {name} is not finite");
                }
            }
        }
        Ok(())
    }
}

fn rec(value: f64, units: &'static str, method: &'static str) -> QuantityRecord {
    QuantityRecord {
        value,
        units,
        method,
        oracle_delta: None,
        si_value: None,
        si_units: None,
    }
}

/// Evaluates `quantities` for the given state.  `with_oracle` adds the
/// brute-force cross-check deltas; `si` converts through the bundled
/// constants for a particle of the given mass (MeV).
pub fn compute_report(
    spec: &StateSpec,
    quantities: &[Quantity],
    with_oracle: bool,
    si: Option<(f64, &Constants)>,
) -> Result<ReportRecord> {
    let mut record = match spec.family {
        Family::Canonical => canonical_report(spec, quantities, with_oracle)?,
        Family::Lorentzian => lorentzian_report(spec, quantities, with_oracle)?,
        Family::Poincare => poincare_report(spec, quantities, with_oracle)?,
    };
    if let Some((mass_mev, consts)) = si {
        if !(mass_mev > 0.0) {
            bail!("--mass-mev must be positive");
        }
        apply_si(&mut record, mass_mev, consts);
    }
    record.validate()?;
    Ok(record)
}

fn canonical_report(
    spec: &StateSpec,
    quantities: &[Quantity],
    with_oracle: bool,
) -> Result<ReportRecord> {
    let cfg = QuadratureConfig::default();
    match spec.r {
        Some(r) => {
            Scale::massive(r).map_err(|e| anyhow!("{e}"))?;
            let sbar = spec.label * r; // sigma p/hbar from p/(m c)
            let state = CanonicalState::new(spec.xbar, sbar);
            let mut quants = Vec::new();
            for q in quantities {
                let entry = match q {
                    Quantity::Energy => {
                        let v = canonical::mean_energy_massive(sbar, r, EnergyMethod::Series)
                            .map_err(|e| anyhow!("{e}"))?;
                        let mut e = rec(v, "mc^2", "series");
                        if with_oracle {
                            let o =
                                canonical::mean_energy_massive(sbar, r, EnergyMethod::Quadrature)
                                    .map_err(|e| anyhow!("{e}"))?;
                            e.oracle_delta = Some((v - o).abs());
                        }
                        e
                    }
                    Quantity::Momentum => rec(spec.label, "mc", "closed_form"),
                    Quantity::Velocity => {
                        let v = canonical::mean_velocity(sbar, r, EnergyMethod::Series)
                            .map_err(|e| anyhow!("{e}"))?;
                        let mut e = rec(v, "c", "series");
                        if with_oracle {
                            let o = canonical::mean_velocity(sbar, r, EnergyMethod::Quadrature)
                                .map_err(|e| anyhow!("{e}"))?;
                            e.oracle_delta = Some((v - o).abs());
                        }
                        e
                    }
                    Quantity::VarX | Quantity::VarP | Quantity::ProductXp => {
                        let value = if *q == Quantity::ProductXp { 0.25 } else { 0.5 };
                        let units = match q {
                            Quantity::VarX => "sigma^2",
                            Quantity::VarP => "(hbar/sigma)^2",
                            _ => "hbar^2",
                        };
                        let mut e = rec(value, units, "closed_form");
                        if with_oracle {
                            let (vx, vp, prod) = canonical::uncertainty_product(&state)
                                .map_err(|e| anyhow!("{e}"))?;
                            let o = match q {
                                Quantity::VarX => vx,
                                Quantity::VarP => vp,
                                _ => prod,
                            };
                            e.oracle_delta = Some((value - o).abs());
                        }
                        e
                    }
                    Quantity::VarV => bail!("var_v is a lorentzian quantity"),
                };
                quants.push((q.name().to_string(), entry));
            }
            let _ = cfg;
            Ok(ReportRecord {
                family: Family::Canonical,
                regime: "massive",
                r: Some(r),
                xbar: spec.xbar,
                pbar: Some(spec.label),
                beta: None,
                sbar: Some(sbar),
                quantities: quants,
            })
        }
        None => {
            let sbar = spec.label;
            let mut quants = Vec::new();
            for q in quantities {
                let entry = match q {
                    Quantity::Energy => {
                        let v = canonical::mean_energy_massless(sbar);
                        let mut e = rec(v, "c*hbar/sigma", "closed_form");
                        if with_oracle {
                            let o = canonical::mean_energy_massless_oracle(sbar)
                                .map_err(|e| anyhow!("{e}"))?;
                            e.oracle_delta = Some((v - o).abs());
                        }
                        e
                    }
                    Quantity::Momentum => rec(sbar, "hbar/sigma", "closed_form"),
                    Quantity::VarX => rec(0.5, "sigma^2", "closed_form"),
                    Quantity::VarP => rec(0.5, "(hbar/sigma)^2", "closed_form"),
                    Quantity::ProductXp => rec(0.25, "hbar^2", "closed_form"),
                    Quantity::Velocity => {
                        bail!("velocity is not defined for the massless canonical family")
                    }
                    Quantity::VarV => bail!("var_v is a lorentzian quantity"),
                };
                quants.push((q.name().to_string(), entry));
            }
            Ok(ReportRecord {
                family: Family::Canonical,
                regime: "massless",
                r: None,
                xbar: spec.xbar,
                pbar: None,
                beta: None,
                sbar: Some(sbar),
                quantities: quants,
            })
        }
    }
}

fn lorentzian_report(
    spec: &StateSpec,
    quantities: &[Quantity],
    with_oracle: bool,
) -> Result<ReportRecord> {
    let r = spec
        .r
        .ok_or_else(|| anyhow!("lorentzian states need --r"))?;
    let scale = Scale::massive(r).map_err(|e| anyhow!("{e}"))?;
    let beta = spec.label;
    let state = LorentzianState::new(&scale, spec.xbar, beta).map_err(|e| anyhow!("{e}"))?;
    let (var_x, var_v, _product_xv) =
        lorentzian::variances_xv(beta, r).map_err(|e| anyhow!("{e}"))?;
    let var_p_mc = lorentzian::momentum_variance(beta, r).map_err(|e| anyhow!("{e}"))?;
    let var_p = var_p_mc * r * r; // to (sigma dp/hbar)^2

    let mut quants = Vec::new();
    for q in quantities {
        let entry = match q {
            Quantity::Energy => {
                let v = lorentzian::mean_energy(beta, r).map_err(|e| anyhow!("{e}"))?;
                let mut e = rec(v, "mc^2", "closed_form");
                if with_oracle {
                    let o = lorentzian::oracle::mean_energy(&state).map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((v - o).abs());
                }
                e
            }
            Quantity::Momentum => {
                let v = lorentzian::mean_momentum(beta, r).map_err(|e| anyhow!("{e}"))?;
                let mut e = rec(v, "mc", "closed_form");
                if with_oracle {
                    let o =
                        lorentzian::oracle::mean_momentum(&state).map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((v - o).abs());
                }
                e
            }
            Quantity::Velocity => rec(beta, "c", "closed_form"),
            Quantity::VarX => {
                let mut e = rec(var_x, "sigma^2", "closed_form");
                if with_oracle {
                    let grid = lorentzian::default_grid(&state);
                    let (gx, _) = lorentzian::oracle::variances_xv(&state, &grid)
                        .map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((var_x - gx).abs());
                }
                e
            }
            Quantity::VarP => {
                let mut e = rec(var_p, "(hbar/sigma)^2", "closed_form");
                if with_oracle {
                    let o = lorentzian::oracle::momentum_variance(&state)
                        .map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((var_p - o * r * r).abs());
                }
                e
            }
            Quantity::VarV => rec(var_v, "c^2", "closed_form"),
            Quantity::ProductXp => rec(var_x * var_p, "hbar^2", "closed_form"),
        };
        quants.push((q.name().to_string(), entry));
    }
    Ok(ReportRecord {
        family: Family::Lorentzian,
        regime: "massive",
        r: Some(r),
        xbar: spec.xbar,
        pbar: None,
        beta: Some(beta),
        sbar: None,
        quantities: quants,
    })
}

fn poincare_report(
    spec: &StateSpec,
    quantities: &[Quantity],
    with_oracle: bool,
) -> Result<ReportRecord> {
    let r = spec.r.ok_or_else(|| anyhow!("poincare states need --r"))?;
    let scale = Scale::massive(r).map_err(|e| anyhow!("{e}"))?;
    let state = PoincareState::new(&scale, spec.xbar, spec.label).map_err(|e| anyhow!("{e}"))?;
    let cfg = QuadratureConfig::default();

    let mut quants = Vec::new();
    for q in quantities {
        let entry = match q {
            Quantity::Energy => {
                let v = poincare::mean_energy(&state);
                let mut e = rec(v, "mc^2", "closed_form");
                if with_oracle {
                    let o = poincare::oracle::mean_energy(&state).map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((v - o).abs());
                }
                e
            }
            Quantity::Momentum => {
                let v = poincare::mean_momentum(&state).map_err(|e| anyhow!("{e}"))?;
                let mut e = rec(v, "mc", "closed_form");
                if with_oracle {
                    let o = poincare::oracle::mean_momentum(&state).map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((v - o).abs());
                }
                e
            }
            Quantity::Velocity => {
                let v = poincare::mean_velocity(&state, &cfg).map_err(|e| anyhow!("{e}"))?;
                let mut e = rec(v, "c", "oracle");
                if with_oracle {
                    let o = poincare::oracle::mean_velocity(&state).map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((v - o).abs());
                }
                e
            }
            Quantity::VarX => {
                let v = poincare::position_variance(&state, &cfg).map_err(|e| anyhow!("{e}"))?;
                let mut e = rec(v, "sigma^2", "oracle");
                if with_oracle {
                    let grid = poincare::default_grid(&state);
                    let o = poincare::oracle::position_variance_nw(&state, &grid)
                        .map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((v - o).abs());
                }
                e
            }
            Quantity::VarP => {
                let v = poincare::momentum_variance(&state).map_err(|e| anyhow!("{e}"))? * r * r;
                let mut e = rec(v, "(hbar/sigma)^2", "closed_form");
                if with_oracle {
                    let o =
                        poincare::oracle::momentum_variance(&state).map_err(|e| anyhow!("{e}"))?;
                    e.oracle_delta = Some((v - o * r * r).abs());
                }
                e
            }
            Quantity::ProductXp => {
                let vx = poincare::position_variance(&state, &cfg).map_err(|e| anyhow!("{e}"))?;
                let vp = poincare::momentum_variance(&state).map_err(|e| anyhow!("{e}"))? * r * r;
                rec(vx * vp, "hbar^2", "oracle")
            }
            Quantity::VarV => bail!("var_v is a lorentzian quantity"),
        };
        quants.push((q.name().to_string(), entry));
    }
    Ok(ReportRecord {
        family: Family::Poincare,
        regime: "massive",
        r: Some(r),
        xbar: spec.xbar,
        pbar: Some(spec.label),
        beta: None,
        sbar: Some(spec.label * r),
        quantities: quants,
    })
}

fn apply_si(record: &mut ReportRecord, mass_mev: f64, c: &Constants) {
    let lambda_c_fm = c.hbar_c_mev_fm / mass_mev;
    let sigma_fm = record.r.map(|r| r * lambda_c_fm);
    for (_, q) in record.quantities.iter_mut() {
        match q.units {
            "mc^2" => {
                q.si_value = Some(q.value * mass_mev);
                q.si_units = Some("MeV");
            }
            "mc" => {
                q.si_value = Some(q.value * mass_mev);
                q.si_units = Some("MeV/c");
            }
            "c" => {
                q.si_value = Some(q.value * c.c_m_per_s);
                q.si_units = Some("m/s");
            }
            "sigma^2" => {
                if let Some(s) = sigma_fm {
                    q.si_value = Some(q.value * s * s);
                    q.si_units = Some("fm^2");
                }
            }
            "(hbar/sigma)^2" => {
                if let Some(s) = sigma_fm {
                    let hbar_over_sigma = c.hbar_c_mev_fm / s; // MeV/c
                    q.si_value = Some(q.value * hbar_over_sigma * hbar_over_sigma);
                    q.si_units = Some("(MeV/c)^2");
                }
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config;

    fn spec(family: Family, r: Option<f64>, label: f64) -> StateSpec {
        StateSpec {
            family,
            r,
            xbar: 0.0,
            label,
        }
    }

    #[test]
    fn canonical_rest_energy_is_one_percent_high_at_r5() {
        let rep = compute_report(
            &spec(Family::Canonical, Some(5.0), 0.0),
            &[Quantity::Energy],
            false,
            None,
        )
        .unwrap();
        let e = rep.quantities[0].1.value;
        assert!((e - 1.0099).abs() < 5e-4, "E = {e}");
    }

    #[test]
    fn poincare_rest_energy_is_the_effective_mass() {
        let rep = compute_report(
            &spec(Family::Poincare, Some(8.0), 0.0),
            &[Quantity::Energy],
            false,
            None,
        )
        .unwrap();
        let e = rep.quantities[0].1.value;
        let expect = poincare::effective_mass(8.0).unwrap();
        assert!((e - expect).abs() < 1e-14, "E = {e}");
    }

    #[test]
    fn superluminal_label_is_an_error() {
        let err = compute_report(
            &spec(Family::Lorentzian, Some(8.0), 1.0),
            &[Quantity::Energy],
            false,
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("|v/c| must be < 1"), "{err}");
    }

    #[test]
    fn oracle_deltas_are_small() {
        let rep = compute_report(
            &spec(Family::Lorentzian, Some(2.0), 0.5),
            &[Quantity::Energy, Quantity::Momentum],
            true,
            None,
        )
        .unwrap();
        for (name, q) in &rep.quantities {
            let d = q.oracle_delta.unwrap();
            assert!(d < 1e-6, "{name} delta {d}");
        }
    }

    #[test]
    fn si_conversion_scales_by_the_mass() {
        let consts = config::constants().unwrap();
        let rep = compute_report(
            &spec(Family::Poincare, Some(8.0), 0.0),
            &[Quantity::Energy],
            false,
            Some((139.57, &consts)),
        )
        .unwrap();
        let q = &rep.quantities[0].1;
        assert_eq!(q.si_units, Some("MeV"));
        assert!((q.si_value.unwrap() / q.value - 139.57).abs() < 1e-10);
    }

    #[test]
    fn massless_velocity_is_rejected() {
        let err = compute_report(
            &spec(Family::Canonical, None, 1.0),
            &[Quantity::Velocity],
            false,
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("massless"));
    }
}
