//! Configuration layering (flags > config file > defaults), the bundled
//! physical constants, and the unit conventions table.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Environment variable naming the default output directory for sweeps.
pub const OUT_DIR_ENV: &str = "RELCS_OUT_DIR";

/// CODATA constants bundled with the binary (values in the file).
pub struct Constants {
    /// hbar*c in MeV*fm
    pub hbar_c_mev_fm: f64,
    /// speed of light in m/s
    pub c_m_per_s: f64,
    /// 1 MeV in joule
    pub mev_joule: f64,
}

const CONSTANTS_FILE: &str = include_str!("constants.txt");

pub fn constants() -> Result<Constants> {
    let map = parse_key_values(CONSTANTS_FILE)?;
    let get = |k: &str| -> Result<f64> {
        map.get(k)
            .with_context(|| format!("bundled constants file lacks key {k}"))?
            .parse::<f64>()
            .with_context(|| format!("bundled constant {k} is not a number"))
    };
    Ok(Constants {
        hbar_c_mev_fm: get("hbar_c_mev_fm")?,
        c_m_per_s: get("c_m_per_s")?,
        mev_joule: get("mev_joule")?,
    })
}

/// Values an on-disk config file may provide; every one of them loses to
/// an explicit flag.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    pub r: Option<f64>,
    pub points: Option<usize>,
    pub jobs: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

pub fn load_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let map = parse_key_values(&text)?;
    let mut cfg = FileConfig::default();
    for (k, v) in &map {
        match k.as_str() {
            "r" => cfg.r = Some(v.parse().context("config key r must be a number")?),
            "points" => {
                cfg.points = Some(v.parse().context("config key points must be an integer")?)
            }
            "jobs" => cfg.jobs = Some(v.parse().context("config key jobs must be an integer")?),
            "out_dir" => cfg.out_dir = Some(PathBuf::from(v)),
            other => bail!("unknown config key `{other}`"),
        }
    }
    Ok(cfg)
}

fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .with_context(|| format!("line {}: expected key=value", lineno + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Resolves an output path against `RELCS_OUT_DIR` / config when relative.
pub fn resolve_out_path(out: &Path, file_cfg: &FileConfig) -> PathBuf {
    if out.is_absolute() {
        return out.to_path_buf();
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir).join(out);
        }
    }
    if let Some(dir) = &file_cfg.out_dir {
        return dir.join(out);
    }
    out.to_path_buf()
}

/// The dimensionless conventions used by every command.
pub const UNITS_TABLE: &str = "\
unit conventions (all outputs dimensionless unless --si is given):
  scale        r = sigma/lambda_C     lambda_C = hbar/(m c); fixes the regime
  position     xbar = x/sigma
  momentum     pbar = p/(m c)         massive families
               sbar = sigma p/hbar    canonical label; the only one at m = 0
  energy       E / (m c^2)            massive
               E sigma/(c hbar)       massless
  velocity     v / c
  var_x        (dx)^2 / sigma^2       canonical value 1/2
  var_p        (sigma dp/hbar)^2      canonical value 1/2
  var_v        (dv)^2 / c^2           lorentzian x-v partner variance
  product_xp   var_x * var_p          in hbar^2; Heisenberg floor 1/4
with --si --mass-mev M: energies in MeV, momenta in MeV/c, lengths in fm,
converted through the bundled CODATA constants.";
