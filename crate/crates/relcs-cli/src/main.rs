//! `relcs` — relativistic coherent-state reports, figure sweeps and the
//! numerical verification suite.
//!
//! Exit codes: 0 success (all checks pass for `verify`), 1 verification
//! failures, 2 invalid arguments or setup errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use relcs_cli::config::{self, FileConfig, UNITS_TABLE};
use relcs_cli::report::{compute_report, Family, Quantity, StateSpec};
use relcs_cli::sweep::{run_sweep, Axis, SweepSpec};
use relcs_cli::verify::{run_suites, Suite, TolOverrides};

#[derive(Parser)]
#[command(
    name = "relcs",
    about = "Relativistic coherent states for the spinless Salpeter particle: \
             canonical, Lorentzian and Poincare families with cross-validated numerics",
    version
)]
struct Cli {
    /// Optional key=value config file (flags win over file values)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for sweeps and suites (default: machine parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the observables of a single state as JSON on stdout
    Compute(ComputeArgs),
    /// Sweep a quantity along a phase-space axis into a CSV file
    Sweep(SweepArgs),
    /// Run the numerical verification suite (TAP-style report)
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// State family: canonical | lorentzian | poincare
    #[arg(long)]
    family: String,

    /// Width ratio r = sigma/lambda_C (massive regimes)
    #[arg(long)]
    r: Option<f64>,

    /// Massless canonical regime (label by --sbar)
    #[arg(long, default_value_t = false)]
    massless: bool,

    /// Mean momentum in m c units
    #[arg(long, allow_negative_numbers = true)]
    pbar: Option<f64>,

    /// Mean momentum as sigma p/hbar (the only label at m = 0)
    #[arg(long, allow_negative_numbers = true)]
    sbar: Option<f64>,

    /// Mean velocity v/c (lorentzian label)
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,

    /// Mean position x/sigma
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    xbar: f64,

    /// Comma-separated quantities (default: all that apply)
    #[arg(long, value_delimiter = ',')]
    quantities: Vec<String>,

    /// Attach brute-force oracle deltas to every quantity
    #[arg(long, default_value_t = false)]
    verify: bool,

    /// Also emit SI values (requires --mass-mev)
    #[arg(long, default_value_t = false)]
    si: bool,

    /// Particle mass in MeV for --si
    #[arg(long)]
    mass_mev: Option<f64>,

    /// Print the unit conventions table and exit
    #[arg(long, default_value_t = false)]
    explain_units: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Figure preset 1-6 (Lorentzian 1-3, Poincare 4-6, r = 8)
    #[arg(long)]
    figure: Option<u8>,

    /// State family for a custom sweep
    #[arg(long)]
    family: Option<String>,

    /// Width ratio r = sigma/lambda_C
    #[arg(long)]
    r: Option<f64>,

    /// Sweep axis: beta | pbar | sbar
    #[arg(long)]
    axis: Option<String>,

    /// Axis range as a single lo,hi pair
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    range: Vec<f64>,

    /// Number of sweep points (>= 2)
    #[arg(long)]
    points: Option<usize>,

    /// Comma-separated quantities
    #[arg(long, value_delimiter = ',')]
    quantities: Vec<String>,

    /// Output CSV path (relative paths resolve against RELCS_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: all | specfun | canonical | lorentzian | poincare
    #[arg(long, default_value = "all")]
    suite: String,

    /// Tolerance loosening, e.g. --tol rel=1e-6 or --tol abs=1e-8
    #[arg(long)]
    tol: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match cli
        .config
        .as_deref()
        .map(config::load_file_config)
        .transpose()
    {
        Ok(cfg) => cfg.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cli.jobs.or(file_cfg.jobs) {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("error: worker pool already initialized");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::Compute(args) => match cmd_compute(args, &file_cfg) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Command::Sweep(args) => match cmd_sweep(args, &file_cfg) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Command::Verify(args) => match cmd_verify(args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

fn parse_quantities(names: &[String], family: Family, massless: bool) -> Result<Vec<Quantity>> {
    if names.is_empty() {
        let defaults: &[Quantity] = match (family, massless) {
            (Family::Canonical, true) => &[
                Quantity::Energy,
                Quantity::Momentum,
                Quantity::VarX,
                Quantity::VarP,
                Quantity::ProductXp,
            ],
            (Family::Lorentzian, _) => &[
                Quantity::Energy,
                Quantity::Momentum,
                Quantity::Velocity,
                Quantity::VarX,
                Quantity::VarP,
                Quantity::VarV,
                Quantity::ProductXp,
            ],
            _ => &[
                Quantity::Energy,
                Quantity::Momentum,
                Quantity::Velocity,
                Quantity::VarX,
                Quantity::VarP,
                Quantity::ProductXp,
            ],
        };
        return Ok(defaults.to_vec());
    }
    names.iter().map(|s| Quantity::from_str(s)).collect()
}

fn cmd_compute(args: ComputeArgs, file_cfg: &FileConfig) -> Result<()> {
    if args.explain_units {
        println!("{UNITS_TABLE}");
        return Ok(());
    }
    let family = Family::from_str(&args.family)?;
    let r = if args.massless {
        if family != Family::Canonical {
            bail!("only the canonical family has a massless regime");
        }
        None
    } else {
        Some(
            args.r
                .or(file_cfg.r)
                .ok_or_else(|| anyhow!("--r is required (or --massless)"))?,
        )
    };

    let label = match family {
        Family::Lorentzian => {
            if args.pbar.is_some() || args.sbar.is_some() {
                bail!("lorentzian states are labelled by --beta, not a momentum");
            }
            args.beta
                .ok_or_else(|| anyhow!("--beta is required for lorentzian states"))?
        }
        _ => {
            if args.beta.is_some() {
                bail!("--beta labels lorentzian states only");
            }
            match (args.pbar, args.sbar, r) {
                (Some(_), Some(_), _) => bail!("give either --pbar or --sbar, not both"),
                (Some(p), None, Some(_)) => p,
                (None, Some(s), Some(rr)) => s / rr, // to m c units
                (None, Some(s), None) => s,
                (None, None, _) => 0.0,
                (Some(_), None, None) => bail!("the massless regime is labelled by --sbar"),
            }
        }
    };

    let quantities = parse_quantities(&args.quantities, family, args.massless)?;
    let si = if args.si {
        let mass = args
            .mass_mev
            .ok_or_else(|| anyhow!("--si requires --mass-mev"))?;
        Some(mass)
    } else {
        None
    };
    let consts = config::constants()?;
    let spec = StateSpec {
        family,
        r,
        xbar: args.xbar,
        label,
    };
    let record = compute_report(&spec, &quantities, args.verify, si.map(|m| (m, &consts)))?;
    println!("{}", serde_json::to_string_pretty(&record)?);
    Ok(())
}

fn cmd_sweep(args: SweepArgs, file_cfg: &FileConfig) -> Result<()> {
    let spec = match args.figure {
        Some(id) => {
            let mut spec = SweepSpec::figure(id, args.r.or(file_cfg.r))?;
            if let Some(points) = args.points.or(file_cfg.points) {
                spec.points = points;
            }
            spec
        }
        None => {
            let family = Family::from_str(
                args.family
                    .as_deref()
                    .ok_or_else(|| anyhow!("--family or --figure required"))?,
            )?;
            let axis = Axis::from_str(
                args.axis
                    .as_deref()
                    .ok_or_else(|| anyhow!("--axis required"))?,
            )?;
            if args.range.len() != 2 {
                bail!("--range lo,hi required");
            }
            let quantities: Vec<Quantity> = if args.quantities.is_empty() {
                bail!("--quantities required for a custom sweep");
            } else {
                args.quantities
                    .iter()
                    .map(|s| Quantity::from_str(s))
                    .collect::<Result<_>>()?
            };
            SweepSpec {
                family,
                r: args
                    .r
                    .or(file_cfg.r)
                    .ok_or_else(|| anyhow!("--r required"))?,
                axis,
                lo: args.range[0],
                hi: args.range[1],
                points: args.points.or(file_cfg.points).unwrap_or(101),
                quantities,
            }
        }
    };

    let csv = run_sweep(&spec)?;
    let out_name = args.out.unwrap_or_else(|| match args.figure {
        Some(id) => PathBuf::from(format!("fig{id}.csv")),
        None => PathBuf::from("sweep.csv"),
    });
    let path = config::resolve_out_path(&out_name, file_cfg);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    std::fs::write(&path, csv).with_context(|| format!("cannot write {}", path.display()))?;
    eprintln!("wrote {} ({} rows)", path.display(), spec.points);
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::all().to_vec()
    } else {
        vec![Suite::from_str(&args.suite)?]
    };
    let mut tol = TolOverrides::default();
    for t in &args.tol {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| anyhow!("--tol expects rel=X or abs=X"))?;
        let v: f64 = v.parse().context("tolerance must be a number")?;
        match k {
            "rel" => tol.rel = Some(v),
            "abs" => tol.abs = Some(v),
            other => bail!("unknown tolerance kind `{other}`"),
        }
    }

    let outcomes = run_suites(&suites, &tol);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "1..{}", outcomes.len())?;
    let mut all_pass = true;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let o = outcome?; // setup failure inside a check -> exit 2
        let status = if o.pass { "ok" } else { "not ok" };
        all_pass &= o.pass;
        writeln!(
            out,
            "{status} {} - {} residual={:.3e} tol={:.3e} # {}",
            i + 1,
            o.id,
            o.residual,
            o.tolerance,
            o.detail
        )?;
    }
    Ok(all_pass)
}
