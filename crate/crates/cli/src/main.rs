//! `nkcurves`: batch front end for structure checks and curve-family
//! experiments. Exit codes: 0 pass, 1 a check failed or the hypothesis is
//! violated, 2 usage or config error, 3 numerical failure.

mod commands;
mod config;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Abort;
use config::{background_from_flags, DriveKind, ExperimentConfig};

#[derive(Debug)]
pub struct UsageError(pub String);

#[derive(Parser)]
#[command(
    name = "nkcurves",
    version,
    about = "Nearly Kähler backgrounds and pseudoholomorphic curve families"
)]
#[command(
    after_help = "Tolerances are overridden with --tol.<name>=<value>; names: structure, type, lambda, \
structure-equation, nk-metric, cr, budget, step, drift, stokes.\n\
Reports go to --out, else $NKCURVES_OUT, else the working directory."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Almost-Hermitian invariants, type of dω and the structure equations.
    VerifyStructure(Common),
    /// Golden-section search for the nearly Kähler metric on S³×S³.
    FindNkMetric {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
    },
    /// Volume, area and CR residual of a seed curve.
    CurveVolume {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Builds a family, then reports volume drift and the Stokes identity.
    Family {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Hausdorff distance between two great spheres on S⁶.
    Hausdorff {
        #[command(flatten)]
        common: Common,
        /// First associative triple, e.g. 1,2,3.
        #[arg(long, value_parser = parse_triple)]
        first: Option<[usize; 3]>,
        #[arg(long, value_parser = parse_triple)]
        second: Option<[usize; 3]>,
    },
    /// Builds a family and reports the per-step Stokes breakdown.
    StokesCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        family: FamilyArgs,
    },
}

#[derive(Args)]
struct Common {
    /// Replay a config file or the config echoed in a report.
    #[arg(long)]
    config: Option<PathBuf>,
    /// s6, s3s3 or torus.
    #[arg(long)]
    background: Option<String>,
    /// Off-diagonal metric coefficient on s3s3 (default -0.5).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Exchange the S³ factors on s3s3.
    #[arg(long)]
    swap_factors: bool,
    /// Conformal factor on the torus (default "sin(x5)").
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    resolution: Option<u32>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    /// Great-sphere triple on s6, e.g. 1,2,3.
    #[arg(long, value_parser = parse_triple)]
    triple: Option<[usize; 3]>,
    /// Subtorus shift on the torus, four numbers.
    #[arg(long, value_parser = parse_shift, allow_hyphen_values = true)]
    shift: Option<[f64; 4]>,
    /// Subtorus time on the torus.
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    drive: Option<DriveKind>,
    /// Size of the random drive per unit time.
    #[arg(long)]
    magnitude: Option<f64>,
}

fn parse_list<T: std::str::FromStr, const N: usize>(s: &str) -> Result<[T; N], String> {
    let items: Vec<T> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| format!("bad entry `{x}`")))
        .collect::<Result<_, _>>()?;
    items
        .try_into()
        .map_err(|_| format!("expected {N} comma-separated values"))
}

fn parse_triple(s: &str) -> Result<[usize; 3], String> {
    parse_list(s)
}

fn parse_shift(s: &str) -> Result<[f64; 4], String> {
    parse_list(s)
}

/// Pulls `--tol.<name>=<value>` and `--tol.<name> <value>` out of the
/// argument list.
fn split_tolerances(args: Vec<String>) -> Result<(Vec<String>, BTreeMap<String, f64>), UsageError> {
    let mut rest = Vec::new();
    let mut tols = BTreeMap::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(spec) = arg.strip_prefix("--tol.") else {
            rest.push(arg);
            continue;
        };
        let (name, value) = match spec.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| UsageError(format!("--tol.{spec} needs a value")))?;
                (spec.to_string(), v)
            }
        };
        let value: f64 = value
            .parse()
            .map_err(|_| UsageError(format!("--tol.{name}: `{value}` is not a number")))?;
        tols.insert(name, value);
    }
    Ok((rest, tols))
}

fn apply_common(c: &mut ExperimentConfig, common: Common) -> Result<(), UsageError> {
    if common.background.is_some()
        || common.b.is_some()
        || common.field.is_some()
        || common.swap_factors
    {
        let name = common
            .background
            .unwrap_or_else(|| c.background.name().to_string());
        c.background = background_from_flags(
            &name,
            common.b,
            common.swap_factors,
            common.field.as_deref(),
        )?;
    }
    if common.resolution.is_some() {
        c.resolution = common.resolution;
    }
    if common.steps.is_some() {
        c.steps = common.steps;
    }
    if let Some(s) = common.seed {
        c.seed = s;
    }
    if let Some(p) = common.points {
        c.points = p;
    }
    if common.out.is_some() {
        c.out = common.out;
    }
    Ok(())
}

fn apply_curve(c: &mut ExperimentConfig, a: CurveArgs) {
    if let Some(t) = a.triple {
        c.curve.triple = t;
    }
    if let Some(s) = a.shift {
        c.curve.shift = s;
    }
    if let Some(t) = a.t {
        c.curve.t = t;
    }
}

fn apply_family(c: &mut ExperimentConfig, a: FamilyArgs) {
    if a.drive.is_some() {
        c.family.drive = a.drive;
    }
    if let Some(m) = a.magnitude {
        c.family.magnitude = m;
    }
}

fn base_config(name: &str, common: &Common) -> Result<ExperimentConfig, UsageError> {
    let mut c = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            ExperimentConfig::load(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if !c.command.is_empty() && c.command != name {
        return Err(UsageError(format!(
            "config is for `{}`, not `{name}`",
            c.command
        )));
    }
    c.command = name.to_string();
    Ok(c)
}

type Runner = fn(&ExperimentConfig) -> Result<report::Outcome, Abort>;

fn configure(
    command: Command,
    tols: BTreeMap<String, f64>,
) -> Result<(ExperimentConfig, Runner), UsageError> {
    let (mut c, run): (ExperimentConfig, Runner) = match command {
        Command::VerifyStructure(common) => {
            let mut c = base_config("verify-structure", &common)?;
            apply_common(&mut c, common)?;
            (c, commands::verify_structure)
        }
        Command::FindNkMetric { common, lo, hi } => {
            let mut c = base_config("find-nk-metric", &common)?;
            apply_common(&mut c, common)?;
            if let Some(lo) = lo {
                c.search.lo = lo;
            }
            if let Some(hi) = hi {
                c.search.hi = hi;
            }
            (c, commands::find_metric)
        }
        Command::CurveVolume { common, curve } => {
            let mut c = base_config("curve-volume", &common)?;
            apply_common(&mut c, common)?;
            apply_curve(&mut c, curve);
            (c, commands::curve_volume_cmd)
        }
        Command::Family {
            common,
            curve,
            family,
        } => {
            let mut c = base_config("family", &common)?;
            apply_common(&mut c, common)?;
            apply_curve(&mut c, curve);
            apply_family(&mut c, family);
            (c, commands::family)
        }
        Command::Hausdorff {
            common,
            first,
            second,
        } => {
            let mut c = base_config("hausdorff", &common)?;
            apply_common(&mut c, common)?;
            if let Some(f) = first {
                c.hausdorff.first = f;
            }
            if let Some(s) = second {
                c.hausdorff.second = s;
            }
            (c, commands::hausdorff_cmd)
        }
        Command::StokesCheck {
            common,
            curve,
            family,
        } => {
            let mut c = base_config("stokes-check", &common)?;
            apply_common(&mut c, common)?;
            apply_curve(&mut c, curve);
            apply_family(&mut c, family);
            (c, commands::stokes)
        }
    };
    c.tolerances.extend(tols);
    c.resolve()?;
    Ok((c, run))
}

fn main() -> ExitCode {
    let usage = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    };
    let (args, tols) = match split_tolerances(std::env::args().collect()) {
        Ok(x) => x,
        Err(e) => return usage(e.0),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (config, run) = match configure(cli.command, tols) {
        Ok(x) => x,
        Err(e) => return usage(e.0),
    };
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(Abort::Usage(msg)) => return usage(msg),
        Err(Abort::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            return ExitCode::from(3);
        }
    };
    match report::write(&config, &outcome) {
        Ok(path) => {
            println!("{:?}: {}", outcome.status, outcome.summary);
            println!("report: {}", path.display());
            ExitCode::from(outcome.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            ExitCode::from(2)
        }
    }
}
