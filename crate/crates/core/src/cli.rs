//! Command-line front end.
//!
//! Exit codes: 0 ok, 2 parse error (including unknown check names),
//! 3 validation error, 4 I/O error, 5 failed condition or inequality
//! violation.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use crate::asymptotics::{lemma1_experiment, make_mixing_sequence, Schedule, DEFAULT_TOL};
use crate::checks::{run_all, run_check, total_violations, CheckName, CheckReport, CheckSpec};
use crate::entropy::Bits;
use crate::error::Error;
use crate::privacy::{fano_bound_from_channel, fano_privacy_bound};
use crate::qchannel::ChannelDocument;
use crate::qstate::{DensityOperator, StateDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_CONDITION: i32 = 5;

/// Decimal places of the `F` and `p` columns of the sweep CSV.
pub const CSV_DECIMALS: i32 = 9;

#[derive(Debug, Parser)]
#[command(name = "qprivacy", version, about = "Quantum privacy lower bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Privacy bounds for a state and a channel given as JSON files.
    Bound {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        channel: PathBuf,
    },
    /// CSV sweep of the fidelity bound p(F) for several dimensions.
    FanoCurve(FanoCurveArgs),
    /// Seeded randomized inequality suites, one JSON report per line.
    Fuzz(FuzzArgs),
    /// Finite-n check of the semicontinuity lemma on mixing sequences.
    Asymptotic(AsymptoticArgs),
}

#[derive(Debug, Args)]
pub struct FanoCurveArgs {
    #[arg(long = "s-b", default_value_t = 6.0)]
    pub s_b: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4, 8])]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long = "f-min", default_value_t = 0.0)]
    pub f_min: f64,
    #[arg(long = "f-max", default_value_t = 1.0)]
    pub f_max: f64,
    /// Evaluate at F = 0 and F = 1 when they bound the range.
    #[arg(long)]
    pub include_endpoints: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    /// Comma-separated check names.
    #[arg(
        long,
        value_delimiter = ',',
        required_unless_present = "all",
        conflicts_with = "all"
    )]
    pub checks: Vec<String>,
    /// Every check at dimensions 2 and 3.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 2, conflicts_with = "all")]
    pub dim: usize,
    /// Kraus operators per random channel.
    #[arg(long = "env-dim", default_value_t = 2, conflicts_with = "all")]
    pub env_dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::checks::DEFAULT_ATOL)]
    pub atol: f64,
    /// Include wall time in each report (breaks byte-identical output).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct AsymptoticArgs {
    /// Limit of Bob's sequence.
    #[arg(long)]
    pub base: PathBuf,
    /// State mixed into Bob's limit.
    #[arg(long)]
    pub perturbation: PathBuf,
    /// `harmonic` or `geometric:<r>`.
    #[arg(long, default_value = "harmonic")]
    pub schedule: Schedule,
    #[arg(long = "n-max", default_value_t = 1000)]
    pub n_max: usize,
    /// Defaults to n_max / 10.
    #[arg(long = "tail-start")]
    pub tail_start: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Limit of Eve's sequence; defaults to Bob's.
    #[arg(long = "env-base")]
    pub env_base: Option<PathBuf>,
    /// Eve's perturbation; defaults to Bob's.
    #[arg(long = "env-perturbation")]
    pub env_perturbation: Option<PathBuf>,
    /// Reference state bounding Bob's tail entropies; defaults to Bob's limit.
    #[arg(long = "rho-star")]
    pub rho_star: Option<PathBuf>,
}

/// A failed command: message for stderr and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self::new(EXIT_IO, format!("{}: {e}", path.display()))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownCheck(_) => EXIT_PARSE,
            Error::ConditionViolated(_) => EXIT_CONDITION,
            _ => EXIT_VALIDATION,
        };
        Self::new(code, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parameters of the `p(F)` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub s_b: Bits,
    pub dims: Vec<usize>,
    pub f_min: f64,
    pub f_max: f64,
    pub samples: usize,
    pub include_endpoints: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> crate::Result<()> {
        if !(0.0 <= self.f_min && self.f_min < self.f_max && self.f_max <= 1.0) {
            return Err(Error::BadSweep(format!(
                "need 0 <= f_min < f_max <= 1, got f_min={} f_max={}",
                self.f_min, self.f_max
            )));
        }
        if self.samples < 2 {
            return Err(Error::BadSweep(format!(
                "samples must be at least 2, got {}",
                self.samples
            )));
        }
        if self.dims.is_empty() {
            return Err(Error::BadSweep("no dimensions given".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(Error::BadDim(d));
        }
        if !(self.s_b.0 >= 0.0) || !self.s_b.0.is_finite() {
            return Err(Error::NegativeEntropy(self.s_b.0));
        }
        Ok(())
    }

    /// `samples` uniformly spaced fidelities. A range end at exactly 0 or 1
    /// is stepped over unless `include_endpoints` is set, so the default
    /// `[0, 1]` sweep is the open grid `k / (samples + 1)`.
    pub fn grid(&self) -> Vec<f64> {
        let open_lo = usize::from(self.f_min == 0.0 && !self.include_endpoints);
        let open_hi = usize::from(self.f_max == 1.0 && !self.include_endpoints);
        let intervals = (self.samples - 1 + open_lo + open_hi) as f64;
        let step = (self.f_max - self.f_min) / intervals;
        (0..self.samples)
            .map(|k| {
                let f = self.f_min + (k + open_lo) as f64 * step;
                round_decimals(f.min(self.f_max), CSV_DECIMALS)
            })
            .collect()
    }

    /// `(d, F, p)` rows, dimensions in the given order.
    pub fn rows(&self) -> crate::Result<Vec<(usize, f64, f64)>> {
        self.validate()?;
        let grid = self.grid();
        let mut rows = Vec::with_capacity(grid.len() * self.dims.len());
        for &d in &self.dims {
            for &f in &grid {
                rows.push((d, f, fano_privacy_bound(self.s_b, f, d)?.0));
            }
        }
        Ok(rows)
    }
}

fn round_decimals(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (x * scale).round() / scale
}

/// CSV text with header `d,F,p`. Fidelities are quantized to the printed
/// precision before `p` is evaluated, so re-evaluating at the printed `F`
/// reproduces the printed `p`.
pub fn fano_curve_csv(sweep: &SweepSpec) -> crate::Result<String> {
    let prec = CSV_DECIMALS as usize;
    let mut csv = String::from("d,F,p\n");
    for (d, f, p) in sweep.rows()? {
        csv.push_str(&format!("{d},{f:.prec$},{p:.prec$}\n"));
    }
    Ok(csv)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn read_density(path: &Path) -> CliResult<DensityOperator> {
    let doc: StateDocument = read_json(path)?;
    let state = doc
        .to_state()
        .map_err(|e| CliError::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
    Ok(state.into_density())
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::new(EXIT_IO, format!("writing output: {e}")))
}

fn to_json<T: serde::Serialize>(value: &T, pretty: bool) -> String {
    let s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    s.expect("reports serialize")
}

fn cmd_bound(state: &Path, channel: &Path, out: &mut dyn Write) -> CliResult<()> {
    let rho = read_density(state)?;
    let doc: ChannelDocument = read_json(channel)?;
    let ch = doc
        .to_channel()
        .map_err(|e| CliError::new(EXIT_VALIDATION, format!("{}: {e}", channel.display())))?;
    let report = fano_bound_from_channel(&rho, &ch)?;
    emit(out, &(to_json(&report, true) + "\n"))
}

fn cmd_fano_curve(args: &FanoCurveArgs) -> CliResult<()> {
    let sweep = SweepSpec {
        s_b: Bits(args.s_b),
        dims: args.dims.clone(),
        f_min: args.f_min,
        f_max: args.f_max,
        samples: args.samples,
        include_endpoints: args.include_endpoints,
    };
    let csv = fano_curve_csv(&sweep)?;
    fs::write(&args.out, csv).map_err(|e| CliError::io(&args.out, e))
}

fn cmd_fuzz(args: &FuzzArgs, out: &mut dyn Write) -> CliResult<()> {
    let reports: Vec<CheckReport> = if args.all {
        run_all(args.seed, args.trials)?
    } else {
        let names = args
            .checks
            .iter()
            .map(|s| s.trim().parse::<CheckName>())
            .collect::<crate::Result<Vec<_>>>()?;
        names
            .into_iter()
            .map(|name| {
                let mut spec = CheckSpec::new(name, args.trials, args.dim, args.env_dim, args.seed);
                spec.atol = args.atol;
                run_check(&spec)
            })
            .collect::<crate::Result<Vec<_>>>()?
    };
    let mut text = String::new();
    for r in &reports {
        let r = if args.timing {
            r.clone()
        } else {
            r.clone().without_timing()
        };
        text.push_str(&to_json(&r, false));
        text.push('\n');
    }
    emit(out, &text)?;
    match total_violations(&reports) {
        0 => Ok(()),
        v => Err(CliError::new(EXIT_CONDITION, format!("{v} violation(s)"))),
    }
}

fn cmd_asymptotic(args: &AsymptoticArgs, out: &mut dyn Write) -> CliResult<()> {
    let base = read_density(&args.base)?;
    let pert = read_density(&args.perturbation)?;
    let env_base = match &args.env_base {
        Some(p) => read_density(p)?,
        None => base.clone(),
    };
    let env_pert = match &args.env_perturbation {
        Some(p) => read_density(p)?,
        None => pert.clone(),
    };
    let rho_star = match &args.rho_star {
        Some(p) => read_density(p)?,
        None => base.clone(),
    };
    let tail_start = args.tail_start.unwrap_or(args.n_max / 10);
    let seq_b = make_mixing_sequence(base, pert, args.schedule, args.n_max)?;
    let seq_e = make_mixing_sequence(env_base, env_pert, args.schedule, args.n_max)?;
    let report = lemma1_experiment(&seq_b, &seq_e, &rho_star, tail_start, args.tol)?;
    emit(out, &(to_json(&report, true) + "\n"))?;
    if report.conditions_hold {
        Ok(())
    } else {
        Err(CliError::new(
            EXIT_CONDITION,
            "tail inequalities fail within tol",
        ))
    }
}

/// Runs a parsed command, writing reports to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Bound { state, channel } => cmd_bound(state, channel, out),
        Command::FanoCurve(args) => cmd_fano_curve(args),
        Command::Fuzz(args) => cmd_fuzz(args, out),
        Command::Asymptotic(args) => cmd_asymptotic(args, out),
    }
}
