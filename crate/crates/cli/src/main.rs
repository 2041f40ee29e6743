//! `ckflow`: orbits, invariant traces, equilibria and verification suites
//! for the deformed Cayley-Klein flows, written as CSV or JSON.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure (flow
//! undefined at the start, overflow, or a failing verification suite).

mod output;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ckflow::orbit::{sample_orbit, sample_reduced_orbit, time_grid};
use ckflow::reduced::LevelSetReport;
use ckflow::verify::{run_all, run_suite, Suite, SuiteReport};
use ckflow::{
    classify_level_set, fixed_points, reduce, FixedPointReport, GeneratorId, GroupPoint, OmegaParams,
    ReducedParams,
};

use crate::output::{Format, Sink};

#[derive(Debug, Parser)]
#[command(name = "ckflow", version, about = "Flows and invariants of deformed Cayley-Klein translation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a closed-form orbit with its invariants.
    Orbit(OrbitArgs),
    /// Equilibria of the reduced plane system for given (a, b).
    FixedPoints(FixedPointArgs),
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
    /// Reduce a point with respect to a boost generator J_{iN}.
    Reduce(ReduceArgs),
    /// Describe a level set of the Casimir.
    LevelSet(LevelSetArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
struct AlgebraArgs {
    /// Dimension N; inferred from --omegas when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Contraction parameters ω_2,…,ω_N.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    omegas: Option<Vec<f64>>,
    /// Deformation parameter.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    z: f64,
}

impl AlgebraArgs {
    fn params(&self) -> anyhow::Result<OmegaParams> {
        let omegas = match (&self.omegas, self.n) {
            (Some(w), _) => w.clone(),
            (None, Some(n)) if n >= 2 => vec![1.0; n - 1],
            _ => bail!("--omegas (or --n) is required"),
        };
        let n = self.n.unwrap_or(omegas.len() + 1);
        Ok(OmegaParams::with_dimension(n, omegas)?)
    }
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Generator label `i,j`.
    #[arg(long)]
    generator: Option<GeneratorId>,
    /// Start point: N coordinates, or (x,y) in reduced mode.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    point: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    /// Reduced-mode parameter a.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Reduced-mode parameter b.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Add the deviation from adaptive RK integration of the field.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct FixedPointArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// One of jacobi, closure, conservation, group-law, limit-z0, hamiltonian, all.
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Boost generator `i,N`.
    #[arg(long)]
    generator: GeneratorId,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    point: Vec<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Debug, Args)]
struct LevelSetArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long, allow_hyphen_values = true)]
    value: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, default_value = "-")]
    output: String,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Numeric(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn numeric(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Numeric(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Orbit(args) => cmd_orbit(args),
        Command::FixedPoints(args) => cmd_fixed_points(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::LevelSet(args) => cmd_level_set(args),
    }
}

fn cmd_orbit(args: OrbitArgs) -> Result<(), Failure> {
    let times = time_grid(args.t_max, args.dt).map_err(anyhow::Error::from)?;
    let mut sink = Sink::open(&args.out.output, args.out.format.into())?;
    match (args.a, args.b) {
        (Some(a), Some(b)) => {
            if args.generator.is_some() || args.algebra.omegas.is_some() {
                return Err(anyhow!("reduced mode (--a/--b) excludes --generator and --omegas").into());
            }
            if args.oracle {
                return Err(anyhow!("--oracle is only available for generator orbits").into());
            }
            let [x, y] = <[f64; 2]>::try_from(args.point.as_slice())
                .map_err(|_| anyhow!("reduced mode needs --point x,y"))?;
            let rows = sample_reduced_orbit(ReducedParams::new(a, b), x, y, &times).map_err(numeric)?;
            if rows.first().is_some_and(|r| !r.defined) {
                return Err(numeric(anyhow!("flow undefined at t = 0")));
            }
            sink.reduced_orbit(a, b, &rows)?;
        }
        (None, None) => {
            let params = args.algebra.params()?;
            let gen = args.generator.ok_or_else(|| anyhow!("--generator is required"))?;
            gen.check(params.dim()).map_err(anyhow::Error::from)?;
            let point = GroupPoint::new(args.point);
            if point.dim() != params.dim() {
                return Err(anyhow!("--point needs {} coordinates, got {}", params.dim(), point.dim()).into());
            }
            let rows =
                sample_orbit(&params, args.algebra.z, gen, &point, &times, args.oracle).map_err(numeric)?;
            if rows.first().is_some_and(|r| !r.defined) {
                return Err(numeric(anyhow!("flow undefined at t = 0")));
            }
            sink.orbit(&params, args.algebra.z, gen, &rows, args.oracle)?;
        }
        _ => return Err(anyhow!("reduced mode needs both --a and --b").into()),
    }
    sink.finish()?;
    Ok(())
}

fn cmd_fixed_points(args: FixedPointArgs) -> Result<(), Failure> {
    let (Some(a), Some(b)) = (args.a, args.b) else {
        return Err(anyhow!("fixed-points needs both --a and --b").into());
    };
    let report: FixedPointReport = fixed_points(ReducedParams::new(a, b));
    let mut sink = Sink::open(&args.output, args.format.into())?;
    sink.fixed_points(a, b, &report)?;
    sink.finish()?;
    Ok(())
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    seed: u64,
    passed: bool,
    suites: &'a [SuiteReport],
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let reports = if args.suite == "all" {
        run_all(args.seed)
    } else {
        let suite: Suite = args.suite.parse().context("unknown suite")?;
        vec![run_suite(suite, args.seed)]
    };
    let passed = reports.iter().all(|r| r.passed);
    let mut sink = Sink::open(&args.output, args.format.into())?;
    sink.verify(&VerifySummary { seed: args.seed, passed, suites: &reports })?;
    sink.finish()?;
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.name()).collect();
        Err(numeric(anyhow!("suite failure: {}", failed.join(", "))))
    }
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), Failure> {
    let params = args.algebra.params()?;
    let n = params.dim();
    if args.algebra.z == 0.0 {
        return Err(anyhow!("reduce needs z != 0").into());
    }
    if !args.generator.is_boost(n) {
        return Err(anyhow!("reduce needs a boost generator i,{n}").into());
    }
    args.generator.check(n).map_err(anyhow::Error::from)?;
    let point = GroupPoint::new(args.point);
    if point.dim() != n {
        return Err(anyhow!("--point needs {n} coordinates, got {}", point.dim()).into());
    }
    let red = reduce(&params, args.algebra.z, args.generator.i, &point).map_err(numeric)?;
    let mut sink = Sink::open(&args.output, args.format.into())?;
    sink.reduction(&red)?;
    sink.finish()?;
    Ok(())
}

fn cmd_level_set(args: LevelSetArgs) -> Result<(), Failure> {
    let params = args.algebra.params()?;
    let report: LevelSetReport = classify_level_set(&params, args.algebra.z, args.value);
    let mut sink = Sink::open(&args.output, args.format.into())?;
    sink.level_set(&report)?;
    sink.finish()?;
    Ok(())
}
