//! Command-line front end. `run` is the whole program minus process exit so
//! it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::gauss::{gauss_sum_exact, is_exact_factor, FactorizationTarget, DEFAULT_MAX_TERMS};
use crate::methods::{simulate, DifferentialParams, MethodParams, SpatialParams};
use crate::output::{
    emit_factors, emit_plot_data, emit_results, render_csv, render_json, FactorizationReport,
    OutputFormat,
};
use crate::scanner::{
    full_factorize_with_jobs, scan_with_jobs, FactorKind, ScanConfig, DEFAULT_THRESHOLD,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gauss-nmr",
    version,
    about = "Factor integers by simulating NMR evaluation of truncated Gauss sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep trial factors over a range and classify each one.
    Scan(ScanArgs),
    /// Factor N completely by repeated scans up to the square root.
    Factorize(FactorizeArgs),
    /// Evaluate the truncated Gauss sum directly for one trial factor.
    GaussSum(GaussSumArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Differential,
    Spatial,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct TargetArgs {
    /// Number to factor, as a decimal integer >= 2.
    #[arg(long = "n", value_name = "DECIMAL")]
    n: String,
    /// Power of m in the pulse phase.
    #[arg(long, default_value_t = 2)]
    exponent: u32,
}

#[derive(Debug, Args)]
struct MethodArgs {
    #[arg(long, value_enum, default_value = "differential")]
    method: MethodArg,
    /// Truncation number; the sequence has M+1 pulses.
    #[arg(long = "m", value_name = "INT")]
    m: u64,
    /// Per-pulse flip angle in degrees (differential only).
    #[arg(long = "theta-deg", value_name = "DEG")]
    theta_deg: Option<f64>,
    /// Number of gradient slices (spatial only).
    #[arg(long)]
    slices: Option<usize>,
    /// Full dephasing turns across the sample (spatial only).
    #[arg(long)]
    windings: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Maximum number of worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Reserved; the simulation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the timestamp out of JSON metadata.
    #[arg(long = "no-timestamp")]
    no_timestamp: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long = "j-min")]
    j_min: u64,
    #[arg(long = "j-max")]
    j_max: u64,
    #[command(flatten)]
    output: OutputArgs,
    /// Two-column `j normalized` file for plotting.
    #[arg(long = "plot-out")]
    plot_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FactorizeArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[command(flatten)]
    method: MethodArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GaussSumArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long = "j")]
    j: u64,
    #[arg(long = "m")]
    m: u64,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

pub fn parse_n(text: &str) -> std::result::Result<u64, String> {
    let text = text.trim();
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("--n expects a decimal integer, got {text:?}"));
    }
    let n: u64 = text.parse().map_err(|_| {
        format!(
            "--n {text} exceeds the supported range (at most {})",
            u64::MAX
        )
    })?;
    if n < 2 {
        return Err(format!("--n must be at least 2, got {n}"));
    }
    Ok(n)
}

fn build_target(args: &TargetArgs) -> std::result::Result<FactorizationTarget, Failure> {
    let n = parse_n(&args.n).map_err(Failure::Config)?;
    Ok(FactorizationTarget::new(n)?
        .with_exponent(args.exponent)?
        .with_max_terms(DEFAULT_MAX_TERMS))
}

fn build_params(
    args: &MethodArgs,
    err: &mut dyn Write,
) -> std::result::Result<MethodParams, Failure> {
    match args.method {
        MethodArg::Differential => {
            if args.slices.is_some() || args.windings.is_some() {
                let _ = writeln!(
                    err,
                    "warning: --slices/--windings are ignored by the differential method"
                );
            }
            let params = match args.theta_deg {
                Some(deg) => DifferentialParams::from_degrees(deg)?,
                None => DifferentialParams::default(),
            };
            Ok(MethodParams::Differential(params))
        }
        MethodArg::Spatial => {
            if args.theta_deg.is_some() {
                let _ = writeln!(
                    err,
                    "warning: --theta-deg is ignored by the spatial method (flip angle is pi/(M+1))"
                );
            }
            let defaults = SpatialParams::default();
            Ok(MethodParams::Spatial(SpatialParams::new(
                args.slices.unwrap_or(defaults.n_slices()),
                args.windings.unwrap_or(defaults.windings()),
            )?))
        }
    }
}

fn build_config(
    target: &FactorizationTarget,
    args: &MethodArgs,
    j_min: u64,
    j_max: u64,
    err: &mut dyn Write,
) -> std::result::Result<ScanConfig, Failure> {
    if args.jobs == Some(0) {
        return Err(Failure::Config("--jobs must be at least 1".into()));
    }
    let params = build_params(args, err)?;
    let cfg = ScanConfig::new(params, j_min, j_max, args.m)?.with_threshold(args.threshold)?;
    // Errors that would hit every trial factor are configuration errors.
    simulate(target, j_min, args.m, &params)?;
    if let MethodParams::Differential(p) = params {
        if let Some(w) = p.small_angle_warning(args.m) {
            let _ = writeln!(err, "warning: {w}");
        }
    }
    Ok(cfg)
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn run_scan(args: ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let target = build_target(&args.target)?;
    let cfg = build_config(&target, &args.method, args.j_min, args.j_max, err)?;
    let mut result = scan_with_jobs(&target, &cfg, args.method.jobs);
    if args.output.no_timestamp {
        result = result.strip_timestamp();
    }

    let format = OutputFormat::from(args.output.format);
    if let Some(path) = &args.output.out {
        emit_results(&result, format, path)?;
    }
    if let Some(path) = &args.plot_out {
        emit_plot_data(&result, path)?;
    }

    let meta = &result.metadata;
    let w = |e: std::io::Error| Failure::Runtime(format!("stdout: {e}"));
    writeln!(
        out,
        "N={} method={} M={} j={}..{}",
        meta.n, meta.method, meta.m, meta.j_min, meta.j_max
    )
    .map_err(w)?;
    writeln!(out, "classified factors: {}", join(&result.classified())).map_err(w)?;
    for f in result.failures() {
        let _ = writeln!(err, "j={}: {}", f.j, f.error.as_deref().unwrap_or_default());
    }
    if args.output.out.is_none() {
        let text = match format {
            OutputFormat::Csv => render_csv(&result),
            OutputFormat::Json => render_json(&result),
        };
        out.write_all(text.as_bytes()).map_err(w)?;
    }
    Ok(())
}

fn run_factorize(args: FactorizeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let target = build_target(&args.target)?;
    let upper = target.n().isqrt().max(2);
    let cfg = build_config(&target, &args.method, 2, upper, err)?;
    let factors = full_factorize_with_jobs(&target, &cfg, args.method.jobs);
    let report = FactorizationReport {
        n: target.n(),
        method: cfg.method(),
        m: cfg.m(),
        factors,
    };
    let product_ok = report.product() == Some(target.n())
        && report
            .factors
            .iter()
            .all(|f| is_exact_factor(target.n(), f.value));
    if !product_ok {
        return Err(Failure::Runtime(format!(
            "factor product check failed for {}",
            report.summary()
        )));
    }

    let w = |e: std::io::Error| Failure::Runtime(format!("stdout: {e}"));
    writeln!(out, "{}", report.summary()).map_err(w)?;
    for f in report
        .factors
        .iter()
        .filter(|f| f.kind == FactorKind::Unresolved)
    {
        writeln!(out, "note: {} was not confirmed prime by the scan", f.value).map_err(w)?;
    }
    if let Some(path) = &args.output.out {
        emit_factors(&report, args.output.format.into(), path)?;
    }
    Ok(())
}

fn run_gauss_sum(args: GaussSumArgs, out: &mut dyn Write) -> Outcome {
    let target = build_target(&args.target)?;
    let value = gauss_sum_exact(&target, args.j, args.m)?;
    let w = |e: std::io::Error| Failure::Runtime(format!("stdout: {e}"));
    writeln!(
        out,
        "N={} j={} M={} exponent={}",
        target.n(),
        args.j,
        args.m,
        target.exponent()
    )
    .map_err(w)?;
    writeln!(out, "re {:.9} im {:.9}", value.re, value.im).map_err(w)?;
    writeln!(out, "magnitude {:.6}", value.magnitude).map_err(w)?;
    writeln!(
        out,
        "exact factor: {}",
        if is_exact_factor(target.n(), args.j) {
            "yes"
        } else {
            "no"
        }
    )
    .map_err(w)?;
    Ok(())
}

/// Parses `argv` (including the program name) and runs the selected mode.
/// Returns the process exit status.
pub fn run_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{rendered}");
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_CONFIG
                    } else {
                        EXIT_OK
                    }
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_CONFIG
                }
            };
        }
    };

    let outcome = match cli.command {
        Command::Scan(args) => run_scan(args, out, err),
        Command::Factorize(args) => run_factorize(args, out, err),
        Command::GaussSum(args) => run_gauss_sum(args, out),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_RUNTIME
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}
