//! The `ptail` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 data error
//! (unreadable or unusable input), 4 numeric error (domain, bracketing,
//! quadrature).

pub mod config;
pub mod ingest;
pub mod render;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::coverage_sim::{figure2_curves, render_table, run_coverage, FIGURE2_PRESETS};
use crate::distributions::DistributionSpec;
use crate::error::Error;
use crate::rng::RngStream;
use crate::tail_math::{alpha_for, tail_value};
use crate::ustat::SortedSample;
use crate::variance_ci::{interval_curve, VarianceMethod, DEFAULT_BOOTSTRAP_REPS};

use config::{build_study, parse_settings, ConfigError, StudySettings};
use ingest::{parse_delimiter, read_sample, ColumnSelector, HeaderMode, IngestError, IngestSpec};
use render::{sig15, to_csv, to_svg, AxisMode, PlotDocument, PlotRow};

pub const SEED_ENV: &str = "PTAIL_SEED";
/// Below this sample size `--method auto` picks the jackknife, above it the
/// plug-in variance.
pub const AUTO_METHOD_SWITCH: usize = 2000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{stage}: {source}")]
    Data { stage: &'static str, source: Box<dyn std::error::Error + Send + Sync> },
    #[error("{stage}: {source}")]
    Numeric { stage: &'static str, source: Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Data { .. } => 3,
            CliError::Numeric { .. } => 4,
        }
    }

    fn io(stage: &'static str, e: io::Error) -> Self {
        CliError::Data { stage, source: Box::new(e) }
    }

    /// Sample-shape problems are data errors; everything else is numeric.
    fn core(stage: &'static str, e: Error) -> Self {
        match e {
            Error::InvalidSample(_) | Error::InsufficientExceedances { .. } | Error::InsufficientSample { .. } => {
                CliError::Data { stage, source: Box::new(e) }
            }
            e => CliError::Numeric { stage, source: e },
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Data { stage: "ingest", source: Box::new(e) }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ptail", version, about = "Pareto tail plots, tail-index conversion and coverage studies")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    /// Jackknife below 2000 observations, plug-in from there on.
    Auto,
    Unbiased,
    Jackknife,
    Bootstrap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tail plot with pointwise confidence band from one column of a data file.
    Plot {
        /// Input file; `-` reads standard input.
        input: PathBuf,
        /// Column position (1-based) or header name.
        #[arg(long, default_value = "1")]
        column: ColumnSelector,
        /// Field delimiter: one character, `tab` or `space`.
        #[arg(long, default_value = ",", value_parser = parse_delimiter)]
        delimiter: u8,
        #[arg(long, value_enum, default_value_t = HeaderMode::Auto)]
        header: HeaderMode,
        /// Keep only observations ≥ this value (applied before --divisor).
        #[arg(long)]
        min: Option<f64>,
        /// Divide every kept observation by this.
        #[arg(long, default_value_t = 1.0)]
        divisor: f64,
        /// Plot thresholds are the order statistics up to this sample quantile.
        #[arg(long, default_value_t = 0.995)]
        quantile: f64,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
        #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_REPS)]
        bootstrap_reps: usize,
        /// Bootstrap seed (overrides PTAIL_SEED).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = AxisMode::Linear)]
        axis: AxisMode,
        #[arg(long, value_enum, default_value_t = PlotFormat::Csv)]
        format: PlotFormat,
        /// Output file (default: standard output).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Tail index whose Pareto tail value is T.
    Alpha {
        #[arg(allow_negative_numbers = true)]
        t: f64,
    },
    /// Pareto tail value of tail index ALPHA.
    Tvalue {
        #[arg(allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Monte Carlo coverage of the confidence intervals.
    Coverage {
        /// Study file with a [coverage] section.
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in study: table1, table2 or smoke.
        #[arg(long)]
        preset: Option<String>,
        /// Comma-separated subset of unbiased, bootstrap, jackknife.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        bootstrap_reps: Option<usize>,
        #[arg(long)]
        level: Option<f64>,
        /// Overrides PTAIL_SEED, which overrides the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the full report as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the text table here instead of standard output.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Draws a sample, one value per line.
    ///
    /// The distribution is `family key=value ...`; `n=` and `seed=` may be
    /// given inline as well.
    Simulate {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Simulated tail plots of a row of reference distributions.
    Figure {
        /// pareto, loggamma or shifted_gamma.
        preset: String,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
        format: DataFormat,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Flag, then environment, then `fallback`.
fn resolve_seed(flag: Option<u64>, fallback: Option<u64>) -> Result<Option<u64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(fallback),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) if p != Path::new("-") => fs::write(p, text).map_err(|e| CliError::io("write", e)),
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::io("write", e))
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn load_sample(input: &Path, spec: &IngestSpec) -> Result<SortedSample, CliError> {
    if input == Path::new("-") {
        Ok(read_sample(io::stdin().lock(), spec)?)
    } else {
        let file = fs::File::open(input).map_err(|e| CliError::Data {
            stage: "read",
            source: format!("{}: {e}", input.display()).into(),
        })?;
        Ok(read_sample(io::BufReader::new(file), spec)?)
    }
}

/// Number of leading order statistics at or below the `q` sample quantile,
/// at least one and leaving at least two exceedances.
pub fn grid_size(sample: &SortedSample, q: f64) -> usize {
    let cap = sample.quantile(q);
    let n = sample.len();
    sample.values().partition_point(|&x| x <= cap).clamp(1, n - 1)
}

pub fn auto_method(n: usize, choice: MethodChoice, bootstrap_reps: usize, seed: u64) -> VarianceMethod {
    match choice {
        MethodChoice::Auto if n < AUTO_METHOD_SWITCH => VarianceMethod::Jackknife,
        MethodChoice::Auto | MethodChoice::Unbiased => VarianceMethod::Unbiased,
        MethodChoice::Jackknife => VarianceMethod::Jackknife,
        MethodChoice::Bootstrap => VarianceMethod::Bootstrap { reps: bootstrap_reps, seed },
    }
}

/// Tail-plot rows, one per distinct threshold.
pub fn plot_rows(
    sample: &SortedSample,
    quantile: f64,
    level: f64,
    method: VarianceMethod,
) -> Result<Vec<PlotRow>, CliError> {
    if !(quantile > 0.0 && quantile <= 1.0) {
        return Err(CliError::Usage(format!("--quantile must be in (0, 1], got {quantile}")));
    }
    let k_max = grid_size(sample, quantile);
    let points = interval_curve(sample, k_max, level, method).map_err(|e| CliError::core("estimate", e))?;
    let mut rows: Vec<PlotRow> = points.iter().map(PlotRow::from).collect();
    rows.dedup_by(|b, a| a.u == b.u);
    Ok(rows)
}

fn cmd_plot(cmd: Command) -> Result<(), CliError> {
    let Command::Plot {
        input,
        column,
        delimiter,
        header,
        min,
        divisor,
        quantile,
        level,
        method,
        bootstrap_reps,
        seed,
        axis,
        format,
        output,
    } = cmd
    else {
        unreachable!()
    };
    let spec = IngestSpec { column, delimiter, header, min, divisor };
    let sample = load_sample(&input, &spec)?;
    let seed = resolve_seed(seed, Some(crate::cli::config::DEFAULT_SEED))?.unwrap_or_default();
    let method = auto_method(sample.len(), method, bootstrap_reps, seed);
    let rows = plot_rows(&sample, quantile, level, method)?;
    let text = match format {
        PlotFormat::Csv => to_csv(&rows).map_err(|e| CliError::Data { stage: "write", source: Box::new(e) })?,
        PlotFormat::Json => json(&PlotDocument { n: sample.len(), level, method: method.name(), points: &rows }),
        PlotFormat::Svg => to_svg(&rows, axis, level),
    };
    emit(output.as_deref(), &text)
}

fn cmd_coverage(cmd: Command) -> Result<(), CliError> {
    let Command::Coverage { config, preset, methods, reps, bootstrap_reps, level, seed, json: json_path, table } = cmd
    else {
        unreachable!()
    };
    let mut settings = match &config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Data {
                stage: "config",
                source: format!("{}: {e}", path.display()).into(),
            })?;
            parse_settings(&text)?
        }
        None => StudySettings::default(),
    };
    if let Some(p) = preset {
        settings.preset = Some(p);
    }
    if settings.preset.is_none() && config.is_none() {
        return Err(CliError::Usage("coverage needs --config or --preset".into()));
    }
    settings.methods = methods.or(settings.methods);
    settings.reps = reps.or(settings.reps);
    settings.bootstrap_reps = bootstrap_reps.or(settings.bootstrap_reps);
    settings.level = level.or(settings.level);
    settings.seed = resolve_seed(seed, settings.seed)?;
    let cells = build_study(&settings)?;
    let reports = cells
        .iter()
        .map(|c| run_coverage(c).map_err(|e| CliError::core("coverage", e)))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = json_path {
        emit(Some(&p), &json(&reports))?;
    }
    emit(table.as_deref(), &render_table(&reports))
}

/// Splits `n=`/`seed=` tokens off a distribution spec.
fn split_simulate_tokens(tokens: &[String]) -> Result<(String, Option<usize>, Option<u64>), CliError> {
    let mut rest = Vec::new();
    let (mut n, mut seed) = (None, None);
    let bad = |k: &str, v: &str| CliError::Usage(format!("`{k}` must be a non-negative integer, got `{v}`"));
    for tok in tokens.iter().flat_map(|t| t.split_whitespace()) {
        match tok.split_once('=') {
            Some(("n", v)) => n = Some(v.parse().map_err(|_| bad("n", v))?),
            Some(("seed", v)) => seed = Some(v.parse().map_err(|_| bad("seed", v))?),
            _ => rest.push(tok),
        }
    }
    Ok((rest.join(" "), n, seed))
}

fn cmd_simulate(cmd: Command) -> Result<(), CliError> {
    let Command::Simulate { spec, n, seed, output } = cmd else {
        unreachable!()
    };
    let (spec, inline_n, inline_seed) = split_simulate_tokens(&spec)?;
    let dist: DistributionSpec = spec.parse().map_err(|e| CliError::Usage(format!("distribution: {e}")))?;
    let n = n.or(inline_n).ok_or_else(|| CliError::Usage("simulate needs a sample size (--n or n=)".into()))?;
    let seed = resolve_seed(seed.or(inline_seed), Some(crate::cli::config::DEFAULT_SEED))?.unwrap_or_default();
    let sample = dist.sample(n, RngStream::new(seed, 0)).map_err(|e| CliError::core("simulate", e))?;
    let mut text = String::with_capacity(24 * n);
    for x in sample.values() {
        text.push_str(&format!("{x}\n"));
    }
    emit(output.as_deref(), &text)
}

fn cmd_figure(cmd: Command) -> Result<(), CliError> {
    let Command::Figure { preset, n, seed, format, output } = cmd else {
        unreachable!()
    };
    if !FIGURE2_PRESETS.contains(&preset.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown figure preset `{preset}` (expected one of {})",
            FIGURE2_PRESETS.join(", ")
        )));
    }
    let seed = resolve_seed(seed, Some(crate::cli::config::DEFAULT_SEED))?.unwrap_or_default();
    let fig = figure2_curves(&preset, n, seed).map_err(|e| CliError::core("figure", e))?;
    let text = match format {
        DataFormat::Json => json(&fig),
        DataFormat::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
            let write = |w: &mut csv::Writer<Vec<u8>>, rec: [String; 4]| {
                w.write_record(rec).map_err(|e| CliError::Data { stage: "write", source: Box::new(e) })
            };
            write(&mut w, ["dist", "u", "m", "t_hat"].map(String::from))?;
            for c in &fig.curves {
                for p in &c.points {
                    write(&mut w, [c.dist.to_string(), sig15(p.u), p.m.to_string(), sig15(p.t_hat)])?;
                }
            }
            let bytes = w.into_inner().map_err(|e| CliError::io("write", e.into_error()))?;
            String::from_utf8(bytes).expect("ASCII output")
        }
    };
    emit(output.as_deref(), &text)
}

const TVALUE_HINT: &str = "expects a tail value strictly between 0 and 1";
const ALPHA_HINT: &str = "expects a positive, finite tail index";

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Alpha { t } => {
            let a = alpha_for(t).map_err(|e| match e {
                Error::Domain { .. } => CliError::Usage(format!("alpha {TVALUE_HINT}: {e}")),
                e => CliError::core("invert", e),
            })?;
            emit(None, &format!("{}\n", sig15(a)))
        }
        Command::Tvalue { alpha } => {
            let t = tail_value(alpha).map_err(|e| match e {
                Error::Domain { .. } | Error::InvalidParameter { .. } => {
                    CliError::Usage(format!("tvalue {ALPHA_HINT}: {e}"))
                }
                e => CliError::core("tvalue", e),
            })?;
            emit(None, &format!("{}\n", sig15(t)))
        }
        cmd @ Command::Plot { .. } => cmd_plot(cmd),
        cmd @ Command::Coverage { .. } => cmd_coverage(cmd),
        cmd @ Command::Simulate { .. } => cmd_simulate(cmd),
        cmd @ Command::Figure { .. } => cmd_figure(cmd),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(cli)),
            Err(e) => Err(CliError::Usage(format!("--threads: {e}"))),
        },
        None => execute(cli),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ptail: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arguments_parse() {
        Cli::try_parse_from(["ptail", "plot", "-", "--column", "loss", "--delimiter", "tab", "--format", "svg"]).unwrap();
        Cli::try_parse_from(["ptail", "--threads", "2", "coverage", "--preset", "smoke", "--methods", "jackknife,unbiased"])
            .unwrap();
        assert!(Cli::try_parse_from(["ptail", "coverage", "--preset", "x", "--config", "y"]).is_err());
        Cli::try_parse_from(["ptail", "tvalue", "-1"]).unwrap();
    }

    #[test]
    fn simulate_tokens() {
        let toks: Vec<String> = ["pareto1", "x_m=1", "alpha=1", "n=5", "seed=7"].map(String::from).to_vec();
        let (spec, n, seed) = split_simulate_tokens(&toks).unwrap();
        assert_eq!((spec.as_str(), n, seed), ("pareto1 x_m=1 alpha=1", Some(5), Some(7)));
        let (spec, n, _) = split_simulate_tokens(&["weibull k=1 n=10".to_string()]).unwrap();
        assert_eq!((spec.as_str(), n), ("weibull k=1", Some(10)));
        assert!(split_simulate_tokens(&["n=x".to_string()]).is_err());
    }

    #[test]
    fn method_choice() {
        assert_eq!(auto_method(1999, MethodChoice::Auto, 9, 1), VarianceMethod::Jackknife);
        assert_eq!(auto_method(2000, MethodChoice::Auto, 9, 1), VarianceMethod::Unbiased);
        assert_eq!(auto_method(10, MethodChoice::Bootstrap, 9, 1), VarianceMethod::Bootstrap { reps: 9, seed: 1 });
    }

    #[test]
    fn two_point_sample() {
        let s = SortedSample::new(vec![1.0, 2.0]).unwrap();
        let rows = plot_rows(&s, 0.995, 0.95, VarianceMethod::Jackknife).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!((r.u, r.m), (1.0, 2));
        assert!((r.t_hat - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!((r.ci_lo, r.ci_hi), (r.t_hat, r.t_hat));
    }

    #[test]
    fn grid_and_ties() {
        let s = SortedSample::new((1..=1000).map(f64::from).collect()).unwrap();
        assert_eq!(grid_size(&s, 0.995), 995);
        assert_eq!(grid_size(&s, 1.0), 999);
        let tied = SortedSample::new(vec![1.0, 2.0, 2.0, 2.0, 3.0, 5.0]).unwrap();
        let rows = plot_rows(&tied, 1.0, 0.95, VarianceMethod::Jackknife).unwrap();
        let us: Vec<f64> = rows.iter().map(|r| r.u).collect();
        assert_eq!(us, vec![1.0, 2.0, 3.0]);
        assert!(rows.iter().all(|r| r.m >= 2));
        assert!(plot_rows(&tied, 0.0, 0.95, VarianceMethod::Jackknife).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::core("x", Error::InvalidSample(String::new())).exit_code(), 3);
        assert_eq!(CliError::core("x", Error::OutOfBracket { t: 0.0, lo: 0.0, hi: 0.0 }).exit_code(), 4);
    }
}
