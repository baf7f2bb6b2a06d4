//! Command-line front end.
//!
//! Subcommands: `fit`, `compare`, `split-study`, `gen`, `validate`.
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 runtime fault. Reports go to stdout unless `--out` is given.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use srgm_cuckoo::model::{default_bounds, ModelKind, ParamBounds, ALL_KINDS};
use srgm_cuckoo::report::{to_json, CompareReport, FitReport, SplitStudyReport};
use srgm_cuckoo::{
    compare, dataset, fit_best_of, split_study, CsConfig, FailureDataset, HarnessError, SplitSpec,
};

#[derive(Parser)]
#[command(
    name = "srgm-cuckoo",
    version,
    about = "Fit software reliability growth models with cuckoo search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one model to one dataset with a chronological train/test split
    Fit(FitArgs),
    /// Full-training comparison across models and datasets
    Compare(CompareArgs),
    /// Measure how the train fraction affects fit quality
    SplitStudy(SplitStudyArgs),
    /// Generate a synthetic dataset from a model curve
    Gen(GenArgs),
    /// Check a dataset file and print a summary
    Validate(ValidateArgs),
}

fn parse_kind(s: &str) -> Result<ModelKind, String> {
    s.parse::<ModelKind>().map_err(|e| e.to_string())
}

/// Bounds flag syntax: four colon-separated numbers. Semantic checks
/// (ordering, positivity) happen later and exit 2 like other validation.
#[derive(Debug, Clone, Copy)]
struct RawBounds {
    a_lo: f64,
    a_hi: f64,
    b_lo: f64,
    b_hi: f64,
}

fn parse_raw_bounds(s: &str) -> Result<RawBounds, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a_lo, a_hi, b_lo, b_hi] = parts.as_slice() else {
        return Err(format!(
            "expected a_lo:a_hi:b_lo:b_hi, got {} field(s)",
            parts.len()
        ));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("{t:?} is not a number"))
    };
    Ok(RawBounds {
        a_lo: num(a_lo)?,
        a_hi: num(a_hi)?,
        b_lo: num(b_lo)?,
        b_hi: num(b_hi)?,
    })
}

#[derive(Args)]
struct EngineArgs {
    /// Base RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generations per run
    #[arg(long)]
    generations: Option<usize>,
    /// Population size
    #[arg(long)]
    nests: Option<usize>,
    /// Worst-nest abandonment fraction in [0, 1]
    #[arg(long)]
    pa: Option<f64>,
    /// Lévy step scale as a fraction of each bound width
    #[arg(long)]
    alpha: Option<f64>,
    /// Lévy density exponent in (1, 3]
    #[arg(long)]
    levy_exponent: Option<f64>,
    /// Search region as a_lo:a_hi:b_lo:b_hi
    #[arg(long, value_parser = parse_raw_bounds)]
    bounds: Option<RawBounds>,
}

impl EngineArgs {
    /// Flags overlay the reference defaults, so an empty flag set
    /// reproduces the default configuration exactly.
    fn config(&self) -> CsConfig {
        let mut cfg = CsConfig {
            seed: self.seed,
            ..CsConfig::default()
        };
        if let Some(g) = self.generations {
            cfg.max_generations = g;
        }
        if let Some(n) = self.nests {
            cfg.n_nests = n;
        }
        if let Some(pa) = self.pa {
            cfg.pa = pa;
        }
        if let Some(alpha) = self.alpha {
            cfg.alpha = alpha;
        }
        if let Some(e) = self.levy_exponent {
            cfg.levy_exponent = e;
        }
        cfg
    }

    fn bounds(&self) -> Result<ParamBounds, Failure> {
        match self.bounds {
            None => Ok(default_bounds()),
            Some(raw) => ParamBounds::new(raw.a_lo, raw.a_hi, raw.b_lo, raw.b_hi)
                .map_err(|e| Failure::Data(format!("--bounds: {e}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Stamp the report with the emission time (epoch seconds); off by
    /// default so identical runs emit identical bytes
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Model kind: go, pow, dss, mo
    #[arg(long, value_parser = parse_kind)]
    model: ModelKind,
    /// Dataset CSV path
    #[arg(long)]
    data: PathBuf,
    /// Fraction of records used for training, in [0.5, 1.0]
    #[arg(long, default_value_t = 0.7)]
    train_fraction: f64,
    /// Seeds swept per fit; the lowest training RMSE wins
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Model kinds to include (repeatable; default: all four)
    #[arg(long = "model", value_parser = parse_kind)]
    model: Vec<ModelKind>,
    /// Dataset CSV paths (repeatable)
    #[arg(long = "data", required = true)]
    data: Vec<PathBuf>,
    /// Seeds swept per cell
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    /// Also write per-dataset plot rows (`model group value`) here
    #[arg(long)]
    plot_dir: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SplitStudyArgs {
    /// Model kind: go, pow, dss, mo
    #[arg(long, value_parser = parse_kind)]
    model: ModelKind,
    /// Dataset CSV path
    #[arg(long)]
    data: PathBuf,
    /// Train fractions to study
    #[arg(long, value_delimiter = ',', default_value = "0.9,0.8,0.7,0.6,0.5")]
    fractions: Vec<f64>,
    /// Seeds swept per fraction
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GenArgs {
    /// Model kind: go, pow, dss, mo
    #[arg(long, value_parser = parse_kind)]
    model: ModelKind,
    /// Scale parameter of the generating curve
    #[arg(long)]
    a: f64,
    /// Rate/shape parameter of the generating curve
    #[arg(long)]
    b: f64,
    /// Observation times: "1..50" (inclusive integer range) or a comma
    /// list like "1.5,3,7.25"
    #[arg(long)]
    times: String,
    /// Gaussian noise standard deviation
    #[arg(long, default_value_t = 0.0)]
    noise_sd: f64,
    /// RNG seed for the noise stream
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the dataset here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Dataset CSV path
    #[arg(long)]
    data: PathBuf,
}

enum Failure {
    Data(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::ZeroSeeds
            | HarnessError::NoKinds
            | HarnessError::NoDatasets
            | HarnessError::NoFractions
            | HarnessError::DuplicateFraction(_)
            | HarnessError::Dataset(_) => Failure::Data(e.to_string()),
            HarnessError::Engine(srgm_cuckoo::EngineError::Config(_)) => {
                Failure::Data(e.to_string())
            }
            HarnessError::Engine(_) | HarnessError::Objective(_) => Failure::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Fit(args) => run_fit(args),
        Command::Compare(args) => run_compare(args),
        Command::SplitStudy(args) => run_split_study(args),
        Command::Gen(args) => run_gen(args),
        Command::Validate(args) => run_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_dataset(path: &PathBuf) -> Result<FailureDataset, Failure> {
    FailureDataset::load(path).map_err(|e| Failure::Data(e.to_string()))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn epoch_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Render and deliver a report. `--timestamp` adds a top-level JSON key
/// (re-serialization orders keys alphabetically) or a CSV comment line.
fn emit<T: serde::Serialize>(output: &OutputArgs, report: &T, csv: String) -> Result<(), Failure> {
    let text = match output.format {
        Format::Json => {
            let mut text = to_json(report);
            if output.timestamp {
                let mut value: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| Failure::Runtime(format!("re-reading emitted report: {e}")))?;
                if let Some(obj) = value.as_object_mut() {
                    obj.insert("timestamp".into(), epoch_seconds().into());
                }
                text = serde_json::to_string_pretty(&value)
                    .map_err(|e| Failure::Runtime(format!("re-emitting report: {e}")))?;
                text.push('\n');
            }
            text
        }
        Format::Csv => {
            if output.timestamp {
                format!("# emitted-at-epoch-seconds: {}\n{csv}", epoch_seconds())
            } else {
                csv
            }
        }
    };
    write_out(&output.out, &text)
}

fn run_fit(args: FitArgs) -> Result<(), Failure> {
    let ds = load_dataset(&args.data)?;
    let split = SplitSpec::new(args.train_fraction).map_err(|e| Failure::Data(e.to_string()))?;
    let cfg = args.engine.config();
    let bounds = args.engine.bounds()?;
    let report: FitReport = fit_best_of(args.model, &ds, split, &cfg, &bounds, args.seeds)?;
    let csv = report.to_csv();
    emit(&args.output, &report, csv)
}

fn run_compare(args: CompareArgs) -> Result<(), Failure> {
    let kinds = if args.model.is_empty() {
        ALL_KINDS.to_vec()
    } else {
        args.model.clone()
    };
    let mut datasets = Vec::with_capacity(args.data.len());
    for path in &args.data {
        datasets.push(load_dataset(path)?);
    }
    let cfg = args.engine.config();
    let bounds = args.engine.bounds()?;
    let report: CompareReport = compare(&kinds, &datasets, &cfg, &bounds, args.seeds)?;
    if let Some(dir) = &args.plot_dir {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Runtime(format!("creating {}: {e}", dir.display())))?;
        for name in &report.datasets {
            let path = dir.join(format!("{name}.dat"));
            fs::write(&path, report.plot_rows(name))
                .map_err(|e| Failure::Runtime(format!("writing {}: {e}", path.display())))?;
        }
    }
    let csv = report.to_csv();
    emit(&args.output, &report, csv)
}

fn run_split_study(args: SplitStudyArgs) -> Result<(), Failure> {
    let ds = load_dataset(&args.data)?;
    let cfg = args.engine.config();
    let bounds = args.engine.bounds()?;
    let report: SplitStudyReport =
        split_study(args.model, &ds, &args.fractions, &cfg, &bounds, args.seeds)?;
    let csv = report.to_csv();
    emit(&args.output, &report, csv)
}

/// Times syntax for `gen`: inclusive integer range `lo..hi` or a comma
/// list of numbers.
fn parse_times(s: &str) -> Result<Vec<f64>, Failure> {
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo
            .trim()
            .parse()
            .map_err(|_| Failure::Data(format!("--times range start {lo:?} is not an integer")))?;
        let hi: u64 = hi
            .trim()
            .parse()
            .map_err(|_| Failure::Data(format!("--times range end {hi:?} is not an integer")))?;
        if lo == 0 || hi < lo {
            return Err(Failure::Data(format!(
                "--times range {lo}..{hi} must satisfy 1 <= start <= end"
            )));
        }
        return Ok((lo..=hi).map(|t| t as f64).collect());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Data(format!("--times entry {t:?} is not a number")))
        })
        .collect()
}

fn run_gen(args: GenArgs) -> Result<(), Failure> {
    let times = parse_times(&args.times)?;
    let params = srgm_cuckoo::model::Params::new(args.a, args.b)
        .map_err(|e| Failure::Data(e.to_string()))?;
    let ds = dataset::generate(args.model, params, &times, args.noise_sd, args.seed)
        .map_err(|e| Failure::Data(e.to_string()))?;
    let text = format!(
        "# synthetic: model={} a={} b={} noise_sd={} seed={}\n{}",
        args.model,
        args.a,
        args.b,
        args.noise_sd,
        args.seed,
        ds.to_csv()
    );
    write_out(&args.out, &text)
}

fn run_validate(args: ValidateArgs) -> Result<(), Failure> {
    let ds = load_dataset(&args.data)?;
    let first = ds.records().first().expect("datasets hold >= 3 records");
    let last = ds.records().last().expect("datasets hold >= 3 records");
    println!("dataset: {}", ds.name());
    println!("records: {}", ds.len());
    println!("time: {} .. {}", first.time, last.time);
    println!(
        "failures: {} .. {}",
        first.cumulative_failures, last.cumulative_failures
    );
    Ok(())
}
