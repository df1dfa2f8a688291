use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tdasweep::io::{load_csv, load_idx, write_features};
use tdasweep::knn::{compare_raw_and_sweep, DEFAULT_K};
use tdasweep::testkit::{check_flip_invariants, random_images, FlipProperty, InvariantReport};
use tdasweep::{batch_extract, sweep, BatchReport, Dataset, SweepConfig};

#[derive(Parser, Debug)]
#[command(
    name = "tdasweep",
    version,
    about = "Threshold sweep run-count features for images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract features from a dataset and write them as CSV.
    Extract {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Time extraction with one worker and with `--workers`.
    Bench {
        #[command(flatten)]
        input: OptionalInputArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Generate this many random images instead of reading `--input`.
        #[arg(long, default_value_t = 1000)]
        synthetic: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare kNN accuracy on raw pixels and on sweep features.
    Knn {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Test images; when absent the training input is split.
        #[arg(long)]
        test_input: Option<PathBuf>,
        #[arg(long)]
        test_labels: Option<PathBuf>,
        #[arg(long)]
        train_size: Option<usize>,
        #[arg(long)]
        test_size: Option<usize>,
        #[arg(long, short, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check flip invariances of the run counts on real or random images.
    CheckInvariants {
        #[command(flatten)]
        input: OptionalInputArgs,
        #[arg(long, value_delimiter = ',', default_value = "100")]
        thresholds: Vec<i64>,
        /// Number of random images when no input is given.
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Idx,
    Csv,
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long, value_enum, default_value_t = Format::Idx)]
    format: Format,
    /// IDX image file or image CSV.
    #[arg(long, short)]
    input: PathBuf,
    /// IDX label file.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// CSV lines start with a label field.
    #[arg(long)]
    has_label: bool,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long, default_value_t = 1)]
    channels: usize,
}

#[derive(Args, Debug)]
struct OptionalInputArgs {
    #[arg(long, value_enum, default_value_t = Format::Idx)]
    format: Format,
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    has_label: bool,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long, default_value_t = 1)]
    channels: usize,
}

impl OptionalInputArgs {
    fn to_input(&self) -> Option<InputArgs> {
        Some(InputArgs {
            format: self.format,
            input: self.input.clone()?,
            labels: self.labels.clone(),
            has_label: self.has_label,
            rows: self.rows,
            cols: self.cols,
            channels: self.channels,
        })
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated, strictly increasing, each in 1..=255.
    #[arg(long, value_delimiter = ',', required = true)]
    thresholds: Vec<i64>,
    #[arg(long, default_value_t = 1)]
    interval_width: usize,
    /// Worker threads; omit for sequential extraction.
    #[arg(long, alias = "cls")]
    workers: Option<usize>,
}

/// Bad flag values, reported with exit status 2 like clap's own errors.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

impl SweepArgs {
    fn config(&self) -> anyhow::Result<SweepConfig> {
        SweepConfig::new(self.thresholds.iter().copied(), self.interval_width)
            .and_then(|c| c.with_workers(self.workers))
            .map_err(usage)
    }
}

fn load(input: &InputArgs) -> anyhow::Result<Dataset> {
    load_path(input, &input.input, input.labels.as_deref())
}

fn load_path(
    input: &InputArgs,
    path: &std::path::Path,
    labels: Option<&std::path::Path>,
) -> anyhow::Result<Dataset> {
    let ds = match input.format {
        Format::Idx => load_idx(path, labels)?,
        Format::Csv => {
            let (Some(rows), Some(cols)) = (input.rows, input.cols) else {
                return Err(usage("--rows and --cols are required for --format csv"));
            };
            load_csv(path, input.has_label, rows, cols, input.channels)?
        }
    };
    Ok(ds)
}

fn summary(report: &BatchReport) -> String {
    format!(
        "images={} features={} wall_s={:.3} workers={}",
        report.n_images,
        report.n_features,
        report.wall_time.as_secs_f64(),
        report.workers_used
    )
}

fn cmd_extract(input: &InputArgs, sweep_args: &SweepArgs, output: &PathBuf) -> anyhow::Result<()> {
    let config = sweep_args.config()?;
    let ds = load(input)?;
    let (matrix, report) = batch_extract(&ds, &config)?;
    write_features(&matrix, output).with_context(|| format!("writing {}", output.display()))?;
    println!("{}", summary(&report));
    Ok(())
}

fn cmd_bench(
    input: &OptionalInputArgs,
    sweep_args: &SweepArgs,
    synthetic: usize,
    seed: u64,
) -> anyhow::Result<()> {
    let config = sweep_args.config()?;
    let ds = match input.to_input() {
        Some(i) => load(&i)?,
        None => Dataset::new(
            random_images(
                seed,
                synthetic,
                input.rows.unwrap_or(28),
                input.cols.unwrap_or(28),
                input.channels,
            ),
            None,
        )?,
    };
    let single_cfg = config.clone().with_workers(None)?;
    let (single, one) = batch_extract(&ds, &single_cfg)?;
    let (many, n) = if config.workers().unwrap_or(1) <= 1 {
        (single.clone(), one)
    } else {
        batch_extract(&ds, &config)?
    };
    let identical = single == many;
    let speedup = if n.workers_used == 1 {
        1.0
    } else {
        n.images_per_second() / one.images_per_second()
    };
    println!(
        "images={} features={} workers={} wall_s_1={:.4} wall_s_n={:.4} speedup={speedup:.3} outputs_identical={identical}",
        one.n_images,
        one.n_features,
        n.workers_used,
        one.wall_time.as_secs_f64(),
        n.wall_time.as_secs_f64(),
    );
    if !identical {
        bail!("parallel output differs from the single-worker output");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_knn(
    input: &InputArgs,
    sweep_args: &SweepArgs,
    test_input: Option<&PathBuf>,
    test_labels: Option<&PathBuf>,
    train_size: Option<usize>,
    test_size: Option<usize>,
    k: usize,
    seed: u64,
) -> anyhow::Result<()> {
    let config = sweep_args.config()?;
    let train_all = load(input)?;
    if train_all.labels().is_none() {
        bail!("training data has no labels");
    }
    let (train, test) = match test_input {
        Some(path) => {
            let test_all = load_path(input, path, test_labels.map(PathBuf::as_path))?;
            if test_all.labels().is_none() {
                bail!("test data has no labels");
            }
            let train = match train_size {
                Some(n) => train_all.sample_seeded(n, seed)?,
                None => train_all,
            };
            let test = match test_size {
                Some(n) => test_all.sample_seeded(n, seed.wrapping_add(1))?,
                None => test_all,
            };
            (train, test)
        }
        None => {
            let Some(test_n) = test_size else {
                return Err(usage("--test-size is required when --test-input is absent"));
            };
            let train_n = train_size.unwrap_or(train_all.len().saturating_sub(test_n));
            train_all.split_seeded(train_n, test_n, seed)?
        }
    };
    let r = compare_raw_and_sweep(&train, &test, &config, k)?;
    println!(
        "train={} test={} k={k} raw_dims={} sweep_dims={} raw_acc={:.4} sweep_acc={:.4} extract_s={:.3} raw_eval_s={:.3} sweep_eval_s={:.3}",
        train.len(),
        test.len(),
        r.raw_dims,
        r.sweep_dims,
        r.raw_accuracy,
        r.sweep_accuracy,
        r.extract_time.as_secs_f64(),
        r.raw_eval_time.as_secs_f64(),
        r.sweep_eval_time.as_secs_f64(),
    );
    Ok(())
}

fn render_invariants(report: &InvariantReport) -> String {
    let first = report.first_failures();
    let mut out = String::new();
    for p in FlipProperty::ALL {
        match first.get(&p) {
            None => out.push_str(&format!("{p}: PASS\n")),
            Some(v) => out.push_str(&format!(
                "{p}: FAIL (image {}, threshold {}, channel {})\n",
                v.image, v.threshold, v.channel
            )),
        }
    }
    out.push_str(&format!(
        "images={} violations={}\n",
        report.images_checked,
        report.violations.len()
    ));
    out
}

fn cmd_check_invariants(
    input: &OptionalInputArgs,
    thresholds: &[i64],
    random: usize,
    seed: u64,
) -> anyhow::Result<bool> {
    let config = SweepConfig::new(thresholds.iter().copied(), 1).map_err(usage)?;
    let images = match input.to_input() {
        Some(i) => load(&i)?.images().to_vec(),
        None => random_images(
            seed,
            random,
            input.rows.unwrap_or(28),
            input.cols.unwrap_or(28),
            input.channels,
        ),
    };
    let report = check_flip_invariants(&images, config.thresholds(), sweep);
    print!("{}", render_invariants(&report));
    Ok(report.passed())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Extract {
            input,
            sweep,
            output,
        } => cmd_extract(input, sweep, output)?,
        Command::Bench {
            input,
            sweep,
            synthetic,
            seed,
        } => cmd_bench(input, sweep, *synthetic, *seed)?,
        Command::Knn {
            input,
            sweep,
            test_input,
            test_labels,
            train_size,
            test_size,
            k,
            seed,
        } => cmd_knn(
            input,
            sweep,
            test_input.as_ref(),
            test_labels.as_ref(),
            *train_size,
            *test_size,
            *k,
            *seed,
        )?,
        Command::CheckInvariants {
            input,
            thresholds,
            random,
            seed,
        } => return cmd_check_invariants(input, thresholds, *random, *seed),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
