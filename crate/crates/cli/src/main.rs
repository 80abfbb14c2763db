use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use streamlearn::drift::DriftKind;
use streamlearn::experiment::Cell;
use streamlearn::generators::Dataset;
use streamlearn::detectors::DetectorSpec;
use streamlearn::learners::LearnerSpec;

use streamlearn_cli::compare::run_comparison;
use streamlearn_cli::config::{Comparison, ConfigError, RawConfig, DESK_CAP, LARGE_CAP};
use streamlearn_cli::gen::write_stream;
use streamlearn_cli::plot::plot_dir;
use streamlearn_cli::runner::{read_results, run_grid, RESULTS_FILE};

const EXIT_USAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

/// Drifting-stream benchmark runner.
#[derive(Parser)]
#[command(name = "streamlearn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Base seed (overrides `base_seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Allow stream sizes above 100000 (up to 2000000).
    #[arg(long)]
    large: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Dump one composed stream as CSV.
    Gen {
        #[command(flatten)]
        common: Common,
        /// Dataset name; defaults to the first [[generator]] of the config.
        #[arg(long)]
        generator: Option<String>,
        /// abrupt or gradual.
        #[arg(long)]
        drift: Option<String>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Run the configured grid, resuming from existing results.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Friedman test, Nemenyi CD, ranks CSV and CD diagram per comparison.
    Stats {
        #[command(flatten)]
        common: Common,
        /// Results file (default: <out>/results.csv).
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Render accuracy curves (<out>/curves) as SVG charts (<out>/plots).
    Plot {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common, required: bool) -> Result<RawConfig> {
    match &common.config {
        Some(path) => Ok(RawConfig::load(path)?),
        None if required => Err(ConfigError("--config is required for this command".into()).into()),
        None => Ok(RawConfig::default()),
    }
}

fn out_dir(common: &Common, raw: &RawConfig) -> PathBuf {
    common.out.clone().or_else(|| raw.output_dir.clone()).unwrap_or_else(|| PathBuf::from("results"))
}

fn cmd_gen(common: Common, generator: Option<String>, drift: Option<String>, size: Option<usize>) -> Result<u8> {
    let raw = load(&common, false)?;
    let first = raw.generator.first();
    let pick = |v: Option<String>, from_config: Option<String>, what: &str| {
        v.or(from_config).ok_or_else(|| ConfigError(format!("gen: no {what} given (flag or [[generator]] block)")))
    };
    let family = pick(generator, first.map(|g| g.family.clone()), "generator")?;
    let drift = pick(drift, first.and_then(|g| g.drift.first().cloned()), "drift")?;
    let size = size.or_else(|| first.and_then(|g| g.sizes.first().copied())).unwrap_or(10_000);
    let dataset: Dataset = family.parse().map_err(ConfigError)?;
    let drift: DriftKind = drift.parse().map_err(ConfigError)?;
    let cap = if common.large { LARGE_CAP } else { DESK_CAP };
    if size == 0 || size > cap {
        return Err(ConfigError(format!("gen: size {size} outside 1..={cap}")).into());
    }
    let seed = common.seed.or(raw.base_seed).unwrap_or(1);
    let mut cell = Cell::new(dataset, drift, size, LearnerSpec::NaiveBayes, DetectorSpec::None);
    cell.options = raw.dataset_options()?;
    if let Some(w) = raw.gradual_width {
        cell.width = w;
    }
    // reject impossible plans before creating the file
    cell.stream(seed).map_err(|e| ConfigError(format!("gen: {e}")))?;
    let dir = out_dir(&common, &raw);
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{}_{}_{}_s{}.csv", dataset.name(), drift.name(), size, seed));
    let file = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    write_stream(&cell, seed, BufWriter::new(file))?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn cmd_run(common: Common) -> Result<u8> {
    let raw = load(&common, true)?;
    let mut cfg = raw.resolve(common.large)?;
    if let Some(seed) = common.seed {
        cfg.base_seed = seed;
    }
    if let Some(out) = common.out {
        cfg.output_dir = out;
    }
    let s = run_grid(&cfg, common.workers)?;
    println!(
        "ran {}, skipped {} already present, failed {} -> {}",
        s.ran,
        s.skipped,
        s.failed,
        cfg.output_dir.join(RESULTS_FILE).display()
    );
    Ok(if s.failed > 0 { EXIT_PARTIAL } else { 0 })
}

fn cmd_stats(common: Common, results: Option<PathBuf>) -> Result<u8> {
    let raw = load(&common, false)?;
    let mut comparisons = raw.comparisons()?;
    if comparisons.is_empty() {
        comparisons.push(Comparison::all("all"));
    }
    let dir = out_dir(&common, &raw);
    let results = results.unwrap_or_else(|| dir.join(RESULTS_FILE));
    let records = read_results(&results, false)?;
    for cmp in &comparisons {
        let out = run_comparison(&records, cmp, &dir.join("stats"))?;
        let shape = format!("K={} N={} CD={:.4}", out.summary.methods.len(), out.datasets, out.summary.cd);
        match out.friedman {
            Some(f) => println!(
                "{}: {shape} chi2_F={:.4} F_F={:.4} critical={:.4} -> {}",
                cmp.name,
                f.chi2_f,
                f.f_f,
                f.critical,
                if f.reject { "methods differ (reject H0 at 0.05)" } else { "no significant difference" }
            ),
            None => println!("{}: {shape} Friedman statistic saturated (every dataset ranks the methods identically)", cmp.name),
        }
        println!("  {}\n  {}", out.ranks_csv.display(), out.diagram.display());
    }
    Ok(0)
}

fn cmd_plot(common: Common) -> Result<u8> {
    let raw = load(&common, false)?;
    let dir = out_dir(&common, &raw);
    let written = plot_dir(&dir.join("curves"), &dir.join("plots"))?;
    println!("wrote {} chart(s) to {}", written.len(), dir.join("plots").display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen { common, generator, drift, size } => cmd_gen(common, generator, drift, size),
        Command::Run { common } => cmd_run(common),
        Command::Stats { common, results } => cmd_stats(common, results),
        Command::Plot { common } => cmd_plot(common),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<ConfigError>().is_some() { EXIT_CONFIG } else { EXIT_USAGE })
        }
    }
}
