//! Grid execution with resume. Every finished run is appended to the results
//! file at once, so an interrupted grid resumes where it stopped; at the end
//! the file is rewritten sorted by run identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use streamlearn::detectors::write_drift_log;
use streamlearn::evaluation::{PrequentialConfig, RunKey, RunRecord, RESULTS_HEADER};
use streamlearn::experiment::Cell;

use crate::config::ExperimentConfig;

pub const RESULTS_FILE: &str = "results.csv";
pub const FAILURES_FILE: &str = "failures.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunSummary {
    pub ran: usize,
    pub skipped: usize,
    pub failed: usize,
}

/// File stem identifying one run, e.g. `MIXED_abrupt_10000_kNN5_w1000_rddm_s3`.
pub fn run_stem(key: &RunKey) -> String {
    let mut learner = key.learner.clone();
    if let Some(k) = key.k {
        learner.push_str(&k.to_string());
    }
    if let Some(w) = key.w {
        learner.push_str(&format!("_w{w}"));
    }
    format!("{}_{}_{}_{}_{}_s{}", key.generator, key.drift, key.size, learner, key.detector, key.seed)
}

/// Read a results file. With `lenient`, rows that fail to parse (such as a
/// line cut short by an interrupted run) are skipped with a warning.
pub fn read_results(path: &Path, lenient: bool) -> Result<Vec<RunRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let header = reader.headers()?.clone();
    if header.iter().ne(RESULTS_HEADER.iter().copied()) {
        bail!("{}: header `{}` is not `{}`", path.display(), header.iter().collect::<Vec<_>>().join(","), RESULTS_HEADER.join(","));
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let parsed = row.map_err(|e| e.to_string()).and_then(|r| RunRecord::from_fields(&r.iter().collect::<Vec<_>>()));
        match parsed {
            Ok(rec) => out.push(rec),
            Err(e) if lenient => eprintln!("warning: {} row {}: {e}; row ignored", path.display(), i + 2),
            Err(e) => bail!("{} row {}: {e}", path.display(), i + 2),
        }
    }
    Ok(out)
}

fn write_sorted(path: &Path, records: &BTreeMap<RunKey, RunRecord>) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    {
        let mut w = csv::Writer::from_path(&tmp)?;
        w.write_record(RESULTS_HEADER)?;
        for rec in records.values() {
            w.write_record(rec.fields())?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

struct Job<'a> {
    cell: &'a Cell,
    seed: u64,
    key: RunKey,
}

struct Collector {
    writer: csv::Writer<File>,
    done: Vec<RunRecord>,
    failures: Vec<(RunKey, String)>,
}

fn write_curve(path: &Path, curve: &[(usize, f64)]) -> io::Result<()> {
    let mut text = String::from("t,acc\n");
    for (t, acc) in curve {
        text.push_str(&format!("{t},{acc:.6}\n"));
    }
    fs::write(path, text)
}

fn execute(job: &Job, cfg: &ExperimentConfig, dirs: &OutputDirs) -> Result<RunRecord, String> {
    let eval = PrequentialConfig { total: job.cell.size, ..cfg.eval };
    let result = catch_unwind(AssertUnwindSafe(|| job.cell.run_logged(job.seed, &eval, cfg.drift_logs)));
    let (outcome, events) = match result {
        Ok(Ok(v)) => v,
        Ok(Err(e)) => return Err(e.to_string()),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            return Err(format!("panicked: {msg}"));
        }
    };
    let stem = run_stem(&job.key);
    if let Some(dir) = &dirs.curves {
        write_curve(&dir.join(format!("{stem}.csv")), &outcome.curve).map_err(|e| format!("curve: {e}"))?;
    }
    if let (Some(dir), true) = (&dirs.drift_logs, job.cell.detector.kind() != streamlearn::detectors::DetectorKind::None) {
        let file = File::create(dir.join(format!("{stem}.csv"))).map_err(|e| format!("drift log: {e}"))?;
        write_drift_log(io::BufWriter::new(file), &events).map_err(|e| format!("drift log: {e}"))?;
    }
    Ok(RunRecord::new(job.key.clone(), &outcome))
}

struct OutputDirs {
    curves: Option<PathBuf>,
    drift_logs: Option<PathBuf>,
}

/// Run every missing `(cell, seed)` of the grid with up to `workers` threads.
pub fn run_grid(cfg: &ExperimentConfig, workers: usize) -> Result<RunSummary> {
    let out = &cfg.output_dir;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let results_path = out.join(RESULTS_FILE);
    let mut existing: BTreeMap<RunKey, RunRecord> = BTreeMap::new();
    if results_path.exists() {
        for rec in read_results(&results_path, true)? {
            existing.insert(rec.key(), rec);
        }
    }

    let mut seen = BTreeSet::new();
    let mut jobs = Vec::new();
    let mut skipped = 0;
    for cell in &cfg.cells {
        for i in 0..cfg.repetitions as u64 {
            let seed = cfg.base_seed + i;
            let key = cell.key(seed);
            if existing.contains_key(&key) {
                skipped += 1;
            } else if seen.insert(key.clone()) {
                jobs.push(Job { cell, seed, key });
            }
        }
    }

    let subdir = |on: bool, name: &str| -> Result<Option<PathBuf>> {
        if !on {
            return Ok(None);
        }
        let d = out.join(name);
        fs::create_dir_all(&d)?;
        Ok(Some(d))
    };
    let dirs = OutputDirs { curves: subdir(cfg.curves, "curves")?, drift_logs: subdir(cfg.drift_logs, "drift_logs")? };

    // normalize the file (drops any torn row), then append as runs finish
    write_sorted(&results_path, &existing)?;
    let file = OpenOptions::new().append(true).open(&results_path)?;
    let collector = Mutex::new(Collector {
        writer: csv::WriterBuilder::new().has_headers(false).from_writer(file),
        done: Vec::new(),
        failures: Vec::new(),
    });

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let total = jobs.len();
    pool.install(|| {
        jobs.par_iter().try_for_each(|job| -> Result<()> {
            let result = execute(job, cfg, &dirs);
            let mut c = collector.lock().expect("collector lock");
            match result {
                Ok(rec) => {
                    c.writer.write_record(rec.fields())?;
                    c.writer.flush()?;
                    c.done.push(rec);
                }
                Err(e) => {
                    eprintln!("run {} failed: {e}", job.key.fields().join(","));
                    c.failures.push((job.key.clone(), e));
                }
            }
            let n = c.done.len() + c.failures.len();
            if n % 50 == 0 || n == total {
                eprintln!("{n}/{total} runs finished");
            }
            Ok(())
        })
    })?;

    let Collector { done, mut failures, .. } = collector.into_inner().expect("collector lock");
    let ran = done.len();
    for rec in done {
        existing.insert(rec.key(), rec);
    }
    write_sorted(&results_path, &existing)?;

    let failures_path = out.join(FAILURES_FILE);
    failures.sort();
    if failures.is_empty() {
        if failures_path.exists() {
            fs::remove_file(&failures_path)?;
        }
    } else {
        let mut w = csv::Writer::from_path(&failures_path)?;
        let mut header: Vec<&str> = RESULTS_HEADER[..8].to_vec();
        header.extend(["status", "error"]);
        w.write_record(&header)?;
        for (key, e) in &failures {
            let mut row = key.fields();
            row.push("failed".into());
            row.push(e.clone());
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    Ok(RunSummary { ran, skipped, failed: failures.len() })
}
