//! Pivot results into dataset × method matrices and rank the methods.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::Result;
use streamlearn::evaluation::RunRecord;
use streamlearn::stats::{cd_diagram, friedman_ff, write_ranks_csv, Friedman, RankSummary, ResultMatrix, StatsError};

use crate::config::{Comparison, ConfigError, Metric};

/// Method label: learner with its k-NN parameters, plus the detector.
pub fn method_label(rec: &RunRecord) -> String {
    let mut s = rec.learner.clone();
    if let Some(k) = rec.k {
        s.push_str(&k.to_string());
    }
    if let Some(w) = rec.w {
        s.push_str(&format!("(w={w})"));
    }
    if rec.detector != "none" {
        s.push('+');
        s.push_str(&rec.detector.to_ascii_uppercase());
    }
    s
}

pub fn dataset_label(rec: &RunRecord) -> String {
    format!("{}/{}/{}", rec.generator, rec.drift, rec.size)
}

fn keeps<T: PartialEq>(filter: &Option<Vec<T>>, value: &T) -> bool {
    filter.as_ref().is_none_or(|f| f.contains(value))
}

fn keeps_str(filter: &Option<Vec<String>>, value: &str) -> bool {
    filter.as_ref().is_none_or(|f| f.iter().any(|x| x.eq_ignore_ascii_case(value)))
}

/// Average the selected metric over seeds for every (dataset, method) cell.
pub fn pivot(records: &[RunRecord], cmp: &Comparison) -> Result<ResultMatrix, ConfigError> {
    let mut cells: BTreeMap<(String, String), (f64, usize)> = BTreeMap::new();
    for rec in records {
        let selected = keeps_str(&cmp.generators, &rec.generator)
            && keeps_str(&cmp.drifts, &rec.drift)
            && keeps(&cmp.sizes, &rec.size)
            && keeps_str(&cmp.learners, &rec.learner)
            && keeps_str(&cmp.detectors, &rec.detector);
        if !selected {
            continue;
        }
        let value = match cmp.metric {
            Metric::MeanAcc => rec.mean_acc,
            Metric::FinalAcc => rec.final_acc,
            Metric::WallTime => rec.wall_time_s,
        };
        let e = cells.entry((dataset_label(rec), method_label(rec))).or_insert((0.0, 0));
        e.0 += value;
        e.1 += 1;
    }
    let datasets: BTreeSet<String> = cells.keys().map(|(d, _)| d.clone()).collect();
    let methods: BTreeSet<String> = cells.keys().map(|(_, m)| m.clone()).collect();
    let mut missing = Vec::new();
    let mut rows = Vec::new();
    for d in &datasets {
        let mut row = Vec::new();
        for m in &methods {
            match cells.get(&(d.clone(), m.clone())) {
                Some(&(sum, n)) => row.push(sum / n as f64),
                None => missing.push(format!("{d} × {m}")),
            }
        }
        rows.push(row);
    }
    if !missing.is_empty() {
        return Err(ConfigError(format!(
            "comparison `{}`: incomplete matrix, {} missing cell(s): {}",
            cmp.name,
            missing.len(),
            missing.join("; ")
        )));
    }
    ResultMatrix::new(datasets.into_iter().collect(), methods.into_iter().collect(), rows)
        .map_err(|e| ConfigError(format!("comparison `{}`: {e}", cmp.name)))
}

#[derive(Debug)]
pub struct ComparisonOutput {
    pub datasets: usize,
    pub summary: RankSummary,
    /// `None` when the Friedman statistic is saturated.
    pub friedman: Option<Friedman>,
    pub ranks_csv: PathBuf,
    pub diagram: PathBuf,
}

pub fn run_comparison(records: &[RunRecord], cmp: &Comparison, out_dir: &Path) -> Result<ComparisonOutput> {
    let m = pivot(records, cmp)?;
    let summary = RankSummary::new(&m, cmp.direction, cmp.alpha).map_err(|e| ConfigError(format!("comparison `{}`: {e}", cmp.name)))?;
    let friedman = match friedman_ff(&m, cmp.direction) {
        Ok(f) => Some(f),
        Err(StatsError::Saturated(_)) => None,
        Err(e) => return Err(ConfigError(format!("comparison `{}`: {e}", cmp.name)).into()),
    };
    fs::create_dir_all(out_dir)?;
    let ranks_csv = out_dir.join(format!("{}_ranks.csv", cmp.name));
    write_ranks_csv(BufWriter::new(File::create(&ranks_csv)?), &summary)?;
    let diagram = out_dir.join(format!("{}_cd.svg", cmp.name));
    cd_diagram(&summary, &diagram)?;
    Ok(ComparisonOutput { datasets: m.n(), summary, friedman, ranks_csv, diagram })
}
