//! Prequential (test-then-train) evaluation and multi-seed aggregation.

use std::collections::VecDeque;
use std::fmt;
use std::time::Instant;

use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::domain::{DetectorStatus, LabeledInstance, Learner, StreamSource};

pub const DEFAULT_WINDOW: usize = 1000;

/// Column order of the results file.
pub const RESULTS_HEADER: [&str; 12] = [
    "generator",
    "drift",
    "size",
    "learner",
    "detector",
    "k",
    "w",
    "seed",
    "mean_acc",
    "final_acc",
    "wall_time_s",
    "drift_events",
];

/// Anything that can be evaluated prequentially: a bare learner or a
/// detector-wrapped one.
pub trait OnlineModel {
    /// Predict `inst`, then learn from it.
    fn test_then_train(&mut self, inst: &LabeledInstance) -> (Option<usize>, DetectorStatus);
}

impl<L: Learner + ?Sized> OnlineModel for L {
    fn test_then_train(&mut self, inst: &LabeledInstance) -> (Option<usize>, DetectorStatus) {
        let predicted = self.classify(&inst.values);
        self.train(inst);
        (predicted, DetectorStatus::Stable)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeanMode {
    /// Average of the sliding accuracy sampled every `record_every` instances.
    #[default]
    Sampled,
    /// The sliding accuracy after the last instance.
    FinalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrequentialConfig {
    pub window: usize,
    pub total: usize,
    pub record_every: usize,
    pub mean_mode: MeanMode,
    /// Keep the sampled accuracies as a curve.
    pub keep_curve: bool,
}

impl PrequentialConfig {
    pub fn new(total: usize) -> Self {
        PrequentialConfig {
            window: DEFAULT_WINDOW,
            total,
            record_every: DEFAULT_WINDOW,
            mean_mode: MeanMode::Sampled,
            keep_curve: false,
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.window == 0 || self.record_every == 0 {
            return Err(EvalError::Config("window and record_every must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("stream exhausted after {emitted} of {total} instances")]
    Exhausted { emitted: usize, total: usize },
    #[error("invalid evaluation config: {0}")]
    Config(String),
    #[error("aggregation needs at least 2 records, got {0}")]
    TooFewRecords(usize),
}

/// Raw result of one prequential run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub mean_acc: f64,
    pub final_acc: f64,
    pub wall_time_s: f64,
    pub drift_events: usize,
    /// `(t, sliding accuracy)` every `record_every` instances when requested.
    pub curve: Vec<(usize, f64)>,
}

/// Sliding accuracy over the most recent `window` predictions.
#[derive(Debug, Clone)]
pub struct SlidingAccuracy {
    window: usize,
    outcomes: VecDeque<bool>,
    correct: usize,
}

impl SlidingAccuracy {
    pub fn new(window: usize) -> Self {
        SlidingAccuracy { window, outcomes: VecDeque::with_capacity(window), correct: 0 }
    }

    pub fn push(&mut self, correct: bool) {
        if self.outcomes.len() == self.window {
            if self.outcomes.pop_front() == Some(true) {
                self.correct -= 1;
            }
        }
        self.outcomes.push_back(correct);
        self.correct += usize::from(correct);
    }

    /// Percent correct; 0 before any prediction.
    pub fn percent(&self) -> f64 {
        if self.outcomes.is_empty() {
            0.0
        } else {
            100.0 * self.correct as f64 / self.outcomes.len() as f64
        }
    }
}

/// Run `cfg.total` test-then-train steps. A missing prediction is a loss.
pub fn prequential_run<S, M>(source: &mut S, model: &mut M, cfg: &PrequentialConfig) -> Result<RunOutcome, EvalError>
where
    S: StreamSource + ?Sized,
    M: OnlineModel + ?Sized,
{
    cfg.validate()?;
    let start = Instant::now();
    let mut sliding = SlidingAccuracy::new(cfg.window);
    let mut samples = Vec::with_capacity(cfg.total / cfg.record_every);
    let mut drift_events = 0;
    for t in 1..=cfg.total {
        let inst = source.next_instance().ok_or(EvalError::Exhausted { emitted: t - 1, total: cfg.total })?;
        let (predicted, status) = model.test_then_train(&inst);
        sliding.push(predicted == Some(inst.label));
        drift_events += usize::from(status == DetectorStatus::Drift);
        if t % cfg.record_every == 0 {
            samples.push((t, sliding.percent()));
        }
    }
    let final_acc = sliding.percent();
    let mean_acc = match cfg.mean_mode {
        MeanMode::Sampled if !samples.is_empty() => {
            samples.iter().map(|&(_, a)| a).sum::<f64>() / samples.len() as f64
        }
        _ => final_acc,
    };
    Ok(RunOutcome {
        mean_acc,
        final_acc,
        wall_time_s: start.elapsed().as_secs_f64(),
        drift_events,
        curve: if cfg.keep_curve { samples } else { Vec::new() },
    })
}

/// Sample mean and 95% t-interval half-width.
pub fn aggregate(values: &[f64]) -> Result<(f64, f64), EvalError> {
    let n = values.len();
    if n < 2 {
        return Err(EvalError::TooFewRecords(n));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("valid degrees of freedom").inverse_cdf(0.975);
    Ok((mean, t * var.sqrt() / (n as f64).sqrt()))
}

/// One row of the results file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub generator: String,
    pub drift: String,
    pub size: usize,
    pub learner: String,
    pub detector: String,
    pub k: Option<usize>,
    pub w: Option<usize>,
    pub seed: u64,
    pub mean_acc: f64,
    pub final_acc: f64,
    pub wall_time_s: f64,
    pub drift_events: usize,
}

/// Identity columns of a record: everything but the measurements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunKey {
    pub generator: String,
    pub drift: String,
    pub size: usize,
    pub learner: String,
    pub detector: String,
    pub k: Option<usize>,
    pub w: Option<usize>,
    pub seed: u64,
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

impl RunKey {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.generator.clone(),
            self.drift.clone(),
            self.size.to_string(),
            self.learner.clone(),
            self.detector.clone(),
            opt(self.k),
            opt(self.w),
            self.seed.to_string(),
        ]
    }
}

impl RunRecord {
    pub fn new(key: RunKey, outcome: &RunOutcome) -> Self {
        RunRecord {
            generator: key.generator,
            drift: key.drift,
            size: key.size,
            learner: key.learner,
            detector: key.detector,
            k: key.k,
            w: key.w,
            seed: key.seed,
            mean_acc: outcome.mean_acc,
            final_acc: outcome.final_acc,
            wall_time_s: outcome.wall_time_s,
            drift_events: outcome.drift_events,
        }
    }

    pub fn key(&self) -> RunKey {
        RunKey {
            generator: self.generator.clone(),
            drift: self.drift.clone(),
            size: self.size,
            learner: self.learner.clone(),
            detector: self.detector.clone(),
            k: self.k,
            w: self.w,
            seed: self.seed,
        }
    }

    /// Fields in [`RESULTS_HEADER`] order.
    pub fn fields(&self) -> Vec<String> {
        let mut f = self.key().fields();
        f.push(format!("{:.6}", self.mean_acc));
        f.push(format!("{:.6}", self.final_acc));
        f.push(format!("{:.6}", self.wall_time_s));
        f.push(self.drift_events.to_string());
        f
    }

    /// Parse fields in [`RESULTS_HEADER`] order.
    pub fn from_fields<S: AsRef<str>>(fields: &[S]) -> Result<Self, String> {
        if fields.len() != RESULTS_HEADER.len() {
            return Err(format!("expected {} columns, got {}", RESULTS_HEADER.len(), fields.len()));
        }
        let f = |i: usize| fields[i].as_ref().trim();
        fn num<T: std::str::FromStr>(s: &str, col: &str) -> Result<T, String> {
            s.parse().map_err(|_| format!("bad {col} value `{s}`"))
        }
        let optional = |i: usize| -> Result<Option<usize>, String> {
            if f(i).is_empty() {
                Ok(None)
            } else {
                num(f(i), RESULTS_HEADER[i]).map(Some)
            }
        };
        Ok(RunRecord {
            generator: f(0).to_string(),
            drift: f(1).to_string(),
            size: num(f(2), "size")?,
            learner: f(3).to_string(),
            detector: f(4).to_string(),
            k: optional(5)?,
            w: optional(6)?,
            seed: num(f(7), "seed")?,
            mean_acc: num(f(8), "mean_acc")?,
            final_acc: num(f(9), "final_acc")?,
            wall_time_s: num(f(10), "wall_time_s")?,
            drift_events: num(f(11), "drift_events")?,
        })
    }
}

impl fmt::Display for RunRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fields().join(","))
    }
}
