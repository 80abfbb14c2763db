//! Experiment configuration: a TOML file with `[[generator]]`, `[[learner]]`
//! and `[[comparison]]` blocks plus optional sections overriding every
//! detector, tree and dataset constant.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use streamlearn::detectors::{DdmConfig, DetectorKind, DetectorSpec, RddmConfig};
use streamlearn::drift::{DriftKind, DEFAULT_WIDTH};
use streamlearn::evaluation::{MeanMode, PrequentialConfig, DEFAULT_WINDOW};
use streamlearn::experiment::Cell;
use streamlearn::generators::{Dataset, DatasetOptions};
use streamlearn::learners::{HoeffdingConfig, KnnConfig, LeafPrediction, LearnerSpec};
use streamlearn::stats::{Alpha, Direction};

/// Largest stream size accepted without `--large`.
pub const DESK_CAP: usize = 100_000;
/// Largest stream size accepted at all.
pub const LARGE_CAP: usize = 2_000_000;

/// Invalid configuration; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub base_seed: Option<u64>,
    pub repetitions: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub window: Option<usize>,
    pub record_every: Option<usize>,
    pub mean_mode: Option<String>,
    pub gradual_width: Option<usize>,
    #[serde(default)]
    pub curves: bool,
    #[serde(default)]
    pub drift_logs: bool,
    #[serde(default)]
    pub datasets: RawDatasets,
    #[serde(default)]
    pub ddm: RawDdm,
    #[serde(default)]
    pub rddm: RawRddm,
    #[serde(default)]
    pub hoeffding: RawHoeffding,
    #[serde(default)]
    pub generator: Vec<RawGenerator>,
    #[serde(default)]
    pub learner: Vec<RawLearner>,
    #[serde(default)]
    pub comparison: Vec<RawComparison>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawDatasets {
    pub led_swaps: Option<usize>,
    pub waveform_swaps: Option<usize>,
    pub noise: Option<f64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawDdm {
    pub min_instances: Option<u64>,
    pub warn_coeff: Option<f64>,
    pub drift_coeff: Option<f64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawRddm {
    pub min_instances: Option<u64>,
    pub warn_coeff: Option<f64>,
    pub drift_coeff: Option<f64>,
    pub max_concept_size: Option<usize>,
    pub min_stable_size: Option<usize>,
    pub warn_limit: Option<u64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawHoeffding {
    pub grace_period: Option<u64>,
    pub split_confidence: Option<f64>,
    pub tie_threshold: Option<f64>,
    pub numeric_bins: Option<usize>,
    pub min_branch_fraction: Option<f64>,
    pub leaf_prediction: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGenerator {
    pub family: String,
    pub drift: Vec<String>,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLearner {
    pub kind: String,
    #[serde(default)]
    pub k: Vec<usize>,
    #[serde(default)]
    pub w: Vec<usize>,
    pub detectors: Option<Vec<String>>,
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComparison {
    pub name: String,
    pub metric: Option<String>,
    pub direction: Option<String>,
    pub alpha: Option<f64>,
    pub generators: Option<Vec<String>>,
    pub drifts: Option<Vec<String>>,
    pub sizes: Option<Vec<usize>>,
    pub learners: Option<Vec<String>>,
    pub detectors: Option<Vec<String>>,
}

/// Which results column a comparison ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    MeanAcc,
    FinalAcc,
    WallTime,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::MeanAcc => "mean_acc",
            Metric::FinalAcc => "final_acc",
            Metric::WallTime => "wall_time_s",
        }
    }
}

/// Filters selecting the rows of one rank comparison. `None` keeps everything.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub name: String,
    pub metric: Metric,
    pub direction: Direction,
    pub alpha: Alpha,
    pub generators: Option<Vec<String>>,
    pub drifts: Option<Vec<String>>,
    pub sizes: Option<Vec<usize>>,
    pub learners: Option<Vec<String>>,
    pub detectors: Option<Vec<String>>,
}

impl Comparison {
    /// Rank every method over every dataset row on mean accuracy.
    pub fn all(name: &str) -> Self {
        Comparison {
            name: name.to_string(),
            metric: Metric::MeanAcc,
            direction: Direction::HigherIsBetter,
            alpha: Alpha::P05,
            generators: None,
            drifts: None,
            sizes: None,
            learners: None,
            detectors: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub base_seed: u64,
    pub repetitions: usize,
    pub output_dir: PathBuf,
    pub eval: PrequentialConfig,
    pub curves: bool,
    pub drift_logs: bool,
    /// Grid cells; every cell runs `repetitions` times.
    pub cells: Vec<Cell>,
    pub comparisons: Vec<Comparison>,
}

fn one_of<T: Copy>(key: &str, value: &str, options: &[(&str, T)]) -> Result<T, ConfigError> {
    let lower = value.to_ascii_lowercase();
    options.iter().find(|(n, _)| *n == lower).map(|&(_, v)| v).ok_or_else(|| {
        let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
        ConfigError(format!("{key}: invalid value `{value}` (expected one of {})", names.join(", ")))
    })
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(format!("invalid config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| ConfigError(format!("{}: {}", path.display(), e.0)))
    }

    pub fn dataset_options(&self) -> Result<DatasetOptions, ConfigError> {
        let d = DatasetOptions::default();
        let opts = DatasetOptions {
            led_swaps: self.datasets.led_swaps.unwrap_or(d.led_swaps),
            waveform_swaps: self.datasets.waveform_swaps.unwrap_or(d.waveform_swaps),
            noise: self.datasets.noise.unwrap_or(d.noise),
        };
        if !(0.0..=1.0).contains(&opts.noise) {
            return err(format!("datasets.noise: {} is not a probability", opts.noise));
        }
        Ok(opts)
    }

    fn ddm(&self) -> Result<DdmConfig, ConfigError> {
        let d = DdmConfig::default();
        let c = DdmConfig {
            min_instances: self.ddm.min_instances.unwrap_or(d.min_instances),
            warn_coeff: self.ddm.warn_coeff.unwrap_or(d.warn_coeff),
            drift_coeff: self.ddm.drift_coeff.unwrap_or(d.drift_coeff),
        };
        c.validate().map_err(|e| ConfigError(format!("ddm: {e}")))?;
        Ok(c)
    }

    fn rddm(&self) -> Result<RddmConfig, ConfigError> {
        let d = RddmConfig::default();
        let r = &self.rddm;
        let c = RddmConfig {
            min_instances: r.min_instances.unwrap_or(d.min_instances),
            warn_coeff: r.warn_coeff.unwrap_or(d.warn_coeff),
            drift_coeff: r.drift_coeff.unwrap_or(d.drift_coeff),
            max_concept_size: r.max_concept_size.unwrap_or(d.max_concept_size),
            min_stable_size: r.min_stable_size.unwrap_or(d.min_stable_size),
            warn_limit: r.warn_limit.unwrap_or(d.warn_limit),
        };
        c.validate().map_err(|e| ConfigError(format!("rddm: {e}")))?;
        Ok(c)
    }

    fn hoeffding(&self) -> Result<HoeffdingConfig, ConfigError> {
        let d = HoeffdingConfig::default();
        let h = &self.hoeffding;
        let leaf_prediction = match &h.leaf_prediction {
            None => d.leaf_prediction,
            Some(s) => one_of(
                "hoeffding.leaf_prediction",
                s,
                &[("nb", LeafPrediction::NaiveBayes), ("majority", LeafPrediction::MajorityClass)],
            )?,
        };
        let c = HoeffdingConfig {
            grace_period: h.grace_period.unwrap_or(d.grace_period),
            split_confidence: h.split_confidence.unwrap_or(d.split_confidence),
            tie_threshold: h.tie_threshold.unwrap_or(d.tie_threshold),
            numeric_bins: h.numeric_bins.unwrap_or(d.numeric_bins),
            min_branch_fraction: h.min_branch_fraction.unwrap_or(d.min_branch_fraction),
            leaf_prediction,
            trace_attempts: false,
        };
        if c.grace_period == 0 || c.numeric_bins == 0 {
            return err("hoeffding: grace_period and numeric_bins must be at least 1");
        }
        if !(c.split_confidence > 0.0 && c.split_confidence < 1.0) {
            return err(format!("hoeffding.split_confidence: {} must be in (0, 1)", c.split_confidence));
        }
        Ok(c)
    }

    fn eval(&self) -> Result<PrequentialConfig, ConfigError> {
        let window = self.window.unwrap_or(DEFAULT_WINDOW);
        let record_every = self.record_every.unwrap_or(window);
        if window == 0 || record_every == 0 {
            return err("window and record_every must be at least 1");
        }
        let mean_mode = match &self.mean_mode {
            None => MeanMode::Sampled,
            Some(s) => one_of("mean_mode", s, &[("sampled", MeanMode::Sampled), ("final", MeanMode::FinalOnly)])?,
        };
        Ok(PrequentialConfig { window, total: 0, record_every, mean_mode, keep_curve: self.curves })
    }

    fn learners(&self) -> Result<Vec<(LearnerSpec, Vec<DetectorSpec>)>, ConfigError> {
        if self.learner.is_empty() {
            return err("learner grid is empty: add at least one [[learner]] block");
        }
        let ddm = self.ddm()?;
        let rddm = self.rddm()?;
        let hoeffding = self.hoeffding()?;
        let mut out = Vec::new();
        for (i, l) in self.learner.iter().enumerate() {
            let key = format!("learner[{i}]");
            let detectors = match &l.detectors {
                None => vec![DetectorSpec::None],
                Some(names) if names.is_empty() => return err(format!("{key}.detectors is empty")),
                Some(names) => names
                    .iter()
                    .map(|n| {
                        let kind: DetectorKind = n.parse().map_err(|e| ConfigError(format!("{key}.detectors: {e}")))?;
                        Ok(match kind {
                            DetectorKind::None => DetectorSpec::None,
                            DetectorKind::Ddm => DetectorSpec::Ddm(ddm),
                            DetectorKind::Rddm => DetectorSpec::Rddm(rddm),
                        })
                    })
                    .collect::<Result<Vec<_>, ConfigError>>()?,
            };
            let kind = one_of(&format!("{key}.kind"), &l.kind, &[("nb", 0), ("ht", 1), ("knn", 2)])?;
            if kind != 2 && (!l.k.is_empty() || !l.w.is_empty() || l.normalize) {
                return err(format!("{key}: k, w and normalize only apply to kind = \"knn\""));
            }
            match kind {
                0 => out.push((LearnerSpec::NaiveBayes, detectors)),
                1 => out.push((LearnerSpec::Hoeffding(hoeffding), detectors)),
                _ => {
                    if l.k.is_empty() {
                        return err(format!("{key}.k: kNN needs at least one k"));
                    }
                    let windows = if l.w.is_empty() { vec![DEFAULT_WINDOW] } else { l.w.clone() };
                    for &k in &l.k {
                        for &w in &windows {
                            if k == 0 || w == 0 {
                                return err(format!("{key}: k and w must be at least 1"));
                            }
                            let spec = LearnerSpec::Knn(KnnConfig { k, window: w, normalize: l.normalize });
                            out.push((spec, detectors.clone()));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The `[[comparison]]` blocks, validated on their own.
    pub fn comparisons(&self) -> Result<Vec<Comparison>, ConfigError> {
        self.comparison
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let key = format!("comparison[{i}]");
                let metric = match &c.metric {
                    None => Metric::MeanAcc,
                    Some(m) => one_of(
                        &format!("{key}.metric"),
                        m,
                        &[("mean_acc", Metric::MeanAcc), ("final_acc", Metric::FinalAcc), ("wall_time_s", Metric::WallTime)],
                    )?,
                };
                let direction = match &c.direction {
                    None if metric == Metric::WallTime => Direction::LowerIsBetter,
                    None => Direction::HigherIsBetter,
                    Some(d) => one_of(
                        &format!("{key}.direction"),
                        d,
                        &[("higher", Direction::HigherIsBetter), ("lower", Direction::LowerIsBetter)],
                    )?,
                };
                let alpha = match c.alpha {
                    None => Alpha::P05,
                    Some(a) => Alpha::from_value(a)
                        .ok_or_else(|| ConfigError(format!("{key}.alpha: {a} (expected 0.05 or 0.10)")))?,
                };
                if c.name.is_empty() || c.name.contains(['/', '\\']) {
                    return err(format!("{key}.name: `{}` is not a usable file stem", c.name));
                }
                Ok(Comparison {
                    name: c.name.clone(),
                    metric,
                    direction,
                    alpha,
                    generators: c.generators.clone(),
                    drifts: c.drifts.clone(),
                    sizes: c.sizes.clone(),
                    learners: c.learners.clone(),
                    detectors: c.detectors.clone(),
                })
            })
            .collect()
    }

    /// Validate everything and expand the grid. `large` lifts the desk cap.
    pub fn resolve(&self, large: bool) -> Result<ExperimentConfig, ConfigError> {
        let repetitions = self.repetitions.unwrap_or(1);
        if repetitions == 0 {
            return err("repetitions must be at least 1");
        }
        if self.generator.is_empty() {
            return err("generator grid is empty: add at least one [[generator]] block");
        }
        let options = self.dataset_options()?;
        let learners = self.learners()?;
        let width = self.gradual_width.unwrap_or(DEFAULT_WIDTH);
        let cap = if large { LARGE_CAP } else { DESK_CAP };
        let mut cells = Vec::new();
        for (i, g) in self.generator.iter().enumerate() {
            let key = format!("generator[{i}]");
            let dataset: Dataset = g.family.parse().map_err(|e| ConfigError(format!("{key}.family: {e}")))?;
            if g.drift.is_empty() || g.sizes.is_empty() {
                return err(format!("{key}: drift and sizes must be non-empty"));
            }
            for &size in &g.sizes {
                if size > cap {
                    let hint = if large { "" } else { " (pass --large for up to 2000000)" };
                    return err(format!("{key}.sizes: {size} exceeds the cap of {cap}{hint}"));
                }
                if size == 0 {
                    return err(format!("{key}.sizes: size must be positive"));
                }
            }
            for d in &g.drift {
                let drift: DriftKind = d.parse().map_err(|e| ConfigError(format!("{key}.drift: {e}")))?;
                for &size in &g.sizes {
                    for (learner, detectors) in &learners {
                        for detector in detectors {
                            let mut cell = Cell::new(dataset, drift, size, *learner, *detector);
                            cell.width = width;
                            cell.options = options.clone();
                            cells.push(cell);
                        }
                    }
                }
            }
        }
        Ok(ExperimentConfig {
            base_seed: self.base_seed.unwrap_or(1),
            repetitions,
            output_dir: self.output_dir.clone().unwrap_or_else(|| PathBuf::from("results")),
            eval: self.eval()?,
            curves: self.curves,
            drift_logs: self.drift_logs,
            cells,
            comparisons: self.comparisons()?,
        })
    }
}
