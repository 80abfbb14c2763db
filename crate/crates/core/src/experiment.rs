//! One grid cell of a benchmark: a dataset stream, a learner and an
//! optional detector, evaluated prequentially for a given seed.

use thiserror::Error;

use crate::detectors::{AnyDetector, DetectorConfigError, DetectorSpec, WrappedLearner};
use crate::domain::{DetectorStatus, LabeledInstance, StreamSource};
use crate::drift::{compose, DriftError, DriftKind, DriftPlan, DriftingStream, DEFAULT_WIDTH};
use crate::evaluation::{prequential_run, EvalError, OnlineModel, PrequentialConfig, RunKey, RunOutcome, RunRecord};
use crate::generators::{Dataset, DatasetOptions};
use crate::learners::{AnyLearner, LearnerSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Drift(#[from] DriftError),
    #[error(transparent)]
    Detector(#[from] DetectorConfigError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A bare learner or one wrapped with a detector.
#[derive(Debug, Clone)]
pub enum Model {
    Bare(AnyLearner),
    Wrapped(Box<WrappedLearner<AnyLearner, AnyDetector>>),
}

impl Model {
    /// Logged WARNING/DRIFT events; empty for bare learners or when logging is off.
    pub fn events(&self) -> &[(usize, DetectorStatus)] {
        match self {
            Model::Bare(_) => &[],
            Model::Wrapped(w) => w.events(),
        }
    }
}

impl OnlineModel for Model {
    fn test_then_train(&mut self, inst: &LabeledInstance) -> (Option<usize>, DetectorStatus) {
        match self {
            Model::Bare(l) => l.test_then_train(inst),
            Model::Wrapped(w) => w.process(inst),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub dataset: Dataset,
    pub drift: DriftKind,
    pub size: usize,
    pub learner: LearnerSpec,
    pub detector: DetectorSpec,
    /// Transition width for gradual drift.
    pub width: usize,
    pub options: DatasetOptions,
}

impl Cell {
    pub fn new(dataset: Dataset, drift: DriftKind, size: usize, learner: LearnerSpec, detector: DetectorSpec) -> Self {
        Cell { dataset, drift, size, learner, detector, width: DEFAULT_WIDTH, options: DatasetOptions::default() }
    }

    pub fn key(&self, seed: u64) -> RunKey {
        let (k, w) = match self.learner {
            LearnerSpec::Knn(c) => (Some(c.k), Some(c.window)),
            _ => (None, None),
        };
        RunKey {
            generator: self.dataset.name().to_string(),
            drift: self.drift.name().to_string(),
            size: self.size,
            learner: self.learner.kind_name().to_string(),
            detector: self.detector.kind().name().to_string(),
            k,
            w,
            seed,
        }
    }

    pub fn plan(&self, seed: u64) -> DriftPlan {
        let concepts = self.dataset.concepts(seed, &self.options);
        match self.drift {
            DriftKind::Abrupt => DriftPlan::abrupt(concepts, self.size),
            DriftKind::Gradual => DriftPlan::gradual(concepts, self.size, self.width),
        }
    }

    pub fn stream(&self, seed: u64) -> Result<DriftingStream, ExperimentError> {
        Ok(compose(&self.plan(seed), seed)?)
    }

    /// `log` records detector events (see [`Model::events`]).
    pub fn model(&self, stream: &DriftingStream, log: bool) -> Result<Model, ExperimentError> {
        let learner = self.learner.build(stream.schema());
        Ok(match self.detector.build()? {
            None => Model::Bare(learner),
            Some(d) => {
                let w = WrappedLearner::new(learner, d);
                Model::Wrapped(Box::new(if log { w.with_log() } else { w }))
            }
        })
    }

    pub fn run_with(&self, seed: u64, cfg: &PrequentialConfig) -> Result<RunOutcome, ExperimentError> {
        self.run_logged(seed, cfg, false).map(|(outcome, _)| outcome)
    }

    /// Like [`Cell::run_with`], also returning the detector events.
    pub fn run_logged(
        &self,
        seed: u64,
        cfg: &PrequentialConfig,
        log: bool,
    ) -> Result<(RunOutcome, Vec<(usize, DetectorStatus)>), ExperimentError> {
        let mut stream = self.stream(seed)?;
        let mut model = self.model(&stream, log)?;
        let outcome = prequential_run(&mut stream, &mut model, cfg)?;
        Ok((outcome, model.events().to_vec()))
    }

    /// Run with the default evaluation settings over the whole stream.
    pub fn run(&self, seed: u64) -> Result<RunRecord, ExperimentError> {
        let outcome = self.run_with(seed, &PrequentialConfig::new(self.size))?;
        Ok(RunRecord::new(self.key(seed), &outcome))
    }
}
