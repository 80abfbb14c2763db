use std::collections::VecDeque;

use super::ddm::{DdmConfig, DdmState, DetectorConfigError, Level};
use crate::domain::DetectorStatus;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RddmConfig {
    pub min_instances: u64,
    pub warn_coeff: f64,
    pub drift_coeff: f64,
    /// Concept length after which statistics are rebuilt from stored outcomes.
    pub max_concept_size: usize,
    /// Number of recent outcomes kept for rebuilding.
    pub min_stable_size: usize,
    /// Warnings in a row after which a drift is forced.
    pub warn_limit: u64,
}

impl Default for RddmConfig {
    fn default() -> Self {
        RddmConfig {
            min_instances: 129,
            warn_coeff: 1.773,
            drift_coeff: 2.258,
            max_concept_size: 40_000,
            min_stable_size: 7_000,
            warn_limit: 1_400,
        }
    }
}

impl RddmConfig {
    fn ddm(&self) -> DdmConfig {
        DdmConfig { min_instances: self.min_instances, warn_coeff: self.warn_coeff, drift_coeff: self.drift_coeff }
    }

    pub fn validate(&self) -> Result<(), DetectorConfigError> {
        self.ddm().validate()?;
        if self.min_stable_size == 0 || self.min_stable_size > self.max_concept_size {
            return Err(DetectorConfigError::Invalid(format!(
                "min_stable_size ({}) must be in 1..={} (max_concept_size)",
                self.min_stable_size, self.max_concept_size
            )));
        }
        if self.warn_limit == 0 {
            return Err(DetectorConfigError::Invalid("warn_limit must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Rebuild {
    /// Most recent stored outcomes to replay.
    keep: usize,
    /// Whether the rebuild follows a detected drift (minima tracked while replaying).
    detected: bool,
}

/// Reactive Drift Detection Method: DDM whose statistics are periodically
/// rebuilt from a bounded buffer of recent outcomes, with a drift forced
/// after too many warnings in a row.
#[derive(Debug, Clone, PartialEq)]
pub struct Rddm {
    config: RddmConfig,
    core: DdmConfig,
    state: DdmState,
    stored: VecDeque<bool>,
    instances: u64,
    warn_start: Option<u64>,
    pending: Option<Rebuild>,
}

impl Rddm {
    pub fn new(config: RddmConfig) -> Result<Self, DetectorConfigError> {
        config.validate()?;
        Ok(Rddm {
            core: config.ddm(),
            config,
            state: DdmState::default(),
            stored: VecDeque::with_capacity(config.min_stable_size),
            instances: 0,
            warn_start: None,
            pending: None,
        })
    }

    pub fn config(&self) -> &RddmConfig {
        &self.config
    }

    pub fn state(&self) -> &DdmState {
        &self.state
    }

    /// Number of buffered outcomes.
    pub fn stored(&self) -> usize {
        self.stored.len()
    }

    fn rebuild(&mut self, plan: Rebuild) {
        let drop = self.stored.len().saturating_sub(plan.keep);
        self.stored.drain(..drop);
        self.state = DdmState::default();
        for &error in &self.stored {
            self.state.push(error);
            if plan.detected && self.state.i > self.core.min_instances {
                self.state.update_minima();
            }
        }
        self.warn_start = None;
    }

    fn schedule(&mut self, keep: usize, detected: bool) {
        self.pending = Some(Rebuild { keep, detected });
    }
}

impl Default for Rddm {
    fn default() -> Self {
        Rddm::new(RddmConfig::default()).expect("default config is valid")
    }
}

impl super::Detector for Rddm {
    fn update(&mut self, correct: bool) -> DetectorStatus {
        if let Some(plan) = self.pending.take() {
            self.rebuild(plan);
        }
        let error = !correct;
        if self.stored.len() == self.config.min_stable_size {
            self.stored.pop_front();
        }
        self.stored.push_back(error);
        self.instances += 1;
        self.state.push(error);

        if self.state.i < self.core.min_instances {
            return DetectorStatus::Stable;
        }
        self.state.update_minima();
        let level = self.state.level(&self.core);
        let warned = self.warn_start.is_some() || self.state.warned_in_concept();

        if level == Level::OutOfControl && warned {
            let keep = self.warn_start.map_or(1, |start| (self.instances - start + 1) as usize);
            self.schedule(keep, true);
            return DetectorStatus::Drift;
        }
        if level != Level::InControl {
            let start = *self.warn_start.get_or_insert(self.instances);
            if self.instances - start >= self.config.warn_limit {
                self.schedule(1, true);
                return DetectorStatus::Drift;
            }
            self.state.mark_warned();
            return DetectorStatus::Warning;
        }
        self.warn_start = None;
        if self.state.i > self.config.max_concept_size as u64 {
            self.schedule(self.stored.len(), false);
        }
        DetectorStatus::Stable
    }

    fn reset(&mut self) {
        *self = Rddm::new(self.config).expect("validated at construction");
    }
}
