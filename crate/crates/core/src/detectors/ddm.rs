use thiserror::Error;

use crate::domain::DetectorStatus;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdmConfig {
    pub min_instances: u64,
    pub warn_coeff: f64,
    pub drift_coeff: f64,
}

impl Default for DdmConfig {
    fn default() -> Self {
        DdmConfig { min_instances: 30, warn_coeff: 2.0, drift_coeff: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectorConfigError {
    #[error("warn_coeff ({warn}) must be positive and below drift_coeff ({drift})")]
    Coefficients { warn: f64, drift: f64 },
    #[error("{0}")]
    Invalid(String),
}

impl DdmConfig {
    pub fn validate(&self) -> Result<(), DetectorConfigError> {
        let ok = self.warn_coeff > 0.0 && self.warn_coeff < self.drift_coeff && self.drift_coeff.is_finite();
        if !ok {
            return Err(DetectorConfigError::Coefficients { warn: self.warn_coeff, drift: self.drift_coeff });
        }
        Ok(())
    }
}

/// Error-rate statistics shared by DDM and RDDM.
///
/// `p` is the running error rate over `i` predictions and
/// `s = sqrt(p(1-p)/i)`. The pair minimizing `p + s` is kept once the
/// warm-up of `min_instances` predictions has passed.
#[derive(Debug, Clone, PartialEq)]
pub struct DdmState {
    pub i: u64,
    pub p: f64,
    pub s: f64,
    pub p_min: f64,
    pub s_min: f64,
    /// Whether a WARNING has been emitted since the last reset.
    warned: bool,
}

impl Default for DdmState {
    fn default() -> Self {
        DdmState { i: 0, p: 0.0, s: 0.0, p_min: f64::INFINITY, s_min: f64::INFINITY, warned: false }
    }
}

/// What the thresholds say about the latest statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Level {
    InControl,
    Warning,
    OutOfControl,
}

impl DdmState {
    /// Fold one outcome into `p` and `s`.
    pub(crate) fn push(&mut self, error: bool) {
        self.i += 1;
        self.p += (f64::from(u8::from(error)) - self.p) / self.i as f64;
        self.s = (self.p * (1.0 - self.p) / self.i as f64).sqrt();
    }

    pub(crate) fn warned_in_concept(&self) -> bool {
        self.warned
    }

    pub(crate) fn mark_warned(&mut self) {
        self.warned = true;
    }

    pub(crate) fn update_minima(&mut self) {
        if self.p + self.s < self.p_min + self.s_min {
            self.p_min = self.p;
            self.s_min = self.s;
        }
    }

    pub(crate) fn level(&self, cfg: &DdmConfig) -> Level {
        let ps = self.p + self.s;
        if ps > self.p_min + cfg.drift_coeff * self.s_min {
            Level::OutOfControl
        } else if ps > self.p_min + cfg.warn_coeff * self.s_min {
            Level::Warning
        } else {
            Level::InControl
        }
    }

    /// Warm-up gate, minima update and thresholds. An out-of-control level
    /// reached without an earlier WARNING in this concept is reported as
    /// WARNING first.
    pub(crate) fn assess(&mut self, cfg: &DdmConfig) -> DetectorStatus {
        if self.i < cfg.min_instances {
            return DetectorStatus::Stable;
        }
        self.update_minima();
        match self.level(cfg) {
            Level::OutOfControl if self.warned => DetectorStatus::Drift,
            Level::OutOfControl | Level::Warning => {
                self.warned = true;
                DetectorStatus::Warning
            }
            Level::InControl => DetectorStatus::Stable,
        }
    }
}

/// Drift Detection Method.
#[derive(Debug, Clone, PartialEq)]
pub struct Ddm {
    config: DdmConfig,
    state: DdmState,
}

impl Ddm {
    pub fn new(config: DdmConfig) -> Result<Self, DetectorConfigError> {
        config.validate()?;
        Ok(Ddm { config, state: DdmState::default() })
    }

    pub fn config(&self) -> &DdmConfig {
        &self.config
    }

    pub fn state(&self) -> &DdmState {
        &self.state
    }
}

impl Default for Ddm {
    fn default() -> Self {
        Ddm::new(DdmConfig::default()).expect("default config is valid")
    }
}

impl super::Detector for Ddm {
    fn update(&mut self, correct: bool) -> DetectorStatus {
        self.state.push(!correct);
        let status = self.state.assess(&self.config);
        if status == DetectorStatus::Drift {
            self.state = DdmState::default();
        }
        status
    }

    fn reset(&mut self) {
        self.state = DdmState::default();
    }
}
