//! Drift detectors fed with prediction outcomes, and the warning-state
//! wrapper that pairs one with a learner.

mod ddm;
mod rddm;
mod wrapper;

use std::fmt;
use std::io;
use std::str::FromStr;

use crate::domain::DetectorStatus;

pub use ddm::{Ddm, DdmConfig, DdmState, DetectorConfigError};
pub use rddm::{Rddm, RddmConfig};
pub use wrapper::WrappedLearner;

pub trait Detector: Send {
    /// Feed whether the latest prediction was correct.
    fn update(&mut self, correct: bool) -> DetectorStatus;
    fn reset(&mut self);
}

impl<D: Detector + ?Sized> Detector for Box<D> {
    fn update(&mut self, correct: bool) -> DetectorStatus {
        (**self).update(correct)
    }

    fn reset(&mut self) {
        (**self).reset()
    }
}

/// Replays a fixed status sequence, then reports STABLE.
#[derive(Debug, Clone, Default)]
pub struct ScriptedDetector {
    script: Vec<DetectorStatus>,
    t: usize,
}

impl ScriptedDetector {
    pub fn new(script: Vec<DetectorStatus>) -> Self {
        ScriptedDetector { script, t: 0 }
    }

    /// WARNING on `warn_from..drift_at`, DRIFT at `drift_at` (0-based updates).
    pub fn warn_then_drift(warn_from: usize, drift_at: usize) -> Self {
        let mut script = vec![DetectorStatus::Stable; drift_at + 1];
        script[warn_from..drift_at].fill(DetectorStatus::Warning);
        script[drift_at] = DetectorStatus::Drift;
        ScriptedDetector::new(script)
    }
}

impl Detector for ScriptedDetector {
    fn update(&mut self, _correct: bool) -> DetectorStatus {
        let s = self.script.get(self.t).copied().unwrap_or_default();
        self.t += 1;
        s
    }

    fn reset(&mut self) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    None,
    Ddm,
    Rddm,
}

impl DetectorKind {
    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::None => "none",
            DetectorKind::Ddm => "ddm",
            DetectorKind::Rddm => "rddm",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(DetectorKind::None),
            "ddm" => Ok(DetectorKind::Ddm),
            "rddm" => Ok(DetectorKind::Rddm),
            _ => Err(format!("unknown detector `{s}` (expected none, ddm or rddm)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyDetector {
    Ddm(Ddm),
    Rddm(Rddm),
}

impl Detector for AnyDetector {
    fn update(&mut self, correct: bool) -> DetectorStatus {
        match self {
            AnyDetector::Ddm(d) => d.update(correct),
            AnyDetector::Rddm(d) => d.update(correct),
        }
    }

    fn reset(&mut self) {
        match self {
            AnyDetector::Ddm(d) => d.reset(),
            AnyDetector::Rddm(d) => d.reset(),
        }
    }
}

/// A detector choice with its constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorSpec {
    None,
    Ddm(DdmConfig),
    Rddm(RddmConfig),
}

impl DetectorSpec {
    pub fn kind(&self) -> DetectorKind {
        match self {
            DetectorSpec::None => DetectorKind::None,
            DetectorSpec::Ddm(_) => DetectorKind::Ddm,
            DetectorSpec::Rddm(_) => DetectorKind::Rddm,
        }
    }

    /// Default constants for `kind`.
    pub fn from_kind(kind: DetectorKind) -> Self {
        match kind {
            DetectorKind::None => DetectorSpec::None,
            DetectorKind::Ddm => DetectorSpec::Ddm(DdmConfig::default()),
            DetectorKind::Rddm => DetectorSpec::Rddm(RddmConfig::default()),
        }
    }

    pub fn build(&self) -> Result<Option<AnyDetector>, DetectorConfigError> {
        Ok(match self {
            DetectorSpec::None => None,
            DetectorSpec::Ddm(c) => Some(AnyDetector::Ddm(Ddm::new(*c)?)),
            DetectorSpec::Rddm(c) => Some(AnyDetector::Rddm(Rddm::new(*c)?)),
        })
    }
}

/// Write `(t, status)` events as `t,status` rows with a header; STABLE
/// entries are skipped.
pub fn write_drift_log<W: io::Write>(mut out: W, events: &[(usize, DetectorStatus)]) -> io::Result<()> {
    writeln!(out, "t,status")?;
    for (t, s) in events.iter().filter(|(_, s)| *s != DetectorStatus::Stable) {
        writeln!(out, "{t},{s}")?;
    }
    Ok(())
}
