use super::Detector;
use crate::domain::{DetectorStatus, LabeledInstance, Learner};
use crate::evaluation::OnlineModel;

/// A learner guarded by a drift detector.
///
/// During WARNING an alternate learner is trained alongside the main one.
/// A return to STABLE discards it; DRIFT promotes it (or a fresh learner
/// when none exists) to main.
#[derive(Debug, Clone)]
pub struct WrappedLearner<L, D> {
    main: L,
    alternate: Option<L>,
    prototype: L,
    detector: D,
    warning_active: bool,
    use_alternate: bool,
    t: usize,
    log: Option<Vec<(usize, DetectorStatus)>>,
}

impl<L: Learner + Clone, D: Detector> WrappedLearner<L, D> {
    /// `learner` is cloned and reset to serve as the template for fresh models.
    pub fn new(learner: L, detector: D) -> Self {
        let mut prototype = learner.clone();
        prototype.reset();
        WrappedLearner {
            main: learner,
            alternate: None,
            prototype,
            detector,
            warning_active: false,
            use_alternate: true,
            t: 0,
            log: None,
        }
    }

    /// Without alternates, DRIFT simply replaces main by a fresh learner.
    pub fn without_alternate(mut self) -> Self {
        self.use_alternate = false;
        self
    }

    /// Record every WARNING and DRIFT with its 1-based instance index.
    pub fn with_log(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn main(&self) -> &L {
        &self.main
    }

    pub fn alternate(&self) -> Option<&L> {
        self.alternate.as_ref()
    }

    pub fn warning_active(&self) -> bool {
        self.warning_active
    }

    pub fn detector(&self) -> &D {
        &self.detector
    }

    pub fn events(&self) -> &[(usize, DetectorStatus)] {
        self.log.as_deref().unwrap_or_default()
    }

    /// Predict with main, feed the outcome to the detector, react, then
    /// train main.
    pub fn process(&mut self, inst: &LabeledInstance) -> (Option<usize>, DetectorStatus) {
        self.t += 1;
        let predicted = self.main.classify(&inst.values);
        let status = self.detector.update(predicted == Some(inst.label));
        match status {
            DetectorStatus::Warning => {
                self.warning_active = true;
                if self.use_alternate {
                    let prototype = &self.prototype;
                    self.alternate.get_or_insert_with(|| prototype.clone()).train(inst);
                }
            }
            DetectorStatus::Stable => {
                self.warning_active = false;
                self.alternate = None;
            }
            DetectorStatus::Drift => {
                self.warning_active = false;
                self.main = self.alternate.take().unwrap_or_else(|| self.prototype.clone());
            }
        }
        self.main.train(inst);
        if let (Some(log), true) = (self.log.as_mut(), status != DetectorStatus::Stable) {
            log.push((self.t, status));
        }
        (predicted, status)
    }
}

impl<L: Learner + Clone, D: Detector> OnlineModel for WrappedLearner<L, D> {
    fn test_then_train(&mut self, inst: &LabeledInstance) -> (Option<usize>, DetectorStatus) {
        self.process(inst)
    }
}
