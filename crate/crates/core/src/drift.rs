//! Compose stationary concepts into one drifting stream.
//!
//! With `m` concepts and `n` instances, drifts sit at `i * n / m` for
//! `i = 1..m`. Abrupt streams switch exactly there. Gradual streams choose
//! the concept of every instance through nested Bernoulli draws: at each
//! drift position the incoming side is picked with a sigmoid probability,
//! so a drift is only reachable once every earlier one has been crossed.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::domain::{LabeledInstance, Schema, StreamSource};
use crate::generators::{make_concept, ConceptConfig, ConceptSource, GeneratorError};
use crate::rng::{derive_seed, rng_from_seed, StreamRng};

pub const DEFAULT_WIDTH: usize = 500;
const SELECTOR_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DriftKind {
    Abrupt,
    Gradual,
}

impl DriftKind {
    pub fn name(self) -> &'static str {
        match self {
            DriftKind::Abrupt => "abrupt",
            DriftKind::Gradual => "gradual",
        }
    }
}

impl fmt::Display for DriftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DriftKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "abrupt" => Ok(DriftKind::Abrupt),
            "gradual" => Ok(DriftKind::Gradual),
            _ => Err(format!("unknown drift kind `{s}`")),
        }
    }
}

/// Where a gradual transition sits relative to its drift position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransitionAnchor {
    /// Sigmoid midpoint at the drift position.
    #[default]
    Centered,
    /// Transition starts at the drift position (midpoint `width / 2` later).
    Start,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DriftError {
    #[error("drift plan needs at least one concept")]
    NoConcepts,
    #[error("concept {index} schema differs from concept 0")]
    SchemaMismatch { index: usize },
    #[error("transition width {width} must be in 1..{segment} (instances per concept)")]
    Width { width: usize, segment: usize },
    #[error("stream of {total} instances is too short for {concepts} concepts")]
    TooShort { total: usize, concepts: usize },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftPlan {
    pub concepts: Vec<ConceptConfig>,
    pub total: usize,
    pub kind: DriftKind,
    pub width: usize,
    pub anchor: TransitionAnchor,
}

impl DriftPlan {
    pub fn abrupt(concepts: Vec<ConceptConfig>, total: usize) -> Self {
        DriftPlan { concepts, total, kind: DriftKind::Abrupt, width: 1, anchor: TransitionAnchor::Centered }
    }

    pub fn gradual(concepts: Vec<ConceptConfig>, total: usize, width: usize) -> Self {
        DriftPlan { concepts, total, kind: DriftKind::Gradual, width, anchor: TransitionAnchor::Centered }
    }

    pub fn new(concepts: Vec<ConceptConfig>, total: usize, kind: DriftKind) -> Self {
        match kind {
            DriftKind::Abrupt => Self::abrupt(concepts, total),
            DriftKind::Gradual => Self::gradual(concepts, total, DEFAULT_WIDTH),
        }
    }

    /// Drift positions `i * total / concepts`.
    pub fn positions(&self) -> Vec<usize> {
        let m = self.concepts.len();
        (1..m).map(|i| i * self.total / m).collect()
    }

    pub fn validate(&self) -> Result<(), DriftError> {
        let m = self.concepts.len();
        if m == 0 {
            return Err(DriftError::NoConcepts);
        }
        if self.total < m {
            return Err(DriftError::TooShort { total: self.total, concepts: m });
        }
        for c in &self.concepts {
            c.validate()?;
        }
        let schema = self.concepts[0].schema();
        if let Some(index) = self.concepts.iter().position(|c| c.schema() != schema) {
            return Err(DriftError::SchemaMismatch { index });
        }
        let segment = self.total / m;
        if self.kind == DriftKind::Gradual && m > 1 && (self.width == 0 || self.width >= segment) {
            return Err(DriftError::Width { width: self.width, segment });
        }
        Ok(())
    }
}

/// Probability of drawing from the incoming concept at instance `t` for a
/// transition centered at `position`.
pub fn sigmoid_probability(t: f64, position: f64, width: usize) -> f64 {
    1.0 / (1.0 + (-4.0 * (t - position) / width as f64).exp())
}

/// A finite drifting stream built by [`compose`].
#[derive(Debug, Clone)]
pub struct DriftingStream {
    schema: Schema,
    sources: Vec<ConceptSource>,
    kind: DriftKind,
    centers: Vec<f64>,
    width: usize,
    total: usize,
    emitted: usize,
    selector: StreamRng,
}

/// Join the plan's concepts. Concept `i` is reseeded with
/// `derive_seed(seed, i)`, so each concept advances only when drawn from.
pub fn compose(plan: &DriftPlan, seed: u64) -> Result<DriftingStream, DriftError> {
    plan.validate()?;
    let sources = plan
        .concepts
        .iter()
        .zip(0u64..)
        .map(|(c, i)| make_concept(c.clone().with_seed(derive_seed(seed, i))))
        .collect::<Result<Vec<_>, _>>()?;
    let shift = match plan.anchor {
        TransitionAnchor::Centered => 0.0,
        TransitionAnchor::Start => plan.width as f64 / 2.0,
    };
    let centers = plan.positions().into_iter().map(|p| p as f64 + shift).collect();
    Ok(DriftingStream {
        schema: sources[0].schema().clone(),
        sources,
        kind: plan.kind,
        centers,
        width: plan.width.max(1),
        total: plan.total,
        emitted: 0,
        selector: rng_from_seed(derive_seed(seed, SELECTOR_STREAM)),
    })
}

impl DriftingStream {
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    fn select_concept(&mut self, t: usize) -> usize {
        match self.kind {
            DriftKind::Abrupt => t * self.sources.len() / self.total,
            DriftKind::Gradual => {
                let mut concept = 0;
                let mut crossed = true;
                for (j, &center) in self.centers.iter().enumerate() {
                    let draw = self.selector.random::<f64>();
                    if crossed && draw < sigmoid_probability(t as f64, center, self.width) {
                        concept = j + 1;
                    } else {
                        crossed = false;
                    }
                }
                concept
            }
        }
    }

    /// Next instance together with the index of the concept that produced it.
    pub fn next_with_concept(&mut self) -> Option<(LabeledInstance, usize)> {
        if self.emitted >= self.total {
            return None;
        }
        let concept = self.select_concept(self.emitted);
        self.emitted += 1;
        Some((self.sources[concept].emit(), concept))
    }
}

impl StreamSource for DriftingStream {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn next_instance(&mut self) -> Option<LabeledInstance> {
        self.next_with_concept().map(|(inst, _)| inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::SineVariant;

    fn mixed_plan(total: usize, kind: DriftKind) -> DriftPlan {
        let concepts = (0..5).map(|i| ConceptConfig::mixed(i % 2 == 1, 0)).collect();
        DriftPlan::new(concepts, total, kind)
    }

    #[test]
    fn sigmoid_values() {
        assert_eq!(sigmoid_probability(100.0, 100.0, 500), 0.5);
        let below = sigmoid_probability(0.0, 500.0, 500);
        assert!((below - 1.0 / (1.0 + 4f64.exp())).abs() < 1e-15);
        assert!((below - 0.017_986).abs() < 1e-5);
        assert!(sigmoid_probability(1e9, 0.0, 500) > 1.0 - 1e-12);
        let mut prev = 0.0;
        for t in 0..2000 {
            let p = sigmoid_probability(t as f64, 1000.0, 500);
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn abrupt_switches_at_fifths() {
        let mut s = compose(&mixed_plan(10_000, DriftKind::Abrupt), 1).unwrap();
        let mut count = 0;
        while let Some((_, c)) = s.next_with_concept() {
            assert_eq!(c, count / 2000);
            count += 1;
        }
        assert_eq!(count, 10_000);
        assert!(s.next_instance().is_none());
    }

    #[test]
    fn steep_gradual_matches_abrupt_away_from_positions() {
        let mut plan = mixed_plan(10_000, DriftKind::Gradual);
        plan.width = 1;
        let mut s = compose(&plan, 4).unwrap();
        let mut t = 0;
        while let Some((_, c)) = s.next_with_concept() {
            let near = [2000usize, 4000, 6000, 8000].iter().any(|&p| t + 3 >= p && t <= p + 3);
            if !near {
                assert_eq!(c, t / 2000, "t={t}");
            }
            t += 1;
        }
    }

    #[test]
    fn rejects_mixed_schemas_and_bad_widths() {
        let concepts = vec![ConceptConfig::mixed(false, 0), ConceptConfig::sine(SineVariant::Sine1, false, 0)];
        assert_eq!(
            compose(&DriftPlan::abrupt(concepts, 1000), 0).unwrap_err(),
            DriftError::SchemaMismatch { index: 1 }
        );
        let mut plan = mixed_plan(10_000, DriftKind::Gradual);
        plan.width = 2000;
        assert!(matches!(compose(&plan, 0), Err(DriftError::Width { .. })));
    }

    #[test]
    fn start_anchor_shifts_transition() {
        let early_share = |anchor| {
            let mut plan = mixed_plan(10_000, DriftKind::Gradual);
            plan.anchor = anchor;
            let mut s = compose(&plan, 2).unwrap();
            let concepts: Vec<usize> = std::iter::from_fn(|| s.next_with_concept().map(|(_, c)| c)).collect();
            concepts[1900..2000].iter().filter(|&&c| c == 1).count()
        };
        let centered = early_share(TransitionAnchor::Centered);
        let start = early_share(TransitionAnchor::Start);
        // incoming share just before the position: about 0.3 centered, 0.08 anchored at start
        assert!(start < centered && start <= 20, "{start} vs {centered}");
    }
}
