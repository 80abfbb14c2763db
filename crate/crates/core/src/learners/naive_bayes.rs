//! Incremental Naive Bayes.
//!
//! Scores are `log P(y) + sum_j log P(x_j | y)`; the evidence term is common
//! to every label and dropped. Priors and nominal likelihoods are
//! Laplace-smoothed; numeric likelihoods are Gaussian densities from Welford
//! statistics with a variance floor. Labels never observed score `-inf`.

use std::f64::consts::PI;

use crate::domain::{AttributeKind, FeatureValue, LabeledInstance, Learner, Schema};
use crate::learners::running::RunningStats;

pub const VARIANCE_FLOOR: f64 = 1e-6;
pub const LAPLACE_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum AttributeStats {
    /// `counts[label * cardinality + value]`.
    Nominal { cardinality: usize, counts: Vec<f64> },
    /// One accumulator per label.
    Numeric { per_label: Vec<RunningStats> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayes {
    num_labels: usize,
    pub(crate) label_counts: Vec<f64>,
    pub(crate) attributes: Vec<AttributeStats>,
    total: f64,
}

/// Gaussian log density of `x` under (`mean`, `variance`), floored variance.
pub fn gaussian_log_density(x: f64, mean: f64, variance: f64) -> f64 {
    let var = variance.max(VARIANCE_FLOOR);
    let d = x - mean;
    -0.5 * (2.0 * PI * var).ln() - d * d / (2.0 * var)
}

impl NaiveBayes {
    pub fn new(schema: &Schema) -> Self {
        let num_labels = schema.num_labels();
        let attributes = schema
            .attributes()
            .iter()
            .map(|a| match a.kind {
                AttributeKind::Nominal { cardinality } => AttributeStats::Nominal {
                    cardinality: cardinality as usize,
                    counts: vec![0.0; cardinality as usize * num_labels],
                },
                AttributeKind::Numeric => AttributeStats::Numeric { per_label: vec![RunningStats::new(); num_labels] },
            })
            .collect();
        NaiveBayes { num_labels, label_counts: vec![0.0; num_labels], attributes, total: 0.0 }
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn label_counts(&self) -> &[f64] {
        &self.label_counts
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    /// Running statistics of numeric attribute `attribute` for `label`.
    pub fn numeric_stats(&self, attribute: usize, label: usize) -> Option<&RunningStats> {
        match &self.attributes[attribute] {
            AttributeStats::Numeric { per_label } => per_label.get(label),
            AttributeStats::Nominal { .. } => None,
        }
    }

    pub fn nominal_count(&self, attribute: usize, label: usize, value: usize) -> Option<f64> {
        match &self.attributes[attribute] {
            AttributeStats::Nominal { cardinality, counts } => counts.get(label * cardinality + value).copied(),
            AttributeStats::Numeric { .. } => None,
        }
    }

    /// Unnormalized log posterior of every label; `None` before training.
    pub fn log_scores(&self, values: &[FeatureValue]) -> Option<Vec<f64>> {
        if self.total == 0.0 {
            return None;
        }
        let c = self.num_labels as f64;
        let scores = (0..self.num_labels)
            .map(|label| {
                let n_y = self.label_counts[label];
                if n_y == 0.0 {
                    return f64::NEG_INFINITY;
                }
                let mut score = ((n_y + LAPLACE_ALPHA) / (self.total + LAPLACE_ALPHA * c)).ln();
                for (stats, value) in self.attributes.iter().zip(values) {
                    score += match stats {
                        AttributeStats::Nominal { cardinality, counts } => {
                            let v = value.as_f64() as usize;
                            let count = counts[label * cardinality + v];
                            ((count + LAPLACE_ALPHA) / (n_y + LAPLACE_ALPHA * *cardinality as f64)).ln()
                        }
                        AttributeStats::Numeric { per_label } => {
                            let s = &per_label[label];
                            gaussian_log_density(value.as_f64(), s.mean(), s.variance())
                        }
                    };
                }
                score
            })
            .collect();
        Some(scores)
    }

    /// Exp-normalized posterior probabilities.
    pub fn posterior(&self, values: &[FeatureValue]) -> Option<Vec<f64>> {
        let scores = self.log_scores(values)?;
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let z: f64 = exp.iter().sum();
        Some(exp.into_iter().map(|e| e / z).collect())
    }

    /// Label with the most observations, lowest index on ties.
    pub fn majority(&self) -> Option<usize> {
        argmax(&self.label_counts).filter(|_| self.total > 0.0)
    }
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(b) if v <= values[b] => {}
            _ if v.is_nan() => {}
            _ => best = Some(i),
        }
    }
    best
}

impl Learner for NaiveBayes {
    fn train(&mut self, inst: &LabeledInstance) {
        let label = inst.label;
        self.label_counts[label] += 1.0;
        self.total += 1.0;
        for (stats, value) in self.attributes.iter_mut().zip(&inst.values) {
            match stats {
                AttributeStats::Nominal { cardinality, counts } => {
                    counts[label * *cardinality + value.as_f64() as usize] += 1.0;
                }
                AttributeStats::Numeric { per_label } => per_label[label].push(value.as_f64()),
            }
        }
    }

    fn classify(&self, values: &[FeatureValue]) -> Option<usize> {
        let scores = self.log_scores(values)?;
        argmax(&scores)
    }

    fn reset(&mut self) {
        for c in &mut self.label_counts {
            *c = 0.0;
        }
        self.total = 0.0;
        for stats in &mut self.attributes {
            match stats {
                AttributeStats::Nominal { counts, .. } => counts.iter_mut().for_each(|c| *c = 0.0),
                AttributeStats::Numeric { per_label } => per_label.iter_mut().for_each(|s| *s = RunningStats::new()),
            }
        }
    }
}
