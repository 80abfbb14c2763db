//! The online classifiers: sliding-window k-NN, Naive Bayes and the
//! Hoeffding tree.

pub mod hoeffding;
pub mod knn;
pub mod naive_bayes;
pub mod running;

use std::fmt;

use thiserror::Error;

use crate::domain::{FeatureValue, LabeledInstance, Learner, Schema};

pub use hoeffding::{hoeffding_bound, HoeffdingConfig, HoeffdingTree, LeafPrediction};
pub use knn::{DistanceHeap, KnnClassifier, KnnConfig, Neighbor};
pub use naive_bayes::NaiveBayes;
pub use running::RunningStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("arity mismatch: {left} vs {right} values")]
pub struct ArityMismatch {
    pub left: usize,
    pub right: usize,
}

/// Euclidean distance; nominal slots contribute 0 on a match and 1 otherwise.
pub fn euclidean(a: &[FeatureValue], b: &[FeatureValue]) -> Result<f64, ArityMismatch> {
    if a.len() != b.len() {
        return Err(ArityMismatch { left: a.len(), right: b.len() });
    }
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| match (x, y) {
            (FeatureValue::Numeric(x), FeatureValue::Numeric(y)) => (x - y) * (x - y),
            (FeatureValue::Nominal(x), FeatureValue::Nominal(y)) => f64::from(u8::from(x != y)),
            (x, y) => (x.as_f64() - y.as_f64()).powi(2),
        })
        .sum();
    Ok(sum.sqrt())
}

/// Which classifier to build, with its hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LearnerSpec {
    NaiveBayes,
    Hoeffding(HoeffdingConfig),
    Knn(KnnConfig),
}

impl LearnerSpec {
    pub fn build(&self, schema: &Schema) -> AnyLearner {
        match self {
            LearnerSpec::NaiveBayes => AnyLearner::NaiveBayes(NaiveBayes::new(schema)),
            LearnerSpec::Hoeffding(c) => AnyLearner::Hoeffding(Box::new(HoeffdingTree::new(schema, *c))),
            LearnerSpec::Knn(c) => AnyLearner::Knn(KnnClassifier::new(schema, *c)),
        }
    }

    /// Short name used in result files: `NB`, `HT` or `kNN`.
    pub fn kind_name(&self) -> &'static str {
        match self {
            LearnerSpec::NaiveBayes => "NB",
            LearnerSpec::Hoeffding(_) => "HT",
            LearnerSpec::Knn(_) => "kNN",
        }
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnerSpec::Knn(c) => write!(f, "kNN{}(w={})", c.k, c.window),
            other => f.write_str(other.kind_name()),
        }
    }
}

#[derive(Debug, Clone)]
pub enum AnyLearner {
    NaiveBayes(NaiveBayes),
    Hoeffding(Box<HoeffdingTree>),
    Knn(KnnClassifier),
}

impl Learner for AnyLearner {
    fn train(&mut self, inst: &LabeledInstance) {
        match self {
            AnyLearner::NaiveBayes(l) => l.train(inst),
            AnyLearner::Hoeffding(l) => l.train(inst),
            AnyLearner::Knn(l) => l.train(inst),
        }
    }

    fn classify(&self, values: &[FeatureValue]) -> Option<usize> {
        match self {
            AnyLearner::NaiveBayes(l) => l.classify(values),
            AnyLearner::Hoeffding(l) => l.classify(values),
            AnyLearner::Knn(l) => l.classify(values),
        }
    }

    fn reset(&mut self) {
        match self {
            AnyLearner::NaiveBayes(l) => l.reset(),
            AnyLearner::Hoeffding(l) => l.reset(),
            AnyLearner::Knn(l) => l.reset(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(v: &[f64]) -> Vec<FeatureValue> {
        v.iter().map(|&x| FeatureValue::Numeric(x)).collect()
    }

    #[test]
    fn three_four_five() {
        assert_eq!(euclidean(&num(&[0.0, 0.0]), &num(&[3.0, 4.0])), Ok(5.0));
        let x = num(&[1.5, -2.0, 7.0]);
        assert_eq!(euclidean(&x, &x), Ok(0.0));
    }

    #[test]
    fn arity_is_checked() {
        assert_eq!(euclidean(&num(&[0.0]), &num(&[1.0, 2.0])), Err(ArityMismatch { left: 1, right: 2 }));
    }

    #[test]
    fn nominal_overlap() {
        let a = vec![FeatureValue::Nominal(1), FeatureValue::Numeric(0.0)];
        let b = vec![FeatureValue::Nominal(3), FeatureValue::Numeric(0.0)];
        assert_eq!(euclidean(&a, &b), Ok(1.0));
        assert_eq!(euclidean(&a, &a), Ok(0.0));
    }
}
