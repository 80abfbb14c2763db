//! Oracles and scripted scenarios shared by the property and acceptance
//! targets.
#![allow(dead_code)]

use std::cell::RefCell;

use rand::Rng;
use streamlearn::detectors::Detector;
use streamlearn::domain::{Attribute, DetectorStatus, FeatureValue, LabeledInstance, Learner, Schema, StreamSource};
use streamlearn::learners::knn::majority_label;
use streamlearn::learners::{euclidean, KnnClassifier, KnnConfig, NaiveBayes, RunningStats};
use streamlearn::rng::{derive_seed, rng_from_seed, StreamRng};

pub fn numeric_schema(dim: usize, labels: usize) -> Schema {
    Schema::new(
        (0..dim).map(|i| Attribute::numeric(format!("x{i}"))).collect(),
        (0..labels).map(|l| format!("c{l}")).collect(),
    )
    .unwrap()
}

fn random_values(rng: &mut StreamRng, dim: usize, coarse: bool) -> Vec<FeatureValue> {
    (0..dim)
        .map(|_| {
            // coarse grids force many equal distances
            let x = if coarse { f64::from(rng.random_range(0..4u8)) } else { rng.random_range(-5.0..5.0) };
            FeatureValue::Numeric(x)
        })
        .collect()
}

/// One random k-NN scenario: does the heap selection agree with a stable
/// full sort of the window by (distance, arrival)?
pub fn knn_trial_agrees(seed: u64) -> bool {
    let mut rng = rng_from_seed(seed);
    let dim = rng.random_range(1..=6);
    let labels = rng.random_range(2..=5);
    let k = rng.random_range(1..=25);
    let window = rng.random_range(1..=150);
    let coarse = rng.random_bool(0.5);
    let schema = numeric_schema(dim, labels);
    let mut knn = KnnClassifier::new(&schema, KnnConfig { k, window, normalize: false });
    for _ in 0..rng.random_range(0..=300) {
        let values = random_values(&mut rng, dim, coarse);
        knn.train(&LabeledInstance::new(values, rng.random_range(0..labels)));
    }
    let query = random_values(&mut rng, dim, coarse);
    let stored = knn.window();
    let mut sorted: Vec<(f64, usize)> =
        stored.iter().enumerate().map(|(i, inst)| (euclidean(&query, &inst.values).unwrap(), i)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    sorted.truncate(k);
    let got: Vec<usize> = knn.neighbors(&query).iter().map(|n| n.order).collect();
    let want: Vec<usize> = sorted.iter().map(|&(_, i)| i).collect();
    if got != want {
        return false;
    }
    let expected = majority_label(sorted.iter().map(|&(_, i)| stored[i].label), labels);
    knn.classify(&query) == expected
}

/// Largest |sum(posterior) - 1| over random Naive Bayes models and queries.
pub fn nb_normalization_error(seed: u64, trials: usize) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let dim = rng.random_range(1..=8);
        let labels = rng.random_range(2..=6);
        let mut attrs: Vec<Attribute> = Vec::new();
        for i in 0..dim {
            attrs.push(if rng.random_bool(0.5) {
                Attribute::numeric(format!("x{i}"))
            } else {
                Attribute::nominal(format!("n{i}"), 4)
            });
        }
        let schema = Schema::new(attrs.clone(), (0..labels).map(|l| l.to_string()).collect()).unwrap();
        let mut nb = NaiveBayes::new(&schema);
        let draw = |rng: &mut StreamRng| -> Vec<FeatureValue> {
            attrs
                .iter()
                .map(|a| match a.kind {
                    streamlearn::AttributeKind::Numeric => FeatureValue::Numeric(rng.random_range(-50.0..50.0)),
                    streamlearn::AttributeKind::Nominal { .. } => FeatureValue::Nominal(rng.random_range(0..4)),
                })
                .collect()
        };
        for _ in 0..rng.random_range(1..200) {
            let v = draw(&mut rng);
            nb.train(&LabeledInstance::new(v, rng.random_range(0..labels)));
        }
        let q = draw(&mut rng);
        let post = nb.posterior(&q).expect("trained model");
        worst = worst.max((post.iter().sum::<f64>() - 1.0).abs());
    }
    worst
}

/// Largest relative deviation of Welford mean/variance from two-pass values.
pub fn welford_error(seed: u64, trials: usize) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let n = rng.random_range(2..2000);
        let offset = rng.random_range(-1e4..1e4);
        let scale = rng.random_range(1e-2..1e2);
        let xs: Vec<f64> = (0..n).map(|_| offset + scale * rng.random_range(-1.0..1.0)).collect();
        let mut w = RunningStats::new();
        xs.iter().for_each(|&x| w.push(x));
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        worst = worst.max(((w.mean() - mean) / mean).abs()).max(((w.variance() - var) / var).abs());
    }
    worst
}

/// Learner that logs every call so the evaluation protocol can be audited.
/// The instance id is carried in the first attribute.
#[derive(Debug, Default)]
pub struct CountingSpy {
    pub calls: RefCell<Vec<(char, usize)>>,
}

impl Learner for CountingSpy {
    fn train(&mut self, inst: &LabeledInstance) {
        self.calls.borrow_mut().push(('L', inst.values[0].as_f64() as usize));
    }

    fn classify(&self, values: &[FeatureValue]) -> Option<usize> {
        let id = values[0].as_f64() as usize;
        self.calls.borrow_mut().push(('T', id));
        Some(id % 2)
    }

    fn reset(&mut self) {}
}

/// Feed `pre` outcomes with error rate `p0`, then error rate `p1`, and
/// return the number of post-change outcomes until the first DRIFT (None if
/// `horizon` passes without one).
pub fn drift_delay<D: Detector>(detector: &mut D, seed: u64, pre: usize, p0: f64, p1: f64, horizon: usize) -> Option<usize> {
    let mut rng = rng_from_seed(derive_seed(seed, 0x0d3f));
    for _ in 0..pre {
        detector.update(!rng.random_bool(p0));
    }
    (1..=horizon).find(|_| detector.update(!rng.random_bool(p1)) == DetectorStatus::Drift)
}

/// A finite in-memory stream.
pub struct VecSource {
    schema: Schema,
    items: std::vec::IntoIter<LabeledInstance>,
}

impl VecSource {
    pub fn new(schema: Schema, items: Vec<LabeledInstance>) -> Self {
        VecSource { schema, items: items.into_iter() }
    }
}

impl StreamSource for VecSource {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn next_instance(&mut self) -> Option<LabeledInstance> {
        self.items.next()
    }
}
