//! Random radial-basis-function stream: weighted labeled centroids with
//! Gaussian spread.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::domain::{Attribute, FeatureValue, LabeledInstance, Schema};
use crate::rng::{rng_from_seed, StreamRng};

pub const DEFAULT_CLASSES: usize = 6;
pub const DEFAULT_ATTRIBUTES: usize = 40;
pub const DEFAULT_CENTROIDS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct Centroid {
    pub center: Vec<f64>,
    pub label: usize,
    pub weight: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentroidTable {
    pub num_classes: usize,
    pub centroids: Vec<Centroid>,
}

impl CentroidTable {
    /// Centers uniform on `[0,1]^attributes`, labels uniform, weights and
    /// stddevs uniform on `(0, 1]`.
    pub fn random(seed: u64, centroids: usize, attributes: usize, classes: usize) -> Self {
        let mut rng = rng_from_seed(seed);
        let centroids = (0..centroids)
            .map(|_| {
                let center = (0..attributes).map(|_| rng.random::<f64>()).collect();
                let label = rng.random_range(0..classes);
                let stddev = 1.0 - rng.random::<f64>();
                let weight = 1.0 - rng.random::<f64>();
                Centroid { center, label, weight, stddev }
            })
            .collect();
        CentroidTable { num_classes: classes, centroids }
    }

    /// Same labels, weights and stddevs; new centers drawn from `seed`.
    pub fn with_new_centers(&self, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let mut out = self.clone();
        for c in &mut out.centroids {
            for v in &mut c.center {
                *v = rng.random::<f64>();
            }
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.centroids.first().map_or(0, |c| c.center.len())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.centroids.is_empty() {
            return Err("centroid table is empty".into());
        }
        if self.num_classes < 2 {
            return Err("centroid table needs at least two classes".into());
        }
        let dim = self.dimension();
        if dim == 0 {
            return Err("centroids have no coordinates".into());
        }
        for (i, c) in self.centroids.iter().enumerate() {
            if c.center.len() != dim {
                return Err(format!("centroid {i} has dimension {} instead of {dim}", c.center.len()));
            }
            if c.label >= self.num_classes {
                return Err(format!("centroid {i} label {} >= {}", c.label, self.num_classes));
            }
            if !(c.weight > 0.0 && c.weight.is_finite()) {
                return Err(format!("centroid {i} weight must be positive"));
            }
            if !(c.stddev >= 0.0 && c.stddev.is_finite()) {
                return Err(format!("centroid {i} stddev must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn schema(&self) -> Schema {
        Schema::new(
            (1..=self.dimension()).map(|i| Attribute::numeric(format!("att{i}"))).collect(),
            (1..=self.num_classes).map(|i| format!("class{i}")).collect(),
        )
        .expect("validated table")
    }

    pub fn sampler(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(self.centroids.iter().map(|c| c.weight)).expect("validated weights")
    }
}

/// Pick a centroid by weight and offset it along a uniform direction by
/// `|N(0, stddev)|`.
pub fn randrbf_emit(rng: &mut StreamRng, table: &CentroidTable, sampler: &WeightedIndex<f64>) -> LabeledInstance {
    let centroid = &table.centroids[sampler.sample(rng)];
    let dim = centroid.center.len();
    let mut direction: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    let gauss: f64 = rng.sample(StandardNormal);
    let length = (gauss * centroid.stddev).abs();
    let scale = if norm > 0.0 { length / norm } else { 0.0 };
    for d in &mut direction {
        *d *= scale;
    }
    let values = centroid
        .center
        .iter()
        .zip(&direction)
        .map(|(c, d)| FeatureValue::Numeric(c + d))
        .collect();
    LabeledInstance::new(values, centroid.label)
}
