//! Breiman's waveform problem: mixtures of two of three triangular base waves
//! in 21 attributes, plus 19 pure-noise attributes.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::domain::{Attribute, FeatureValue, LabeledInstance, Schema};
use crate::rng::StreamRng;

pub const WAVE_LEN: usize = 21;
pub const NUM_ATTRIBUTES: usize = 40;

/// Triangular pulses of height 6 peaking at (1-based) positions 7, 15 and 11.
pub const BASE_WAVES: [[f64; WAVE_LEN]; 3] = [
    [0., 1., 2., 3., 4., 5., 6., 5., 4., 3., 2., 1., 0., 0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0., 0., 1., 2., 3., 4., 5., 6., 5., 4., 3., 2., 1., 0.],
    [0., 0., 0., 0., 0., 1., 2., 3., 4., 5., 6., 5., 4., 3., 2., 1., 0., 0., 0., 0., 0.],
];

/// The pair of base waves mixed for each class.
pub const CLASS_WAVES: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

pub fn schema() -> Schema {
    Schema::new(
        (1..=NUM_ATTRIBUTES).map(|i| Attribute::numeric(format!("att{i}"))).collect(),
        vec!["class0".into(), "class1".into(), "class2".into()],
    )
    .expect("static schema")
}

/// Noise-free signal of `class` at mixing weight `u`.
pub fn waveform_signal(class: usize, u: f64) -> [f64; WAVE_LEN] {
    let (a, b) = CLASS_WAVES[class];
    let mut out = [0.0; WAVE_LEN];
    for (i, o) in out.iter_mut().enumerate() {
        *o = u * BASE_WAVES[a][i] + (1.0 - u) * BASE_WAVES[b][i];
    }
    out
}

/// Emit one instance. `noise_std` scales every Gaussian term (1.0 is the
/// standard problem, 0.0 suppresses noise). Logical attribute `j` is written
/// to output position `permutation[j]`.
pub fn waveform_emit(rng: &mut StreamRng, permutation: &[usize], noise_std: f64) -> LabeledInstance {
    debug_assert_eq!(permutation.len(), NUM_ATTRIBUTES);
    let class = rng.random_range(0..3usize);
    let u = rng.random::<f64>();
    let signal = waveform_signal(class, u);
    let mut logical = [0.0; NUM_ATTRIBUTES];
    for (j, slot) in logical.iter_mut().enumerate() {
        let gauss: f64 = rng.sample(StandardNormal);
        let base = if j < WAVE_LEN { signal[j] } else { 0.0 };
        *slot = base + noise_std * gauss;
    }
    let mut values = vec![FeatureValue::Numeric(0.0); NUM_ATTRIBUTES];
    for (j, &v) in logical.iter().enumerate() {
        values[permutation[j]] = FeatureValue::Numeric(v);
    }
    LabeledInstance::new(values, class)
}
