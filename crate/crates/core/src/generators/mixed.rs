use std::f64::consts::PI;

use rand::Rng;

use crate::domain::{Attribute, FeatureValue, LabeledInstance, Schema};
use crate::rng::StreamRng;

pub fn schema() -> Schema {
    Schema::new(
        vec![
            Attribute::nominal("v", 2),
            Attribute::nominal("w", 2),
            Attribute::numeric("x"),
            Attribute::numeric("y"),
        ],
        vec!["negative".into(), "positive".into()],
    )
    .expect("static schema")
}

/// Positive iff at least two of `v`, `w`, `y < 0.5 + 0.3 sin(3 pi x)` hold,
/// reversed when `inverted`.
pub fn mixed_label(v: bool, w: bool, x: f64, y: f64, inverted: bool) -> bool {
    let curve = y < 0.5 + 0.3 * (3.0 * PI * x).sin();
    let votes = usize::from(v) + usize::from(w) + usize::from(curve);
    (votes >= 2) ^ inverted
}

pub fn mixed_emit(rng: &mut StreamRng, inverted: bool, flip_p: f64) -> LabeledInstance {
    let v = rng.random::<bool>();
    let w = rng.random::<bool>();
    let x = rng.random::<f64>();
    let y = rng.random::<f64>();
    let mut positive = mixed_label(v, w, x, y, inverted);
    if rng.random::<f64>() < flip_p {
        positive = !positive;
    }
    LabeledInstance::new(
        vec![
            FeatureValue::Nominal(u32::from(v)),
            FeatureValue::Nominal(u32::from(w)),
            FeatureValue::Numeric(x),
            FeatureValue::Numeric(y),
        ],
        usize::from(positive),
    )
}
