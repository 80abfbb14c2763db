use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::domain::{Attribute, FeatureValue, LabeledInstance, Schema};
use crate::rng::StreamRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SineVariant {
    /// Below `y = sin(x)`, with `x` in `[0, 2 pi]` and `y` in `[-1, 1]`.
    Sine1,
    /// Below `y = 0.5 + 0.3 sin(3 pi x)`, with `x`, `y` in `[0, 1]`.
    Sine2,
}

impl SineVariant {
    /// Sampling box `(x_lo, x_hi, y_lo, y_hi)`.
    pub fn domain(self) -> (f64, f64, f64, f64) {
        match self {
            SineVariant::Sine1 => (0.0, TAU, -1.0, 1.0),
            SineVariant::Sine2 => (0.0, 1.0, 0.0, 1.0),
        }
    }
}

pub fn schema() -> Schema {
    Schema::new(
        vec![Attribute::numeric("x"), Attribute::numeric("y")],
        vec!["negative".into(), "positive".into()],
    )
    .expect("static schema")
}

pub fn sine_label(variant: SineVariant, x: f64, y: f64, inverted: bool) -> bool {
    let below = match variant {
        SineVariant::Sine1 => y < x.sin(),
        SineVariant::Sine2 => y < 0.5 + 0.3 * (3.0 * PI * x).sin(),
    };
    below ^ inverted
}

pub fn sine_emit(rng: &mut StreamRng, variant: SineVariant, inverted: bool, flip_p: f64) -> LabeledInstance {
    let (x_lo, x_hi, y_lo, y_hi) = variant.domain();
    let x = x_lo + (x_hi - x_lo) * rng.random::<f64>();
    let y = y_lo + (y_hi - y_lo) * rng.random::<f64>();
    let mut positive = sine_label(variant, x, y, inverted);
    if rng.random::<f64>() < flip_p {
        positive = !positive;
    }
    LabeledInstance::new(vec![FeatureValue::Numeric(x), FeatureValue::Numeric(y)], usize::from(positive))
}
