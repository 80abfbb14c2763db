//! Seven-segment LED digits with 17 irrelevant bits.

use rand::Rng;

use crate::domain::{Attribute, FeatureValue, LabeledInstance, Schema};
use crate::rng::StreamRng;

pub const NUM_SEGMENTS: usize = 7;
pub const NUM_ATTRIBUTES: usize = 24;

/// Segment order: top, upper-left, upper-right, middle, lower-left,
/// lower-right, bottom.
pub const SEGMENTS: [[u8; NUM_SEGMENTS]; 10] = [
    [1, 1, 1, 0, 1, 1, 1],
    [0, 0, 1, 0, 0, 1, 0],
    [1, 0, 1, 1, 1, 0, 1],
    [1, 0, 1, 1, 0, 1, 1],
    [0, 1, 1, 1, 0, 1, 0],
    [1, 1, 0, 1, 0, 1, 1],
    [1, 1, 0, 1, 1, 1, 1],
    [1, 0, 1, 0, 0, 1, 0],
    [1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 0, 1, 1],
];

pub fn schema() -> Schema {
    Schema::new(
        (1..=NUM_ATTRIBUTES).map(|i| Attribute::nominal(format!("att{i}"), 2)).collect(),
        (0..10).map(|d| d.to_string()).collect(),
    )
    .expect("static schema")
}

/// Emit one digit. Logical bit `j` (segments first, then noise bits) is
/// written to output position `permutation[j]`.
pub fn led_emit(rng: &mut StreamRng, permutation: &[usize], invert_p: f64) -> LabeledInstance {
    debug_assert_eq!(permutation.len(), NUM_ATTRIBUTES);
    let digit = rng.random_range(0..10usize);
    let mut bits = [0u8; NUM_ATTRIBUTES];
    bits[..NUM_SEGMENTS].copy_from_slice(&SEGMENTS[digit]);
    for b in bits.iter_mut().skip(NUM_SEGMENTS) {
        *b = rng.random_range(0..2u8);
    }
    for b in bits.iter_mut() {
        if rng.random::<f64>() < invert_p {
            *b ^= 1;
        }
    }
    let mut values = vec![FeatureValue::Nominal(0); NUM_ATTRIBUTES];
    for (j, &b) in bits.iter().enumerate() {
        values[permutation[j]] = FeatureValue::Nominal(u32::from(b));
    }
    LabeledInstance::new(values, digit)
}
