//! The seven benchmark streams, each a schedule of five concepts.
//!
//! | dataset | concepts                                                         |
//! |---------|------------------------------------------------------------------|
//! | AGRAW1  | Agrawal functions 1, 2, 3, 4, 5 (10% label noise)                |
//! | AGRAW2  | Agrawal functions 6, 7, 8, 9, 10 (10% label noise)               |
//! | LED     | identity, then four independent relevant-bit relocations        |
//! | MIXED   | normal, reversed, normal, reversed, normal                       |
//! | RandRBF | one centroid table, centers redrawn for every concept            |
//! | SINE    | SINE1, SINE1 reversed, SINE2, SINE2 reversed, SINE1              |
//! | WAVEF   | identity, then four independent attribute-pair shuffles          |

use std::fmt;
use std::str::FromStr;

use super::randrbf::{CentroidTable, DEFAULT_ATTRIBUTES, DEFAULT_CENTROIDS, DEFAULT_CLASSES};
use super::{led, swap_permutation, waveform, ConceptConfig, SineVariant};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dataset {
    Agraw1,
    Agraw2,
    Led,
    Mixed,
    RandRbf,
    Sine,
    Waveform,
}

/// Knobs of the concept schedules.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetOptions {
    /// Random swaps moving LED segment bits in each drifted concept.
    pub led_swaps: usize,
    /// Random attribute swaps in each drifted Waveform concept.
    pub waveform_swaps: usize,
    /// Noise probability for Agrawal and LED concepts.
    pub noise: f64,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        DatasetOptions { led_swaps: 2, waveform_swaps: 10, noise: 0.10 }
    }
}

// salt separating model-parameter seeds from instance seeds
const MODEL_SALT: u64 = 0x6d6f_6465_6c00;

impl Dataset {
    pub const ALL: [Dataset; 7] = [
        Dataset::Agraw1,
        Dataset::Agraw2,
        Dataset::Led,
        Dataset::Mixed,
        Dataset::RandRbf,
        Dataset::Sine,
        Dataset::Waveform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dataset::Agraw1 => "AGRAW1",
            Dataset::Agraw2 => "AGRAW2",
            Dataset::Led => "LED",
            Dataset::Mixed => "MIXED",
            Dataset::RandRbf => "RandRBF",
            Dataset::Sine => "SINE",
            Dataset::Waveform => "WAVEF",
        }
    }

    /// The five concepts of this stream for run seed `seed`.
    pub fn concepts(self, seed: u64, opts: &DatasetOptions) -> Vec<ConceptConfig> {
        let concept_seed = |i: u64| derive_seed(seed, i);
        let mut model_rng = rng_from_seed(derive_seed(seed, MODEL_SALT));
        match self {
            Dataset::Agraw1 | Dataset::Agraw2 => {
                let first = if self == Dataset::Agraw1 { 1 } else { 6 };
                (0..5u8)
                    .map(|i| ConceptConfig::agrawal(first + i, concept_seed(u64::from(i))).with_noise(opts.noise))
                    .collect()
            }
            Dataset::Led => (0..5u64)
                .map(|i| {
                    let perm = if i == 0 {
                        (0..led::NUM_ATTRIBUTES).collect()
                    } else {
                        swap_permutation(&mut model_rng, led::NUM_ATTRIBUTES, 0..led::NUM_SEGMENTS, opts.led_swaps)
                    };
                    ConceptConfig::led(perm, concept_seed(i)).with_noise(opts.noise)
                })
                .collect(),
            Dataset::Mixed => (0..5u64).map(|i| ConceptConfig::mixed(i % 2 == 1, concept_seed(i))).collect(),
            Dataset::RandRbf => {
                let table_seed = derive_seed(seed, MODEL_SALT + 1);
                let base = CentroidTable::random(table_seed, DEFAULT_CENTROIDS, DEFAULT_ATTRIBUTES, DEFAULT_CLASSES);
                (0..5u64)
                    .map(|i| {
                        let table = if i == 0 { base.clone() } else { base.with_new_centers(derive_seed(table_seed, i)) };
                        ConceptConfig::randrbf(table, concept_seed(i))
                    })
                    .collect()
            }
            Dataset::Sine => {
                let schedule = [
                    (SineVariant::Sine1, false),
                    (SineVariant::Sine1, true),
                    (SineVariant::Sine2, false),
                    (SineVariant::Sine2, true),
                    (SineVariant::Sine1, false),
                ];
                schedule
                    .iter()
                    .zip(0u64..)
                    .map(|(&(v, inv), i)| ConceptConfig::sine(v, inv, concept_seed(i)))
                    .collect()
            }
            Dataset::Waveform => (0..5u64)
                .map(|i| {
                    let perm = if i == 0 {
                        (0..waveform::NUM_ATTRIBUTES).collect()
                    } else {
                        swap_permutation(
                            &mut model_rng,
                            waveform::NUM_ATTRIBUTES,
                            0..waveform::NUM_ATTRIBUTES,
                            opts.waveform_swaps,
                        )
                    };
                    ConceptConfig::waveform(perm, concept_seed(i))
                })
                .collect(),
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dataset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        match upper.as_str() {
            "AGRAW1" | "AGRAWAL1" => Ok(Dataset::Agraw1),
            "AGRAW2" | "AGRAWAL2" => Ok(Dataset::Agraw2),
            "LED" => Ok(Dataset::Led),
            "MIXED" => Ok(Dataset::Mixed),
            "RANDRBF" => Ok(Dataset::RandRbf),
            "SINE" => Ok(Dataset::Sine),
            "WAVEF" | "WAVEFORM" => Ok(Dataset::Waveform),
            _ => Err(format!("unknown dataset `{s}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Family;

    #[test]
    fn agrawal_splits_rotate_functions() {
        let opts = DatasetOptions::default();
        let f = |d: Dataset| -> Vec<u8> {
            d.concepts(1, &opts)
                .iter()
                .map(|c| match c.family {
                    Family::Agrawal { function } => function,
                    _ => unreachable!(),
                })
                .collect()
        };
        assert_eq!(f(Dataset::Agraw1), vec![1, 2, 3, 4, 5]);
        assert_eq!(f(Dataset::Agraw2), vec![6, 7, 8, 9, 10]);
    }

    #[test]
    fn every_dataset_has_five_valid_concepts_with_one_schema() {
        let opts = DatasetOptions::default();
        for d in Dataset::ALL {
            let concepts = d.concepts(3, &opts);
            assert_eq!(concepts.len(), 5, "{d}");
            for c in &concepts {
                c.validate().unwrap();
                assert_eq!(c.schema(), concepts[0].schema());
            }
            assert_eq!(d.name().parse::<Dataset>().unwrap(), d);
        }
    }
}
