//! Seeded synthetic-stream families. Each [`ConceptConfig`] parameterizes one
//! stationary concept; [`make_concept`] turns it into a [`ConceptSource`].

pub mod agrawal;
pub mod datasets;
pub mod led;
pub mod mixed;
pub mod randrbf;
pub mod sine;
pub mod waveform;

use rand::distr::weighted::WeightedIndex;
use thiserror::Error;

use crate::domain::{LabeledInstance, Schema, StreamSource};
use crate::rng::{rng_from_seed, StreamRng};

pub use agrawal::agrawal_emit;
pub use datasets::{Dataset, DatasetOptions};
pub use led::led_emit;
pub use mixed::{mixed_emit, mixed_label};
pub use randrbf::{randrbf_emit, Centroid, CentroidTable};
pub use sine::{sine_emit, sine_label, SineVariant};
pub use waveform::waveform_emit;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("invalid {family} parameter: {reason}")]
    InvalidParameter { family: &'static str, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Agrawal,
    Led,
    Mixed,
    RandRbf,
    Sine,
    Waveform,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Agrawal => "AGRAWAL",
            FamilyKind::Led => "LED",
            FamilyKind::Mixed => "MIXED",
            FamilyKind::RandRbf => "RANDRBF",
            FamilyKind::Sine => "SINE",
            FamilyKind::Waveform => "WAVEFORM",
        }
    }
}

/// Family-specific parameters of one concept.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Agrawal { function: u8 },
    Led { permutation: Vec<usize> },
    Mixed { inverted: bool },
    RandRbf { table: CentroidTable },
    Sine { variant: SineVariant, inverted: bool },
    Waveform { permutation: Vec<usize> },
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Agrawal { .. } => FamilyKind::Agrawal,
            Family::Led { .. } => FamilyKind::Led,
            Family::Mixed { .. } => FamilyKind::Mixed,
            Family::RandRbf { .. } => FamilyKind::RandRbf,
            Family::Sine { .. } => FamilyKind::Sine,
            Family::Waveform { .. } => FamilyKind::Waveform,
        }
    }
}

/// One stationary concept.
///
/// `noise` means: label-flip probability for Agrawal, MIXED and SINE; bit
/// inversion probability for LED; the standard deviation of the additive
/// Gaussian terms for Waveform. RandRBF spread lives in its centroid table,
/// so `noise` is unused there.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptConfig {
    pub family: Family,
    pub seed: u64,
    pub noise: f64,
}

impl ConceptConfig {
    pub fn agrawal(function: u8, seed: u64) -> Self {
        ConceptConfig { family: Family::Agrawal { function }, seed, noise: 0.10 }
    }

    pub fn led(permutation: Vec<usize>, seed: u64) -> Self {
        ConceptConfig { family: Family::Led { permutation }, seed, noise: 0.10 }
    }

    pub fn mixed(inverted: bool, seed: u64) -> Self {
        ConceptConfig { family: Family::Mixed { inverted }, seed, noise: 0.0 }
    }

    pub fn randrbf(table: CentroidTable, seed: u64) -> Self {
        ConceptConfig { family: Family::RandRbf { table }, seed, noise: 0.0 }
    }

    pub fn sine(variant: SineVariant, inverted: bool, seed: u64) -> Self {
        ConceptConfig { family: Family::Sine { variant, inverted }, seed, noise: 0.0 }
    }

    pub fn waveform(permutation: Vec<usize>, seed: u64) -> Self {
        ConceptConfig { family: Family::Waveform { permutation }, seed, noise: 1.0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let family = self.family.kind().name();
        let bad = |reason: String| GeneratorError::InvalidParameter { family, reason };
        let probability = matches!(
            self.family,
            Family::Agrawal { .. } | Family::Led { .. } | Family::Mixed { .. } | Family::Sine { .. }
        );
        if probability && !(0.0..=1.0).contains(&self.noise) {
            return Err(bad(format!("noise {} outside [0, 1]", self.noise)));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(bad(format!("noise {} must be a finite nonnegative number", self.noise)));
        }
        match &self.family {
            Family::Agrawal { function } => {
                if !(1..=10).contains(function) {
                    return Err(bad(format!("function {function} outside 1..=10")));
                }
            }
            Family::Led { permutation } => check_permutation(permutation, led::NUM_ATTRIBUTES).map_err(bad)?,
            Family::Waveform { permutation } => {
                check_permutation(permutation, waveform::NUM_ATTRIBUTES).map_err(bad)?
            }
            Family::RandRbf { table } => table.validate().map_err(bad)?,
            Family::Mixed { .. } | Family::Sine { .. } => {}
        }
        Ok(())
    }

    pub fn schema(&self) -> Schema {
        match &self.family {
            Family::Agrawal { .. } => agrawal::schema(),
            Family::Led { .. } => led::schema(),
            Family::Mixed { .. } => mixed::schema(),
            Family::RandRbf { table } => table.schema(),
            Family::Sine { .. } => sine::schema(),
            Family::Waveform { .. } => waveform::schema(),
        }
    }
}

fn check_permutation(p: &[usize], len: usize) -> Result<(), String> {
    if p.len() != len {
        return Err(format!("permutation covers {} positions, expected {len}", p.len()));
    }
    let mut seen = vec![false; len];
    for &i in p {
        if i >= len || seen[i] {
            return Err(format!("permutation is not a bijection on 0..{len}"));
        }
        seen[i] = true;
    }
    Ok(())
}

/// A deterministic, endless stream for one concept.
#[derive(Debug, Clone)]
pub struct ConceptSource {
    config: ConceptConfig,
    schema: Schema,
    rng: StreamRng,
    sampler: Option<WeightedIndex<f64>>,
}

/// Build the stream for `config`, rejecting out-of-range parameters.
pub fn make_concept(config: ConceptConfig) -> Result<ConceptSource, GeneratorError> {
    config.validate()?;
    let sampler = match &config.family {
        Family::RandRbf { table } => Some(table.sampler()),
        _ => None,
    };
    Ok(ConceptSource { schema: config.schema(), rng: rng_from_seed(config.seed), sampler, config })
}

impl ConceptSource {
    pub fn config(&self) -> &ConceptConfig {
        &self.config
    }

    pub fn emit(&mut self) -> LabeledInstance {
        let noise = self.config.noise;
        let rng = &mut self.rng;
        match &self.config.family {
            Family::Agrawal { function } => agrawal_emit(rng, *function, noise),
            Family::Led { permutation } => led_emit(rng, permutation, noise),
            Family::Mixed { inverted } => mixed_emit(rng, *inverted, noise),
            Family::RandRbf { table } => randrbf_emit(rng, table, self.sampler.as_ref().expect("sampler")),
            Family::Sine { variant, inverted } => sine_emit(rng, *variant, *inverted, noise),
            Family::Waveform { permutation } => waveform_emit(rng, permutation, noise),
        }
    }
}

impl StreamSource for ConceptSource {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn next_instance(&mut self) -> Option<LabeledInstance> {
        Some(self.emit())
    }
}

/// A random permutation of `0..len` that moves `swaps` random positions
/// among `movable` into random positions of `0..len`.
pub fn swap_permutation(rng: &mut StreamRng, len: usize, movable: std::ops::Range<usize>, swaps: usize) -> Vec<usize> {
    use rand::Rng;
    let mut p: Vec<usize> = (0..len).collect();
    for _ in 0..swaps {
        let a = rng.random_range(movable.clone());
        let b = rng.random_range(0..len);
        p.swap(a, b);
    }
    p
}
