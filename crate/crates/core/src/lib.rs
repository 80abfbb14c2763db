//! Online classification over drifting synthetic streams, with drift
//! detectors, prequential evaluation and rank-based statistics.

pub mod detectors;
pub mod domain;
pub mod drift;
pub mod evaluation;
pub mod experiment;
pub mod generators;
pub mod learners;
pub mod rng;
pub mod stats;

pub use domain::{
    Attribute, AttributeKind, DetectorStatus, FeatureValue, LabeledInstance, Learner, Schema, SchemaError, StreamSource,
    Violation,
};
