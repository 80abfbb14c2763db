//! Shared domain types and the contracts implemented by generators, learners
//! and detectors.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// One attribute value of an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureValue {
    Numeric(f64),
    /// 0-based category index.
    Nominal(u32),
}

impl FeatureValue {
    /// Numeric value, or the category index for nominal slots.
    #[inline]
    pub fn as_f64(self) -> f64 {
        match self {
            FeatureValue::Numeric(v) => v,
            FeatureValue::Nominal(i) => f64::from(i),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Numeric,
    Nominal { cardinality: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute { name: name.into(), kind: AttributeKind::Numeric }
    }

    pub fn nominal(name: impl Into<String>, cardinality: u32) -> Self {
        Attribute { name: name.into(), kind: AttributeKind::Nominal { cardinality } }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("schema needs at least one attribute")]
    NoAttributes,
    #[error("schema needs at least two labels, got {0}")]
    TooFewLabels(usize),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("nominal attribute `{0}` has zero cardinality")]
    EmptyNominal(String),
}

/// Ordered attributes plus ordered class-label names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    attributes: Vec<Attribute>,
    labels: Vec<String>,
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>, labels: Vec<String>) -> Result<Self, SchemaError> {
        if attributes.is_empty() {
            return Err(SchemaError::NoAttributes);
        }
        if labels.len() < 2 {
            return Err(SchemaError::TooFewLabels(labels.len()));
        }
        let mut seen = HashSet::new();
        for a in &attributes {
            if !seen.insert(a.name.as_str()) {
                return Err(SchemaError::DuplicateName(a.name.clone()));
            }
            if a.kind == (AttributeKind::Nominal { cardinality: 0 }) {
                return Err(SchemaError::EmptyNominal(a.name.clone()));
            }
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(SchemaError::DuplicateName(l.clone()));
            }
        }
        Ok(Schema { attributes, labels })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }
}

/// A feature vector plus its class-label index.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledInstance {
    pub values: Vec<FeatureValue>,
    pub label: usize,
}

impl LabeledInstance {
    pub fn new(values: Vec<FeatureValue>, label: usize) -> Self {
        LabeledInstance { values, label }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("arity mismatch: expected {expected} values, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("cardinality: attribute {attribute} has value {value} but cardinality {cardinality}")]
    Cardinality { attribute: usize, value: u32, cardinality: u32 },
    #[error("kind mismatch at attribute {attribute}")]
    Kind { attribute: usize },
    #[error("non-finite numeric value at attribute {attribute}")]
    NonFinite { attribute: usize },
    #[error("label {label} out of range for {labels} labels")]
    Label { label: usize, labels: usize },
}

/// Check `inst` against `schema`, reporting the first broken invariant.
pub fn validate_instance(inst: &LabeledInstance, schema: &Schema) -> Result<(), Violation> {
    let expected = schema.num_attributes();
    if inst.values.len() != expected {
        return Err(Violation::Arity { expected, found: inst.values.len() });
    }
    for (attribute, (value, attr)) in inst.values.iter().zip(schema.attributes()).enumerate() {
        match (value, attr.kind) {
            (FeatureValue::Numeric(v), AttributeKind::Numeric) => {
                if !v.is_finite() {
                    return Err(Violation::NonFinite { attribute });
                }
            }
            (FeatureValue::Nominal(v), AttributeKind::Nominal { cardinality }) => {
                if *v >= cardinality {
                    return Err(Violation::Cardinality { attribute, value: *v, cardinality });
                }
            }
            _ => return Err(Violation::Kind { attribute }),
        }
    }
    if inst.label >= schema.num_labels() {
        return Err(Violation::Label { label: inst.label, labels: schema.num_labels() });
    }
    Ok(())
}

/// A seeded, deterministic source of labeled instances.
///
/// Generators never run dry; composed streams return `None` once their
/// instance budget is spent.
pub trait StreamSource: Send {
    fn schema(&self) -> &Schema;
    fn next_instance(&mut self) -> Option<LabeledInstance>;
}

impl<S: StreamSource + ?Sized> StreamSource for Box<S> {
    fn schema(&self) -> &Schema {
        (**self).schema()
    }

    fn next_instance(&mut self) -> Option<LabeledInstance> {
        (**self).next_instance()
    }
}

/// An online classifier.
///
/// `classify` takes `&self`, so prediction can never mutate the model.
/// `None` means the learner has no model yet.
pub trait Learner: Send {
    fn train(&mut self, inst: &LabeledInstance);
    fn classify(&self, values: &[FeatureValue]) -> Option<usize>;
    fn reset(&mut self);
}

impl<L: Learner + ?Sized> Learner for Box<L> {
    fn train(&mut self, inst: &LabeledInstance) {
        (**self).train(inst)
    }

    fn classify(&self, values: &[FeatureValue]) -> Option<usize> {
        (**self).classify(values)
    }

    fn reset(&mut self) {
        (**self).reset()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DetectorStatus {
    #[default]
    Stable,
    Warning,
    Drift,
}

impl fmt::Display for DetectorStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectorStatus::Stable => "S",
            DetectorStatus::Warning => "W",
            DetectorStatus::Drift => "D",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema4() -> Schema {
        Schema::new(
            vec![
                Attribute::nominal("v", 2),
                Attribute::nominal("w", 3),
                Attribute::numeric("x"),
                Attribute::numeric("y"),
            ],
            vec!["neg".into(), "pos".into()],
        )
        .unwrap()
    }

    #[test]
    fn well_formed_instance_passes() {
        let inst = LabeledInstance::new(
            vec![
                FeatureValue::Nominal(1),
                FeatureValue::Nominal(2),
                FeatureValue::Numeric(0.3),
                FeatureValue::Numeric(0.4),
            ],
            1,
        );
        assert_eq!(validate_instance(&inst, &schema4()), Ok(()));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let inst = LabeledInstance::new(vec![FeatureValue::Nominal(1); 3], 0);
        let err = validate_instance(&inst, &schema4()).unwrap_err();
        assert_eq!(err, Violation::Arity { expected: 4, found: 3 });
        assert!(err.to_string().contains("arity mismatch"));
    }

    #[test]
    fn cardinality_violation_names_the_slot() {
        let inst = LabeledInstance::new(
            vec![
                FeatureValue::Nominal(0),
                FeatureValue::Nominal(5),
                FeatureValue::Numeric(0.3),
                FeatureValue::Numeric(0.4),
            ],
            0,
        );
        let err = validate_instance(&inst, &schema4()).unwrap_err();
        assert_eq!(err, Violation::Cardinality { attribute: 1, value: 5, cardinality: 3 });
        assert!(err.to_string().contains("cardinality"));
    }

    #[test]
    fn label_and_kind_checks() {
        let mut inst = LabeledInstance::new(
            vec![
                FeatureValue::Nominal(0),
                FeatureValue::Nominal(0),
                FeatureValue::Numeric(0.3),
                FeatureValue::Nominal(0),
            ],
            0,
        );
        assert_eq!(validate_instance(&inst, &schema4()), Err(Violation::Kind { attribute: 3 }));
        inst.values[3] = FeatureValue::Numeric(1.0);
        inst.label = 2;
        assert_eq!(validate_instance(&inst, &schema4()), Err(Violation::Label { label: 2, labels: 2 }));
    }

    #[test]
    fn schema_invariants() {
        assert_eq!(Schema::new(vec![], vec!["a".into(), "b".into()]), Err(SchemaError::NoAttributes));
        assert_eq!(
            Schema::new(vec![Attribute::numeric("x")], vec!["a".into()]),
            Err(SchemaError::TooFewLabels(1))
        );
        assert_eq!(
            Schema::new(
                vec![Attribute::numeric("x"), Attribute::numeric("x")],
                vec!["a".into(), "b".into()]
            ),
            Err(SchemaError::DuplicateName("x".into()))
        );
    }
}
