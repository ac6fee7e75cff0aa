use crate::classifier::Model;
use crate::domain::{ClassId, FeatureSpace, Instance, Point, Value};
use crate::error::{Error, Result};
use crate::explain::FeatureSet;
use crate::oracle::{Assignment, OracleStats};
use crate::valueset::ValueSet;

/// A classifier together with an instance `(v, c)` it predicts.
#[derive(Debug)]
pub struct ExplanationProblem<'m> {
    model: &'m Model,
    instance: Instance,
    stats: OracleStats,
}

impl<'m> ExplanationProblem<'m> {
    /// Uses the model's own prediction as the class `c`.
    pub fn new(model: &'m Model, point: Point) -> Result<Self> {
        let class = model.predict(&point)?;
        Self::build(model, Instance { point, class })
    }

    /// Fails with [`Error::Misprediction`] when the model disagrees with `declared`.
    pub fn with_class(model: &'m Model, point: Point, declared: ClassId) -> Result<Self> {
        if declared >= model.classes().len() {
            return Err(Error::InvalidValue(format!("class index {declared} out of range")));
        }
        let predicted = model.predict(&point)?;
        if predicted != declared {
            return Err(Error::Misprediction {
                predicted: model.class_name(predicted).to_string(),
                declared: model.class_name(declared).to_string(),
            });
        }
        Self::build(model, Instance { point, class: declared })
    }

    fn build(model: &'m Model, instance: Instance) -> Result<Self> {
        if model.is_constant() {
            return Err(Error::ConstantClassifier);
        }
        Ok(ExplanationProblem { model, instance, stats: OracleStats::default() })
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn space(&self) -> &'m FeatureSpace {
        self.model.space()
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn point(&self) -> &Point {
        &self.instance.point
    }

    pub fn class(&self) -> ClassId {
        self.instance.class
    }

    pub fn value(&self, j: usize) -> &Value {
        self.instance.point.get(j)
    }

    pub fn feature_count(&self) -> usize {
        self.space().len()
    }

    pub fn all_features(&self) -> FeatureSet {
        (0..self.feature_count()).collect()
    }

    pub fn stats(&self) -> &OracleStats {
        &self.stats
    }

    /// `{v_j}` as a value set.
    pub fn singleton(&self, j: usize) -> ValueSet {
        ValueSet::singleton(self.space().domain(j), self.value(j)).expect("instance lies in its domain")
    }

    /// Pins every feature of `features` to its instance value.
    pub fn pinned(&self, features: &FeatureSet) -> Assignment {
        features.iter().map(|j| (j, self.singleton(j))).collect()
    }
}
