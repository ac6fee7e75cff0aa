//! The classifier families: monotonic linear-threshold models, decision lists,
//! decision trees and majority-vote tree ensembles.

mod decision_list;
mod monotonic;
mod tree;

pub use decision_list::{DecisionList, Literal, Rule};
pub use monotonic::MonotonicClassifier;
pub use tree::{DecisionTree, Node, TreeEnsemble};


use crate::domain::{ClassId, FeatureSpace, Point};
use crate::error::{Error, Result};
use crate::oracle::{CellModel, Discretization};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classifier {
    Monotonic(MonotonicClassifier),
    DecisionList(DecisionList),
    DecisionTree(DecisionTree),
    TreeEnsemble(TreeEnsemble),
}

impl Classifier {
    pub fn family(&self) -> &'static str {
        match self {
            Classifier::Monotonic(_) => "monotonic",
            Classifier::DecisionList(_) => "decision_list",
            Classifier::DecisionTree(_) => "decision_tree",
            Classifier::TreeEnsemble(_) => "tree_ensemble",
        }
    }

    pub fn is_monotonic(&self) -> bool {
        matches!(self, Classifier::Monotonic(_))
    }
}

/// A validated classifier bound to its feature space and class names.
///
/// Construction compiles the discretized form used by the entailment oracle
/// (for every family except monotonic models) and decides whether the
/// classifier is constant.
#[derive(Debug)]
pub struct Model {
    space: FeatureSpace,
    classes: Vec<String>,
    classifier: Classifier,
    cells: Option<CellModel>,
    constant: bool,
}

impl Model {
    pub fn new(space: FeatureSpace, classes: Vec<String>, classifier: Classifier) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidModel("no classes".into()));
        }
        if classes.len() > 64 {
            return Err(Error::InvalidModel("at most 64 classes are supported".into()));
        }
        for (i, c) in classes.iter().enumerate() {
            if classes[..i].contains(c) {
                return Err(Error::InvalidModel(format!("duplicate class name {c:?}")));
            }
        }
        let k = classes.len();
        match &classifier {
            Classifier::Monotonic(m) => m.validate(&space, k)?,
            Classifier::DecisionList(d) => d.validate(&space, k)?,
            Classifier::DecisionTree(t) => t.validate(&space, k)?,
            Classifier::TreeEnsemble(e) => e.validate(&space, k)?,
        }
        let cells = match &classifier {
            Classifier::Monotonic(_) => None,
            other => {
                let disc = Discretization::new(other, &space)?;
                Some(CellModel::compile(other, &space, disc, k))
            }
        };
        let mut model = Model { space, classes, classifier, cells, constant: false };
        model.constant = crate::oracle::model_is_constant(&model);
        Ok(model)
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn class_name(&self, c: ClassId) -> &str {
        &self.classes[c]
    }

    pub fn class_index(&self, name: &str) -> Option<ClassId> {
        self.classes.iter().position(|c| c == name)
    }

    pub fn classifier(&self) -> &Classifier {
        &self.classifier
    }

    /// The discretization of ordinal features; `None` for monotonic models.
    pub fn discretization(&self) -> Option<&Discretization> {
        self.cells.as_ref().map(CellModel::discretization)
    }

    pub(crate) fn cell_model(&self) -> Option<&CellModel> {
        self.cells.as_ref()
    }

    /// The total classification function κ.
    pub fn predict(&self, p: &Point) -> Result<ClassId> {
        if p.len() != self.space.len() {
            return Err(Error::DimensionMismatch { expected: self.space.len(), got: p.len() });
        }
        for (j, v) in p.values().iter().enumerate() {
            if !self.space.domain(j).contains(v)? {
                return Err(Error::InvalidValue(format!(
                    "value for {} outside its domain",
                    self.space.name(j)
                )));
            }
        }
        Ok(self.predict_unchecked(p))
    }

    pub(crate) fn predict_unchecked(&self, p: &Point) -> ClassId {
        match &self.classifier {
            Classifier::Monotonic(m) => m.predict_point(p),
            Classifier::DecisionList(d) => d.predict_point(p),
            Classifier::DecisionTree(t) => t.predict_point(p),
            Classifier::TreeEnsemble(e) => e.predict_point(p, self.classes.len()),
        }
    }

    /// Whether κ takes a single value over the whole feature space.
    pub fn is_constant(&self) -> bool {
        self.constant
    }
}
