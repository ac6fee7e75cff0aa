//! JSON model files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "features": [
//!     {"name": "A", "domain": {"type": "categorical", "labels": ["Junior", "Adult"]}},
//!     {"name": "Q", "domain": {"type": "ordinal", "lo": "0", "hi": "10", "kind": "continuous"}}
//!   ],
//!   "classes": ["0", "1"],
//!   "classifier": {"type": "decision_list",
//!                  "rules": [{"if": [{"feature": "A", "in": ["Adult"]}], "then": "0"}],
//!                  "default": "1"}
//! }
//! ```
//!
//! Other classifier payloads: `{"type": "monotonic", "weights": [..], "thresholds": [..]}`,
//! `{"type": "decision_tree", "root": NODE}` and `{"type": "tree_ensemble", "trees": [NODE, ..]}`
//! where `NODE` is `{"leaf": CLASS}`,
//! `{"split": {"feature", "threshold", "lt": NODE, "ge": NODE}}` or
//! `{"split_eq": {"feature", "label", "ne": NODE, "eq": NODE}}`.
//! Numbers are decimal strings parsed exactly; ordinal literal sets are
//! interval strings such as `"[0,2.5)"`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifier::{
    Classifier, DecisionList, DecisionTree, Literal, Model, MonotonicClassifier, Node, Rule, TreeEnsemble,
};
use crate::domain::{Domain, Feature, FeatureSpace, OrdinalKind};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::valueset::{Interval, ValueSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    pub features: Vec<FeatureDoc>,
    pub classes: Vec<String>,
    pub classifier: ClassifierDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureDoc {
    pub name: String,
    pub domain: DomainDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainDoc {
    Categorical { labels: Vec<String> },
    Ordinal {
        lo: String,
        hi: String,
        #[serde(default = "continuous")]
        kind: OrdinalKind,
    },
}

fn continuous() -> OrdinalKind {
    OrdinalKind::Continuous
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierDoc {
    Monotonic { weights: Vec<String>, thresholds: Vec<String> },
    DecisionList { rules: Vec<RuleDoc>, default: String },
    DecisionTree { root: NodeDoc },
    TreeEnsemble { trees: Vec<NodeDoc> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    #[serde(rename = "if")]
    pub conditions: Vec<LiteralDoc>,
    #[serde(rename = "then")]
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteralDoc {
    pub feature: String,
    #[serde(rename = "in")]
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeDoc {
    Leaf(String),
    Split {
        feature: String,
        threshold: String,
        lt: Box<NodeDoc>,
        ge: Box<NodeDoc>,
    },
    SplitEq {
        feature: String,
        label: String,
        ne: Box<NodeDoc>,
        eq: Box<NodeDoc>,
    },
}

fn at(path: &str, e: Error) -> Error {
    Error::ModelFile(format!("{path}: {e}"))
}

fn number(path: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| at(path, e))
}

struct Ctx<'a> {
    space: &'a FeatureSpace,
    classes: &'a [String],
}

impl Ctx<'_> {
    fn feature(&self, path: &str, name: &str) -> Result<usize> {
        self.space
            .index_of(name)
            .ok_or_else(|| Error::ModelFile(format!("{path}: unknown feature {name:?}")))
    }

    fn class(&self, path: &str, name: &str) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::ModelFile(format!("{path}: unknown class {name:?}")))
    }

    fn node(&self, path: &str, doc: &NodeDoc) -> Result<Node> {
        Ok(match doc {
            NodeDoc::Leaf(c) => Node::leaf(self.class(path, c)?),
            NodeDoc::Split { feature, threshold, lt, ge } => {
                let j = self.feature(path, feature)?;
                Node::threshold(
                    j,
                    number(&format!("{path}.threshold"), threshold)?,
                    self.node(&format!("{path}.lt"), lt)?,
                    self.node(&format!("{path}.ge"), ge)?,
                )
            }
            NodeDoc::SplitEq { feature, label, ne, eq } => {
                let j = self.feature(path, feature)?;
                let l = self
                    .space
                    .domain(j)
                    .label_index(label)
                    .ok_or_else(|| Error::ModelFile(format!("{path}: unknown label {label:?} for {feature}")))?;
                Node::label(j, l, self.node(&format!("{path}.ne"), ne)?, self.node(&format!("{path}.eq"), eq)?)
            }
        })
    }

    fn literal(&self, path: &str, doc: &LiteralDoc) -> Result<Literal> {
        let j = self.feature(path, &doc.feature)?;
        let domain = self.space.domain(j);
        let set = match domain {
            Domain::Categorical { .. } => {
                let labels = doc
                    .values
                    .iter()
                    .map(|l| {
                        domain
                            .label_index(l)
                            .ok_or_else(|| Error::ModelFile(format!("{path}: unknown label {l:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ValueSet::labels(domain, labels)
            }
            Domain::Ordinal { .. } => {
                let pieces = doc.values.iter().map(|t| Interval::parse(t)).collect::<Result<Vec<_>>>();
                pieces.and_then(|p| ValueSet::intervals(domain, p))
            }
        };
        Ok(Literal { feature: j, set: set.map_err(|e| at(path, e))? })
    }
}

impl ModelFile {
    pub fn to_model(&self) -> Result<Model> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::ModelFile(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let features = self
            .features
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let path = format!("features[{i}]");
                let domain = match &f.domain {
                    DomainDoc::Categorical { labels } => Domain::categorical(labels.iter().cloned()),
                    DomainDoc::Ordinal { lo, hi, kind } => {
                        Domain::ordinal(number(&path, lo)?, number(&path, hi)?, *kind)
                    }
                }
                .map_err(|e| at(&path, e))?;
                Ok(Feature { name: f.name.clone(), domain })
            })
            .collect::<Result<Vec<_>>>()?;
        let space = FeatureSpace::new(features).map_err(|e| at("features", e))?;
        let ctx = Ctx { space: &space, classes: &self.classes };
        let classifier = match &self.classifier {
            ClassifierDoc::Monotonic { weights, thresholds } => Classifier::Monotonic(MonotonicClassifier::new(
                weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| number(&format!("classifier.weights[{i}]"), w))
                    .collect::<Result<_>>()?,
                thresholds
                    .iter()
                    .enumerate()
                    .map(|(i, t)| number(&format!("classifier.thresholds[{i}]"), t))
                    .collect::<Result<_>>()?,
            )),
            ClassifierDoc::DecisionList { rules, default } => {
                let rules = rules
                    .iter()
                    .enumerate()
                    .map(|(r, rule)| {
                        let path = format!("classifier.rules[{r}]");
                        Ok(Rule {
                            literals: rule
                                .conditions
                                .iter()
                                .enumerate()
                                .map(|(i, l)| ctx.literal(&format!("{path}.if[{i}]"), l))
                                .collect::<Result<_>>()?,
                            class: ctx.class(&format!("{path}.then"), &rule.class)?,
                        })
                    })
                    .collect::<Result<_>>()?;
                Classifier::DecisionList(DecisionList { rules, default: ctx.class("classifier.default", default)? })
            }
            ClassifierDoc::DecisionTree { root } => {
                Classifier::DecisionTree(DecisionTree::new(ctx.node("classifier.root", root)?))
            }
            ClassifierDoc::TreeEnsemble { trees } => Classifier::TreeEnsemble(TreeEnsemble::new(
                trees
                    .iter()
                    .enumerate()
                    .map(|(i, t)| ctx.node(&format!("classifier.trees[{i}]"), t).map(DecisionTree::new))
                    .collect::<Result<_>>()?,
            )),
        };
        Model::new(space, self.classes.clone(), classifier)
    }

    pub fn from_model(model: &Model) -> Self {
        let space = model.space();
        let class = |c: usize| model.class_name(c).to_string();
        let features = space
            .features()
            .iter()
            .map(|f| FeatureDoc {
                name: f.name.clone(),
                domain: match &f.domain {
                    Domain::Categorical { labels } => DomainDoc::Categorical { labels: labels.clone() },
                    Domain::Ordinal { lo, hi, kind } => {
                        DomainDoc::Ordinal { lo: format_rational(lo), hi: format_rational(hi), kind: *kind }
                    }
                },
            })
            .collect();
        fn node(n: &Node, space: &FeatureSpace, class: &dyn Fn(usize) -> String) -> NodeDoc {
            match n {
                Node::Leaf(c) => NodeDoc::Leaf(class(*c)),
                Node::Threshold { feature, threshold, below, above } => NodeDoc::Split {
                    feature: space.name(*feature).to_string(),
                    threshold: format_rational(threshold),
                    lt: Box::new(node(below, space, class)),
                    ge: Box::new(node(above, space, class)),
                },
                Node::Label { feature, label, other, equal } => NodeDoc::SplitEq {
                    feature: space.name(*feature).to_string(),
                    label: space.domain(*feature).labels().expect("categorical")[*label].clone(),
                    ne: Box::new(node(other, space, class)),
                    eq: Box::new(node(equal, space, class)),
                },
            }
        }
        let classifier = match model.classifier() {
            Classifier::Monotonic(m) => ClassifierDoc::Monotonic {
                weights: m.weights.iter().map(format_rational).collect(),
                thresholds: m.thresholds.iter().map(format_rational).collect(),
            },
            Classifier::DecisionList(dl) => ClassifierDoc::DecisionList {
                rules: dl
                    .rules
                    .iter()
                    .map(|r| RuleDoc {
                        conditions: r
                            .literals
                            .iter()
                            .map(|l| LiteralDoc {
                                feature: space.name(l.feature).to_string(),
                                values: match &l.set {
                                    ValueSet::Labels(s) => {
                                        let labels = space.domain(l.feature).labels().expect("categorical");
                                        s.iter().map(|&i| labels[i].clone()).collect()
                                    }
                                    ValueSet::Intervals(ivs) => ivs.iter().map(ToString::to_string).collect(),
                                },
                            })
                            .collect(),
                        class: class(r.class),
                    })
                    .collect(),
                default: class(dl.default),
            },
            Classifier::DecisionTree(t) => ClassifierDoc::DecisionTree { root: node(&t.root, space, &class) },
            Classifier::TreeEnsemble(e) => {
                ClassifierDoc::TreeEnsemble { trees: e.trees.iter().map(|t| node(&t.root, space, &class)).collect() }
            }
        };
        ModelFile { schema_version: SCHEMA_VERSION, features, classes: model.classes().to_vec(), classifier }
    }
}

/// Parses a model document; syntax errors carry line and column.
pub fn parse_model(text: &str) -> Result<Model> {
    let doc: ModelFile = serde_json::from_str(text)?;
    doc.to_model()
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    parse_model(&fs::read_to_string(path)?)
}

pub fn model_to_json(model: &Model) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(model)).expect("model documents serialize")
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, model_to_json(model) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const DL: &str = r#"{
      "schema_version": 1,
      "features": [
        {"name": "A", "domain": {"type": "categorical", "labels": ["Junior", "Adult", "Senior"]}},
        {"name": "Q", "domain": {"type": "ordinal", "lo": "0", "hi": "10"}}
      ],
      "classes": ["0", "1"],
      "classifier": {"type": "decision_list",
        "rules": [{"if": [{"feature": "A", "in": ["Adult"]}, {"feature": "Q", "in": ["[0,2.5)", "[7,10]"]}], "then": "0"}],
        "default": "1"}
    }"#;

    #[test]
    fn decision_list_round_trip() {
        let m = parse_model(DL).unwrap();
        let again = parse_model(&model_to_json(&m)).unwrap();
        assert_eq!(m.classifier(), again.classifier());
        assert_eq!(m.space(), again.space());
    }

    #[test]
    fn stump_ensemble_round_trip() {
        let text = r#"{"schema_version": 1,
          "features": [{"name": "x", "domain": {"type": "ordinal", "lo": "0", "hi": "10"}}],
          "classes": ["a", "b"],
          "classifier": {"type": "tree_ensemble", "trees": [
            {"split": {"feature": "x", "threshold": "2", "lt": {"leaf": "a"}, "ge": {"leaf": "b"}}},
            {"split": {"feature": "x", "threshold": "5.5", "lt": {"leaf": "a"}, "ge": {"leaf": "b"}}},
            {"split": {"feature": "x", "threshold": "7/3", "lt": {"leaf": "a"}, "ge": {"leaf": "b"}}}]}}"#;
        let m = parse_model(text).unwrap();
        let again = parse_model(&model_to_json(&m)).unwrap();
        assert_eq!(m.classifier(), again.classifier());
    }

    #[test]
    fn threshold_outside_domain_is_rejected() {
        let text = r#"{"schema_version": 1,
          "features": [{"name": "x", "domain": {"type": "ordinal", "lo": "0", "hi": "10"}}],
          "classes": ["a", "b"],
          "classifier": {"type": "decision_tree",
            "root": {"split": {"feature": "x", "threshold": "12", "lt": {"leaf": "a"}, "ge": {"leaf": "b"}}}}}"#;
        assert!(matches!(parse_model(text), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let err = parse_model("{\n  \"schema_version\": 1,\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn unknown_feature_names_the_path() {
        let text = DL.replace(r#""feature": "Q""#, r#""feature": "Z""#);
        let err = parse_model(&text).unwrap_err().to_string();
        assert!(err.contains("classifier.rules[0].if[1]"), "{err}");
    }
}
