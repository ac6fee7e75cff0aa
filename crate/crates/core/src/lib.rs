//! Formal abductive and contrastive explanations for monotonic classifiers,
//! decision lists and tree ensembles, and their inflation from single
//! values to maximal value sets.
//!
//! ```
//! use xinflate::{Domain, Feature, FeatureSpace, Model, Classifier, DecisionList, Rule, Literal,
//!                ValueSet, Value, Point, ExplanationProblem, InflationConfig, explain_and_inflate};
//!
//! let space = FeatureSpace::new(vec![
//!     Feature { name: "A".into(), domain: Domain::categorical(["Junior", "Adult", "Senior"]).unwrap() },
//!     Feature { name: "C".into(), domain: Domain::categorical(["Red", "Silver"]).unwrap() },
//! ]).unwrap();
//! let lit = |f: usize, l: usize| Literal { feature: f, set: ValueSet::labels(space.domain(f), [l]).unwrap() };
//! let dl = DecisionList {
//!     rules: vec![Rule { literals: vec![lit(0, 1)], class: 0 }, Rule { literals: vec![lit(1, 1)], class: 0 }],
//!     default: 1,
//! };
//! let model = Model::new(space, vec!["0".into(), "1".into()], Classifier::DecisionList(dl)).unwrap();
//! let v = Point::new(model.space(), vec![Value::Label(0), Value::Label(0)]).unwrap();
//! let problem = ExplanationProblem::new(&model, v).unwrap();
//! let (axp, inflated) = explain_and_inflate(&problem, &InflationConfig::default()).unwrap();
//! assert_eq!(axp.to_string(), "{1,2}");
//! assert_eq!(inflated.render_rule(&model, problem.class()), "IF A∈{Junior,Senior} ∧ C∈{Red} THEN 1");
//! ```

pub mod classifier;
pub mod dataset;
pub mod domain;
pub mod duality;
pub mod error;
pub mod explain;
pub mod inflate;
pub mod model_file;
pub mod oracle;
pub mod problem;
pub mod rational;
pub mod report;
#[cfg(any(test, feature = "testkit"))]
pub mod testkit;
pub mod train;
pub mod valueset;

pub use classifier::{
    Classifier, DecisionList, DecisionTree, Literal, Model, MonotonicClassifier, Node, Rule, TreeEnsemble,
};
pub use dataset::{parse_csv, read_csv, Dataset};
pub use domain::{ClassId, Domain, Feature, FeatureSpace, Instance, OrdinalKind, Point, Value};
pub use duality::{
    check_hits, enumerate_inflated, families_are_dual, iaxp_from_icxps, icxp_from_iaxps, ConstructionReport,
    ExplanationSets, Selector,
};
pub use error::{Error, Result};
pub use explain::{default_order, enumerate_all, find_axp, find_cxp, minimal_hitting_sets, FeatureSet};
pub use inflate::{
    expand_inf, expand_sup, explain_and_inflate, inflate_axp, inflate_categorical, inflate_from_full,
    inflate_ordinal, inflate_ordinal_tree, shrink_cxp, ExplanationKind, InflatedExplanation, InflationConfig,
    Probe, Strategy,
};
pub use model_file::{load_model, model_to_json, parse_model, save_model, ModelFile};
pub use oracle::{discretize, monotone_box_check, Assignment, Discretization, FeatureCells, OracleStats};
pub use problem::ExplanationProblem;
pub use rational::{format_rational, parse_rational, Rational};
pub use report::{run_bench, sample_points, Aggregates, BenchReport, InstanceRecord};
pub use train::{accuracy, train_forest, ForestParams};
pub use valueset::{Interval, ValueSet};
