use crate::domain::{ClassId, Domain, FeatureSpace, Point, Value};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf(ClassId),
    /// Ordinal test: `x_j >= threshold` goes to `above`, otherwise `below`.
    Threshold {
        feature: usize,
        threshold: Rational,
        below: Box<Node>,
        above: Box<Node>,
    },
    /// Categorical test: `x_j == label` goes to `equal`, otherwise `other`.
    Label {
        feature: usize,
        label: usize,
        other: Box<Node>,
        equal: Box<Node>,
    },
}

impl Node {
    pub fn leaf(class: ClassId) -> Self {
        Node::Leaf(class)
    }

    pub fn threshold(feature: usize, threshold: Rational, below: Node, above: Node) -> Self {
        Node::Threshold { feature, threshold, below: Box::new(below), above: Box::new(above) }
    }

    pub fn label(feature: usize, label: usize, other: Node, equal: Node) -> Self {
        Node::Label { feature, label, other: Box::new(other), equal: Box::new(equal) }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Threshold { below, above, .. } => 1 + below.depth().max(above.depth()),
            Node::Label { other, equal, .. } => 1 + other.depth().max(equal.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Threshold { below, above, .. } => 1 + below.node_count() + above.node_count(),
            Node::Label { other, equal, .. } => 1 + other.node_count() + equal.node_count(),
        }
    }

    /// Calls `f(feature, threshold)` for every ordinal split.
    pub fn for_each_threshold(&self, f: &mut impl FnMut(usize, &Rational)) {
        match self {
            Node::Leaf(_) => {}
            Node::Threshold { feature, threshold, below, above } => {
                f(*feature, threshold);
                below.for_each_threshold(f);
                above.for_each_threshold(f);
            }
            Node::Label { other, equal, .. } => {
                other.for_each_threshold(f);
                equal.for_each_threshold(f);
            }
        }
    }

    fn validate(&self, space: &FeatureSpace, n_classes: usize) -> Result<()> {
        match self {
            Node::Leaf(c) if *c >= n_classes => {
                Err(Error::InvalidModel(format!("leaf class {c} out of range")))
            }
            Node::Leaf(_) => Ok(()),
            Node::Threshold { feature, threshold, below, above } => {
                space.check_index(*feature)?;
                match space.domain(*feature) {
                    Domain::Ordinal { lo, hi, .. } if lo < threshold && threshold < hi => {}
                    Domain::Ordinal { .. } => {
                        return Err(Error::InvalidModel(format!(
                            "split {} on {} lies outside the open domain {}",
                            format_rational(threshold),
                            space.name(*feature),
                            space.domain(*feature)
                        )))
                    }
                    Domain::Categorical { .. } => {
                        return Err(Error::InvalidModel(format!(
                            "threshold split on categorical feature {}",
                            space.name(*feature)
                        )))
                    }
                }
                below.validate(space, n_classes)?;
                above.validate(space, n_classes)
            }
            Node::Label { feature, label, other, equal } => {
                space.check_index(*feature)?;
                match space.domain(*feature).cardinality() {
                    Some(n) if *label < n => {}
                    Some(_) => return Err(Error::InvalidModel(format!("label {label} out of range"))),
                    None => {
                        return Err(Error::InvalidModel(format!(
                            "label split on ordinal feature {}",
                            space.name(*feature)
                        )))
                    }
                }
                other.validate(space, n_classes)?;
                equal.validate(space, n_classes)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTree {
    pub root: Node,
}

impl DecisionTree {
    pub fn new(root: Node) -> Self {
        DecisionTree { root }
    }

    pub(crate) fn predict_point(&self, p: &Point) -> ClassId {
        let mut node = &self.root;
        loop {
            node = match node {
                Node::Leaf(c) => return *c,
                Node::Threshold { feature, threshold, below, above } => match p.get(*feature) {
                    Value::Num(x) if x >= threshold => above,
                    _ => below,
                },
                Node::Label { feature, label, other, equal } => match p.get(*feature) {
                    Value::Label(l) if l == label => equal,
                    _ => other,
                },
            };
        }
    }

    pub(crate) fn validate(&self, space: &FeatureSpace, n_classes: usize) -> Result<()> {
        self.root.validate(space, n_classes)
    }
}

/// Majority vote over trees; ties go to the lowest class index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEnsemble {
    pub trees: Vec<DecisionTree>,
}

impl TreeEnsemble {
    pub fn new(trees: Vec<DecisionTree>) -> Self {
        TreeEnsemble { trees }
    }

    pub(crate) fn predict_point(&self, p: &Point, n_classes: usize) -> ClassId {
        let mut votes = vec![0usize; n_classes];
        for t in &self.trees {
            votes[t.predict_point(p)] += 1;
        }
        majority(&votes)
    }

    pub(crate) fn validate(&self, space: &FeatureSpace, n_classes: usize) -> Result<()> {
        if self.trees.is_empty() {
            return Err(Error::InvalidModel("tree ensemble without trees".into()));
        }
        self.trees.iter().try_for_each(|t| t.validate(space, n_classes))
    }
}

/// Index of the largest count, first index on ties.
pub(crate) fn majority(votes: &[usize]) -> ClassId {
    let mut best = 0;
    for (k, &v) in votes.iter().enumerate() {
        if v > votes[best] {
            best = k;
        }
    }
    best
}
