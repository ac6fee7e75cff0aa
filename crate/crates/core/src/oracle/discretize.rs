//! Finite cell partitions of ordinal features induced by a model's split values.
//!
//! A tree split `x_j >= d` cuts the domain just before `d`; decision-list
//! interval literals may also cut just after a closed upper endpoint. Between
//! consecutive cuts the model cannot distinguish values, so every cell can be
//! treated as a single categorical value.

use std::collections::BTreeSet;

use crate::classifier::Classifier;
use crate::domain::{Domain, FeatureSpace, OrdinalKind, Value};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::valueset::{normalize_intervals, Interval, ValueSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    /// Separates `x < at` from `x >= at`.
    Before,
    /// Separates `x <= at` from `x > at`.
    After,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cut {
    at: Rational,
    side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeatureCells {
    /// A categorical feature; each label is its own cell.
    Labels(usize),
    /// Ordered, disjoint cells covering the ordinal domain.
    Intervals(Vec<Interval>),
}

impl FeatureCells {
    pub fn len(&self) -> usize {
        match self {
            FeatureCells::Labels(n) => *n,
            FeatureCells::Intervals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discretization {
    features: Vec<FeatureCells>,
    splits: Vec<Vec<Rational>>,
}

impl Discretization {
    /// Harvests split values from a tree model or decision list.
    pub fn new(classifier: &Classifier, space: &FeatureSpace) -> Result<Self> {
        let mut cuts: Vec<BTreeSet<Cut>> = vec![BTreeSet::new(); space.len()];
        let mut add_split = |j: usize, d: &Rational| -> Result<()> {
            space.check_index(j)?;
            let (lo, hi) = space.domain(j).bounds().ok_or_else(|| {
                Error::InvalidModel(format!("threshold on categorical feature {}", space.name(j)))
            })?;
            if !(lo < d && d < hi) {
                return Err(Error::InvalidModel(format!(
                    "split {} on {} lies outside the open domain {}",
                    format_rational(d),
                    space.name(j),
                    space.domain(j)
                )));
            }
            cuts[j].insert(Cut { at: *d, side: Side::Before });
            Ok(())
        };
        match classifier {
            Classifier::DecisionTree(t) => {
                let mut res = Ok(());
                t.root.for_each_threshold(&mut |j, d| {
                    if res.is_ok() {
                        res = add_split(j, d);
                    }
                });
                res?;
            }
            Classifier::TreeEnsemble(e) => {
                let mut res = Ok(());
                for t in &e.trees {
                    t.root.for_each_threshold(&mut |j, d| {
                        if res.is_ok() {
                            res = add_split(j, d);
                        }
                    });
                }
                res?;
            }
            Classifier::DecisionList(dl) => {
                for rule in &dl.rules {
                    for lit in &rule.literals {
                        if let ValueSet::Intervals(ivs) = &lit.set {
                            for iv in ivs {
                                let lo_side = if iv.lo_closed { Side::Before } else { Side::After };
                                let hi_side = if iv.hi_closed { Side::After } else { Side::Before };
                                cuts[lit.feature].insert(Cut { at: iv.lo, side: lo_side });
                                cuts[lit.feature].insert(Cut { at: iv.hi, side: hi_side });
                            }
                        }
                    }
                }
            }
            Classifier::Monotonic(_) => {
                return Err(Error::InvalidModel(
                    "monotonic classifiers are not discretized".into(),
                ))
            }
        }
        Ok(Self::from_cuts(space, cuts))
    }

    /// Tree-style discretization from explicit split values `V_j`.
    pub fn from_splits(space: &FeatureSpace, splits: &[Vec<Rational>]) -> Result<Self> {
        if splits.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), got: splits.len() });
        }
        let mut cuts = vec![BTreeSet::new(); space.len()];
        for (j, vs) in splits.iter().enumerate() {
            let Some((lo, hi)) = space.domain(j).bounds() else {
                if vs.is_empty() {
                    continue;
                }
                return Err(Error::InvalidModel("split values on a categorical feature".into()));
            };
            for d in vs {
                if !(lo < d && d < hi) {
                    return Err(Error::InvalidModel(format!(
                        "split {} outside the open domain {}",
                        format_rational(d),
                        space.domain(j)
                    )));
                }
                cuts[j].insert(Cut { at: *d, side: Side::Before });
            }
        }
        Ok(Self::from_cuts(space, cuts))
    }

    fn from_cuts(space: &FeatureSpace, cuts: Vec<BTreeSet<Cut>>) -> Self {
        let mut features = Vec::with_capacity(space.len());
        let mut splits = Vec::with_capacity(space.len());
        for (j, cuts) in cuts.into_iter().enumerate() {
            match space.domain(j) {
                Domain::Categorical { labels } => {
                    features.push(FeatureCells::Labels(labels.len()));
                    splits.push(Vec::new());
                }
                Domain::Ordinal { lo, hi, kind } => {
                    let cuts: Vec<Cut> = cuts
                        .into_iter()
                        .filter(|c| {
                            // cuts on the domain boundary separate nothing
                            !(c.at == *lo && c.side == Side::Before)
                                && !(c.at == *hi && c.side == Side::After)
                                && *lo <= c.at
                                && c.at <= *hi
                        })
                        .collect();
                    let mut cells = Vec::with_capacity(cuts.len() + 1);
                    let (mut cur, mut cur_closed) = (*lo, true);
                    for cut in &cuts {
                        let hi_closed = cut.side == Side::After;
                        if let Some(cell) = Interval::new(cur, cur_closed, cut.at, hi_closed) {
                            cells.push(cell);
                        }
                        cur = cut.at;
                        cur_closed = !hi_closed;
                    }
                    if let Some(cell) = Interval::new(cur, cur_closed, *hi, true) {
                        cells.push(cell);
                    }
                    if *kind == OrdinalKind::Integer {
                        cells = cells
                            .into_iter()
                            .filter_map(|c| {
                                normalize_intervals(vec![c], OrdinalKind::Integer).pop()
                            })
                            .collect();
                    }
                    let mut vs: Vec<Rational> = cuts.iter().map(|c| c.at).collect();
                    vs.dedup();
                    splits.push(vs);
                    features.push(FeatureCells::Intervals(cells));
                }
            }
        }
        Discretization { features, splits }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn feature(&self, j: usize) -> &FeatureCells {
        &self.features[j]
    }

    /// Sorted distinct split values `V_j` of an ordinal feature.
    pub fn split_values(&self, j: usize) -> &[Rational] {
        &self.splits[j]
    }

    /// The interval cells of an ordinal feature (empty for categorical ones).
    pub fn cells(&self, j: usize) -> &[Interval] {
        match &self.features[j] {
            FeatureCells::Intervals(v) => v,
            FeatureCells::Labels(_) => &[],
        }
    }

    pub fn cell_count(&self, j: usize) -> usize {
        self.features[j].len()
    }

    pub fn total_cells(&self) -> usize {
        self.features.iter().map(FeatureCells::len).sum()
    }

    pub fn cell_of(&self, j: usize, value: &Value) -> Option<usize> {
        match (&self.features[j], value) {
            (FeatureCells::Labels(n), Value::Label(l)) => (*l < *n).then_some(*l),
            (FeatureCells::Intervals(cells), Value::Num(x)) => {
                let idx = cells.partition_point(|c| {
                    c.hi < *x || (c.hi == *x && !c.hi_closed)
                });
                cells.get(idx).filter(|c| c.contains(x)).map(|_| idx)
            }
            _ => None,
        }
    }

    /// Indices of the cells of feature `j` that meet `set`.
    pub fn cells_meeting(&self, j: usize, set: &ValueSet) -> Vec<usize> {
        match (&self.features[j], set) {
            (FeatureCells::Labels(n), ValueSet::Labels(s)) => {
                s.iter().copied().filter(|l| l < n).collect()
            }
            (FeatureCells::Intervals(cells), ValueSet::Intervals(ivs)) => cells
                .iter()
                .enumerate()
                .filter(|(_, c)| ivs.iter().any(|iv| c.intersect(iv).is_some()))
                .map(|(i, _)| i)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// The union of the given cells as a value set.
    pub fn cells_to_set(&self, j: usize, domain: &Domain, cells: &[usize]) -> Result<ValueSet> {
        match &self.features[j] {
            FeatureCells::Labels(_) => ValueSet::labels(domain, cells.iter().copied()),
            FeatureCells::Intervals(all) => {
                ValueSet::intervals(domain, cells.iter().map(|&i| all[i].clone()).collect())
            }
        }
    }

    /// A canonical evaluation point inside cell `i` of feature `j`.
    pub fn representative(&self, j: usize, i: usize) -> Value {
        match &self.features[j] {
            FeatureCells::Labels(_) => Value::Label(i),
            FeatureCells::Intervals(cells) => Value::Num(cells[i].representative_point()),
        }
    }
}

impl Interval {
    /// Midpoint for bounded cells; for integer-snapped cells the midpoint may
    /// fall between integers, so the lower endpoint is used instead.
    pub(crate) fn representative_point(&self) -> Rational {
        if self.lo_closed && self.hi_closed && self.lo.is_integer() && self.hi.is_integer() {
            let mid = self.representative();
            if mid.is_integer() {
                mid
            } else {
                self.lo
            }
        } else {
            self.representative()
        }
    }
}

/// Alias of [`Discretization::new`].
pub fn discretize(classifier: &Classifier, space: &FeatureSpace) -> Result<Discretization> {
    Discretization::new(classifier, space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{DecisionTree, Node, TreeEnsemble};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn space1() -> FeatureSpace {
        FeatureSpace::from_domains(vec![Domain::continuous(0, 10).unwrap()]).unwrap()
    }

    #[test]
    fn two_splits_three_cells() {
        let d = Discretization::from_splits(&space1(), &[vec![r(5, 2), r(7, 1)]]).unwrap();
        let rendered: Vec<String> = d.cells(0).iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["[0,2.5)", "[2.5,7)", "[7,10]"]);
        assert_eq!(d.cell_count(0), d.split_values(0).len() + 1);
    }

    #[test]
    fn no_splits_single_cell() {
        let d = Discretization::from_splits(&space1(), &[vec![]]).unwrap();
        assert_eq!(d.cells(0), &[Interval::closed(r(0, 1), r(10, 1))]);
    }

    #[test]
    fn shared_splits_deduplicated() {
        let stump = |c_lo, c_hi| {
            DecisionTree::new(Node::threshold(0, r(5, 1), Node::leaf(c_lo), Node::leaf(c_hi)))
        };
        let e = Classifier::TreeEnsemble(TreeEnsemble::new(vec![stump(0, 1), stump(1, 0)]));
        let d = Discretization::new(&e, &space1()).unwrap();
        assert_eq!(d.split_values(0), &[r(5, 1)]);
        assert_eq!(d.cell_count(0), 2);
    }

    #[test]
    fn split_outside_domain_rejected() {
        assert!(Discretization::from_splits(&space1(), &[vec![r(12, 1)]]).is_err());
        assert!(Discretization::from_splits(&space1(), &[vec![r(0, 1)]]).is_err());
    }

    #[test]
    fn cell_lookup() {
        let d = Discretization::from_splits(&space1(), &[vec![r(5, 2), r(7, 1)]]).unwrap();
        assert_eq!(d.cell_of(0, &Value::Num(r(0, 1))), Some(0));
        assert_eq!(d.cell_of(0, &Value::Num(r(5, 2))), Some(1));
        assert_eq!(d.cell_of(0, &Value::Num(r(69, 10))), Some(1));
        assert_eq!(d.cell_of(0, &Value::Num(r(10, 1))), Some(2));
    }

    #[test]
    fn closed_upper_endpoint_makes_point_cell() {
        use crate::classifier::{DecisionList, Literal, Rule};
        let space = space1();
        let dom = space.domain(0);
        let dl = Classifier::DecisionList(DecisionList {
            rules: vec![
                Rule {
                    literals: vec![Literal {
                        feature: 0,
                        set: ValueSet::intervals(dom, vec![Interval::closed(r(2, 1), r(4, 1))]).unwrap(),
                    }],
                    class: 0,
                },
                Rule {
                    literals: vec![Literal {
                        feature: 0,
                        set: ValueSet::intervals(dom, vec![Interval::new(r(4, 1), false, r(6, 1), false).unwrap()]).unwrap(),
                    }],
                    class: 1,
                },
            ],
            default: 1,
        });
        let d = Discretization::new(&dl, &space).unwrap();
        let rendered: Vec<String> = d.cells(0).iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["[0,2)", "[2,4]", "(4,6)", "[6,10]"]);
    }

    #[test]
    fn integer_cells_drop_empty() {
        let space = FeatureSpace::from_domains(vec![Domain::ordinal(
            r(0, 1),
            r(5, 1),
            OrdinalKind::Integer,
        )
        .unwrap()])
        .unwrap();
        let d = Discretization::from_splits(&space, &[vec![r(5, 2), r(11, 4)]]).unwrap();
        let rendered: Vec<String> = d.cells(0).iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["[0,2]", "[3,5]"]);
        assert_eq!(d.representative(0, 0), Value::Num(r(1, 1)));
    }
}
