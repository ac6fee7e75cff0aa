//! A small bagged-tree trainer (Gini splits, random feature subsets).

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::{Classifier, DecisionTree, Model, Node, TreeEnsemble};
use crate::dataset::Dataset;
use crate::domain::{ClassId, Value};
use crate::error::{Error, Result};
use crate::rational::{midpoint, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestParams {
    pub trees: usize,
    pub max_depth: usize,
    pub seed: u64,
    /// Features considered per split; `ceil(sqrt(m))` when `None`.
    pub mtry: Option<usize>,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams { trees: 25, max_depth: 4, seed: 0, mtry: None }
    }
}

enum Test {
    Below(usize, Rational),
    Equals(usize, usize),
}

struct Builder<'a> {
    data: &'a Dataset,
    k: usize,
    mtry: usize,
    max_depth: usize,
}

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

fn majority(counts: &[usize]) -> ClassId {
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best
}

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.k];
        for &i in idx {
            counts[self.data.labels[i]] += 1;
        }
        counts
    }

    fn build(&self, idx: &[usize], depth: usize, rng: &mut ChaCha8Rng) -> Node {
        let counts = self.counts(idx);
        let leaf = Node::leaf(majority(&counts));
        if depth >= self.max_depth || counts.iter().filter(|&&c| c > 0).count() < 2 {
            return leaf;
        }
        let parent = gini(&counts, idx.len());
        let m = self.data.space.len();
        let mut best: Option<(f64, Test)> = None;
        for j in sample(rng, m, self.mtry.min(m)).into_vec() {
            for (score, test) in self.candidates(idx, j) {
                if score < parent - 1e-12 && best.as_ref().is_none_or(|(b, _)| score < *b - 1e-12) {
                    best = Some((score, test));
                }
            }
        }
        let Some((_, test)) = best else {
            return leaf;
        };
        let goes_right = |i: &usize| match &test {
            Test::Below(j, t) => self.data.rows[*i].get(*j).as_num().expect("ordinal") >= t,
            Test::Equals(j, l) => self.data.rows[*i].get(*j) == &Value::Label(*l),
        };
        let (right, left): (Vec<usize>, Vec<usize>) = idx.iter().partition(|i| goes_right(i));
        let l = self.build(&left, depth + 1, rng);
        let r = self.build(&right, depth + 1, rng);
        if l == r {
            return l;
        }
        match test {
            Test::Below(j, t) => Node::threshold(j, t, l, r),
            Test::Equals(j, lab) => Node::label(j, lab, l, r),
        }
    }

    /// Weighted child impurity of every split on feature `j`.
    fn candidates(&self, idx: &[usize], j: usize) -> Vec<(f64, Test)> {
        let n = idx.len();
        let mut out = Vec::new();
        match self.data.space.domain(j).cardinality() {
            Some(labels) => {
                for lab in 0..labels {
                    let (eq, ne): (Vec<usize>, Vec<usize>) =
                        idx.iter().partition(|&&i| self.data.rows[i].get(j) == &Value::Label(lab));
                    if eq.is_empty() || ne.is_empty() {
                        continue;
                    }
                    let s = (eq.len() as f64 * gini(&self.counts(&eq), eq.len())
                        + ne.len() as f64 * gini(&self.counts(&ne), ne.len()))
                        / n as f64;
                    out.push((s, Test::Equals(j, lab)));
                }
            }
            None => {
                let mut sorted: Vec<(Rational, ClassId)> = idx
                    .iter()
                    .map(|&i| (*self.data.rows[i].get(j).as_num().expect("ordinal"), self.data.labels[i]))
                    .collect();
                sorted.sort();
                let total = self.counts(idx);
                let mut left = vec![0usize; self.k];
                for t in 0..n - 1 {
                    left[sorted[t].1] += 1;
                    if sorted[t].0 == sorted[t + 1].0 {
                        continue;
                    }
                    let right: Vec<usize> = total.iter().zip(&left).map(|(a, b)| a - b).collect();
                    let nl = t + 1;
                    let s = (nl as f64 * gini(&left, nl) + (n - nl) as f64 * gini(&right, n - nl)) / n as f64;
                    out.push((s, Test::Below(j, midpoint(&sorted[t].0, &sorted[t + 1].0))));
                }
            }
        }
        out
    }
}

/// Trains a majority-vote forest; the same seed yields the same model.
pub fn train_forest(data: &Dataset, params: &ForestParams) -> Result<Model> {
    if data.len() < 2 {
        return Err(Error::Dataset("need at least two rows to train".into()));
    }
    if data.labels.iter().all(|&l| l == data.labels[0]) {
        return Err(Error::Dataset("all rows carry the same label".into()));
    }
    if params.trees == 0 || params.max_depth == 0 {
        return Err(Error::InvalidConfig("trees and depth must be positive".into()));
    }
    let m = data.space.len();
    let mtry = params.mtry.unwrap_or_else(|| (m as f64).sqrt().ceil() as usize).clamp(1, m);
    let builder = Builder { data, k: data.classes.len(), mtry, max_depth: params.max_depth };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = data.len();
    let trees = (0..params.trees)
        .map(|_| {
            let boot: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            DecisionTree::new(builder.build(&boot, 0, &mut rng))
        })
        .collect();
    Model::new(data.space.clone(), data.classes.clone(), Classifier::TreeEnsemble(TreeEnsemble::new(trees)))
}

/// Fraction of rows the model labels correctly.
pub fn accuracy(model: &Model, data: &Dataset) -> Result<f64> {
    let mut hits = 0;
    for (p, &y) in data.rows.iter().zip(&data.labels) {
        let pred = model.predict(p)?;
        if model.class_name(pred) == data.classes[y] {
            hits += 1;
        }
    }
    Ok(hits as f64 / data.len().max(1) as f64)
}
