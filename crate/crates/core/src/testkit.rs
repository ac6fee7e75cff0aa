//! Random desk-scale models and a brute-force reference oracle.
//!
//! The reference oracle shares no code with the cell search or corner
//! evaluation: it harvests every constant the model compares against,
//! evaluates [`Model::predict`] on those values and the points between them,
//! and scans the full product.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::{Classifier, DecisionList, DecisionTree, Literal, Model, MonotonicClassifier, Node, Rule, TreeEnsemble};
use crate::domain::{ClassId, Domain, Feature, FeatureSpace, OrdinalKind, Point, Value};
use crate::explain::FeatureSet;
use crate::oracle::Assignment;
use crate::rational::Rational;
use crate::valueset::{Interval, ValueSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// `m` features; each categorical with probability `p_cat` (2 to 4 labels),
/// otherwise continuous on `[0,10]` or, one time in four, integer on `[0,6]`.
pub fn random_space(rng: &mut impl Rng, m: usize, p_cat: f64) -> FeatureSpace {
    let features = (0..m)
        .map(|j| {
            let domain = if rng.gen_bool(p_cat) {
                let n = rng.gen_range(2..=4);
                Domain::categorical((0..n).map(|i| format!("v{i}"))).expect("distinct")
            } else if rng.gen_bool(0.25) {
                Domain::ordinal(r(0, 1), r(6, 1), OrdinalKind::Integer).expect("bounds")
            } else {
                Domain::continuous(0, 10).expect("bounds")
            };
            Feature { name: format!("x{}", j + 1), domain }
        })
        .collect();
    FeatureSpace::new(features).expect("valid space")
}

fn classes(k: usize) -> Vec<String> {
    (0..k).map(|c| format!("c{c}")).collect()
}

/// A threshold strictly inside an ordinal domain, on the integer grid.
fn threshold(rng: &mut impl Rng, lo: &Rational, hi: &Rational) -> Rational {
    let a = lo.to_integer() + 1;
    let b = hi.to_integer() - 1;
    if rng.gen_bool(0.2) {
        // half-integer thresholds exercise integer snapping
        Rational::from_integer(rng.gen_range(a - 1..=b)) + r(1, 2)
    } else {
        Rational::from_integer(rng.gen_range(a..=b))
    }
}

fn random_set(rng: &mut impl Rng, domain: &Domain) -> ValueSet {
    match domain {
        Domain::Categorical { labels } => {
            let n = labels.len();
            let size = rng.gen_range(1..n);
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(rng);
            ValueSet::labels(domain, all[..size].iter().copied()).expect("subset")
        }
        Domain::Ordinal { lo, hi, .. } => loop {
            let a = lo.to_integer();
            let b = hi.to_integer();
            let x = Rational::from_integer(rng.gen_range(a..=b));
            let y = Rational::from_integer(rng.gen_range(a..=b));
            let (x, y) = if x <= y { (x, y) } else { (y, x) };
            let iv = Interval::new(x, rng.gen_bool(0.7) || x == *lo, y, rng.gen_bool(0.7) || y == *hi);
            let full = iv.as_ref().is_some_and(|iv| iv.lo == *lo && iv.hi == *hi);
            if let Some(Ok(set)) = iv.filter(|_| !full).map(|iv| ValueSet::intervals(domain, vec![iv])) {
                break set;
            }
        },
    }
}

fn non_constant(build: impl Fn() -> Option<Model>) -> Model {
    loop {
        if let Some(m) = build().filter(|m| !m.is_constant()) {
            return m;
        }
    }
}

/// Up to `max_rules` rules of one or two literals over `k` classes.
pub fn random_decision_list(rng: &mut ChaCha8Rng, space: &FeatureSpace, max_rules: usize, k: usize) -> Model {
    let cell = std::cell::RefCell::new(rng);
    non_constant(|| {
        let rng = &mut **cell.borrow_mut();
        let n = rng.gen_range(1..=max_rules);
        let rules = (0..n)
            .map(|_| {
                let mut feats: Vec<usize> = (0..space.len()).collect();
                feats.shuffle(rng);
                let width = rng.gen_range(1..=2.min(space.len()));
                let mut literals: Vec<Literal> = feats[..width]
                    .iter()
                    .map(|&j| Literal { feature: j, set: random_set(rng, space.domain(j)) })
                    .collect();
                literals.sort_by_key(|l| l.feature);
                Rule { literals, class: rng.gen_range(0..k) }
            })
            .collect();
        let dl = DecisionList { rules, default: rng.gen_range(0..k) };
        Model::new(space.clone(), classes(k), Classifier::DecisionList(dl)).ok()
    })
}

fn random_node(rng: &mut impl Rng, space: &FeatureSpace, depth: usize, k: usize) -> Node {
    if depth == 0 || rng.gen_bool(0.15) {
        return Node::leaf(rng.gen_range(0..k));
    }
    let j = rng.gen_range(0..space.len());
    let (a, b) = (random_node(rng, space, depth - 1, k), random_node(rng, space, depth - 1, k));
    match space.domain(j) {
        Domain::Categorical { labels } => Node::label(j, rng.gen_range(0..labels.len()), a, b),
        Domain::Ordinal { lo, hi, .. } => {
            let t = threshold(rng, lo, hi);
            Node::threshold(j, t, a, b)
        }
    }
}

/// Up to `max_trees` trees of depth at most `max_depth`.
pub fn random_forest(rng: &mut ChaCha8Rng, space: &FeatureSpace, max_trees: usize, max_depth: usize, k: usize) -> Model {
    let cell = std::cell::RefCell::new(rng);
    non_constant(|| {
        let rng = &mut **cell.borrow_mut();
        let n = rng.gen_range(1..=max_trees);
        let trees = (0..n).map(|_| DecisionTree::new(random_node(rng, space, max_depth, k))).collect();
        Model::new(space.clone(), classes(k), Classifier::TreeEnsemble(TreeEnsemble::new(trees))).ok()
    })
}

/// A single decision tree of depth at most `max_depth`.
pub fn random_tree(rng: &mut ChaCha8Rng, space: &FeatureSpace, max_depth: usize, k: usize) -> Model {
    let cell = std::cell::RefCell::new(rng);
    non_constant(|| {
        let rng = &mut **cell.borrow_mut();
        let root = random_node(rng, space, max_depth, k);
        Model::new(space.clone(), classes(k), Classifier::DecisionTree(DecisionTree::new(root))).ok()
    })
}

/// All-ordinal monotone model over `m` features on `[0,10]` with `k` classes.
pub fn random_monotone(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Model {
    let weights: Vec<Rational> = loop {
        let w: Vec<Rational> = (0..m).map(|_| [r(0, 1), r(1, 2), r(1, 1), r(2, 1), r(3, 1)][rng.gen_range(0..5)]).collect();
        if w.iter().any(|x| !x.is_zero()) {
            break w;
        }
    };
    let top: Rational = weights.iter().map(|w| w * r(10, 1)).sum();
    let steps = (top * r(4, 1)).to_integer();
    let mut ts: Vec<i64> = Vec::new();
    while ts.len() < k - 1 {
        let t = rng.gen_range(1..=steps);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts.sort_unstable();
    let thresholds = ts.into_iter().map(|t| r(t, 4)).collect();
    let space = FeatureSpace::from_domains(vec![Domain::continuous(0, 10).expect("bounds"); m]).expect("space");
    Model::new(space, classes(k), Classifier::Monotonic(MonotonicClassifier::new(weights, thresholds))).expect("valid")
}

/// A random point on the quarter grid (integers for integer domains).
pub fn random_point(rng: &mut impl Rng, space: &FeatureSpace) -> Point {
    let values = (0..space.len())
        .map(|j| match space.domain(j) {
            Domain::Categorical { labels } => Value::Label(rng.gen_range(0..labels.len())),
            Domain::Ordinal { lo, hi, kind } => {
                let scale = if *kind == OrdinalKind::Integer { 1 } else { 4 };
                let a = (lo * r(scale, 1)).to_integer();
                let b = (hi * r(scale, 1)).to_integer();
                Value::Num(r(rng.gen_range(a..=b), scale))
            }
        })
        .collect();
    Point::new(space, values).expect("inside")
}

/// Every constant the model compares feature `j` against.
fn breakpoints(model: &Model, j: usize) -> Vec<Rational> {
    let mut out = Vec::new();
    fn walk(n: &Node, j: usize, out: &mut Vec<Rational>) {
        match n {
            Node::Leaf(_) => {}
            Node::Threshold { feature, threshold, below, above } => {
                if *feature == j {
                    out.push(*threshold);
                }
                walk(below, j, out);
                walk(above, j, out);
            }
            Node::Label { other, equal, .. } => {
                walk(other, j, out);
                walk(equal, j, out);
            }
        }
    }
    match model.classifier() {
        Classifier::DecisionTree(t) => walk(&t.root, j, &mut out),
        Classifier::TreeEnsemble(e) => e.trees.iter().for_each(|t| walk(&t.root, j, &mut out)),
        Classifier::DecisionList(dl) => {
            for lit in dl.rules.iter().flat_map(|r| &r.literals).filter(|l| l.feature == j) {
                for iv in lit.set.as_intervals().unwrap_or(&[]) {
                    out.push(iv.lo);
                    out.push(iv.hi);
                }
            }
        }
        Classifier::Monotonic(_) => {}
    }
    out
}

/// Values of feature `j` inside `set` that cover every behaviour of the model.
pub fn candidate_values(model: &Model, j: usize, set: &ValueSet) -> Vec<Value> {
    let domain = model.space().domain(j);
    let (lo, hi, kind) = match domain {
        Domain::Categorical { .. } => {
            return set.as_labels().expect("labels").iter().map(|&l| Value::Label(l)).collect();
        }
        Domain::Ordinal { lo, hi, kind } => (*lo, *hi, *kind),
    };
    let pieces = set.as_intervals().expect("intervals");
    let mut points: Vec<Rational> = Vec::new();
    if kind == OrdinalKind::Integer {
        let mut x = lo;
        while x <= hi {
            points.push(x);
            x += Rational::from_integer(1);
        }
    } else if model.classifier().is_monotonic() {
        let eps = r(1, 1_000_000);
        for iv in pieces {
            points.push(if iv.lo_closed { iv.lo } else { iv.lo + eps });
            points.push(if iv.hi_closed { iv.hi } else { iv.hi - eps });
            points.push((iv.lo + iv.hi) / r(2, 1));
        }
    } else {
        let mut marks = breakpoints(model, j);
        marks.extend([lo, hi]);
        for iv in pieces {
            marks.push(iv.lo);
            marks.push(iv.hi);
        }
        marks.sort();
        marks.dedup();
        points.extend(marks.iter().copied());
        points.extend(marks.windows(2).map(|w| (w[0] + w[1]) / r(2, 1)));
    }
    let mut vals: Vec<Rational> =
        points.into_iter().filter(|x| pieces.iter().any(|iv| iv.contains(x))).collect();
    vals.sort();
    vals.dedup();
    vals.into_iter().map(Value::Num).collect()
}

/// Reference decision of "every point of the box is classified `class`".
pub fn brute_sufficient(model: &Model, class: ClassId, a: &Assignment) -> bool {
    let space = model.space();
    let choices: Vec<Vec<Value>> = (0..space.len())
        .map(|j| {
            let full = ValueSet::full(space.domain(j));
            candidate_values(model, j, a.get(j).unwrap_or(&full))
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return true;
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        let p = Point::new(space, idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect()).expect("inside");
        if model.predict(&p).expect("valid") != class {
            return false;
        }
        let mut t = idx.len();
        loop {
            if t == 0 {
                return true;
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < choices[t].len() {
                break;
            }
            idx[t] = 0;
        }
    }
}

fn pin(model: &Model, point: &Point, features: impl Iterator<Item = usize>) -> Assignment {
    features
        .map(|j| (j, ValueSet::singleton(model.space().domain(j), point.get(j)).expect("inside")))
        .collect()
}

/// Reference WAXp: fixing `x` to `point` forces `class`.
pub fn brute_is_waxp(model: &Model, point: &Point, class: ClassId, x: &FeatureSet) -> bool {
    brute_sufficient(model, class, &pin(model, point, x.iter()))
}

/// Reference counterexample: features outside `roam` fixed to `point`.
pub fn brute_counterexample(model: &Model, point: &Point, class: ClassId, roam: &Assignment) -> bool {
    let mut a = pin(model, point, (0..model.space().len()).filter(|j| !roam.contains(*j)));
    for (j, s) in roam.iter() {
        a.insert(j, s.clone());
    }
    !brute_sufficient(model, class, &a)
}

/// Reference WCXp: releasing `y` admits another class.
pub fn brute_is_wcxp(model: &Model, point: &Point, class: ClassId, y: &FeatureSet) -> bool {
    let roam: Assignment = y.iter().map(|j| (j, ValueSet::full(model.space().domain(j)))).collect();
    brute_counterexample(model, point, class, &roam)
}

/// A random nonempty subset of each feature's domain for a random subset of features.
pub fn random_assignment(rng: &mut impl Rng, model: &Model) -> Assignment {
    let space = model.space();
    let mut a = Assignment::new();
    for j in 0..space.len() {
        if rng.gen_bool(0.6) {
            let domain = space.domain(j);
            let set = if rng.gen_bool(0.3) {
                let p = random_point(rng, space);
                ValueSet::singleton(domain, p.get(j)).expect("inside")
            } else if rng.gen_bool(0.3) && !domain.is_categorical() {
                let s1 = random_set(rng, domain);
                let s2 = random_set(rng, domain);
                s1.union(&s2, domain).expect("same kind")
            } else {
                random_set(rng, domain)
            };
            a.insert(j, set);
        }
    }
    a
}
