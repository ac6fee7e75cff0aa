//! Classifiers compiled onto discretization cell indices, and an exact
//! search for a differently-classified point inside a box of cells.
//!
//! The search enumerates the cell product lazily: it over-approximates the
//! classes reachable inside the box, stops as soon as the answer is decided,
//! and otherwise splits the box along an undecided test of the model.

use crate::classifier::{Classifier, Node};
use crate::domain::{ClassId, FeatureSpace};
use crate::oracle::discretize::Discretization;

/// Bitmask over class ids (at most 64 classes).
type ClassMask = u64;

fn bit(c: ClassId) -> ClassMask {
    1u64 << c
}

/// Allowed cell indices per feature, each list sorted ascending and nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CellBox {
    pub(crate) cells: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
enum CNode {
    Leaf(ClassId),
    /// Goes to `above` iff the cell index is `>= first_above`.
    AtLeast { feature: usize, first_above: usize, below: usize, above: usize },
    Equals { feature: usize, label: usize, other: usize, equal: usize },
}

#[derive(Clone, Debug)]
struct CTree {
    nodes: Vec<CNode>,
}

#[derive(Clone, Debug)]
struct CLiteral {
    feature: usize,
    /// `allowed[i]` iff cell `i` satisfies the literal.
    allowed: Vec<bool>,
}

#[derive(Clone, Debug)]
struct CRule {
    literals: Vec<CLiteral>,
    class: ClassId,
}

#[derive(Clone, Debug)]
enum Compiled {
    Tree(CTree),
    Forest(Vec<CTree>),
    List { rules: Vec<CRule>, default: ClassId },
}

/// A split proposal that makes at least one undecided test decided.
#[derive(Clone, Copy, Debug)]
enum Hint<'a> {
    AtLeast { feature: usize, first_above: usize },
    Equals { feature: usize, label: usize },
    InSet { feature: usize, allowed: &'a [bool] },
}

#[derive(Debug)]
pub(crate) struct CellModel {
    disc: Discretization,
    compiled: Compiled,
    n_classes: usize,
}

impl CellModel {
    pub(crate) fn compile(
        classifier: &Classifier,
        space: &FeatureSpace,
        disc: Discretization,
        n_classes: usize,
    ) -> Self {
        let compiled = match classifier {
            Classifier::DecisionTree(t) => Compiled::Tree(compile_tree(&t.root, &disc)),
            Classifier::TreeEnsemble(e) => {
                Compiled::Forest(e.trees.iter().map(|t| compile_tree(&t.root, &disc)).collect())
            }
            Classifier::DecisionList(dl) => Compiled::List {
                rules: dl
                    .rules
                    .iter()
                    .map(|rule| CRule {
                        class: rule.class,
                        literals: rule
                            .literals
                            .iter()
                            .map(|lit| {
                                let mut allowed = vec![false; disc.cell_count(lit.feature)];
                                for i in disc.cells_meeting(lit.feature, &lit.set) {
                                    allowed[i] = true;
                                }
                                CLiteral { feature: lit.feature, allowed }
                            })
                            .collect(),
                    })
                    .collect(),
                default: dl.default,
            },
            Classifier::Monotonic(_) => unreachable!("monotonic models are not compiled to cells"),
        };
        debug_assert_eq!(disc.len(), space.len());
        CellModel { disc, compiled, n_classes }
    }

    pub(crate) fn discretization(&self) -> &Discretization {
        &self.disc
    }

    pub(crate) fn full_box(&self) -> CellBox {
        CellBox {
            cells: (0..self.disc.len()).map(|j| (0..self.disc.cell_count(j)).collect()).collect(),
        }
    }

    /// Class of a single cell product.
    pub(crate) fn classify_cells(&self, cells: &[usize]) -> ClassId {
        let bx = CellBox { cells: cells.iter().map(|&c| vec![c]).collect() };
        let (mask, _) = self.reachable(&bx);
        debug_assert_eq!(mask.count_ones(), 1);
        mask.trailing_zeros() as ClassId
    }

    /// Whether some point in `bx` is classified differently from `class`.
    pub(crate) fn exists_other(&self, bx: &CellBox, class: ClassId) -> bool {
        let (mask, hint) = self.reachable(bx);
        if mask & !bit(class) == 0 {
            return false;
        }
        if mask & bit(class) == 0 {
            return true;
        }
        let hint = hint.expect("an undecided box always has a split hint");
        let (left, right) = split(bx, hint);
        self.exists_other(&left, class) || self.exists_other(&right, class)
    }

    /// Over-approximation of the classes reachable in `bx` (exact when the box
    /// is a single cell product), with a split hint when more than one class may occur.
    fn reachable(&self, bx: &CellBox) -> (ClassMask, Option<Hint<'_>>) {
        match &self.compiled {
            Compiled::Tree(t) => {
                let mut hint = None;
                let mask = tree_reach(t, 0, bx, &mut hint);
                (mask, hint)
            }
            Compiled::Forest(trees) => self.forest_reach(trees, bx),
            Compiled::List { rules, default } => list_reach(rules, *default, bx),
        }
    }

    fn forest_reach<'a>(&self, trees: &'a [CTree], bx: &CellBox) -> (ClassMask, Option<Hint<'a>>) {
        let k = self.n_classes;
        let mut sure = vec![0usize; k];
        let mut maybe = vec![0usize; k];
        let mut best_hint: Option<Hint<'a>> = None;
        let mut hint_votes = vec![0usize; bx.cells.len()];
        for t in trees {
            let mut hint = None;
            let mask = tree_reach(t, 0, bx, &mut hint);
            for (c, m) in maybe.iter_mut().enumerate() {
                if mask & bit(c) != 0 {
                    *m += 1;
                }
            }
            if mask.count_ones() == 1 {
                sure[mask.trailing_zeros() as usize] += 1;
            } else if let Some(h) = hint {
                let f = hint_feature(&h);
                hint_votes[f] += 1;
                let better = match best_hint {
                    None => true,
                    Some(b) => hint_votes[f] > hint_votes[hint_feature(&b)],
                };
                if better {
                    best_hint = Some(h);
                }
            }
        }
        let mut winners: ClassMask = 0;
        for c in 0..k {
            if maybe[c] == 0 {
                continue;
            }
            let can_win = (0..k).filter(|&o| o != c).all(|o| {
                maybe[c] > sure[o] || (maybe[c] == sure[o] && c < o)
            });
            if can_win {
                winners |= bit(c);
            }
        }
        (winners, best_hint)
    }
}

fn hint_feature(h: &Hint<'_>) -> usize {
    match h {
        Hint::AtLeast { feature, .. } | Hint::Equals { feature, .. } | Hint::InSet { feature, .. } => {
            *feature
        }
    }
}

fn compile_tree(root: &Node, disc: &Discretization) -> CTree {
    fn go(node: &Node, disc: &Discretization, nodes: &mut Vec<CNode>) -> usize {
        let id = nodes.len();
        nodes.push(CNode::Leaf(0));
        let compiled = match node {
            Node::Leaf(c) => CNode::Leaf(*c),
            Node::Threshold { feature, threshold, below, above } => {
                let first_above = disc.cells(*feature).partition_point(|c| c.lo < *threshold);
                let below = go(below, disc, nodes);
                let above = go(above, disc, nodes);
                CNode::AtLeast { feature: *feature, first_above, below, above }
            }
            Node::Label { feature, label, other, equal } => {
                let other = go(other, disc, nodes);
                let equal = go(equal, disc, nodes);
                CNode::Equals { feature: *feature, label: *label, other, equal }
            }
        };
        nodes[id] = compiled;
        id
    }
    let mut nodes = Vec::new();
    go(root, disc, &mut nodes);
    CTree { nodes }
}

fn tree_reach<'a>(t: &'a CTree, id: usize, bx: &CellBox, hint: &mut Option<Hint<'a>>) -> ClassMask {
    match &t.nodes[id] {
        CNode::Leaf(c) => bit(*c),
        CNode::AtLeast { feature, first_above, below, above } => {
            let cells = &bx.cells[*feature];
            let go_below = cells[0] < *first_above;
            let go_above = *cells.last().expect("nonempty") >= *first_above;
            if go_below && go_above && hint.is_none() {
                *hint = Some(Hint::AtLeast { feature: *feature, first_above: *first_above });
            }
            let mut mask = 0;
            if go_below {
                mask |= tree_reach(t, *below, bx, hint);
            }
            if go_above {
                mask |= tree_reach(t, *above, bx, hint);
            }
            mask
        }
        CNode::Equals { feature, label, other, equal } => {
            let cells = &bx.cells[*feature];
            let go_equal = cells.binary_search(label).is_ok();
            let go_other = cells.len() > 1 || cells[0] != *label;
            if go_equal && go_other && hint.is_none() {
                *hint = Some(Hint::Equals { feature: *feature, label: *label });
            }
            let mut mask = 0;
            if go_other {
                mask |= tree_reach(t, *other, bx, hint);
            }
            if go_equal {
                mask |= tree_reach(t, *equal, bx, hint);
            }
            mask
        }
    }
}

fn list_reach<'a>(rules: &'a [CRule], default: ClassId, bx: &CellBox) -> (ClassMask, Option<Hint<'a>>) {
    let mut mask = 0;
    let mut hint = None;
    for rule in rules {
        let mut possible = true;
        let mut definite = true;
        let mut partial = None;
        for lit in &rule.literals {
            let cells = &bx.cells[lit.feature];
            let inside = cells.iter().filter(|&&c| lit.allowed[c]).count();
            if inside == 0 {
                possible = false;
                break;
            }
            if inside < cells.len() {
                definite = false;
                partial.get_or_insert(Hint::InSet { feature: lit.feature, allowed: &lit.allowed });
            }
        }
        if !possible {
            continue;
        }
        mask |= bit(rule.class);
        if definite {
            return (mask, hint);
        }
        if hint.is_none() {
            hint = partial;
        }
    }
    (mask | bit(default), hint)
}

fn split(bx: &CellBox, hint: Hint<'_>) -> (CellBox, CellBox) {
    let (feature, goes_left): (usize, Box<dyn Fn(usize) -> bool + '_>) = match hint {
        Hint::AtLeast { feature, first_above } => (feature, Box::new(move |c| c < first_above)),
        Hint::Equals { feature, label } => (feature, Box::new(move |c| c == label)),
        Hint::InSet { feature, allowed } => (feature, Box::new(move |c| allowed[c])),
    };
    let (l, r): (Vec<usize>, Vec<usize>) = bx.cells[feature].iter().partition(|&&c| goes_left(c));
    debug_assert!(!l.is_empty() && !r.is_empty());
    let mut left = bx.clone();
    let mut right = bx.clone();
    left.cells[feature] = l;
    right.cells[feature] = r;
    (left, right)
}
