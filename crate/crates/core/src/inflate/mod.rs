//! Inflation: widening each literal `x_j = v_j` of an AXp to a maximal set
//! `E_j` that still entails the prediction, and the contrastive counterpart
//! that shrinks released domains `G_j` while a counterexample survives.

pub(crate) mod contrastive;
mod ordinal;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use contrastive::shrink_cxp;
pub use ordinal::{expand_inf, expand_sup, inflate_ordinal};

use crate::classifier::{Classifier, Model};
use crate::domain::{ClassId, Domain, Value};
use crate::error::{Error, Result};
use crate::explain::{check_order, default_order, find_axp, FeatureSet};
use crate::oracle::Assignment;
use crate::problem::ExplanationProblem;
use crate::rational::{is_positive_multiple, Rational};
use crate::valueset::ValueSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Linear,
    Binary,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Strategy::Linear),
            "binary" => Ok(Strategy::Binary),
            other => Err(Error::InvalidConfig(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InflationConfig {
    /// Grid step of the ordinal searches.
    pub delta: Rational,
    /// Coarse step for linear search; a multiple of `delta`.
    pub beta: Option<Rational>,
    pub strategy: Strategy,
    /// Feature processing order (0-based); ascending when `None`.
    pub order: Option<Vec<usize>>,
}

impl Default for InflationConfig {
    fn default() -> Self {
        InflationConfig { delta: Rational::new(1, 5), beta: None, strategy: Strategy::Linear, order: None }
    }
}

impl InflationConfig {
    pub fn with_delta(delta: Rational) -> Self {
        InflationConfig { delta, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta <= Rational::zero() {
            return Err(Error::InvalidConfig("delta must be positive".into()));
        }
        if let Some(beta) = &self.beta {
            if *beta <= self.delta || !is_positive_multiple(beta, &self.delta) {
                return Err(Error::InvalidConfig(
                    "beta must be a multiple of delta greater than delta".into(),
                ));
            }
        }
        Ok(())
    }

    pub(crate) fn order_for(&self, m: usize) -> Result<Vec<usize>> {
        match &self.order {
            Some(o) => {
                check_order(o, m)?;
                Ok(o.clone())
            }
            None => Ok(default_order(m)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExplanationKind {
    Abductive,
    Contrastive,
}

/// One oracle query made while inflating or shrinking a feature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    /// The value, cell or interval tried.
    pub tried: ValueSet,
    pub accepted: bool,
}

/// An inflated AXp `(X, {E_j})` or a strong inflated CXp `(Y, {G_j})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InflatedExplanation {
    pub kind: ExplanationKind,
    pub features: FeatureSet,
    pub sets: BTreeMap<usize, ValueSet>,
    /// Order in which the features were processed.
    pub probe_order: Vec<usize>,
    /// Zero when no δ-search was involved.
    pub delta: Rational,
    /// Per feature: labels or cells added, δ-steps gained, or (contrastive)
    /// atoms kept.
    pub counts: BTreeMap<usize, usize>,
    pub probes: BTreeMap<usize, Vec<Probe>>,
}

impl InflatedExplanation {
    pub fn set(&self, j: usize) -> Option<&ValueSet> {
        self.sets.get(&j)
    }

    pub fn assignment(&self) -> Assignment {
        self.sets.iter().map(|(j, s)| (*j, s.clone())).collect()
    }

    pub fn total_count(&self) -> usize {
        self.counts.values().sum()
    }

    /// `IF A∈{Junior,Senior} ∧ C∈{Red,Blue} THEN 1` (contrastive: `THEN NOT 1`).
    pub fn render_rule(&self, model: &Model, class: ClassId) -> String {
        let space = model.space();
        let lits: Vec<String> = self
            .sets
            .iter()
            .map(|(j, s)| format!("{}∈{}", space.name(*j), s.render(space.domain(*j))))
            .collect();
        let cond = if lits.is_empty() { "TRUE".to_string() } else { lits.join(" ∧ ") };
        let neg = match self.kind {
            ExplanationKind::Abductive => "",
            ExplanationKind::Contrastive => "NOT ",
        };
        format!("IF {cond} THEN {neg}{}", model.class_name(class))
    }

    /// Display helper bound to a model.
    pub fn display<'a>(&'a self, model: &'a Model, class: ClassId) -> impl fmt::Display + 'a {
        struct D<'a>(&'a InflatedExplanation, &'a Model, ClassId);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render_rule(self.1, self.2))
            }
        }
        D(self, model, class)
    }
}

/// How feature `j` is inflated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Method {
    Labels,
    Cells,
    DeltaSearch,
}

pub(crate) fn method_for(problem: &ExplanationProblem<'_>, j: usize) -> Method {
    match problem.space().domain(j) {
        Domain::Categorical { .. } => Method::Labels,
        Domain::Ordinal { .. } => match problem.model().classifier() {
            Classifier::Monotonic(_) => Method::DeltaSearch,
            _ => Method::Cells,
        },
    }
}

/// Inflates a weak AXp; fails with [`Error::NotSufficient`] otherwise.
pub fn inflate_axp(
    problem: &ExplanationProblem<'_>,
    axp: &FeatureSet,
    cfg: &InflationConfig,
) -> Result<InflatedExplanation> {
    cfg.validate()?;
    for j in axp.iter() {
        problem.space().check_index(j)?;
    }
    if !problem.is_weak_axp(axp) {
        return Err(Error::NotSufficient(axp.clone()));
    }
    inflate_checked_axp(problem, axp, cfg)
}

/// Inflation proper; `axp` is trusted to be a weak AXp and `cfg` valid.
pub(crate) fn inflate_checked_axp(
    problem: &ExplanationProblem<'_>,
    axp: &FeatureSet,
    cfg: &InflationConfig,
) -> Result<InflatedExplanation> {
    let order: Vec<usize> = cfg.order_for(problem.feature_count())?.into_iter().filter(|j| axp.contains(*j)).collect();
    let mut current = problem.pinned(axp);
    let mut counts = BTreeMap::new();
    let mut probes = BTreeMap::new();
    let mut used_delta = false;
    for &j in &order {
        let mut log = Vec::new();
        let set = match method_for(problem, j) {
            Method::Labels => categorical(problem, j, &current, &mut log),
            Method::Cells => cells(problem, j, &current, &mut log),
            Method::DeltaSearch => {
                used_delta = true;
                ordinal::inflate_ordinal_logged(problem, j, &current, cfg, &mut log)
            }
        };
        counts.insert(j, added_count(problem, j, &set, cfg));
        probes.insert(j, log);
        current.insert(j, set);
    }
    Ok(InflatedExplanation {
        kind: ExplanationKind::Abductive,
        features: axp.clone(),
        sets: current.iter().map(|(j, s)| (j, s.clone())).collect(),
        probe_order: order,
        delta: if used_delta { cfg.delta } else { Rational::zero() },
        counts,
        probes,
    })
}

fn added_count(problem: &ExplanationProblem<'_>, j: usize, set: &ValueSet, cfg: &InflationConfig) -> usize {
    match method_for(problem, j) {
        Method::Labels => set.piece_count() - 1,
        Method::Cells => {
            let disc = problem.model().discretization().expect("cell model");
            disc.cells_meeting(j, set).len() - 1
        }
        Method::DeltaSearch => {
            let iv = &set.as_intervals().expect("ordinal")[0];
            ((iv.hi - iv.lo) / cfg.delta).floor().to_integer().to_usize().unwrap_or(0)
        }
    }
}

/// Finds one AXp in the configured order and inflates it. Oracle calls:
/// `|F|` for the AXp plus one per probed value, cell or grid point.
pub fn explain_and_inflate(
    problem: &ExplanationProblem<'_>,
    cfg: &InflationConfig,
) -> Result<(FeatureSet, InflatedExplanation)> {
    cfg.validate()?;
    let order = cfg.order_for(problem.feature_count())?;
    let axp = find_axp(problem, &order)?;
    let inflated = inflate_checked_axp(problem, &axp, cfg)?;
    Ok((axp, inflated))
}

/// Inflates every feature of `F` and drops those whose set reaches the whole
/// domain. The survivors always form a weak AXp; they need not be minimal.
pub fn inflate_from_full(problem: &ExplanationProblem<'_>, cfg: &InflationConfig) -> Result<InflatedExplanation> {
    cfg.validate()?;
    let mut out = inflate_checked_axp(problem, &problem.all_features(), cfg)?;
    let full: Vec<usize> = out
        .sets
        .iter()
        .filter(|(j, s)| s.is_full(problem.space().domain(**j)))
        .map(|(j, _)| *j)
        .collect();
    for j in full {
        out.sets.remove(&j);
        out.counts.remove(&j);
        out.features.remove(j);
    }
    Ok(out)
}

/// Adds the other labels of categorical feature `j` to `e_j` one at a time,
/// in declaration order, keeping each one that preserves sufficiency.
pub fn inflate_categorical(
    problem: &ExplanationProblem<'_>,
    j: usize,
    e_j: &ValueSet,
    current: &Assignment,
) -> Result<ValueSet> {
    problem.space().check_index(j)?;
    if !problem.space().domain(j).is_categorical() {
        return Err(Error::TypeMismatch(format!("{} is not categorical", problem.space().name(j))));
    }
    check_anchor(problem, j, e_j)?;
    Ok(categorical(problem, j, &current.with(j, e_j.clone()), &mut Vec::new()))
}

fn categorical(problem: &ExplanationProblem<'_>, j: usize, current: &Assignment, log: &mut Vec<Probe>) -> ValueSet {
    let domain = problem.space().domain(j);
    let mut set = current.get(j).cloned().unwrap_or_else(|| problem.singleton(j));
    let n = domain.cardinality().expect("categorical");
    for u in 0..n {
        if set.contains(&Value::Label(u)).expect("labels") {
            continue;
        }
        let atom = ValueSet::Labels([u].into());
        let candidate = set.union(&atom, domain).expect("same kind");
        let ok = problem.sufficient(&current.with(j, candidate.clone()));
        log.push(Probe { tried: atom, accepted: ok });
        if ok {
            set = candidate;
        }
    }
    set
}

/// Cell-level inflation of ordinal feature `j` for tree models and decision
/// lists: cells are tried outward from the cell of `v_j` (the contiguous run
/// above, then the contiguous run below, then any remaining cells), each
/// kept iff sufficiency is preserved.
pub fn inflate_ordinal_tree(
    problem: &ExplanationProblem<'_>,
    j: usize,
    e_j: &ValueSet,
    current: &Assignment,
) -> Result<ValueSet> {
    problem.space().check_index(j)?;
    if method_for(problem, j) != Method::Cells {
        return Err(Error::TypeMismatch(format!(
            "{} is not a discretized ordinal feature",
            problem.space().name(j)
        )));
    }
    check_anchor(problem, j, e_j)?;
    Ok(cells(problem, j, &current.with(j, e_j.clone()), &mut Vec::new()))
}

fn cells(problem: &ExplanationProblem<'_>, j: usize, current: &Assignment, log: &mut Vec<Probe>) -> ValueSet {
    let disc = problem.model().discretization().expect("cell model");
    let domain = problem.space().domain(j);
    let start = current.get(j).cloned().unwrap_or_else(|| problem.singleton(j));
    let mut accepted = disc.cells_meeting(j, &start);
    let home = disc.cell_of(j, problem.value(j)).expect("instance inside domain");
    let n = disc.cell_count(j);
    let mut tried = vec![false; n];
    for &i in &accepted {
        tried[i] = true;
    }
    let mut probe = |i: usize, accepted: &mut Vec<usize>, tried: &mut Vec<bool>| -> bool {
        tried[i] = true;
        let mut with = accepted.clone();
        with.push(i);
        with.sort_unstable();
        let candidate = disc.cells_to_set(j, domain, &with).expect("cells lie in the domain");
        let ok = problem.sufficient(&current.with(j, candidate));
        log.push(Probe { tried: disc.cells_to_set(j, domain, &[i]).expect("cell"), accepted: ok });
        if ok {
            *accepted = with;
        }
        ok
    };
    for i in home + 1..n {
        if tried[i] {
            continue;
        }
        if !probe(i, &mut accepted, &mut tried) {
            break;
        }
    }
    for i in (0..home).rev() {
        if tried[i] {
            continue;
        }
        if !probe(i, &mut accepted, &mut tried) {
            break;
        }
    }
    for i in (home + 1..n).chain((0..home).rev()) {
        if !tried[i] {
            probe(i, &mut accepted, &mut tried);
        }
    }
    disc.cells_to_set(j, domain, &accepted).expect("cells lie in the domain")
}

pub(crate) fn categorical_from(problem: &ExplanationProblem<'_>, j: usize, current: &Assignment) -> ValueSet {
    categorical(problem, j, current, &mut Vec::new())
}

pub(crate) fn cells_from(problem: &ExplanationProblem<'_>, j: usize, current: &Assignment) -> ValueSet {
    cells(problem, j, current, &mut Vec::new())
}

fn check_anchor(problem: &ExplanationProblem<'_>, j: usize, e_j: &ValueSet) -> Result<()> {
    let inside = e_j.is_subset_of(&ValueSet::full(problem.space().domain(j)))?;
    if !inside || !e_j.contains(problem.value(j))? {
        return Err(Error::InvalidAssignment(format!(
            "starting set for {} must lie in its domain and contain the instance value",
            problem.space().name(j)
        )));
    }
    Ok(())
}
