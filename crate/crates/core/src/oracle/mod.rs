//! Entailment oracles: sufficiency (every point of a box keeps the
//! prediction) and counterexample existence (some point changes it).
//!
//! Monotonic models are decided by corner evaluation; every other family is
//! decided exactly over the cells of its [`Discretization`].

mod cells;
mod discretize;
mod monotone;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

pub(crate) use cells::{CellBox, CellModel};
pub use discretize::{discretize, Discretization, FeatureCells};
pub use monotone::monotone_box_check;

use crate::classifier::{Classifier, Model};
use crate::error::{Error, Result};
use crate::explain::FeatureSet;
use crate::problem::ExplanationProblem;
use crate::valueset::ValueSet;

/// Feature → allowed value set; features absent from the map are free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<usize, ValueSet>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn insert(&mut self, j: usize, set: ValueSet) -> Option<ValueSet> {
        self.0.insert(j, set)
    }

    pub fn remove(&mut self, j: usize) -> Option<ValueSet> {
        self.0.remove(&j)
    }

    pub fn get(&self, j: usize) -> Option<&ValueSet> {
        self.0.get(&j)
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.contains_key(&j)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ValueSet)> {
        self.0.iter().map(|(j, s)| (*j, s))
    }

    pub fn features(&self) -> FeatureSet {
        self.0.keys().copied().collect()
    }

    /// Returns a copy with feature `j` set to `set`.
    pub fn with(&self, j: usize, set: ValueSet) -> Self {
        let mut a = self.clone();
        a.insert(j, set);
        a
    }

    pub fn without(&self, j: usize) -> Self {
        let mut a = self.clone();
        a.remove(j);
        a
    }
}

impl FromIterator<(usize, ValueSet)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (usize, ValueSet)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// Counts oracle decisions; shared read-only across threads.
#[derive(Debug, Default)]
pub struct OracleStats {
    calls: AtomicU64,
}

impl OracleStats {
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    fn bump(&self) {
        self.calls.fetch_add(1, Ordering::Relaxed);
    }
}

pub(crate) fn model_is_constant(model: &Model) -> bool {
    match model.classifier() {
        Classifier::Monotonic(mc) => {
            let (bottom, top) = monotone::class_range(mc, model.space(), &Assignment::new());
            bottom == top
        }
        _ => {
            let cm = model.cell_model().expect("compiled");
            let full = cm.full_box();
            let first: Vec<usize> = full.cells.iter().map(|c| c[0]).collect();
            let class = cm.classify_cells(&first);
            !cm.exists_other(&full, class)
        }
    }
}

impl ExplanationProblem<'_> {
    fn check_assignment(&self, a: &Assignment) -> Result<()> {
        let space = self.space();
        for (j, set) in a.iter() {
            space.check_index(j)?;
            let domain = space.domain(j);
            let inside = set.is_subset_of(&ValueSet::full(domain)).map_err(|_| {
                Error::InvalidAssignment(format!(
                    "set kind does not match the domain of {}",
                    space.name(j)
                ))
            })?;
            if !inside {
                return Err(Error::InvalidAssignment(format!(
                    "set for {} exceeds its domain",
                    space.name(j)
                )));
            }
        }
        Ok(())
    }

    /// Whether every point `x` with `x_j ∈ a[j]` (free features anywhere)
    /// is classified `c`.
    pub fn holds_sufficiency(&self, a: &Assignment) -> Result<bool> {
        self.check_assignment(a)?;
        Ok(self.sufficient(a))
    }

    /// Whether some point with `x_j = v_j` on `fixed` and `x_j ∈ roam[j]`
    /// elsewhere is classified differently from `c`.
    pub fn exists_counterexample(&self, fixed: &Assignment, roam: &Assignment) -> Result<bool> {
        self.check_assignment(fixed)?;
        self.check_assignment(roam)?;
        if let Some(j) = fixed.features().iter().find(|&j| roam.contains(j)) {
            return Err(Error::InvalidAssignment(format!(
                "feature {} is both fixed and roaming",
                self.space().name(j)
            )));
        }
        if let Some(j) = (0..self.feature_count()).find(|&j| !fixed.contains(j) && !roam.contains(j)) {
            return Err(Error::InvalidAssignment(format!(
                "feature {} is neither fixed nor roaming",
                self.space().name(j)
            )));
        }
        let mut all = fixed.clone();
        for (j, s) in roam.iter() {
            all.insert(j, s.clone());
        }
        Ok(!self.sufficient(&all))
    }

    /// Counted sufficiency decision over a box.
    pub(crate) fn sufficient(&self, a: &Assignment) -> bool {
        self.stats().bump();
        let class = self.class();
        match self.model().classifier() {
            Classifier::Monotonic(mc) => {
                let (bottom, top) = monotone::class_range(mc, self.space(), a);
                bottom == class && top == class
            }
            _ => {
                let cm = self.model().cell_model().expect("compiled");
                !cm.exists_other(&self.cell_box(cm, a), class)
            }
        }
    }

    /// Counted counterexample decision with every feature outside `roam` pinned to `v`.
    pub(crate) fn counterexample(&self, roam: &Assignment) -> bool {
        let mut all = roam.clone();
        for j in 0..self.feature_count() {
            if !roam.contains(j) {
                all.insert(j, self.singleton(j));
            }
        }
        !self.sufficient(&all)
    }

    /// `WAXp(X)`: fixing `X` to the instance values entails the prediction.
    pub fn is_weak_axp(&self, x: &FeatureSet) -> bool {
        self.sufficient(&self.pinned(x))
    }

    /// `WCXp(Y)`: releasing `Y` (others fixed) admits a different prediction.
    pub fn is_weak_cxp(&self, y: &FeatureSet) -> bool {
        let roam: Assignment = y.iter().map(|j| (j, ValueSet::full(self.space().domain(j)))).collect();
        self.counterexample(&roam)
    }

    fn cell_box(&self, cm: &CellModel, a: &Assignment) -> CellBox {
        let disc = cm.discretization();
        CellBox {
            cells: (0..self.feature_count())
                .map(|j| match a.get(j) {
                    Some(set) => disc.cells_meeting(j, set),
                    None => (0..disc.cell_count(j)).collect(),
                })
                .collect(),
        }
    }
}
