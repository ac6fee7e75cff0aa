//! Duality between inflated AXps and strong inflated CXps: the pairwise
//! disjointness hit, and the hitting-set constructions of one family from
//! a complete list of the other, validated by the oracle.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::explain::{enumerate_all, minimal_hitting_sets, FeatureSet};
use crate::inflate::contrastive::atoms;
use crate::inflate::{
    categorical_from, cells_from, inflate_checked_axp, method_for, ExplanationKind, InflatedExplanation,
    InflationConfig, Method,
};
use crate::oracle::Assignment;
use crate::problem::ExplanationProblem;
use crate::rational::Rational;
use crate::valueset::{Interval, ValueSet};

#[derive(Clone, Debug)]
pub struct ExplanationSets {
    pub iaxps: Vec<InflatedExplanation>,
    pub icxps: Vec<InflatedExplanation>,
    /// Whether the underlying feature sets are all AXps and all CXps.
    pub complete: bool,
}

impl ExplanationSets {
    pub fn axp_sets(&self) -> Vec<FeatureSet> {
        let mut v: Vec<FeatureSet> = self.iaxps.iter().map(|e| e.features.clone()).collect();
        v.dedup();
        v
    }

    pub fn cxp_sets(&self) -> Vec<FeatureSet> {
        let mut v: Vec<FeatureSet> = self.icxps.iter().map(|e| e.features.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Why a dual construction was refused, with the offending candidate.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub construction: &'static str,
    /// Feature (0-based) picked from each input explanation.
    pub selection: Vec<usize>,
    pub features: FeatureSet,
    /// Feature name to rendered set.
    pub candidate: BTreeMap<String, String>,
    pub reason: String,
}

/// Selection of one feature per input explanation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    Explicit(Vec<usize>),
    /// Every selection is tried; subset-minimal images are validated in
    /// (size, lexicographic) order and the first valid candidate wins.
    MinimalSearch,
}

/// Some feature `j ∈ X ∩ Y` with `E_j ∩ G_j = ∅`.
pub fn check_hits(iaxp: &InflatedExplanation, icxp: &InflatedExplanation) -> Result<Option<usize>> {
    if iaxp.kind != ExplanationKind::Abductive || icxp.kind != ExplanationKind::Contrastive {
        return Err(Error::InvalidInput("check_hits expects an abductive and a contrastive explanation".into()));
    }
    for (j, e) in &iaxp.sets {
        if let Some(g) = icxp.sets.get(j) {
            if e.is_disjoint(g)? {
                return Ok(Some(*j));
            }
        }
    }
    Ok(None)
}

/// Atoms of feature `j`, with each side of a δ-searched ordinal narrowed to
/// its outer endpoint. On a minimal CXp of a monotone model every
/// counterexample-bearing tuple moves the score one way, so the endpoint
/// corner holds a counterexample whenever the side does.
fn witness_atoms(problem: &ExplanationProblem<'_>, j: usize) -> Vec<ValueSet> {
    let all = atoms(problem, j);
    if method_for(problem, j) != Method::DeltaSearch {
        return all;
    }
    let domain = problem.space().domain(j);
    let (lo, hi) = domain.bounds().expect("ordinal");
    let v = problem.value(j).as_num().expect("ordinal");
    all.iter()
        .map(|side| {
            let end = if side.as_intervals().expect("ordinal")[0].lo < *v { *lo } else { *hi };
            ValueSet::intervals(domain, vec![Interval::point(end)]).expect("inside")
        })
        .collect()
}

/// Every single-atom strong iCXp of one CXp: one atom of `D_j \ {v_j}` per
/// feature, kept when a counterexample lies in the product.
fn atom_icxps(problem: &ExplanationProblem<'_>, cxp: &FeatureSet) -> Vec<InflatedExplanation> {
    let feats: Vec<usize> = cxp.iter().collect();
    let choices: Vec<Vec<ValueSet>> = feats.iter().map(|&j| witness_atoms(problem, j)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; feats.len()];
    if choices.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let roam: Assignment = feats.iter().zip(&idx).enumerate().map(|(t, (&j, &i))| (j, choices[t][i].clone())).collect();
        if problem.counterexample(&roam) {
            out.push(InflatedExplanation {
                kind: ExplanationKind::Contrastive,
                features: cxp.clone(),
                sets: roam.iter().map(|(j, s)| (j, s.clone())).collect(),
                probe_order: feats.clone(),
                delta: Rational::from_integer(0),
                counts: feats.iter().map(|&j| (j, 1)).collect(),
                probes: BTreeMap::new(),
            });
        }
        let mut t = feats.len();
        loop {
            if t == 0 {
                return out;
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

/// All AXps inflated in the configured order, and every single-atom strong
/// iCXp of every CXp.
pub fn enumerate_inflated(
    problem: &ExplanationProblem<'_>,
    cfg: &InflationConfig,
    budget: Option<u64>,
) -> Result<ExplanationSets> {
    cfg.validate()?;
    let (axps, cxps) = enumerate_all(problem, budget)?;
    let iaxps = axps.iter().map(|x| inflate_checked_axp(problem, x, cfg)).collect::<Result<Vec<_>>>()?;
    let icxps = cxps.iter().flat_map(|y| atom_icxps(problem, y)).collect();
    Ok(ExplanationSets { iaxps, icxps, complete: true })
}

/// Checks that both feature families are each other's minimal hitting sets.
pub fn families_are_dual(axps: &[FeatureSet], cxps: &[FeatureSet]) -> Result<bool> {
    let mut a = axps.to_vec();
    let mut c = cxps.to_vec();
    a.sort();
    c.sort();
    let mut mhs_c = minimal_hitting_sets(&c)?;
    let mut mhs_a = minimal_hitting_sets(&a)?;
    mhs_c.sort();
    mhs_a.sort();
    Ok(mhs_c == a && mhs_a == c)
}

const MAX_SELECTIONS: usize = 1 << 20;

fn selections(inputs: &[InflatedExplanation], selector: &Selector) -> Result<Vec<Vec<usize>>> {
    match selector {
        Selector::Explicit(sel) => {
            if sel.len() != inputs.len() {
                return Err(Error::InvalidInput(format!(
                    "selection has {} entries for {} explanations",
                    sel.len(),
                    inputs.len()
                )));
            }
            for (s, e) in sel.iter().zip(inputs) {
                if !e.features.contains(*s) {
                    return Err(Error::InvalidInput(format!(
                        "selected feature {} is not in explanation {}",
                        s + 1,
                        e.features
                    )));
                }
            }
            Ok(vec![sel.clone()])
        }
        Selector::MinimalSearch => {
            let lists: Vec<Vec<usize>> = inputs.iter().map(|e| e.features.iter().collect()).collect();
            if lists.iter().any(Vec::is_empty) {
                return Err(Error::InvalidInput("explanation with no features".into()));
            }
            let total = lists.iter().try_fold(1usize, |acc, l| acc.checked_mul(l.len()));
            if total.is_none_or(|t| t > MAX_SELECTIONS) {
                return Err(Error::InvalidInput(format!(
                    "more than {MAX_SELECTIONS} selections; pass an explicit one"
                )));
            }
            let mut all: Vec<(FeatureSet, Vec<usize>)> = Vec::new();
            let mut idx = vec![0usize; lists.len()];
            'outer: loop {
                let sel: Vec<usize> = idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect();
                all.push((sel.iter().copied().collect(), sel));
                let mut t = lists.len();
                loop {
                    if t == 0 {
                        break 'outer;
                    }
                    t -= 1;
                    idx[t] += 1;
                    if idx[t] < lists[t].len() {
                        break;
                    }
                    idx[t] = 0;
                }
            }
            let images: Vec<FeatureSet> = all.iter().map(|(img, _)| img.clone()).collect();
            let mut minimal: Vec<(FeatureSet, Vec<usize>)> = all
                .into_iter()
                .filter(|(img, _)| !images.iter().any(|o| o != img && o.is_subset(img)))
                .collect();
            minimal.sort_by(|a, b| (a.0.len(), &a.0, &a.1).cmp(&(b.0.len(), &b.0, &b.1)));
            minimal.dedup();
            Ok(minimal.into_iter().map(|(_, sel)| sel).collect())
        }
    }
}

/// `G_j = ⋂ (D_j \ E_j)` over the inputs whose selected feature is `j`.
fn dual_sets(
    problem: &ExplanationProblem<'_>,
    inputs: &[InflatedExplanation],
    sel: &[usize],
) -> std::result::Result<BTreeMap<usize, ValueSet>, (BTreeMap<usize, Option<ValueSet>>, String)> {
    let mut acc: BTreeMap<usize, Option<ValueSet>> = BTreeMap::new();
    for (e, &j) in inputs.iter().zip(sel) {
        let domain = problem.space().domain(j);
        let own = e.sets.get(&j).cloned().unwrap_or_else(|| ValueSet::full(domain));
        let comp = own.complement(domain);
        let next = match (acc.get(&j), comp) {
            (None, c) => c,
            (Some(None), _) | (Some(Some(_)), None) => None,
            (Some(Some(prev)), Some(c)) => prev.intersect(&c).expect("same kind"),
        };
        acc.insert(j, next);
    }
    if let Some((j, _)) = acc.iter().find(|(_, s)| s.is_none()) {
        let reason = format!("the set for {} is empty", problem.space().name(*j));
        return Err((acc, reason));
    }
    Ok(acc.into_iter().map(|(j, s)| (j, s.expect("checked"))).collect())
}

fn report(
    problem: &ExplanationProblem<'_>,
    construction: &'static str,
    sel: &[usize],
    sets: &BTreeMap<usize, Option<ValueSet>>,
    reason: String,
) -> ConstructionReport {
    let space = problem.space();
    ConstructionReport {
        construction,
        selection: sel.to_vec(),
        features: sets.keys().copied().collect(),
        candidate: sets
            .iter()
            .map(|(j, s)| {
                let text = s.as_ref().map(|s| s.render(space.domain(*j))).unwrap_or_else(|| "∅".into());
                (space.name(*j).to_string(), text)
            })
            .collect(),
        reason,
    }
}

fn wrap(sets: BTreeMap<usize, ValueSet>) -> BTreeMap<usize, Option<ValueSet>> {
    sets.into_iter().map(|(j, s)| (j, Some(s))).collect()
}

/// Builds an inflated CXp from a complete list of inflated AXps.
///
/// The candidate is checked for a counterexample and then reduced by
/// dropping features (pinning them back to `v`) while one remains.
pub fn icxp_from_iaxps(
    problem: &ExplanationProblem<'_>,
    iaxps: &[InflatedExplanation],
    selector: &Selector,
) -> Result<InflatedExplanation> {
    if iaxps.is_empty() {
        return Err(Error::InvalidInput("no inflated AXps given".into()));
    }
    if iaxps.iter().any(|e| e.kind != ExplanationKind::Abductive) {
        return Err(Error::InvalidInput("expected abductive explanations".into()));
    }
    let mut last = None;
    for sel in selections(iaxps, selector)? {
        let sets = match dual_sets(problem, iaxps, &sel) {
            Ok(s) => s,
            Err((partial, reason)) => {
                last = Some(report(problem, "icxp_from_iaxps", &sel, &partial, reason));
                continue;
            }
        };
        let roam: Assignment = sets.iter().map(|(j, s)| (*j, s.clone())).collect();
        if !problem.counterexample(&roam) {
            last = Some(report(
                problem,
                "icxp_from_iaxps",
                &sel,
                &wrap(sets),
                "no counterexample inside the candidate".into(),
            ));
            continue;
        }
        let mut roam = roam;
        for j in roam.features().iter() {
            if roam.len() > 1 && problem.counterexample(&roam.without(j)) {
                roam.remove(j);
            }
        }
        let features = roam.features();
        return Ok(InflatedExplanation {
            kind: ExplanationKind::Contrastive,
            probe_order: features.iter().collect(),
            counts: roam.iter().map(|(j, s)| (j, s.piece_count())).collect(),
            sets: roam.iter().map(|(j, s)| (j, s.clone())).collect(),
            features,
            delta: Rational::from_integer(0),
            probes: BTreeMap::new(),
        });
    }
    Err(Error::ConstructionRejected(Box::new(last.expect("at least one selection"))))
}

/// Builds an inflated AXp from a complete list of strong inflated CXps.
///
/// The candidate is checked for sufficiency, reduced by freeing features
/// while sufficiency holds, and its label and cell sets are then re-inflated
/// so that no single addition is possible.
pub fn iaxp_from_icxps(
    problem: &ExplanationProblem<'_>,
    icxps: &[InflatedExplanation],
    selector: &Selector,
) -> Result<InflatedExplanation> {
    if icxps.is_empty() {
        return Err(Error::InvalidInput("no inflated CXps given".into()));
    }
    if icxps.iter().any(|e| e.kind != ExplanationKind::Contrastive) {
        return Err(Error::InvalidInput("expected contrastive explanations".into()));
    }
    let mut last = None;
    for sel in selections(icxps, selector)? {
        let sets = match dual_sets(problem, icxps, &sel) {
            Ok(s) => s,
            Err((partial, reason)) => {
                last = Some(report(problem, "iaxp_from_icxps", &sel, &partial, reason));
                continue;
            }
        };
        let mut current: Assignment = sets.iter().map(|(j, s)| (*j, s.clone())).collect();
        if !problem.sufficient(&current) {
            last = Some(report(
                problem,
                "iaxp_from_icxps",
                &sel,
                &wrap(sets),
                "candidate does not entail the prediction".into(),
            ));
            continue;
        }
        for j in current.features().iter() {
            if problem.sufficient(&current.without(j)) {
                current.remove(j);
            }
        }
        let mut counts = BTreeMap::new();
        for j in current.features().iter() {
            let grown = match method_for(problem, j) {
                Method::Labels => categorical_from(problem, j, &current),
                Method::Cells => cells_from(problem, j, &current),
                Method::DeltaSearch => current.get(j).expect("present").clone(),
            };
            counts.insert(j, grown.piece_count());
            current.insert(j, grown);
        }
        let features = current.features();
        return Ok(InflatedExplanation {
            kind: ExplanationKind::Abductive,
            probe_order: features.iter().collect(),
            sets: current.iter().map(|(j, s)| (j, s.clone())).collect(),
            features,
            delta: Rational::from_integer(0),
            counts,
            probes: BTreeMap::new(),
        });
    }
    Err(Error::ConstructionRejected(Box::new(last.expect("at least one selection"))))
}
