//! Shrinking released domains `G_j` of a CXp while a counterexample survives.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::domain::Value;
use crate::error::{Error, Result};
use crate::explain::{check_order, FeatureSet};
use crate::inflate::{method_for, ExplanationKind, InflatedExplanation, Method, Probe};
use crate::oracle::Assignment;
use crate::problem::ExplanationProblem;
use crate::rational::Rational;
use crate::valueset::{Interval, ValueSet};

/// The pieces `D_j \ {v_j}` is split into: single labels, discretization
/// cells other than the one holding `v_j`, or the two sides `[lo,v)`, `(v,hi]`
/// of a δ-searched ordinal.
pub(crate) fn atoms(problem: &ExplanationProblem<'_>, j: usize) -> Vec<ValueSet> {
    let domain = problem.space().domain(j);
    let v = problem.value(j);
    match method_for(problem, j) {
        Method::Labels => (0..domain.cardinality().expect("categorical"))
            .filter(|&u| *v != Value::Label(u))
            .map(|u| ValueSet::Labels([u].into()))
            .collect(),
        Method::Cells => {
            let disc = problem.model().discretization().expect("cell model");
            let home = disc.cell_of(j, v).expect("instance inside domain");
            (0..disc.cell_count(j))
                .filter(|&i| i != home)
                .map(|i| disc.cells_to_set(j, domain, &[i]).expect("cell"))
                .collect()
        }
        Method::DeltaSearch => {
            let (lo, hi) = domain.bounds().expect("ordinal");
            let x = *v.as_num().expect("ordinal");
            [Interval::new(*lo, true, x, false), Interval::new(x, false, *hi, true)]
                .into_iter()
                .flatten()
                .filter_map(|iv| ValueSet::intervals(domain, vec![iv]).ok())
                .collect()
        }
    }
}

pub(crate) fn union_of(problem: &ExplanationProblem<'_>, j: usize, parts: &[ValueSet]) -> ValueSet {
    let domain = problem.space().domain(j);
    let mut it = parts.iter();
    let first = it.next().expect("nonempty").clone();
    it.fold(first, |acc, p| acc.union(p, domain).expect("same kind"))
}

/// Strong inflated CXp: every `G_j` starts as `D_j \ {v_j}` and atoms are
/// dropped greedily (features in `order`, atoms in domain order) while some
/// point with `x_j ∈ G_j` on `cxp` and `x = v` elsewhere still changes the
/// prediction. Each `G_j` ends as a single atom; a surviving side of a
/// δ-searched ordinal is narrowed to its outer endpoint when that suffices.
pub fn shrink_cxp(
    problem: &ExplanationProblem<'_>,
    cxp: &FeatureSet,
    order: &[usize],
) -> Result<InflatedExplanation> {
    check_order(order, problem.feature_count())?;
    for j in cxp.iter() {
        problem.space().check_index(j)?;
    }
    if cxp.is_empty() {
        return Err(Error::NotContrastive(cxp.clone()));
    }
    let mut kept: BTreeMap<usize, Vec<ValueSet>> = cxp.iter().map(|j| (j, atoms(problem, j))).collect();
    if kept.values().any(Vec::is_empty) {
        return Err(Error::NotContrastive(cxp.clone()));
    }
    let roam = |kept: &BTreeMap<usize, Vec<ValueSet>>| -> Assignment {
        kept.iter().map(|(j, parts)| (*j, union_of(problem, *j, parts))).collect()
    };
    if !problem.counterexample(&roam(&kept)) {
        return Err(Error::NotContrastive(cxp.clone()));
    }
    let probe_order: Vec<usize> = order.iter().copied().filter(|j| cxp.contains(*j)).collect();
    let mut probes: BTreeMap<usize, Vec<Probe>> = BTreeMap::new();
    for &j in &probe_order {
        let log = probes.entry(j).or_default();
        let mut i = 0;
        while kept[&j].len() > 1 && i < kept[&j].len() {
            let mut trial = kept.clone();
            let atom = trial.get_mut(&j).expect("present").remove(i);
            let ok = problem.counterexample(&roam(&trial));
            log.push(Probe { tried: atom, accepted: ok });
            if ok {
                kept = trial;
            } else {
                i += 1;
            }
        }
    }
    for &j in &probe_order {
        if method_for(problem, j) != Method::DeltaSearch {
            continue;
        }
        let piece = kept[&j][0].as_intervals().expect("ordinal")[0].clone();
        if piece.is_point() {
            continue;
        }
        let x = *problem.value(j).as_num().expect("ordinal");
        let end = if piece.lo > x || (piece.lo == x && !piece.lo_closed) { piece.hi } else { piece.lo };
        let point = ValueSet::Intervals(vec![Interval::point(end)]);
        let mut trial = kept.clone();
        trial.insert(j, vec![point.clone()]);
        let ok = problem.counterexample(&roam(&trial));
        probes.entry(j).or_default().push(Probe { tried: point, accepted: ok });
        if ok {
            kept = trial;
        }
    }
    let counts = kept.iter().map(|(j, parts)| (*j, parts.len())).collect();
    Ok(InflatedExplanation {
        kind: ExplanationKind::Contrastive,
        features: cxp.clone(),
        sets: roam(&kept).iter().map(|(j, s)| (j, s.clone())).collect(),
        probe_order,
        delta: Rational::zero(),
        counts,
        probes,
    })
}
