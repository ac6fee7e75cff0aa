//! Abductive (AXp) and contrastive (CXp) explanations: deletion-based
//! extraction, exhaustive enumeration and minimal hitting sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ExplanationProblem;

/// Set of 0-based feature indices. Displays 1-based, as in `{1,2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureSet(BTreeSet<usize>);

impl FeatureSet {
    pub fn new() -> Self {
        FeatureSet::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.contains(&j)
    }

    pub fn insert(&mut self, j: usize) -> bool {
        self.0.insert(j)
    }

    pub fn remove(&mut self, j: usize) -> bool {
        self.0.remove(&j)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &FeatureSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &FeatureSet) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn without(&self, j: usize) -> FeatureSet {
        let mut s = self.clone();
        s.remove(j);
        s
    }

    pub fn as_set(&self) -> &BTreeSet<usize> {
        &self.0
    }

    /// 1-based indices, for display and serialization at the user boundary.
    pub fn one_based(&self) -> Vec<usize> {
        self.iter().map(|j| j + 1).collect()
    }
}

impl FromIterator<usize> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        FeatureSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for FeatureSet {
    fn from(items: [usize; N]) -> Self {
        items.into_iter().collect()
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|j| (j + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Checks that `order` is a permutation of `0..m`.
pub(crate) fn check_order(order: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    for &j in order {
        if j >= m {
            return Err(Error::FeatureOutOfRange(j));
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidConfig(format!("feature {} repeated in order", j + 1)));
        }
    }
    if order.len() != m {
        return Err(Error::InvalidConfig(format!(
            "order lists {} features, expected {m}",
            order.len()
        )));
    }
    Ok(())
}

pub fn default_order(m: usize) -> Vec<usize> {
    (0..m).collect()
}

/// One AXp: walks `order`, freeing each feature while the rest stays sufficient.
/// Uses exactly `|F|` oracle calls.
pub fn find_axp(problem: &ExplanationProblem<'_>, order: &[usize]) -> Result<FeatureSet> {
    check_order(order, problem.feature_count())?;
    let mut x = problem.all_features();
    for &i in order {
        let candidate = x.without(i);
        if problem.is_weak_axp(&candidate) {
            x = candidate;
        }
    }
    Ok(x)
}

/// One CXp. Features are tried for removal from the back of `order`, so the
/// features listed first are the ones most likely kept.
pub fn find_cxp(problem: &ExplanationProblem<'_>, order: &[usize]) -> Result<FeatureSet> {
    check_order(order, problem.feature_count())?;
    let mut y = problem.all_features();
    for &i in order.iter().rev() {
        let candidate = y.without(i);
        if problem.is_weak_cxp(&candidate) {
            y = candidate;
        }
    }
    Ok(y)
}

/// All AXps and all CXps, by increasing subset size with superset pruning.
///
/// `budget` bounds the oracle calls spent here; on overrun the explanations
/// found so far are returned inside [`Error::BudgetExceeded`].
pub fn enumerate_all(
    problem: &ExplanationProblem<'_>,
    budget: Option<u64>,
) -> Result<(Vec<FeatureSet>, Vec<FeatureSet>)> {
    let m = problem.feature_count();
    let start = problem.stats().calls();
    let mut axps: Vec<FeatureSet> = Vec::new();
    let mut cxps: Vec<FeatureSet> = Vec::new();
    for k in 0..=m {
        for subset in combinations(m, k) {
            let s: FeatureSet = subset.into_iter().collect();
            if !axps.iter().any(|a| a.is_subset(&s)) && problem.is_weak_axp(&s) {
                axps.push(s.clone());
            }
            if !cxps.iter().any(|c| c.is_subset(&s)) && problem.is_weak_cxp(&s) {
                cxps.push(s);
            }
            if let Some(b) = budget {
                if problem.stats().calls() - start > b {
                    return Err(Error::BudgetExceeded { budget: b, partial_axps: axps, partial_cxps: cxps });
                }
            }
        }
    }
    Ok((axps, cxps))
}

/// All subset-minimal hitting sets of `family`, smallest first.
pub fn minimal_hitting_sets(family: &[FeatureSet]) -> Result<Vec<FeatureSet>> {
    if family.is_empty() {
        return Err(Error::InvalidInput("hitting sets of an empty family".into()));
    }
    if family.iter().any(FeatureSet::is_empty) {
        return Err(Error::InvalidInput("family contains an empty set, which cannot be hit".into()));
    }
    let universe: Vec<usize> = family.iter().flat_map(|s| s.iter()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut found: Vec<FeatureSet> = Vec::new();
    for k in 1..=universe.len() {
        for pick in combinations(universe.len(), k) {
            let s: FeatureSet = pick.into_iter().map(|i| universe[i]).collect();
            if found.iter().any(|h| h.is_subset(&s)) {
                continue;
            }
            if family.iter().all(|f| f.intersects(&s)) {
                found.push(s);
            }
        }
    }
    Ok(found)
}

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = {
            let c = current.as_mut().expect("checked");
            let mut i = k;
            loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for t in i + 1..k {
                        c[t] = c[t - 1] + 1;
                    }
                    break true;
                }
            }
        };
        if !next {
            current = None;
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(items: &[usize]) -> FeatureSet {
        items.iter().copied().collect()
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(4, 2).count(), 6);
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(3, 3).collect::<Vec<_>>(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn mhs_examples() {
        assert_eq!(minimal_hitting_sets(&[fs(&[0]), fs(&[1, 2])]).unwrap(), vec![fs(&[0, 1]), fs(&[0, 2])]);
        assert_eq!(minimal_hitting_sets(&[fs(&[0, 1])]).unwrap(), vec![fs(&[0]), fs(&[1])]);
        assert_eq!(minimal_hitting_sets(&[fs(&[0]), fs(&[0, 1])]).unwrap(), vec![fs(&[0])]);
    }

    #[test]
    fn mhs_rejects_empty() {
        assert!(minimal_hitting_sets(&[]).is_err());
        assert!(minimal_hitting_sets(&[fs(&[0]), fs(&[])]).is_err());
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(fs(&[0, 1]).to_string(), "{1,2}");
        assert_eq!(FeatureSet::new().to_string(), "{}");
    }

    #[test]
    fn order_validation() {
        assert!(check_order(&[1, 0], 2).is_ok());
        assert!(check_order(&[0, 0], 2).is_err());
        assert!(check_order(&[0], 2).is_err());
        assert!(check_order(&[0, 2], 2).is_err());
    }
}
