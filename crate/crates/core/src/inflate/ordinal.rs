//! δ-grid searches for the endpoints of an inflated ordinal interval.

use num_traits::Signed;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::inflate::{InflationConfig, Probe, Strategy};
use crate::oracle::Assignment;
use crate::problem::ExplanationProblem;
use crate::rational::Rational;
use crate::valueset::{Interval, ValueSet};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Up,
    Down,
}

struct Search<'a, 'p> {
    problem: &'a ExplanationProblem<'p>,
    j: usize,
    current: &'a Assignment,
    log: &'a mut Vec<Probe>,
}

impl Search<'_, '_> {
    fn domain(&self) -> &Domain {
        self.problem.space().domain(self.j)
    }

    fn test(&mut self, a: Rational, b: Rational) -> bool {
        let set = ValueSet::intervals(self.domain(), vec![Interval::closed(a, b)]).expect("inside the domain");
        let ok = self.problem.sufficient(&self.current.with(self.j, set.clone()));
        self.log.push(Probe { tried: set, accepted: ok });
        ok
    }

    /// Last passing point of `v ± kδ` strictly before `bound`, with the
    /// other end of the interval held at `other`. `bound` is known to fail.
    fn expand(&mut self, dir: Dir, other: Rational, bound: Rational, cfg: &InflationConfig) -> Rational {
        let v = *self.problem.value(self.j).as_num().expect("ordinal");
        let delta = cfg.delta;
        let point = |k: i64| match dir {
            Dir::Up => v + delta * Rational::from_integer(k),
            Dir::Down => v - delta * Rational::from_integer(k),
        };
        let reach = (bound - v).abs() / delta;
        let last = if reach.is_integer() { reach.to_integer() - 1 } else { reach.floor().to_integer() };
        let pass = |k: i64, s: &mut Self| -> bool {
            if k == 0 {
                return true;
            }
            match dir {
                Dir::Up => s.test(other, point(k)),
                Dir::Down => s.test(point(k), other),
            }
        };
        let k = match (cfg.strategy, &cfg.beta) {
            (Strategy::Binary, _) => {
                let (mut lo, mut hi) = (0i64, last + 1);
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if pass(mid, self) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
            (Strategy::Linear, beta) => {
                let mut k = 0i64;
                let stride = beta.map(|b| (b / delta).to_integer()).unwrap_or(1);
                let mut limit = last;
                if stride > 1 {
                    while k + stride <= last && pass(k + stride, self) {
                        k += stride;
                    }
                    limit = last.min(k + stride - 1);
                }
                while k < limit && pass(k + 1, self) {
                    k += 1;
                }
                k
            }
        };
        point(k)
    }
}

pub(crate) fn inflate_ordinal_logged(
    problem: &ExplanationProblem<'_>,
    j: usize,
    current: &Assignment,
    cfg: &InflationConfig,
    log: &mut Vec<Probe>,
) -> ValueSet {
    let domain = problem.space().domain(j);
    let (lo, hi) = domain.bounds().map(|(a, b)| (*a, *b)).expect("ordinal");
    let v = *problem.value(j).as_num().expect("ordinal");
    let mut s = Search { problem, j, current, log };
    let sup = if v == hi || s.test(v, hi) { hi } else { s.expand(Dir::Up, v, hi, cfg) };
    let inf = if v == lo || s.test(lo, sup) { lo } else { s.expand(Dir::Down, sup, lo, cfg) };
    ValueSet::intervals(domain, vec![Interval::closed(inf, sup)]).expect("inside the domain")
}

fn check_ordinal(problem: &ExplanationProblem<'_>, j: usize, cfg: &InflationConfig) -> Result<(Rational, Rational)> {
    problem.space().check_index(j)?;
    cfg.validate()?;
    problem
        .space()
        .domain(j)
        .bounds()
        .map(|(a, b)| (*a, *b))
        .ok_or_else(|| Error::TypeMismatch(format!("{} is not ordinal", problem.space().name(j))))
}

/// Widens `x_j = v_j` to `[inf, sup]`: the domain bounds are tried first,
/// then [`expand_sup`] and [`expand_inf`] search the δ-grid around `v_j`.
/// Any set already held by `current` for `j` is replaced.
pub fn inflate_ordinal(
    problem: &ExplanationProblem<'_>,
    j: usize,
    current: &Assignment,
    cfg: &InflationConfig,
) -> Result<ValueSet> {
    check_ordinal(problem, j, cfg)?;
    let current = current.with(j, problem.singleton(j));
    Ok(inflate_ordinal_logged(problem, j, &current, cfg, &mut Vec::new()))
}

/// Largest `v_j + kδ` (below the upper bound) such that `[inf, v_j + kδ]`
/// stays sufficient; the upper bound itself when `[inf, hi]` is.
pub fn expand_sup(
    problem: &ExplanationProblem<'_>,
    j: usize,
    inf: Rational,
    current: &Assignment,
    cfg: &InflationConfig,
) -> Result<Rational> {
    let (lo, hi) = check_ordinal(problem, j, cfg)?;
    let v = *problem.value(j).as_num().expect("ordinal");
    if inf < lo || inf > v {
        return Err(Error::InvalidValue("inf must lie between the lower bound and v_j".into()));
    }
    let mut log = Vec::new();
    let mut s = Search { problem, j, current, log: &mut log };
    Ok(if v == hi || s.test(inf, hi) { hi } else { s.expand(Dir::Up, inf, hi, cfg) })
}

/// Mirror of [`expand_sup`] towards the lower bound.
pub fn expand_inf(
    problem: &ExplanationProblem<'_>,
    j: usize,
    sup: Rational,
    current: &Assignment,
    cfg: &InflationConfig,
) -> Result<Rational> {
    let (lo, hi) = check_ordinal(problem, j, cfg)?;
    let v = *problem.value(j).as_num().expect("ordinal");
    if sup > hi || sup < v {
        return Err(Error::InvalidValue("sup must lie between v_j and the upper bound".into()));
    }
    let mut log = Vec::new();
    let mut s = Search { problem, j, current, log: &mut log };
    Ok(if v == lo || s.test(lo, sup) { lo } else { s.expand(Dir::Down, sup, lo, cfg) })
}
