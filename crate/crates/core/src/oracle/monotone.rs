//! Corner evaluation for monotonic classifiers.
//!
//! With nonnegative weights the classes reached over a product of sets range
//! exactly from the class at the componentwise minimum to the class at the
//! componentwise maximum (taken as a left limit when that maximum is an open
//! endpoint of a feature with positive weight).

use num_traits::Zero;

use crate::classifier::MonotonicClassifier;
use crate::domain::{ClassId, FeatureSpace};
use crate::error::{Error, Result};
use crate::oracle::Assignment;
use crate::valueset::ValueSet;

/// `(lowest, highest)` class reached over the box; features absent from
/// `sets` range over their whole domain.
pub(crate) fn class_range(
    mc: &MonotonicClassifier,
    space: &FeatureSpace,
    sets: &Assignment,
) -> (ClassId, ClassId) {
    let mut low = Vec::with_capacity(space.len());
    let mut high = Vec::with_capacity(space.len());
    let mut open_top = false;
    for j in 0..space.len() {
        let (lo, hi) = space.domain(j).bounds().expect("monotonic features are ordinal");
        match sets.get(j) {
            Some(ValueSet::Intervals(ivs)) => {
                let first = ivs.first().expect("nonempty");
                let last = ivs.last().expect("nonempty");
                low.push(first.lo);
                high.push(last.hi);
                if !last.hi_closed && !mc.weights[j].is_zero() {
                    open_top = true;
                }
            }
            _ => {
                low.push(*lo);
                high.push(*hi);
            }
        }
    }
    let bottom = mc.class_of_score(&mc.score(low));
    let top_score = mc.score(high);
    let top = if open_top { mc.class_below_score(&top_score) } else { mc.class_of_score(&top_score) };
    (bottom, top)
}

/// Decides whether every point of the box `a` (free features over their
/// domains) is classified `class`, by evaluating the two extreme corners.
pub fn monotone_box_check(
    mc: &MonotonicClassifier,
    space: &FeatureSpace,
    a: &Assignment,
    class: ClassId,
) -> Result<bool> {
    for (j, set) in a.iter() {
        space.check_index(j)?;
        match set {
            ValueSet::Intervals(ivs) if ivs.len() == 1 => {}
            ValueSet::Intervals(_) => {
                return Err(Error::InvalidAssignment(format!(
                    "feature {} has a multi-interval set; corner checks need a single interval",
                    space.name(j)
                )))
            }
            ValueSet::Labels(_) => {
                return Err(Error::TypeMismatch("label set on a monotonic model".into()))
            }
        }
    }
    let (bottom, top) = class_range(mc, space, a);
    Ok(bottom == class && top == class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::rational::Rational;
    use crate::valueset::Interval;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn m1() -> (MonotonicClassifier, FeatureSpace) {
        let d = Domain::continuous(0, 10).unwrap();
        (
            MonotonicClassifier::new(vec![r(1, 1), r(1, 1)], vec![r(12, 1)]),
            FeatureSpace::from_domains(vec![d.clone(), d]).unwrap(),
        )
    }

    fn boxed(space: &FeatureSpace, a: (Rational, Rational), b: (Rational, Rational)) -> Assignment {
        let mut asg = Assignment::new();
        asg.insert(0, ValueSet::intervals(space.domain(0), vec![Interval::closed(a.0, a.1)]).unwrap());
        asg.insert(1, ValueSet::intervals(space.domain(1), vec![Interval::closed(b.0, b.1)]).unwrap());
        asg
    }

    #[test]
    fn corner_below_threshold() {
        let (mc, space) = m1();
        let a = boxed(&space, (r(0, 1), r(13, 2)), (r(0, 1), r(5, 1)));
        assert!(monotone_box_check(&mc, &space, &a, 0).unwrap());
    }

    #[test]
    fn corner_reaching_threshold() {
        let (mc, space) = m1();
        let a = boxed(&space, (r(0, 1), r(7, 1)), (r(0, 1), r(5, 1)));
        assert!(!monotone_box_check(&mc, &space, &a, 0).unwrap());
    }

    #[test]
    fn degenerate_box() {
        let (mc, space) = m1();
        let a = boxed(&space, (r(3, 1), r(3, 1)), (r(5, 1), r(5, 1)));
        assert!(monotone_box_check(&mc, &space, &a, 0).unwrap());
    }

    #[test]
    fn multi_interval_rejected() {
        let (mc, space) = m1();
        let mut a = Assignment::new();
        a.insert(
            0,
            ValueSet::intervals(
                space.domain(0),
                vec![Interval::closed(r(0, 1), r(1, 1)), Interval::closed(r(2, 1), r(3, 1))],
            )
            .unwrap(),
        );
        assert!(monotone_box_check(&mc, &space, &a, 0).is_err());
    }

    #[test]
    fn open_top_uses_left_limit() {
        let (mc, space) = m1();
        // x1 in [0,7), x2 = 5: scores approach 12 but never reach it
        let mut a = Assignment::new();
        a.insert(0, ValueSet::intervals(space.domain(0), vec![Interval::new(r(0, 1), true, r(7, 1), false).unwrap()]).unwrap());
        a.insert(1, ValueSet::intervals(space.domain(1), vec![Interval::point(r(5, 1))]).unwrap());
        assert_eq!(class_range(&mc, &space, &a), (0, 0));
    }
}
