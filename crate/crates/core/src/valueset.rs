//! Value sets `E_j` / `G_j`: label subsets or finite unions of disjoint intervals.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::domain::{Domain, OrdinalKind, Value};
use crate::error::{Error, Result};
use crate::rational::{format_rational, midpoint, parse_rational, Rational};

/// A nonempty interval with per-endpoint openness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl Interval {
    /// Returns `None` when the described interval is empty.
    pub fn new(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Option<Self> {
        let iv = Interval { lo, lo_closed, hi, hi_closed };
        (!iv.is_empty()).then_some(iv)
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "closed interval with lo > hi");
        Interval { lo, lo_closed: true, hi, hi_closed: true }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x, lo_closed: true, hi: x, hi_closed: true }
    }

    fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Greater => true,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (other.lo, other.lo_closed),
            Ordering::Greater => (self.lo, self.lo_closed),
            Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi, self.hi_closed),
            Ordering::Greater => (other.hi, other.hi_closed),
            Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    /// A point strictly representative of the interval: the midpoint, or the point itself.
    pub fn representative(&self) -> Rational {
        if self.is_point() {
            self.lo
        } else {
            midpoint(&self.lo, &self.hi)
        }
    }

    fn cmp_lower(&self, other: &Interval) -> Ordering {
        // a closed lower bound starts before an open one at the same value
        self.lo.cmp(&other.lo).then(other.lo_closed.cmp(&self.lo_closed))
    }

    fn cmp_upper(&self, other: &Interval) -> Ordering {
        self.hi.cmp(&other.hi).then(self.hi_closed.cmp(&other.hi_closed))
    }

    /// Whether `next` (starting no earlier than `self`) overlaps or touches `self`.
    fn joins(&self, next: &Interval) -> bool {
        match next.lo.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Greater => false,
        }
    }

    /// Snaps to the integer points inside, as a closed interval.
    fn to_integer_points(&self) -> Option<Interval> {
        let lo = if self.lo_closed { self.lo.ceil() } else { self.lo.floor() + 1 };
        let hi = if self.hi_closed { self.hi.floor() } else { self.hi.ceil() - 1 };
        (lo <= hi).then(|| Interval::closed(lo, hi))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        let bad = || Error::InvalidValue(format!("malformed interval {text:?}"));
        let lo_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => {
                let x = parse_rational(s)?;
                return Ok(Interval::point(x));
            }
        };
        let hi_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let body = &s[1..s.len() - 1];
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        Interval::new(parse_rational(a)?, lo_closed, parse_rational(b)?, hi_closed)
            .ok_or_else(|| Error::InvalidValue(format!("empty interval {text:?}")))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            format_rational(&self.lo),
            format_rational(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Sorts, merges overlapping/touching pieces and (for integer domains) snaps to integer points.
pub(crate) fn normalize_intervals(mut pieces: Vec<Interval>, kind: OrdinalKind) -> Vec<Interval> {
    if kind == OrdinalKind::Integer {
        pieces = pieces.iter().filter_map(Interval::to_integer_points).collect();
    }
    pieces.sort_by(|a, b| a.cmp_lower(b));
    let mut out: Vec<Interval> = Vec::with_capacity(pieces.len());
    for iv in pieces {
        if let Some(last) = out.last_mut() {
            let touches = match kind {
                OrdinalKind::Continuous => last.joins(&iv),
                OrdinalKind::Integer => iv.lo <= last.hi + 1,
            };
            if touches {
                if iv.cmp_upper(last) == Ordering::Greater {
                    last.hi = iv.hi;
                    last.hi_closed = iv.hi_closed;
                }
                continue;
            }
        }
        out.push(iv);
    }
    out
}

/// `E_j` or `G_j`: a nonempty subset of one feature's domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValueSet {
    Labels(BTreeSet<usize>),
    /// Disjoint, strictly ascending, nonempty intervals.
    Intervals(Vec<Interval>),
}

impl ValueSet {
    pub fn labels(domain: &Domain, labels: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = domain.cardinality().ok_or_else(|| {
            Error::TypeMismatch("label set over an ordinal domain".into())
        })?;
        let set: BTreeSet<usize> = labels.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidValue("empty label set".into()));
        }
        if let Some(bad) = set.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidValue(format!("label index {bad} out of range")));
        }
        Ok(ValueSet::Labels(set))
    }

    pub fn intervals(domain: &Domain, pieces: Vec<Interval>) -> Result<Self> {
        let Domain::Ordinal { lo, hi, kind } = domain else {
            return Err(Error::TypeMismatch("intervals over a categorical domain".into()));
        };
        for iv in &pieces {
            if iv.lo < *lo || iv.hi > *hi {
                return Err(Error::InvalidValue(format!(
                    "interval {iv} exceeds domain {domain}"
                )));
            }
        }
        let norm = normalize_intervals(pieces, *kind);
        if norm.is_empty() {
            return Err(Error::InvalidValue("empty interval set".into()));
        }
        Ok(ValueSet::Intervals(norm))
    }

    pub fn singleton(domain: &Domain, value: &Value) -> Result<Self> {
        match value {
            Value::Label(i) => ValueSet::labels(domain, [*i]),
            Value::Num(x) => ValueSet::intervals(domain, vec![Interval::point(*x)]),
        }
    }

    pub fn full(domain: &Domain) -> Self {
        match domain {
            Domain::Categorical { labels } => ValueSet::Labels((0..labels.len()).collect()),
            Domain::Ordinal { lo, hi, .. } => ValueSet::Intervals(vec![Interval::closed(*lo, *hi)]),
        }
    }

    pub fn contains(&self, value: &Value) -> Result<bool> {
        match (self, value) {
            (ValueSet::Labels(s), Value::Label(i)) => Ok(s.contains(i)),
            (ValueSet::Intervals(ivs), Value::Num(x)) => Ok(ivs.iter().any(|iv| iv.contains(x))),
            _ => Err(Error::TypeMismatch("value and set kinds differ".into())),
        }
    }

    /// `D_j \ self`, or `None` when `self` covers the whole domain.
    pub fn complement(&self, domain: &Domain) -> Option<ValueSet> {
        match (self, domain) {
            (ValueSet::Labels(s), Domain::Categorical { labels }) => {
                let rest: BTreeSet<usize> = (0..labels.len()).filter(|i| !s.contains(i)).collect();
                (!rest.is_empty()).then_some(ValueSet::Labels(rest))
            }
            (ValueSet::Intervals(ivs), Domain::Ordinal { lo, hi, kind }) => {
                let mut gaps = Vec::new();
                let (mut cur, mut cur_closed) = (*lo, true);
                for iv in ivs {
                    if let Some(g) = Interval::new(cur, cur_closed, iv.lo, !iv.lo_closed) {
                        gaps.push(g);
                    }
                    cur = iv.hi;
                    cur_closed = !iv.hi_closed;
                }
                if let Some(g) = Interval::new(cur, cur_closed, *hi, true) {
                    gaps.push(g);
                }
                let gaps = normalize_intervals(gaps, *kind);
                (!gaps.is_empty()).then_some(ValueSet::Intervals(gaps))
            }
            _ => panic!("value set and domain kinds differ"),
        }
    }

    pub fn intersect(&self, other: &ValueSet) -> Result<Option<ValueSet>> {
        match (self, other) {
            (ValueSet::Labels(a), ValueSet::Labels(b)) => {
                let s: BTreeSet<usize> = a.intersection(b).copied().collect();
                Ok((!s.is_empty()).then_some(ValueSet::Labels(s)))
            }
            (ValueSet::Intervals(a), ValueSet::Intervals(b)) => {
                let mut out = Vec::new();
                for x in a {
                    out.extend(b.iter().filter_map(|y| x.intersect(y)));
                }
                // pieces from two disjoint sorted lists are already disjoint
                let out = normalize_intervals(out, OrdinalKind::Continuous);
                Ok((!out.is_empty()).then_some(ValueSet::Intervals(out)))
            }
            _ => Err(Error::TypeMismatch("value set kinds differ".into())),
        }
    }

    pub fn is_disjoint(&self, other: &ValueSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_none())
    }

    pub fn union(&self, other: &ValueSet, domain: &Domain) -> Result<ValueSet> {
        match (self, other) {
            (ValueSet::Labels(a), ValueSet::Labels(b)) => {
                Ok(ValueSet::Labels(a.union(b).copied().collect()))
            }
            (ValueSet::Intervals(a), ValueSet::Intervals(b)) => {
                let kind = domain.kind().ok_or_else(|| {
                    Error::TypeMismatch("interval union over a categorical domain".into())
                })?;
                Ok(ValueSet::Intervals(normalize_intervals(
                    a.iter().chain(b).cloned().collect(),
                    kind,
                )))
            }
            _ => Err(Error::TypeMismatch("value set kinds differ".into())),
        }
    }

    pub fn is_subset_of(&self, other: &ValueSet) -> Result<bool> {
        Ok(match self.intersect(other)? {
            Some(common) => common == *self,
            None => false,
        })
    }

    pub fn is_full(&self, domain: &Domain) -> bool {
        self.complement(domain).is_none()
    }

    pub fn as_labels(&self) -> Option<&BTreeSet<usize>> {
        match self {
            ValueSet::Labels(s) => Some(s),
            ValueSet::Intervals(_) => None,
        }
    }

    pub fn as_intervals(&self) -> Option<&[Interval]> {
        match self {
            ValueSet::Intervals(v) => Some(v),
            ValueSet::Labels(_) => None,
        }
    }

    /// Number of labels or intervals in the set.
    pub fn piece_count(&self) -> usize {
        match self {
            ValueSet::Labels(s) => s.len(),
            ValueSet::Intervals(v) => v.len(),
        }
    }

    pub fn render(&self, domain: &Domain) -> String {
        match self {
            ValueSet::Labels(s) => {
                let labels = domain.labels().unwrap_or(&[]);
                let names: Vec<&str> = s
                    .iter()
                    .map(|&i| labels.get(i).map(String::as_str).unwrap_or("?"))
                    .collect();
                format!("{{{}}}", names.join(","))
            }
            ValueSet::Intervals(v) => v
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ∪ "),
        }
    }
}
