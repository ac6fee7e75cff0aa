//! Feature domains, points and instances.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Index into a model's ordered class list.
pub type ClassId = usize;

/// A feature value: a categorical label (by index into its domain) or an ordinal number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Label(usize),
    Num(Rational),
}

impl Value {
    pub fn as_label(&self) -> Option<usize> {
        match self {
            Value::Label(i) => Some(*i),
            Value::Num(_) => None,
        }
    }

    pub fn as_num(&self) -> Option<&Rational> {
        match self {
            Value::Num(x) => Some(x),
            Value::Label(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrdinalKind {
    Continuous,
    Integer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Finite unordered label set; declaration order is the default probe order.
    Categorical { labels: Vec<String> },
    /// Bounded ordered range `[lo, hi]`.
    Ordinal {
        lo: Rational,
        hi: Rational,
        kind: OrdinalKind,
    },
}

impl Domain {
    pub fn categorical<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::InvalidDomain(
                "a categorical domain needs at least two labels".into(),
            ));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidDomain(format!("duplicate label {l:?}")));
            }
        }
        Ok(Domain::Categorical { labels })
    }

    pub fn ordinal(lo: Rational, hi: Rational, kind: OrdinalKind) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidDomain(format!(
                "ordinal bounds must satisfy lo < hi, got [{}, {}]",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        if kind == OrdinalKind::Integer && !(lo.is_integer() && hi.is_integer()) {
            return Err(Error::InvalidDomain(
                "integer domains need integer bounds".into(),
            ));
        }
        Ok(Domain::Ordinal { lo, hi, kind })
    }

    pub fn continuous(lo: i64, hi: i64) -> Result<Self> {
        Domain::ordinal(Rational::from_integer(lo), Rational::from_integer(hi), OrdinalKind::Continuous)
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self, Domain::Categorical { .. })
    }

    pub fn labels(&self) -> Option<&[String]> {
        match self {
            Domain::Categorical { labels } => Some(labels),
            Domain::Ordinal { .. } => None,
        }
    }

    pub fn bounds(&self) -> Option<(&Rational, &Rational)> {
        match self {
            Domain::Ordinal { lo, hi, .. } => Some((lo, hi)),
            Domain::Categorical { .. } => None,
        }
    }

    pub fn kind(&self) -> Option<OrdinalKind> {
        match self {
            Domain::Ordinal { kind, .. } => Some(*kind),
            Domain::Categorical { .. } => None,
        }
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels()?.iter().position(|l| l == label)
    }

    pub fn contains(&self, value: &Value) -> Result<bool> {
        match (self, value) {
            (Domain::Categorical { labels }, Value::Label(i)) => Ok(*i < labels.len()),
            (Domain::Ordinal { lo, hi, kind }, Value::Num(x)) => Ok(lo <= x
                && x <= hi
                && (*kind == OrdinalKind::Continuous || x.is_integer())),
            _ => Err(Error::TypeMismatch(
                "label used with an ordinal domain or number with a categorical one".into(),
            )),
        }
    }

    /// Parses a textual value: a label name for categorical domains, a number otherwise.
    pub fn parse_value(&self, text: &str) -> Result<Value> {
        let value = match self {
            Domain::Categorical { labels } => {
                let text = text.trim();
                Value::Label(labels.iter().position(|l| l == text).ok_or_else(|| {
                    Error::InvalidValue(format!("unknown label {text:?}"))
                })?)
            }
            Domain::Ordinal { .. } => Value::Num(parse_rational(text)?),
        };
        if !self.contains(&value)? {
            return Err(Error::InvalidValue(format!("{text:?} is outside its domain")));
        }
        Ok(value)
    }

    pub fn format_value(&self, value: &Value) -> String {
        match (self, value) {
            (Domain::Categorical { labels }, Value::Label(i)) => {
                labels.get(*i).cloned().unwrap_or_else(|| format!("#{i}"))
            }
            (_, Value::Num(x)) => format_rational(x),
            (_, Value::Label(i)) => format!("#{i}"),
        }
    }

    /// Number of distinct values for categorical domains.
    pub fn cardinality(&self) -> Option<usize> {
        self.labels().map(<[String]>::len)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Categorical { labels } => write!(f, "{{{}}}", labels.join(",")),
            Domain::Ordinal { lo, hi, kind } => {
                let tag = match kind {
                    OrdinalKind::Continuous => "",
                    OrdinalKind::Integer => " (integer)",
                };
                write!(f, "[{},{}]{tag}", format_rational(lo), format_rational(hi))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feature {
    pub name: String,
    pub domain: Domain,
}

/// The ordered features `1..m` together with their domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureSpace {
    features: Vec<Feature>,
}

impl FeatureSpace {
    pub fn new(features: Vec<Feature>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidDomain("feature space needs at least one feature".into()));
        }
        for (i, f) in features.iter().enumerate() {
            if features[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::InvalidDomain(format!("duplicate feature name {:?}", f.name)));
            }
        }
        Ok(FeatureSpace { features })
    }

    /// Builds a space with generated names `x1..xm`.
    pub fn from_domains(domains: Vec<Domain>) -> Result<Self> {
        FeatureSpace::new(
            domains
                .into_iter()
                .enumerate()
                .map(|(i, domain)| Feature { name: format!("x{}", i + 1), domain })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn domain(&self, j: usize) -> &Domain {
        &self.features[j].domain
    }

    pub fn name(&self, j: usize) -> &str {
        &self.features[j].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    pub fn check_index(&self, j: usize) -> Result<()> {
        if j < self.len() {
            Ok(())
        } else {
            Err(Error::FeatureOutOfRange(j))
        }
    }

    pub fn all_ordinal(&self) -> bool {
        self.features.iter().all(|f| !f.domain.is_categorical())
    }

    pub fn all_categorical(&self) -> bool {
        self.features.iter().all(|f| f.domain.is_categorical())
    }

    /// Parses one textual value per feature.
    pub fn parse_point<S: AsRef<str>>(&self, fields: &[S]) -> Result<Point> {
        if fields.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: fields.len() });
        }
        let values = fields
            .iter()
            .zip(&self.features)
            .map(|(text, f)| f.domain.parse_value(text.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Point::new_unchecked(values))
    }

    pub fn format_point(&self, p: &Point) -> Vec<String> {
        p.values()
            .iter()
            .zip(&self.features)
            .map(|(v, f)| f.domain.format_value(v))
            .collect()
    }
}

/// A point `x` (or instance values `v`) in feature space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point(Vec<Value>);

impl Point {
    pub fn new(space: &FeatureSpace, values: Vec<Value>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), got: values.len() });
        }
        for (j, v) in values.iter().enumerate() {
            if !space.domain(j).contains(v)? {
                return Err(Error::InvalidValue(format!(
                    "value for feature {} is outside its domain",
                    space.name(j)
                )));
            }
        }
        Ok(Point(values))
    }

    pub(crate) fn new_unchecked(values: Vec<Value>) -> Self {
        Point(values)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn get(&self, j: usize) -> &Value {
        &self.0[j]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A concrete instance `(v, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub point: Point,
    pub class: ClassId,
}

pub(crate) fn is_nonneg(x: &Rational) -> bool {
    !x.is_negative()
}
