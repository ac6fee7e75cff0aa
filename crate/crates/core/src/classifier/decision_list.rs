use crate::domain::{ClassId, FeatureSpace, Point};
use crate::error::{Error, Result};
use crate::valueset::ValueSet;

/// `x_j ∈ S`; an equality test is the singleton case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub feature: usize,
    pub set: ValueSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub literals: Vec<Literal>,
    pub class: ClassId,
}

impl Rule {
    pub fn matches(&self, p: &Point) -> bool {
        self.literals
            .iter()
            .all(|lit| lit.set.contains(p.get(lit.feature)).unwrap_or(false))
    }
}

/// Ordered rules; the first matching rule fires, otherwise the default class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionList {
    pub rules: Vec<Rule>,
    pub default: ClassId,
}

impl DecisionList {
    pub(crate) fn predict_point(&self, p: &Point) -> ClassId {
        self.rules
            .iter()
            .find(|r| r.matches(p))
            .map_or(self.default, |r| r.class)
    }

    pub(crate) fn validate(&self, space: &FeatureSpace, n_classes: usize) -> Result<()> {
        if self.default >= n_classes {
            return Err(Error::InvalidModel(format!("default class {} out of range", self.default)));
        }
        for (k, rule) in self.rules.iter().enumerate() {
            if rule.class >= n_classes {
                return Err(Error::InvalidModel(format!("rule {k}: class out of range")));
            }
            for lit in &rule.literals {
                space.check_index(lit.feature)?;
                let domain = space.domain(lit.feature);
                let full = ValueSet::full(domain);
                if !lit.set.is_subset_of(&full).map_err(|_| {
                    Error::InvalidModel(format!(
                        "rule {k}: literal kind does not match feature {}",
                        space.name(lit.feature)
                    ))
                })? {
                    return Err(Error::InvalidModel(format!(
                        "rule {k}: literal set exceeds the domain of {}",
                        space.name(lit.feature)
                    )));
                }
            }
        }
        Ok(())
    }
}
