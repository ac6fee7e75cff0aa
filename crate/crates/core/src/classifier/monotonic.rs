use num_traits::Zero;

use crate::domain::{is_nonneg, ClassId, FeatureSpace, Point};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Linear-threshold classifier with nonnegative weights.
///
/// Predicts class index `#{t in thresholds : t <= w·x}`, which is
/// non-decreasing in every feature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicClassifier {
    pub weights: Vec<Rational>,
    pub thresholds: Vec<Rational>,
}

impl MonotonicClassifier {
    pub fn new(weights: Vec<Rational>, thresholds: Vec<Rational>) -> Self {
        MonotonicClassifier { weights, thresholds }
    }

    pub fn score(&self, values: impl IntoIterator<Item = Rational>) -> Rational {
        self.weights
            .iter()
            .zip(values)
            .fold(Rational::zero(), |acc, (w, x)| acc + w * x)
    }

    pub fn class_of_score(&self, score: &Rational) -> ClassId {
        self.thresholds.iter().take_while(|t| *t <= score).count()
    }

    /// Class attained just below `score`, i.e. the left limit of the step function.
    pub(crate) fn class_below_score(&self, score: &Rational) -> ClassId {
        self.thresholds.iter().take_while(|t| *t < score).count()
    }

    pub(crate) fn predict_point(&self, p: &Point) -> ClassId {
        let score = self.score(p.values().iter().map(|v| *v.as_num().expect("ordinal value")));
        self.class_of_score(&score)
    }

    pub(crate) fn validate(&self, space: &FeatureSpace, n_classes: usize) -> Result<()> {
        if !space.all_ordinal() {
            return Err(Error::InvalidModel(
                "monotonic classifiers need an all-ordinal feature space".into(),
            ));
        }
        if self.weights.len() != space.len() {
            return Err(Error::InvalidModel(format!(
                "expected {} weights, got {}",
                space.len(),
                self.weights.len()
            )));
        }
        if let Some(w) = self.weights.iter().find(|w| !is_nonneg(w)) {
            return Err(Error::InvalidModel(format!(
                "negative weight {}",
                format_rational(w)
            )));
        }
        if self.thresholds.len() + 1 != n_classes {
            return Err(Error::InvalidModel(format!(
                "{} classes need {} thresholds, got {}",
                n_classes,
                n_classes.saturating_sub(1),
                self.thresholds.len()
            )));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidModel("thresholds must be strictly increasing".into()));
        }
        Ok(())
    }
}
