use thiserror::Error;

use crate::duality::ConstructionReport;
use crate::explain::FeatureSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("dimension mismatch: expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("feature index {0} out of range")]
    FeatureOutOfRange(usize),

    #[error("classifier is constant over its feature space")]
    ConstantClassifier,

    #[error("instance is predicted as class {predicted}, not the declared class {declared}")]
    Misprediction { predicted: String, declared: String },

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("feature set {0} is not sufficient for the prediction")]
    NotSufficient(FeatureSet),

    #[error("feature set {0} admits no counterexample")]
    NotContrastive(FeatureSet),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("enumeration budget of {budget} oracle calls exceeded")]
    BudgetExceeded {
        budget: u64,
        partial_axps: Vec<FeatureSet>,
        partial_cxps: Vec<FeatureSet>,
    },

    #[error("dual construction rejected: {}", .0.reason)]
    ConstructionRejected(Box<ConstructionReport>),

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("model file: {0}")]
    ModelFile(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error stems from user-supplied input rather than an internal fault.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
