use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown loss `{0}`")]
    UnknownLoss(String),

    #[error("cost parameter must lie in (0, 1), got {0}")]
    CostParamOutOfRange(f64),

    #[error("cost parameter is only accepted by the cost-weighted loss")]
    UnexpectedCostParam,

    #[error("cost-weighted loss requires a cost parameter")]
    MissingCostParam,

    #[error("prediction {value} lies outside the loss domain {domain}")]
    OutOfDomain { value: f64, domain: String },

    #[error("density ratio must be a finite nonnegative number, got {0}")]
    InvalidRatio(f64),

    #[error("loss `{0}` has no closed-form expressions")]
    NoClosedForm(String),

    #[error("probability vector is empty")]
    EmptyDistribution,

    #[error("negative probability {value} at index {index}")]
    NegativeMass { index: usize, value: f64 },

    #[error("non-finite probability at index {0}")]
    NonFiniteMass(usize),

    #[error("total mass {0} is too small to normalize")]
    ZeroMass(f64),

    #[error("distributions have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("reference distribution has zero mass at atom {0}; full support is required")]
    ZeroReferenceMass(usize),

    #[error("min_mass {min_mass} must be in [0, 1/n) for n = {n}")]
    MinMassTooLarge { min_mass: f64, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("search did not converge after {iterations} refinements (best value {best_value} at {best_arg})")]
    NotConverged {
        iterations: usize,
        best_arg: f64,
        best_value: f64,
    },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("fit needs at least 4 sample points with 3 distinct values")]
    InsufficientSamples,

    #[error("discriminator class has no candidates")]
    EmptyCandidateSet,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
