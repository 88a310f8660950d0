use thiserror::Error;

/// Errors raised by the enumeration and verification engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration budget exceeded: {count} items, cap {cap}")]
    BudgetExceeded { count: u128, cap: u128 },

    #[error("training inputs cover all of X with positive sampling mass; the off-training-set region is empty")]
    EmptyOts,

    #[error("no function in the prior's support is consistent with the dataset")]
    NoConsistentFunction,

    #[error("{learner} requires a binary output space, got |Y| = {y_size}")]
    NonBinaryOutput { learner: String, y_size: usize },

    #[error("dataset has {m} pairs but the operation requires at least {required}")]
    DatasetTooSmall { m: usize, required: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error(
        "sampling without replacement cannot draw {m} distinct inputs from a support of {x_size}"
    )]
    NoReplacementTooLong { m: usize, x_size: usize },

    #[error("training-set size must be odd for this check, got m = {m}")]
    OddMRequired { m: usize },

    #[error("loss function is not homogeneous; the f-average theorem's hypothesis fails (pass force=true to run anyway)")]
    NonHomogeneousLoss,

    #[error("selected-pair cost sums are not constant: found values {values:?}")]
    SumNotConstant { values: Vec<String> },

    #[error("no witness prior found; this contradicts the all-f average and indicates an internal inconsistency")]
    NoWitnessFound,

    #[error("horizon must be at least 1")]
    EmptyHorizon,

    #[error("need at least {required} payoff sequences, got {got}")]
    TooFewSequences { got: usize, required: usize },

    #[error("sequence {index} has length {len}, need at least {required}")]
    SequenceTooShort {
        index: usize,
        len: usize,
        required: usize,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown learner name {0:?}")]
    UnknownLearner(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
