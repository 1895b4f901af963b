use thiserror::Error;

pub type Result<T> = std::result::Result<T, WalkError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("empty probability vector")]
    EmptyInput,
    #[error("negative probability p_{index} = {value}")]
    NegativeProbability { index: usize, value: String },
    #[error("probabilities sum to {sum}, not 1")]
    SumNotOne { sum: String },
    #[error("cannot parse `{input}` as an exact rational: {reason}")]
    InvalidRational { input: String, reason: String },

    #[error("division by (x - 1) left a nonzero remainder {remainder}")]
    NonzeroRemainder { remainder: String },
    #[error("root iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("root with |alpha| = {modulus:e} is numerically zero")]
    ZeroRoot { modulus: f64 },
    #[error("polynomial has degree {degree}; at least 1 is required")]
    DegreeTooSmall { degree: usize },

    #[error("assumption A4 violated: roots closer than {separation:e}")]
    A4Violated { separation: f64 },
    #[error("mean jump E(Y) is zero (p_0 = 1)")]
    ZeroMeanJump,
    #[error("psi has no roots for p_0 = p_1 = 1/2")]
    NoPsiRoots,
    #[error("asymptotic formulas need n >= 1")]
    NotAsymptotic,
    #[error("weight {weight} is a nonnegative integer")]
    IntegerWeight { weight: f64 },
    #[error("series reciprocal needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("Monte Carlo estimate needs at least 2 paths, got {paths}")]
    TooFewPaths { paths: u64 },
}

impl WalkError {
    /// Stable identifier for scripts and reports.
    pub fn code(&self) -> &'static str {
        match self {
            WalkError::EmptyInput => "EMPTY_INPUT",
            WalkError::NegativeProbability { .. } => "NEGATIVE_PROBABILITY",
            WalkError::SumNotOne { .. } => "SUM_NOT_ONE",
            WalkError::InvalidRational { .. } => "INVALID_RATIONAL",
            WalkError::NonzeroRemainder { .. } => "NONZERO_REMAINDER",
            WalkError::NoConvergence { .. } => "NO_CONVERGENCE",
            WalkError::ZeroRoot { .. } => "ZERO_ROOT",
            WalkError::DegreeTooSmall { .. } => "DEGREE_TOO_SMALL",
            WalkError::A4Violated { .. } => "A4_VIOLATED",
            WalkError::ZeroMeanJump => "ZERO_MEAN_JUMP",
            WalkError::NoPsiRoots => "NO_PSI_ROOTS",
            WalkError::NotAsymptotic => "NOT_ASYMPTOTIC",
            WalkError::IntegerWeight { .. } => "INTEGER_WEIGHT",
            WalkError::ZeroConstantTerm => "ZERO_CONSTANT_TERM",
            WalkError::TooFewPaths { .. } => "TOO_FEW_PATHS",
        }
    }
}
