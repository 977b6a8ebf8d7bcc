use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what}: {requested} elements requested, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        budget: u128,
    },

    #[error("max_len {max_len} exceeds the cap {cap}")]
    LengthCap { max_len: usize, cap: usize },

    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("operation requires an isometric action")]
    NonIsometric,

    #[error("net has no points")]
    EmptyNet,

    #[error("not an r-path: step {step} has warped length {length} >= r = {r}")]
    NotRPath { step: usize, length: f64, r: f64 },

    #[error("scale condition violated at step {step}: {candidates} jump candidates")]
    ScaleCondition { step: usize, candidates: usize },

    #[error("t = {t} does not exceed the jump threshold 2r/delta(2r) = {required}")]
    Threshold { t: f64, required: f64 },

    #[error("invalid homotopy move: {0}")]
    HomotopyMove(String),

    #[error("cannot discretize return path: {0}")]
    Discretization(String),

    #[error("loop does not close at this resolution (residual {residual})")]
    WindingResidual { residual: f64 },

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("graph too large for {what}: {n} vertices, limit {max}")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("eigensolver did not converge after {iterations} iterations (estimate {estimate}, residual {residual})")]
    NonConvergence {
        estimate: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("spectral gap {0} outside [0, 2]")]
    GapOutOfRange(f64),
}

impl Error {
    /// Stable machine-readable code for error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::LengthCap { .. } => "length_cap",
            Error::SpaceMismatch { .. } => "space_mismatch",
            Error::InvalidPoint(_) => "invalid_point",
            Error::InvalidInput(_) => "invalid_input",
            Error::Validation(_) => "validation",
            Error::NonIsometric => "non_isometric",
            Error::EmptyNet => "empty_net",
            Error::NotRPath { .. } => "not_r_path",
            Error::ScaleCondition { .. } => "scale_condition",
            Error::Threshold { .. } => "threshold",
            Error::HomotopyMove(_) => "homotopy_move",
            Error::Discretization(_) => "discretization",
            Error::WindingResidual { .. } => "winding_residual",
            Error::IsolatedVertex(_) => "isolated_vertex",
            Error::TooLarge { .. } => "too_large",
            Error::NonConvergence { .. } => "non_convergence",
            Error::GapOutOfRange(_) => "gap_out_of_range",
        }
    }

    /// Name of the module that raises this kind of error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Parse(_) | Error::LengthCap { .. } => "groups",
            Error::BudgetExceeded { .. } => "groups",
            Error::SpaceMismatch { .. } | Error::InvalidPoint(_) | Error::EmptyNet => "spaces",
            Error::InvalidInput(_) => "input",
            Error::Validation(_) => "actions",
            Error::NonIsometric => "warped",
            Error::NotRPath { .. }
            | Error::ScaleCondition { .. }
            | Error::Threshold { .. }
            | Error::HomotopyMove(_)
            | Error::Discretization(_)
            | Error::WindingResidual { .. } => "coarse",
            Error::IsolatedVertex(_)
            | Error::TooLarge { .. }
            | Error::NonConvergence { .. }
            | Error::GapOutOfRange(_) => "graphs",
        }
    }
}
