use thiserror::Error;

/// Errors raised while building fractals or evaluating quantities on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The IFS data fails one of the nested-fractal conditions. `condition`
    /// carries the condition number when one applies.
    #[error("invalid fractal{}: {reason}", condition.map(|c| format!(" (condition {c})")).unwrap_or_default())]
    InvalidFractal { condition: Option<u8>, reason: String },

    #[error("invalid similitude: {0}")]
    InvalidSimilitude(String),

    #[error("budget exceeded: {required:.3e} oriented edges required, budget is {budget}")]
    BudgetExceeded { required: f64, budget: u64 },

    #[error("invalid word: letter {letter} outside 1..={k}")]
    InvalidWord { letter: usize, k: usize },

    #[error("s lies within {distance:.3e} of a pole of the zeta function")]
    PoleProximity { distance: f64 },

    #[error("series diverges: Re s = {re_s} is not above the abscissa {abscissa}")]
    DivergentSeries { re_s: f64, abscissa: f64 },

    #[error("function is missing values: {0}")]
    IncompleteFunction(String),

    #[error("singular interior block in network reduction")]
    SingularNetwork,

    #[error("invalid conductance: {0}")]
    InvalidConductance(String),

    #[error("eigenform iteration did not converge after {iterations} steps (last change {last_change:.3e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("form is not an eigenform (residual {residual:.3e})")]
    NotAnEigenform { residual: f64 },

    #[error("renormalization eigenvalue {0} outside (0, 1)")]
    InvalidEigenvalue(f64),

    #[error("degenerate rhombus: theta = {0}")]
    DegenerateRhombus(f64),

    #[error("vertex {target} unreachable from {source_id}")]
    Unreachable { source_id: usize, target: usize },

    #[error("point {0:?} is not a vertex up to the requested level")]
    NotAVertex(Vec<f64>),

    #[error("invalid projection: {0}")]
    InvalidProjection(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
