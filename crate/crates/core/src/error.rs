use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report.
///
/// Variants are grouped by how a front end should react: input errors,
/// violations of the standing hypotheses (commode, nondegenerate,
/// sub-diagram), and exhausted computation budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("negative exponent at byte {pos} is not allowed here")]
    NegativeExponent { pos: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("wrong mode: {0}")]
    WrongMode(String),
    #[error("zero polynomial: {0}")]
    ZeroPolynomial(String),
    #[error("Newton polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("not commode: {0}")]
    NotCommode(String),
    #[error("degenerate with respect to the Newton polyhedron: {0}")]
    Degenerate(String),
    #[error("non-isolated critical points: {0}")]
    NonIsolated(String),
    #[error("deformation is not sub-diagram: {0}")]
    NotSubdiagram(String),
    #[error("weight watchdog tripped: {0}")]
    Watchdog(String),
    #[error("gauge normalization failed: {0}")]
    Gauge(String),
    #[error("step budget of {0} reductions exceeded")]
    BudgetExceeded(u64),
    #[error("unavailable: {0}")]
    Unavailable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable { .. } => "unknown_variable",
            Error::NegativeExponent { .. } => "negative_exponent",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::WrongMode(_) => "wrong_mode",
            Error::ZeroPolynomial(_) => "zero_polynomial",
            Error::NotFullDimensional => "not_full_dimensional",
            Error::NotCommode(_) => "not_commode",
            Error::Degenerate(_) => "degenerate",
            Error::NonIsolated(_) => "non_isolated",
            Error::NotSubdiagram(_) => "not_subdiagram",
            Error::Watchdog(_) => "watchdog",
            Error::Gauge(_) => "gauge",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::Unavailable(_) => "unavailable",
            Error::Invalid(_) => "invalid_input",
        }
    }

    /// True when the input breaks one of the standing hypotheses
    /// (commode, nondegenerate, isolated singularities, sub-diagram).
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::NotFullDimensional
                | Error::NotCommode(_)
                | Error::Degenerate(_)
                | Error::NonIsolated(_)
                | Error::NotSubdiagram(_)
                | Error::Watchdog(_)
                | Error::Gauge(_)
                | Error::ZeroPolynomial(_)
        )
    }
}
