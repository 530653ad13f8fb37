use thiserror::Error;

/// Errors raised by constructions, estimators and audits.
#[derive(Debug, Error)]
pub enum GeoError {
    /// An input lies outside the domain of a formula or descriptor.
    #[error("domain error: {0}")]
    Domain(String),
    /// A descriptor or group action cannot be built as requested.
    #[error("construction error: {0}")]
    Construction(String),
    /// The construction is valid mathematically but not implemented here.
    #[error("unsupported construction: {0}")]
    Unsupported(String),
    /// A net would exceed the configured point budget.
    #[error("capacity error: epsilon {epsilon} needs at least {required} points, budget is {budget}")]
    Capacity {
        epsilon: f64,
        required: usize,
        budget: usize,
    },
    /// An operation was called on data that violates its precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// ODE integration ran into a focal singularity.
    #[error("singularity: |lambda| blew up at r = {at}")]
    Singularity { at: f64 },
    /// Bisection bracket does not change sign.
    #[error("bracket error: {0}")]
    Bracket(String),
    #[error("unknown example `{id}`; catalogue: {catalogue}")]
    UnknownExample { id: String, catalogue: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GeoError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(GeoError::Domain(msg.into()))
}
