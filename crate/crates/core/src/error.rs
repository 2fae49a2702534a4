use thiserror::Error;

pub type Result<T> = std::result::Result<T, SearchError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An objective or residual evaluated to NaN or infinity.
    #[error("non-finite value {value} at x = {abscissa}")]
    NonFinite { abscissa: f64, value: f64 },

    /// Root finding was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A derived quantity violated an invariant that the construction guarantees.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// The simulated trajectory never exposes the target within its horizon.
    #[error("target at radius {radius} on ray {angle} not exposed within the simulated horizon")]
    Horizon { radius: f64, angle: f64 },
}

impl SearchError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SearchError::Domain(msg.into())
    }
}
