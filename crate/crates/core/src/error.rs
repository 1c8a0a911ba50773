use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "rejection sampling infeasible: P(flips = {flips}) = {probability:.3e} is below {threshold:.0e}; \
         integrate the flip-conditioned density by quadrature instead"
    )]
    InfeasibleRejection {
        flips: u32,
        probability: f64,
        threshold: f64,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
