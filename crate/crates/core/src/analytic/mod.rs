//! Closed-form expectations of functions of θ.

mod density;
mod ensemble;
mod general;
pub(crate) mod quad;
mod symmetric;

pub use density::{density_eval, DensityValue, FlipConditionedDensity};
pub use ensemble::{
    gaussian_cos_expectation, gaussian_moment, tau_mean_power_law, variance_gaussian_ensemble,
    variance_one_over_f, OneOverFEnsemble, VarianceMode, APPROX_MIN_LAMBDA,
};
pub use general::{char_fn_general, multi_source_char_fn, segment_transfer};
pub(crate) use general::mat_mul;
pub use symmetric::{
    approx_cos_expectation, conditional_char_fn_symmetric, conditional_moment, cos_expectation_symmetric,
    poisson_truncation, poisson_weights, variance_symmetric, ApproxRegime,
};
pub(crate) use symmetric::sin_expectation_positive;
