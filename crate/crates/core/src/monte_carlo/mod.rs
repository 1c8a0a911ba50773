//! Exact-in-distribution path sampling and the estimators built on it.

mod estimators;
mod path;
mod stats;

pub use estimators::{
    estimate_char_fn, estimate_conditional, estimate_conditional_with, estimate_ensemble_variance,
    estimate_expectation, estimate_multi_source, estimate_schedule, estimate_variance, theta_histogram,
    EstimatorResult, McConfig, ThetaHistogram, VarianceEstimate, DEFAULT_WORKERS, MIN_ACCEPTANCE,
};
pub use path::{sample_path, sample_path_from, PathSample};
pub use stats::Moments;
