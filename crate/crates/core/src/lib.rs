//! Expectations of time-integrated two-level random telegraph noise.
//!
//! A telegraph source switches its derivative `Y(t)` between `+Δ` and `-Δ`
//! with exponentially distributed dwell times. This crate evaluates
//! expectations of functions of the accumulated parameter
//! `θ = ∫₀ᵗ Y(s) ds`:
//!
//! - [`analytic`]: closed-form characteristic functions, flip-conditioned
//!   densities and moments, Gaussian and 1/f ensembles.
//! - [`monte_carlo`]: an event-driven path sampler with reproducible,
//!   parallel estimators. It serves as the independent oracle for every
//!   closed form.
//! - [`pulse`]: the waiting and sign-flip suppression control strategies.
//! - [`qubit`]: two-qubit Pauli-Z error probabilities for the dephasing
//!   channel `exp(iθ(Z⊗I + I⊗Z))`.
//! - [`special`]: even kernels, spherical Bessel functions and Carlitz
//!   Bessel polynomials.
//!
//! ```
//! use telegraph::{analytic, EvaluationPoint, TelegraphSource};
//!
//! let source = TelegraphSource::symmetric(1.0, 1.0).unwrap();
//! let point = EvaluationPoint::new(1.0, 1.0).unwrap();
//! let value = analytic::cos_expectation_symmetric(&source, &point).unwrap();
//! assert!((value - 2.0 / std::f64::consts::E).abs() < 1e-12);
//! ```

pub mod analytic;
mod error;
pub mod monte_carlo;
pub mod pulse;
pub mod qubit;
pub mod special;
mod types;

pub use error::{Error, Result};
pub use types::{ComplexValue, EvaluationPoint, Start, State, TelegraphSource};
