//! Characteristic function of the general telegraph (`τ₊ ≠ τ₋`).
//!
//! For a positive start with `λ₁ = t/τ₊`, `λ₀ = t/τ₋`, `s = (λ₀+λ₁)/2` and
//! `z = mΔt`,
//!
//! ```text
//! E[exp(imθ)] = e^{-s} (cosh u + (s + iz) sinh(u)/u),
//! u² = s² - z² + iz(λ₀ - λ₁).
//! ```
//!
//! The state-resolved version of the same expression is the 2×2 matrix
//! `M_ij = E[exp(imθ) 1{end = j} | start = i]`, which composes by matrix
//! multiplication across contiguous segments.

use num_complex::Complex64;

use crate::special::{kernel_cosh_even_complex, kernel_sinch_even_complex};
use crate::{ComplexValue, EvaluationPoint, Start, TelegraphSource};

/// `(e^{-s} cosh u, e^{-s} sinh(u)/u)` given `s` and `w = u² - s²`.
fn damped_kernels(s: f64, w: Complex64) -> (Complex64, Complex64) {
    let u2 = w + s * s;
    if u2.norm() <= 1.0 {
        let damp = (-s).exp();
        (
            damp * kernel_cosh_even_complex(u2),
            damp * kernel_sinch_even_complex(u2),
        )
    } else {
        let u = u2.sqrt();
        // u - s without cancellation.
        let ep = (w / (u + s)).exp();
        let em = (-u - s).exp();
        (0.5 * (ep + em), 0.5 * (ep - em) / u)
    }
}

/// Rates over one segment: `(λ₁, λ₀, z)` for the positive-state exit count,
/// negative-state exit count and `mΔt`.
fn segment_parameters(source: &TelegraphSource, m: f64, t: f64) -> (f64, f64, f64) {
    (source.lambda_plus(t), source.lambda_minus(t), m * source.theta_c(t))
}

fn positive_start(lambda_plus: f64, lambda_minus: f64, z: f64) -> Complex64 {
    let s = 0.5 * (lambda_plus + lambda_minus);
    let w = Complex64::new(-z * z, z * (lambda_minus - lambda_plus));
    let (c, sh) = damped_kernels(s, w);
    c + Complex64::new(s, z) * sh
}

/// `E[exp(imθ)]` under the given start policy.
///
/// A negative start is the conjugate of the positive-start value for the
/// mirrored source, `E[e^{imθ}]₋ = conj(v(m, τ₋ ↔ τ₊))`; `Start::Mixed`
/// weights the two by `p_plus`.
pub fn char_fn_general(source: &TelegraphSource, point: &EvaluationPoint, start: Start) -> ComplexValue {
    if point.t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let (lp, lm, z) = segment_parameters(source, point.m, point.t);
    let p = source.start_probability(start);
    let mut value = Complex64::new(0.0, 0.0);
    if p > 0.0 {
        value += p * positive_start(lp, lm, z);
    }
    if p < 1.0 {
        value += (1.0 - p) * positive_start(lm, lp, z).conj();
    }
    value
}

/// Product of independent per-source characteristic functions.
pub fn multi_source_char_fn(sources: &[(TelegraphSource, Start)], point: &EvaluationPoint) -> ComplexValue {
    sources
        .iter()
        .map(|(source, start)| char_fn_general(source, point, *start))
        .fold(Complex64::new(1.0, 0.0), |acc, v| acc * v)
}

/// State-resolved transfer matrix over one segment of length `duration`.
///
/// Index 0 is the positive state. The row sums give the start-conditioned
/// characteristic functions; with `m = 0` the matrix is the transition
/// matrix of the two-state chain.
pub fn segment_transfer(source: &TelegraphSource, m: f64, duration: f64) -> [[ComplexValue; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if duration == 0.0 {
        return [[one, zero], [zero, one]];
    }
    let (lp, lm, z) = segment_parameters(source, m, duration);
    let s = 0.5 * (lp + lm);
    let w = Complex64::new(-z * z, z * (lm - lp));
    let (c, sh) = damped_kernels(s, w);
    // B = A·t + s·I, with B² = u² I.
    let a = Complex64::new(0.5 * (lm - lp), z);
    [
        [c + sh * a, sh * lp],
        [sh * lm, c - sh * a],
    ]
}

pub(crate) fn mat_mul(
    x: &[[ComplexValue; 2]; 2],
    y: &[[ComplexValue; 2]; 2],
) -> [[ComplexValue; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}
