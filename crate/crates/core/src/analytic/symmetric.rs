//! Closed forms for the symmetric telegraph (`τ₊ = τ₋ = τ_c`).

use serde::{Deserialize, Serialize};

use crate::special::{kernel_cosh_even, kernel_sinch_even, spherical_bessel_j_normalized};
use crate::{EvaluationPoint, Result, TelegraphSource};

/// `(e^{-λ} cosh√x, e^{-λ} sinh√x / √x)` with `x = λ² - z²`.
///
/// For `x > 1` the exponentials are combined as `e^{√x-λ}` and `e^{-√x-λ}`,
/// with `√x - λ = -z²/(√x + λ)` formed without cancellation, so nothing
/// overflows however large `λ` gets.
pub(crate) fn damped_kernels(lambda: f64, z: f64) -> (f64, f64) {
    let z = z.abs();
    let x2 = (lambda - z) * (lambda + z);
    if x2 <= 1.0 {
        let damp = (-lambda).exp();
        (damp * kernel_cosh_even(x2), damp * kernel_sinch_even(x2))
    } else {
        let s = x2.sqrt();
        let ep = (-z * z / (s + lambda)).exp();
        let em = (-s - lambda).exp();
        (0.5 * (ep + em), 0.5 * (ep - em) / s)
    }
}

/// `E[cos(mθ)]` for a symmetric source; independent of the start state.
pub fn cos_expectation_symmetric(source: &TelegraphSource, point: &EvaluationPoint) -> Result<f64> {
    source.require_symmetric()?;
    if point.t == 0.0 || point.m == 0.0 {
        return Ok(1.0);
    }
    let lambda = source.lambda_plus(point.t);
    let (c, s) = damped_kernels(lambda, point.z(source));
    Ok((c + lambda * s).clamp(-1.0, 1.0))
}

/// `E[sin(mθ)]` for a symmetric source that starts in the positive state.
pub(crate) fn sin_expectation_positive(lambda: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let (_, s) = damped_kernels(lambda, z);
    z * s
}

/// Expected flip count beyond which the Poisson tail is negligible (< 1e-12
/// for every λ the crate is exercised with).
pub fn poisson_truncation(lambda: f64) -> usize {
    (lambda + 12.0 * lambda.sqrt() + 30.0).ceil() as usize
}

/// Poisson probabilities `P(f) = e^{-λ} λᶠ / f!` for `f = 0..=max`.
pub fn poisson_weights(lambda: f64, max: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(max + 1);
    // Work in logs so large λ neither underflows e^{-λ} nor overflows λᶠ.
    let ln_lambda = lambda.ln();
    let mut ln_p = -lambda;
    for f in 0..=max {
        if f > 0 {
            ln_p += ln_lambda - (f as f64).ln();
        }
        w.push(if lambda == 0.0 { if f == 0 { 1.0 } else { 0.0 } } else { ln_p.exp() });
    }
    w
}

fn odd_representative(f: u32) -> u32 {
    if f > 0 && f % 2 == 0 {
        f - 1
    } else {
        f
    }
}

/// `E[exp(imθ) | f flips]` for the symmetric telegraph with an equiprobable
/// start. Zero flips give `cos(mθ_c)`; an even count `f > 0` shares the
/// density of `f - 1`.
pub fn conditional_char_fn_symmetric(theta_c: f64, m: f64, f: u32) -> f64 {
    let z = m * theta_c;
    match odd_representative(f) {
        0 => z.cos(),
        odd => spherical_bessel_j_normalized((odd - 1) / 2, z),
    }
}

/// `E[θ^m_exp | f flips]` for the symmetric telegraph with an equiprobable
/// start: `θ_c^m · 1·3⋯(m-1) / ((f+2)(f+4)⋯(f+m))` for odd `f`.
/// Odd exponents vanish by symmetry.
pub fn conditional_moment(theta_c: f64, m_exp: u32, f: u32) -> f64 {
    if m_exp % 2 == 1 {
        return 0.0;
    }
    let scale = theta_c.powi(m_exp as i32);
    let f = odd_representative(f);
    if f == 0 {
        return scale;
    }
    (1..=m_exp / 2).fold(scale, |acc, i| {
        acc * (2 * i - 1) as f64 / (f + 2 * i) as f64
    })
}

/// `E[θ²] = θ_c² (1/λ + (e^{-2λ} - 1)/(2λ²))` for a symmetric source.
pub fn variance_symmetric(source: &TelegraphSource, t: f64) -> Result<f64> {
    source.require_symmetric()?;
    let theta_c = source.theta_c(t);
    Ok(theta_c * theta_c * variance_shape(source.lambda_plus(t)))
}

/// `σ²/θ_c²` as a function of λ: `(x + e^{-x} - 1)·2/x²` with `x = 2λ`.
pub(crate) fn variance_shape(lambda: f64) -> f64 {
    let x = 2.0 * lambda;
    if x < 0.1 {
        // 2 Σ_j (-x)^j / (j+2)!
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..16 {
            term *= -x / (j + 2) as f64;
            sum += term;
        }
        sum
    } else {
        2.0 * (x + (-x).exp_m1()) / (x * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxRegime {
    /// `exp(-t m² Δ² τ_c / 2)`, valid for `mΔτ_c ≪ 1`.
    GaussianLimit,
    /// `cos z + λ (sinc z - cos z)`, valid for `λ ≪ 1`.
    FirstOrderLambda,
    /// `cos(mθ_c)`, no flips at all.
    NoFlip,
}

pub fn approx_cos_expectation(
    source: &TelegraphSource,
    point: &EvaluationPoint,
    regime: ApproxRegime,
) -> Result<f64> {
    source.require_symmetric()?;
    let z = point.z(source);
    Ok(match regime {
        ApproxRegime::GaussianLimit => {
            let md = point.m * source.delta();
            (-0.5 * point.t * md * md * source.tau_plus()).exp()
        }
        ApproxRegime::FirstOrderLambda => {
            let lambda = source.lambda_plus(point.t);
            let sinc = if z == 0.0 { 1.0 } else { z.sin() / z };
            z.cos() + lambda * (sinc - z.cos())
        }
        ApproxRegime::NoFlip => z.cos(),
    })
}
