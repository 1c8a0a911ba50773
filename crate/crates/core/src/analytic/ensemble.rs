//! Gaussian limit and 1/f ensembles of telegraph sources.

use serde::{Deserialize, Serialize};

use crate::analytic::quad::integrate;
use crate::analytic::symmetric::variance_shape;
use crate::error::{Error, Result};

/// Below this expected flip count the large-λ variance formula is flagged.
pub const APPROX_MIN_LAMBDA: f64 = 10.0;

/// A population of `r` independent symmetric sources whose dwell times are
/// log-uniform on `[tau_b, tau_a]` (a 1/f spectrum over the matching
/// frequency band), with amplitudes of mean `delta_mean` and standard
/// deviation `delta_sd`.
///
/// When `alpha` is set, the mean dwell time follows the power-law density
/// `(α-1) τ^{α-2} / τ_b^{α-1}` on `[0, τ_b]` instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble", into = "RawEnsemble")]
pub struct OneOverFEnsemble {
    r: u32,
    tau_a: f64,
    tau_b: f64,
    delta_mean: f64,
    delta_sd: f64,
    alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnsemble {
    r: u32,
    tau_a: f64,
    tau_b: f64,
    delta_mean: f64,
    #[serde(default)]
    delta_sd: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
}

impl TryFrom<RawEnsemble> for OneOverFEnsemble {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        OneOverFEnsemble::new(raw.r, raw.tau_a, raw.tau_b, raw.delta_mean, raw.delta_sd, raw.alpha)
    }
}

impl From<OneOverFEnsemble> for RawEnsemble {
    fn from(e: OneOverFEnsemble) -> Self {
        RawEnsemble {
            r: e.r,
            tau_a: e.tau_a,
            tau_b: e.tau_b,
            delta_mean: e.delta_mean,
            delta_sd: e.delta_sd,
            alpha: e.alpha,
        }
    }
}

impl OneOverFEnsemble {
    pub fn new(r: u32, tau_a: f64, tau_b: f64, delta_mean: f64, delta_sd: f64, alpha: Option<f64>) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("r", "need at least one source"));
        }
        if !(tau_b > 0.0 && tau_b.is_finite() && tau_a.is_finite()) {
            return Err(Error::invalid("tau_b", format!("must be finite and > 0, got {tau_b}")));
        }
        if tau_a < tau_b {
            return Err(Error::Domain(format!("tau_a = {tau_a} must be >= tau_b = {tau_b}")));
        }
        if !(delta_mean.is_finite() && delta_sd.is_finite() && delta_sd >= 0.0) {
            return Err(Error::invalid("delta_sd", format!("must be finite and >= 0, got {delta_sd}")));
        }
        if let Some(a) = alpha {
            if !(a > 1.0) {
                return Err(Error::Domain(format!("alpha must exceed 1, got {a}")));
            }
        }
        Ok(OneOverFEnsemble {
            r,
            tau_a,
            tau_b,
            delta_mean,
            delta_sd,
            alpha,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn tau_a(&self) -> f64 {
        self.tau_a
    }

    pub fn tau_b(&self) -> f64 {
        self.tau_b
    }

    pub fn delta_mean(&self) -> f64 {
        self.delta_mean
    }

    pub fn delta_sd(&self) -> f64 {
        self.delta_sd
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// `E[Δ²] = Δ_m² + Δ_s²`.
    pub fn mean_square_delta(&self) -> f64 {
        self.delta_mean * self.delta_mean + self.delta_sd * self.delta_sd
    }

    /// `w = τ_a / τ_b`.
    pub fn band_ratio(&self) -> f64 {
        self.tau_a / self.tau_b
    }

    /// `(λ_a, λ_b) = (t/τ_a, t/τ_b)`.
    pub fn lambda_band(&self, t: f64) -> (f64, f64) {
        (t / self.tau_a, t / self.tau_b)
    }

    /// Mean dwell time: power-law mean when `alpha` is set, otherwise the
    /// log-uniform mean `(τ_a - τ_b)/ln w`.
    pub fn tau_mean(&self) -> f64 {
        match self.alpha {
            Some(a) => (a - 1.0) / a * self.tau_b,
            None => self.tau_b * log_mean_factor(self.band_ratio()),
        }
    }
}

/// `(w - 1)/ln w`, with the `w → 1` limit.
fn log_mean_factor(w: f64) -> f64 {
    let d = w - 1.0;
    if d < 1e-8 {
        1.0 + d / 2.0
    } else {
        d / d.ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMode {
    /// Large-λ closed form `r t E[Δ²] (τ_a - τ_b) / ln(τ_a/τ_b)`.
    Approx,
    /// Exact per-source variance integrated over the log-uniform density.
    Quadrature,
}

/// Variance of the summed θ over a 1/f ensemble. Uses the log-uniform
/// dwell-time density regardless of `alpha`.
pub fn variance_one_over_f(ensemble: &OneOverFEnsemble, t: f64, mode: VarianceMode) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("must be finite and > 0, got {t}")));
    }
    let scale = ensemble.r as f64 * ensemble.mean_square_delta();
    match mode {
        VarianceMode::Approx => {
            let (lambda_a, _) = ensemble.lambda_band(t);
            if lambda_a < APPROX_MIN_LAMBDA {
                log::warn!(
                    "large-λ 1/f variance used at λ_a = {lambda_a:.3} < {APPROX_MIN_LAMBDA}; expect an error near 1/(4λ_a)"
                );
            }
            Ok(scale * t * ensemble.tau_b * log_mean_factor(ensemble.band_ratio()))
        }
        VarianceMode::Quadrature => {
            // Per-source variance with Δ = 1 is t² · shape(t/τ); τ = e^u is uniform in u.
            let per_source = |u: f64| variance_shape(t / u.exp());
            let (lo, hi) = (ensemble.tau_b.ln(), ensemble.tau_a.ln());
            let mean_shape = if hi - lo < 1e-12 {
                variance_shape(t / ensemble.tau_b)
            } else {
                integrate(per_source, lo, hi, 1e-13) / (hi - lo)
            };
            Ok(scale * t * t * mean_shape)
        }
    }
}

/// Mean dwell time `(α-1)/α · τ_b` under the power-law density on `[0, τ_b]`.
pub fn tau_mean_power_law(alpha: f64, tau_b: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")));
    }
    if !(tau_b > 0.0) {
        return Err(Error::invalid("tau_b", format!("must be > 0, got {tau_b}")));
    }
    if alpha.is_infinite() {
        return Ok(tau_b);
    }
    Ok((alpha - 1.0) / alpha * tau_b)
}

/// Gaussian-limit variance `r E[Δ²] τ_m t` of an ensemble.
pub fn variance_gaussian_ensemble(ensemble: &OneOverFEnsemble, t: f64) -> f64 {
    ensemble.r as f64 * ensemble.mean_square_delta() * ensemble.tau_mean() * t
}

/// `E[cos(mx)] = exp(-m²σ²/2)` for `x ~ N(0, σ²)`.
pub fn gaussian_cos_expectation(m: f64, sigma: f64) -> f64 {
    (-0.5 * m * m * sigma * sigma).exp()
}

/// `E[xⁿ] = σⁿ (n-1)!!` for even `n`, zero for odd `n`.
pub fn gaussian_moment(n: u32, sigma: f64) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    (1..n).step_by(2).fold(sigma.powi(n as i32), |acc, k| acc * k as f64)
}
