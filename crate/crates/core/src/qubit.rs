//! Pauli-Z error probabilities of the two-qubit dephasing channel
//! `ρ ↦ E[U ρ U†]`, `U = exp(iθ(Z⊗I + I⊗Z))`.
//!
//! The channel is diagonal in the Pauli basis and depends on θ only
//! through `E[cos 2θ]` and `E[cos 4θ]`:
//!
//! ```text
//! n0 = 3/8 + E[cos 2θ]/2 + E[cos 4θ]/8
//! n1 = 1/8              - E[cos 4θ]/8
//! n2 = 3/8 - E[cos 2θ]/2 + E[cos 4θ]/8
//! ```

use serde::{Deserialize, Serialize};

use crate::analytic::cos_expectation_symmetric;
use crate::error::{Error, Result};
use crate::pulse::{suppression_method_expectation, waiting_method_expectation, SuppressionMode, WaitingMode};
use crate::{EvaluationPoint, TelegraphSource};

/// Slack allowed on the Fourier inputs before they are rejected.
const INPUT_SLACK: f64 = 1e-12;

/// `n0`: no error, `n1`: Z on one given qubit, `n2`: Z on both.
/// Completeness reads `n0 + 2·n1 + n2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliZErrorProbs {
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
}

impl PauliZErrorProbs {
    pub fn completeness(&self) -> f64 {
        self.n0 + 2.0 * self.n1 + self.n2
    }
}

pub fn probs_from_fourier(e1: f64, e_cos2: f64, e_cos4: f64) -> Result<PauliZErrorProbs> {
    if (e1 - 1.0).abs() > INPUT_SLACK {
        return Err(Error::Domain(format!("E[1] must be 1, got {e1}")));
    }
    for (name, v) in [("E[cos 2θ]", e_cos2), ("E[cos 4θ]", e_cos4)] {
        if !(v.abs() <= 1.0 + INPUT_SLACK) {
            return Err(Error::Domain(format!("{name} = {v} lies outside [-1, 1]")));
        }
    }
    let probs = PauliZErrorProbs {
        n0: 0.375 * e1 + 0.5 * e_cos2 + 0.125 * e_cos4,
        n1: 0.125 * e1 - 0.125 * e_cos4,
        n2: 0.375 * e1 - 0.5 * e_cos2 + 0.125 * e_cos4,
    };
    debug_assert!((probs.completeness() - e1).abs() < 1e-12);
    Ok(probs)
}

/// Probabilities under one symmetric telegraph source after time `t`.
pub fn probs_rtn(source: &TelegraphSource, t: f64) -> Result<PauliZErrorProbs> {
    let c2 = cos_expectation_symmetric(source, &EvaluationPoint::new(2.0, t)?)?;
    let c4 = cos_expectation_symmetric(source, &EvaluationPoint::new(4.0, t)?)?;
    probs_from_fourier(1.0, c2, c4)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 0.0) {
        return Err(Error::invalid("sigma", format!("must be >= 0, got {sigma}")));
    }
    Ok(())
}

/// Probabilities for Gaussian θ with standard deviation `sigma`, written in
/// terms of `r = exp(-2σ²)`.
pub fn probs_gaussian(sigma: f64) -> Result<PauliZErrorProbs> {
    check_sigma(sigma)?;
    let r = (-2.0 * sigma * sigma).exp();
    let r4 = r.powi(4);
    Ok(PauliZErrorProbs {
        n0: 0.375 + 0.5 * r + 0.125 * r4,
        n1: 0.125 - 0.125 * r4,
        n2: 0.375 - 0.5 * r + 0.125 * r4,
    })
}

/// Fourth-order small-σ expansion of [`probs_gaussian`].
pub fn probs_gaussian_quartic(sigma: f64) -> Result<PauliZErrorProbs> {
    check_sigma(sigma)?;
    let s2 = sigma * sigma;
    let s4 = s2 * s2;
    Ok(PauliZErrorProbs {
        n0: 1.0 - 2.0 * s2 + 5.0 * s4,
        n1: s2 - 4.0 * s4,
        n2: 3.0 * s4,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ControlMethod {
    Waiting { mode: WaitingMode },
    Suppression { mode: SuppressionMode },
}

/// Probabilities when the gate time `t` is split into `n` controlled
/// segments. Uses the real parts of the expectations at `m = 2` and `m = 4`.
pub fn probs_controlled(source: &TelegraphSource, t: f64, n: usize, method: ControlMethod) -> Result<PauliZErrorProbs> {
    let at = |m: f64| -> Result<f64> {
        match method {
            ControlMethod::Waiting { mode } => waiting_method_expectation(source, m, t, n, mode),
            ControlMethod::Suppression { mode } => Ok(suppression_method_expectation(source, m, t, n, mode)?.re),
        }
    };
    probs_from_fourier(1.0, at(2.0)?, at(4.0)?)
}
