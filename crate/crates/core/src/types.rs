use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Characteristic-function values `E[exp(imθ)]`.
pub type ComplexValue = num_complex::Complex64;

/// Instantaneous state of a telegraph source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum State {
    Positive,
    Negative,
}

impl State {
    pub fn flipped(self) -> Self {
        match self {
            State::Positive => State::Negative,
            State::Negative => State::Positive,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            State::Positive => 1.0,
            State::Negative => -1.0,
        }
    }
}

/// How the initial state of a source is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    Positive,
    Negative,
    /// Positive with probability `p_plus`, negative otherwise.
    Mixed,
}

/// One two-state noise source.
///
/// `tau_plus` is the mean dwell time in the positive state (flip rate
/// `1/tau_plus` out of `+Δ`), `tau_minus` the mean dwell time in the
/// negative state. Dwell times may be infinite, meaning the source never
/// leaves that state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSource", into = "RawSource")]
pub struct TelegraphSource {
    delta: f64,
    tau_plus: f64,
    tau_minus: f64,
    p_plus: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    delta: f64,
    tau_plus: f64,
    tau_minus: f64,
    #[serde(default = "half")]
    p_plus: f64,
}

fn half() -> f64 {
    0.5
}

impl TryFrom<RawSource> for TelegraphSource {
    type Error = Error;

    fn try_from(raw: RawSource) -> Result<Self> {
        TelegraphSource::new(raw.delta, raw.tau_plus, raw.tau_minus, raw.p_plus)
    }
}

impl From<TelegraphSource> for RawSource {
    fn from(s: TelegraphSource) -> Self {
        RawSource {
            delta: s.delta,
            tau_plus: s.tau_plus,
            tau_minus: s.tau_minus,
            p_plus: s.p_plus,
        }
    }
}

impl TelegraphSource {
    pub fn new(delta: f64, tau_plus: f64, tau_minus: f64, p_plus: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::invalid("delta", format!("must be finite and >= 0, got {delta}")));
        }
        for (name, tau) in [("tau_plus", tau_plus), ("tau_minus", tau_minus)] {
            if tau.is_nan() || tau <= 0.0 {
                return Err(Error::invalid(name, format!("must be > 0, got {tau}")));
            }
        }
        if !(0.0..=1.0).contains(&p_plus) {
            return Err(Error::invalid("p_plus", format!("must lie in [0, 1], got {p_plus}")));
        }
        Ok(TelegraphSource {
            delta,
            tau_plus,
            tau_minus,
            p_plus,
        })
    }

    /// Equal dwell times in both states and an equiprobable start.
    pub fn symmetric(delta: f64, tau_c: f64) -> Result<Self> {
        Self::new(delta, tau_c, tau_c, 0.5)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tau_plus(&self) -> f64 {
        self.tau_plus
    }

    pub fn tau_minus(&self) -> f64 {
        self.tau_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn is_symmetric(&self) -> bool {
        self.tau_plus == self.tau_minus
    }

    /// Expected number of flips out of the positive state over `t`.
    pub fn lambda_plus(&self, t: f64) -> f64 {
        t / self.tau_plus
    }

    /// Expected number of flips out of the negative state over `t`.
    pub fn lambda_minus(&self, t: f64) -> f64 {
        t / self.tau_minus
    }

    /// Largest possible excursion `Δt`.
    pub fn theta_c(&self, t: f64) -> f64 {
        self.delta * t
    }

    pub fn with_p_plus(&self, p_plus: f64) -> Result<Self> {
        Self::new(self.delta, self.tau_plus, self.tau_minus, p_plus)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(delta, self.tau_plus, self.tau_minus, self.p_plus)
    }

    /// The process `-Y`: dwell times exchanged and start probability mirrored.
    pub fn mirrored(&self) -> Self {
        TelegraphSource {
            delta: self.delta,
            tau_plus: self.tau_minus,
            tau_minus: self.tau_plus,
            p_plus: 1.0 - self.p_plus,
        }
    }

    /// Start probability of the positive state under a start policy.
    pub fn start_probability(&self, start: Start) -> f64 {
        match start {
            Start::Positive => 1.0,
            Start::Negative => 0.0,
            Start::Mixed => self.p_plus,
        }
    }

    pub(crate) fn require_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::invalid(
                "source",
                format!(
                    "operation needs tau_plus == tau_minus, got {} and {}; use the general characteristic function",
                    self.tau_plus, self.tau_minus
                ),
            ))
        }
    }
}

/// Fourier multiplier `m` and duration `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPoint {
    pub m: f64,
    pub t: f64,
}

impl EvaluationPoint {
    pub fn new(m: f64, t: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::invalid("m", format!("must be finite, got {m}")));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::invalid("t", format!("must be finite and >= 0, got {t}")));
        }
        Ok(EvaluationPoint { m, t })
    }

    /// `z = mΔt` for the given source.
    pub fn z(&self, source: &TelegraphSource) -> f64 {
        self.m * source.theta_c(self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_sources() {
        assert!(TelegraphSource::new(-1.0, 1.0, 1.0, 0.5).is_err());
        assert!(TelegraphSource::new(1.0, 0.0, 1.0, 0.5).is_err());
        assert!(TelegraphSource::new(1.0, 1.0, f64::NAN, 0.5).is_err());
        assert!(TelegraphSource::new(1.0, 1.0, 1.0, 1.5).is_err());
        assert!(TelegraphSource::new(1.0, f64::INFINITY, 1.0, 0.0).is_ok());
        assert!(EvaluationPoint::new(1.0, -1.0).is_err());
        assert!(EvaluationPoint::new(-3.0, 0.0).is_ok());
    }

    #[test]
    fn mirrored_swaps_roles() {
        let s = TelegraphSource::new(2.0, 0.5, 3.0, 0.2).unwrap();
        let m = s.mirrored();
        assert_eq!(m.tau_plus(), 3.0);
        assert_eq!(m.tau_minus(), 0.5);
        assert!((m.p_plus() - 0.8).abs() < 1e-15);
        let back = m.mirrored();
        assert_eq!((back.tau_plus(), back.tau_minus()), (0.5, 3.0));
        assert!((back.p_plus() - 0.2).abs() < 1e-15);
    }
}
