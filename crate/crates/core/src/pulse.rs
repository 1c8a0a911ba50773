//! Waiting and sign-flip suppression control of telegraph dephasing.
//!
//! A schedule is an ordered list of drive and wait segments. Drive
//! segments accumulate `±∫Y dt` (the sign records whether the noise
//! generator has been conjugated by an anti-commuting gate); waits only let
//! the source evolve. The telegraph state is carried across segment
//! boundaries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    char_fn_general, cos_expectation_symmetric, mat_mul, segment_transfer, sin_expectation_positive,
};
use crate::error::{Error, Result};
use crate::{ComplexValue, EvaluationPoint, Start, TelegraphSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    Drive { duration: f64, sign: Sign },
    Wait { duration: f64 },
}

impl Segment {
    pub fn duration(&self) -> f64 {
        match *self {
            Segment::Drive { duration, .. } | Segment::Wait { duration } => duration,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct PulseSchedule {
    segments: Vec<Segment>,
}

impl TryFrom<Vec<Segment>> for PulseSchedule {
    type Error = Error;

    fn try_from(segments: Vec<Segment>) -> Result<Self> {
        PulseSchedule::new(segments)
    }
}

impl From<PulseSchedule> for Vec<Segment> {
    fn from(s: PulseSchedule) -> Self {
        s.segments
    }
}

fn check_segments(t: f64, n: usize) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    if n == 0 {
        return Err(Error::invalid("n", "need at least one segment"));
    }
    Ok(())
}

impl PulseSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for seg in &segments {
            let d = seg.duration();
            if !(d >= 0.0 && d.is_finite()) {
                return Err(Error::invalid("duration", format!("must be finite and >= 0, got {d}")));
            }
        }
        Ok(PulseSchedule { segments })
    }

    /// One uninterrupted drive of length `t`.
    pub fn single(t: f64) -> Result<Self> {
        Self::new(vec![Segment::Drive {
            duration: t,
            sign: Sign::Plus,
        }])
    }

    /// `n` contiguous drives of length `t/n` with alternating sign.
    pub fn suppression(t: f64, n: usize) -> Result<Self> {
        check_segments(t, n)?;
        if n % 2 == 1 {
            return Err(Error::Domain(format!("suppression needs an even segment count, got {n}")));
        }
        let mut sign = Sign::Plus;
        let segments = (0..n)
            .map(|_| {
                let seg = Segment::Drive {
                    duration: t / n as f64,
                    sign,
                };
                sign = sign.flipped();
                seg
            })
            .collect();
        Self::new(segments)
    }

    /// `n` drives of length `t/n` separated by waits of length `wait`.
    pub fn waiting(t: f64, n: usize, wait: f64) -> Result<Self> {
        check_segments(t, n)?;
        let mut segments = Vec::with_capacity(2 * n - 1);
        for k in 0..n {
            if k > 0 {
                segments.push(Segment::Wait { duration: wait });
            }
            segments.push(Segment::Drive {
                duration: t / n as f64,
                sign: Sign::Plus,
            });
        }
        Self::new(segments)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Total drive time.
    pub fn drive_time(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| matches!(s, Segment::Drive { .. }))
            .map(Segment::duration)
            .sum()
    }

    /// Number of drive segments.
    pub fn drive_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| matches!(s, Segment::Drive { .. }))
            .count()
    }
}

/// Exact `E[exp(imθ_total)]` for a schedule by composing per-segment
/// state-resolved transfer matrices.
pub fn schedule_char_fn(schedule: &PulseSchedule, source: &TelegraphSource, m: f64, start: Start) -> ComplexValue {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut total = [[one, zero], [zero, one]];
    for seg in schedule.segments() {
        let block = match *seg {
            Segment::Drive { duration, sign } => segment_transfer(source, sign.value() * m, duration),
            Segment::Wait { duration } => segment_transfer(source, 0.0, duration),
        };
        total = mat_mul(&total, &block);
    }
    let p = source.start_probability(start);
    p * (total[0][0] + total[0][1]) + (1.0 - p) * (total[1][0] + total[1][1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaitingMode {
    /// n-th power of the single-segment closed form.
    Exact,
    /// `1 - m²Δ²t²/(2n)`.
    LeadingOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuppressionMode {
    /// Segments multiplied as if independent, each pair contributing
    /// `E₊[e^{imθ}]·E₊[e^{-imθ}]` from a positive start.
    IndependentSegments,
    /// Transfer-matrix composition carrying the state across segments.
    ExactTransfer,
}

/// `E[cos(mθ_total)]` when the drive is split into `n` segments separated
/// by waits long enough to re-randomize the source.
pub fn waiting_method_expectation(
    source: &TelegraphSource,
    m: f64,
    t: f64,
    n: usize,
    mode: WaitingMode,
) -> Result<f64> {
    source.require_symmetric()?;
    check_segments(t, n)?;
    Ok(match mode {
        WaitingMode::Exact => {
            let point = EvaluationPoint::new(m, t / n as f64)?;
            cos_expectation_symmetric(source, &point)?.powi(n as i32)
        }
        WaitingMode::LeadingOrder => {
            let md = m * source.delta() * t;
            1.0 - md * md / (2.0 * n as f64)
        }
    })
}

/// `E[exp(imθ_total)]` under `n` contiguous segments of alternating sign.
pub fn suppression_method_expectation(
    source: &TelegraphSource,
    m: f64,
    t: f64,
    n: usize,
    mode: SuppressionMode,
) -> Result<ComplexValue> {
    source.require_symmetric()?;
    let schedule = PulseSchedule::suppression(t, n)?;
    Ok(match mode {
        SuppressionMode::ExactTransfer => schedule_char_fn(&schedule, source, m, Start::Mixed),
        SuppressionMode::IndependentSegments => {
            let seg = EvaluationPoint::new(m, t / n as f64)?;
            let forward = char_fn_general(source, &seg, Start::Positive);
            let reversed = char_fn_general(source, &EvaluationPoint { m: -m, ..seg }, Start::Positive);
            (forward * reversed).powi((n / 2) as i32)
        }
    })
}

/// Leading-order suppressed value `1 - m²Δ²t³/(n²τ_c)`.
pub fn suppression_leading_order(source: &TelegraphSource, m: f64, t: f64, n: usize) -> Result<f64> {
    source.require_symmetric()?;
    check_segments(t, n)?;
    let md = m * source.delta();
    Ok(1.0 - md * md * t.powi(3) / ((n * n) as f64 * source.tau_plus()))
}

/// `E[sin(mθ)]` for a symmetric source that starts in the positive state.
pub fn sin_expectation_positive_start(source: &TelegraphSource, m: f64, t: f64) -> Result<f64> {
    source.require_symmetric()?;
    let point = EvaluationPoint::new(m, t)?;
    Ok(sin_expectation_positive(source.lambda_plus(t), point.z(source)))
}
