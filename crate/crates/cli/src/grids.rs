//! Analytic-versus-Monte-Carlo verification grids.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use telegraph::analytic::{char_fn_general, cos_expectation_symmetric};
use telegraph::monte_carlo::{estimate_char_fn, estimate_schedule, EstimatorResult, McConfig};
use telegraph::pulse::{suppression_method_expectation, PulseSchedule, SuppressionMode};
use telegraph::{ComplexValue, EvaluationPoint, Start, TelegraphSource};

/// Agreement threshold in standard errors.
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridName {
    /// Symmetric closed form over (λ, mΔτ_c), plus an m = 0 row.
    Symmetric,
    /// general closed form with τ₋/τ₊ ∈ {0.25, 4}.
    Asymmetric,
    /// Sign-flip suppression via transfer matrices.
    Schedule,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CaseKind {
    Symmetric,
    General,
    Suppression { n: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCase {
    pub label: String,
    pub source: TelegraphSource,
    pub point: EvaluationPoint,
    pub start: Start,
    pub kind: CaseKind,
}

fn symmetric_case(lambda: f64, m_delta_tau: f64) -> VerifyCase {
    // Δ = τ_c = 1, so t = λ and m = mΔτ_c.
    VerifyCase {
        label: format!("sym lambda={lambda} mdt={m_delta_tau}"),
        source: TelegraphSource::symmetric(1.0, 1.0).expect("valid"),
        point: EvaluationPoint::new(m_delta_tau, lambda).expect("valid"),
        start: Start::Mixed,
        kind: CaseKind::Symmetric,
    }
}

/// Five points of the λ ∈ {0.1, 1, 10} × mΔτ_c ∈ {0.1, 1, 3} grid: the
/// four corners and the centre.
pub fn symmetric_grid() -> Vec<VerifyCase> {
    [(0.1, 0.1), (0.1, 3.0), (1.0, 1.0), (10.0, 0.1), (10.0, 3.0)]
        .into_iter()
        .map(|(l, m)| symmetric_case(l, m))
        .collect()
}

/// `m = 0`, where the estimator must be exactly 1.
pub fn zero_row() -> VerifyCase {
    let mut case = symmetric_case(1.0, 0.0);
    case.label = "sym m=0".into();
    case
}

/// Five asymmetric points with τ₋/τ₊ ∈ {0.25, 4} and positive or mixed starts.
pub fn asymmetric_grid() -> Vec<VerifyCase> {
    let case = |label: &str, tau_plus: f64, tau_minus: f64, p_plus: f64, m: f64, t: f64, start: Start| VerifyCase {
        label: label.into(),
        source: TelegraphSource::new(1.0, tau_plus, tau_minus, p_plus).expect("valid"),
        point: EvaluationPoint::new(m, t).expect("valid"),
        start,
        kind: CaseKind::General,
    };
    vec![
        case("gen ratio=4 positive", 0.5, 2.0, 0.5, 1.0, 1.0, Start::Positive),
        case("gen ratio=4 mixed", 0.5, 2.0, 0.5, 1.0, 1.0, Start::Mixed),
        case("gen ratio=0.25 positive", 2.0, 0.5, 0.5, 1.5, 1.0, Start::Positive),
        case("gen ratio=0.25 mixed", 2.0, 0.5, 0.3, 0.7, 2.0, Start::Mixed),
        case("gen ratio=4 positive long", 0.25, 1.0, 0.5, 2.5, 2.0, Start::Positive),
    ]
}

/// Five suppression schedules, mixed start, m = 1.
pub fn schedule_grid() -> Vec<VerifyCase> {
    [(1.0, 1.0, 1.0, 2usize), (1.0, 1.0, 1.0, 4), (1.0, 0.3, 1.0, 4), (2.0, 1.0, 1.0, 8), (0.5, 2.0, 2.0, 6)]
        .into_iter()
        .map(|(delta, tau, t, n)| VerifyCase {
            label: format!("supp delta={delta} tau={tau} t={t} n={n}"),
            source: TelegraphSource::symmetric(delta, tau).expect("valid"),
            point: EvaluationPoint::new(1.0, t).expect("valid"),
            start: Start::Mixed,
            kind: CaseKind::Suppression { n },
        })
        .collect()
}

pub fn grid(name: GridName) -> Vec<VerifyCase> {
    match name {
        GridName::Symmetric => {
            let mut g = symmetric_grid();
            g.push(zero_row());
            g
        }
        GridName::Asymmetric => asymmetric_grid(),
        GridName::Schedule => schedule_grid(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub case: VerifyCase,
    pub analytic: ComplexValue,
    pub estimate: EstimatorResult,
    pub z: f64,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.z <= Z_THRESHOLD
    }
}

pub fn analytic_value(case: &VerifyCase) -> telegraph::Result<ComplexValue> {
    Ok(match case.kind {
        CaseKind::Symmetric => ComplexValue::new(cos_expectation_symmetric(&case.source, &case.point)?, 0.0),
        CaseKind::General => char_fn_general(&case.source, &case.point, case.start),
        CaseKind::Suppression { n } => suppression_method_expectation(
            &case.source,
            case.point.m,
            case.point.t,
            n,
            SuppressionMode::ExactTransfer,
        )?,
    })
}

/// Evaluates one case. The sampling seed is `seed + index` so that every
/// row of a grid uses an independent stream.
pub fn run_case(case: &VerifyCase, index: usize, config: &McConfig) -> telegraph::Result<VerifyOutcome> {
    let config = McConfig {
        seed: config.seed.wrapping_add(index as u64),
        ..*config
    };
    let analytic = analytic_value(case)?;
    let estimate = match case.kind {
        CaseKind::Suppression { n } => {
            let schedule = PulseSchedule::suppression(case.point.t, n)?;
            estimate_schedule(&schedule, &case.source, case.point.m, case.start, &config)?
        }
        _ => estimate_char_fn(&case.source, &case.point, case.start, &config)?,
    };
    let z = estimate.z_score(analytic);
    Ok(VerifyOutcome {
        case: case.clone(),
        analytic,
        estimate,
        z,
    })
}

/// Evaluates all cases in parallel; results keep the input order.
pub fn run_grid(cases: &[VerifyCase], config: &McConfig) -> telegraph::Result<Vec<VerifyOutcome>> {
    cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| run_case(c, i, config))
        .collect()
}
