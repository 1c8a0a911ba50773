//! JSON sweep specifications and their evaluation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use telegraph::analytic::{
    approx_cos_expectation, char_fn_general, cos_expectation_symmetric, gaussian_cos_expectation,
    variance_gaussian_ensemble, variance_one_over_f, variance_symmetric, ApproxRegime, OneOverFEnsemble,
    VarianceMode,
};
use telegraph::monte_carlo::{
    estimate_char_fn, estimate_ensemble_variance, estimate_schedule, estimate_variance, McConfig, DEFAULT_WORKERS,
};
use telegraph::pulse::{
    suppression_leading_order, suppression_method_expectation, waiting_method_expectation, PulseSchedule,
    SuppressionMode, WaitingMode,
};
use telegraph::qubit::{probs_gaussian, probs_gaussian_quartic, probs_rtn};
use telegraph::{EvaluationPoint, Start, TelegraphSource};

use crate::error::CliError;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    SymmetricCos,
    CharFn,
    Variance,
    GaussianCos,
    OneOverFVariance,
    Waiting,
    Suppression,
    QubitRtn,
    QubitGaussian,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::SymmetricCos => "symmetric_cos",
            Quantity::CharFn => "char_fn",
            Quantity::Variance => "variance",
            Quantity::GaussianCos => "gaussian_cos",
            Quantity::OneOverFVariance => "one_over_f_variance",
            Quantity::Waiting => "waiting",
            Quantity::Suppression => "suppression",
            Quantity::QubitRtn => "qubit_rtn",
            Quantity::QubitGaussian => "qubit_gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    M,
    T,
    TauC,
    TauPlus,
    TauMinus,
    Delta,
    Sigma,
    NSegments,
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::M => "m",
            SweepParam::T => "t",
            SweepParam::TauC => "tau_c",
            SweepParam::TauPlus => "tau_plus",
            SweepParam::TauMinus => "tau_minus",
            SweepParam::Delta => "delta",
            SweepParam::Sigma => "sigma",
            SweepParam::NSegments => "n_segments",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub parameter: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.count < 1 {
            return Err(CliError::Usage("sweep.count must be >= 1".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(CliError::Usage(format!(
                "sweep.min ({}) must be finite and <= sweep.max ({})",
                self.min, self.max
            )));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(CliError::Usage("sweep.spacing = log needs sweep.min > 0".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let steps = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / steps;
                let v = match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                };
                if i + 1 == self.count {
                    self.max
                } else {
                    v
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub delta: f64,
    #[serde(default)]
    pub tau_c: Option<f64>,
    #[serde(default)]
    pub tau_plus: Option<f64>,
    #[serde(default)]
    pub tau_minus: Option<f64>,
    #[serde(default = "half")]
    pub p_plus: f64,
}

fn half() -> f64 {
    0.5
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub n_samples: u64,
    pub seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub sweep: GridSpec,
    #[serde(default)]
    pub source: Option<SourceSpec>,
    #[serde(default)]
    pub ensemble: Option<OneOverFEnsemble>,
    #[serde(default = "one")]
    pub m: f64,
    #[serde(default = "one")]
    pub t: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub n_segments: Option<usize>,
    #[serde(default = "mixed")]
    pub start: Start,
    /// Wait between drives for the waiting method; defaults to 50 mean dwell times.
    #[serde(default)]
    pub wait: Option<f64>,
    #[serde(default)]
    pub mc: Option<McSpec>,
}

fn mixed() -> Start {
    Start::Mixed
}

/// Command-line values that take precedence over the spec file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let spec: SweepSpec = serde_json::from_str(text).map_err(|e| {
            CliError::Parse(format!("{origin} line {} column {}: {e}", e.line(), e.column()))
        })?;
        spec.sweep.validate()?;
        Ok(spec)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.seed.is_none() && o.samples.is_none() && o.workers.is_none() {
            return;
        }
        let mut mc = self.mc.unwrap_or(McSpec {
            n_samples: 100_000,
            seed: 0,
            workers: None,
        });
        if let Some(s) = o.seed {
            mc.seed = s;
        }
        if let Some(n) = o.samples {
            mc.n_samples = n;
        }
        if let Some(w) = o.workers {
            mc.workers = Some(w);
        }
        if o.samples.is_some() || self.mc.is_some() {
            self.mc = Some(mc);
        }
    }

    fn columns(&self) -> Vec<&'static str> {
        let mut cols = vec![self.sweep.parameter.name()];
        let mc = self.mc.is_some();
        match self.quantity {
            Quantity::SymmetricCos => {
                cols.extend(["value", "gaussian_limit", "first_order_lambda", "no_flip"]);
                if mc {
                    cols.extend(["mc_re", "mc_im", "mc_se_re", "mc_se_im"]);
                }
            }
            Quantity::CharFn => {
                cols.extend(["re", "im"]);
                if mc {
                    cols.extend(["mc_re", "mc_im", "mc_se_re", "mc_se_im"]);
                }
            }
            Quantity::Variance => {
                cols.extend(["variance", "short_time_limit", "long_time_limit"]);
                if mc {
                    cols.extend(["mc_variance", "mc_se"]);
                }
            }
            Quantity::GaussianCos => cols.push("value"),
            Quantity::OneOverFVariance => {
                cols.extend(["approx", "quadrature", "gaussian_ensemble", "lambda_a"]);
                if mc {
                    cols.extend(["mc_variance", "mc_se"]);
                }
            }
            Quantity::Waiting => {
                cols.extend(["exact", "leading_order", "one_minus_exact"]);
                if mc {
                    cols.extend(["mc_re", "mc_im", "mc_se_re", "mc_se_im"]);
                }
            }
            Quantity::Suppression => {
                cols.extend(["exact_re", "exact_im", "independent_segments", "leading_order", "one_minus_exact"]);
                if mc {
                    cols.extend(["mc_re", "mc_im", "mc_se_re", "mc_se_im"]);
                }
            }
            Quantity::QubitRtn => cols.extend(["n0", "n1", "n2"]),
            Quantity::QubitGaussian => cols.extend(["n0", "n1", "n2", "n0_quartic", "n1_quartic", "n2_quartic"]),
        }
        cols
    }

    /// Evaluates every grid value; rows follow the grid order.
    pub fn run(&self) -> Result<Table, CliError> {
        self.sweep.validate()?;
        let columns = self.columns();
        let mut table = Table::new(self.quantity.name(), self, &columns);
        let values = self.sweep.values();
        let rows: Vec<Result<Vec<Cell>, CliError>> = values
            .par_iter()
            .enumerate()
            .map(|(i, &v)| self.row(i, v))
            .collect();
        for row in rows {
            table.push(row?);
        }
        Ok(table)
    }

    fn mc_config(&self, index: usize) -> Option<McConfig> {
        self.mc.map(|mc| McConfig {
            n_samples: mc.n_samples,
            seed: mc.seed.wrapping_add(index as u64),
            workers: mc.workers.unwrap_or(DEFAULT_WORKERS),
        })
    }

    fn row(&self, index: usize, value: f64) -> Result<Vec<Cell>, CliError> {
        let p = Params::resolve(self, value)?;
        let mut row: Vec<Cell> = vec![value.into()];
        let mc = self.mc_config(index);
        let push_mc = |row: &mut Vec<Cell>, r: telegraph::monte_carlo::EstimatorResult| {
            row.extend([r.mean.re.into(), r.mean.im.into(), r.std_error_re.into(), r.std_error_im.into()]);
        };
        match self.quantity {
            Quantity::SymmetricCos => {
                let s = p.source()?;
                let point = EvaluationPoint::new(p.m, p.t)?;
                row.push(cos_expectation_symmetric(&s, &point)?.into());
                for regime in [ApproxRegime::GaussianLimit, ApproxRegime::FirstOrderLambda, ApproxRegime::NoFlip] {
                    row.push(approx_cos_expectation(&s, &point, regime)?.into());
                }
                if let Some(c) = mc {
                    push_mc(&mut row, estimate_char_fn(&s, &point, self.start, &c)?);
                }
            }
            Quantity::CharFn => {
                let s = p.source()?;
                let point = EvaluationPoint::new(p.m, p.t)?;
                let v = char_fn_general(&s, &point, self.start);
                row.extend([v.re.into(), v.im.into()]);
                if let Some(c) = mc {
                    push_mc(&mut row, estimate_char_fn(&s, &point, self.start, &c)?);
                }
            }
            Quantity::Variance => {
                let s = p.source()?;
                let (d, tau, t) = (s.delta(), s.tau_plus(), p.t);
                row.push(variance_symmetric(&s, t)?.into());
                row.push((d * d * t * t).into());
                row.push((d * d * (t * tau - 0.5 * tau * tau)).into());
                if let Some(c) = mc {
                    let v = estimate_variance(&s, t, self.start, &c)?;
                    row.extend([v.variance.into(), v.std_error.into()]);
                }
            }
            Quantity::GaussianCos => row.push(gaussian_cos_expectation(p.m, p.sigma).into()),
            Quantity::OneOverFVariance => {
                let e = self
                    .ensemble
                    .ok_or_else(|| CliError::Usage("quantity one_over_f_variance needs an `ensemble`".into()))?;
                row.push(variance_one_over_f(&e, p.t, VarianceMode::Approx)?.into());
                row.push(variance_one_over_f(&e, p.t, VarianceMode::Quadrature)?.into());
                row.push(variance_gaussian_ensemble(&e, p.t).into());
                row.push(e.lambda_band(p.t).0.into());
                if let Some(c) = mc {
                    let v = estimate_ensemble_variance(&e, p.t, &c)?;
                    row.extend([v.variance.into(), v.std_error.into()]);
                }
            }
            Quantity::Waiting => {
                let s = p.source()?;
                let n = p.segments()?;
                let exact = waiting_method_expectation(&s, p.m, p.t, n, WaitingMode::Exact)?;
                row.push(exact.into());
                row.push(waiting_method_expectation(&s, p.m, p.t, n, WaitingMode::LeadingOrder)?.into());
                row.push((1.0 - exact).into());
                if let Some(c) = mc {
                    let wait = self.wait.unwrap_or(50.0 * s.tau_plus().max(s.tau_minus()));
                    let schedule = PulseSchedule::waiting(p.t, n, wait)?;
                    push_mc(&mut row, estimate_schedule(&schedule, &s, p.m, self.start, &c)?);
                }
            }
            Quantity::Suppression => {
                let s = p.source()?;
                let n = p.segments()?;
                let exact = suppression_method_expectation(&s, p.m, p.t, n, SuppressionMode::ExactTransfer)?;
                let independent = suppression_method_expectation(&s, p.m, p.t, n, SuppressionMode::IndependentSegments)?;
                row.extend([exact.re.into(), exact.im.into(), independent.re.into()]);
                row.push(suppression_leading_order(&s, p.m, p.t, n)?.into());
                row.push((1.0 - exact.re).into());
                if let Some(c) = mc {
                    let schedule = PulseSchedule::suppression(p.t, n)?;
                    push_mc(&mut row, estimate_schedule(&schedule, &s, p.m, self.start, &c)?);
                }
            }
            Quantity::QubitRtn => {
                let q = probs_rtn(&p.source()?, p.t)?;
                row.extend([q.n0.into(), q.n1.into(), q.n2.into()]);
            }
            Quantity::QubitGaussian => {
                let q = probs_gaussian(p.sigma)?;
                let e = probs_gaussian_quartic(p.sigma)?;
                row.extend([q.n0.into(), q.n1.into(), q.n2.into(), e.n0.into(), e.n1.into(), e.n2.into()]);
            }
        }
        Ok(row)
    }
}

/// Spec values with the swept parameter substituted.
struct Params {
    source: Option<SourceSpec>,
    m: f64,
    t: f64,
    sigma: f64,
    n_segments: Option<usize>,
}

impl Params {
    fn resolve(spec: &SweepSpec, value: f64) -> Result<Self, CliError> {
        let mut p = Params {
            source: spec.source,
            m: spec.m,
            t: spec.t,
            sigma: spec.sigma,
            n_segments: spec.n_segments,
        };
        match spec.sweep.parameter {
            SweepParam::M => p.m = value,
            SweepParam::T => p.t = value,
            SweepParam::Sigma => p.sigma = value,
            SweepParam::NSegments => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(CliError::Usage(format!("n_segments must be a positive integer, got {value}")));
                }
                p.n_segments = Some(value as usize);
            }
            SweepParam::TauC | SweepParam::TauPlus | SweepParam::TauMinus | SweepParam::Delta => {
                let mut s = p.source.ok_or_else(|| {
                    CliError::Usage(format!("sweeping {} needs a `source`", spec.sweep.parameter.name()))
                })?;
                match spec.sweep.parameter {
                    SweepParam::TauC => {
                        s.tau_c = Some(value);
                        s.tau_plus = None;
                        s.tau_minus = None;
                    }
                    SweepParam::TauPlus => s.tau_plus = Some(value),
                    SweepParam::TauMinus => s.tau_minus = Some(value),
                    _ => s.delta = value,
                }
                p.source = Some(s);
            }
        }
        Ok(p)
    }

    fn source(&self) -> Result<TelegraphSource, CliError> {
        let s = self
            .source
            .ok_or_else(|| CliError::Usage("this quantity needs a `source`".into()))?;
        let tau_plus = s.tau_plus.or(s.tau_c);
        let tau_minus = s.tau_minus.or(s.tau_c);
        match (tau_plus, tau_minus) {
            (Some(tp), Some(tm)) => Ok(TelegraphSource::new(s.delta, tp, tm, s.p_plus)?),
            _ => Err(CliError::Usage(
                "source needs `tau_c` or both `tau_plus` and `tau_minus`".into(),
            )),
        }
    }

    fn segments(&self) -> Result<usize, CliError> {
        self.n_segments
            .ok_or_else(|| CliError::Usage("this quantity needs `n_segments`".into()))
    }
}
