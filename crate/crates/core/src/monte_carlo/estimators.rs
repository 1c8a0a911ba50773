//! Parallel, reproducible Monte Carlo estimators.
//!
//! Samples are split into `workers` contiguous shares. Worker `k` draws from
//! a ChaCha8 generator seeded with `seed` on stream `k`, and the per-worker
//! accumulators are merged in worker order. Results therefore depend only on
//! `(seed, n_samples, workers)`, not on thread scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::{draw_start, run_segment};
use super::stats::Moments;
use crate::analytic::{poisson_weights, OneOverFEnsemble};
use crate::error::{Error, Result};
use crate::pulse::{PulseSchedule, Segment};
use crate::{ComplexValue, EvaluationPoint, Start, State, TelegraphSource};

pub const DEFAULT_WORKERS: usize = 8;

/// Rejection sampling is refused below this acceptance probability.
pub const MIN_ACCEPTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        McConfig {
            n_samples,
            seed,
            workers: DEFAULT_WORKERS,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples < 2 {
            return Err(Error::Domain(format!(
                "need at least 2 samples for a standard error, got {}",
                self.n_samples
            )));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers", "must be >= 1"));
        }
        Ok(())
    }

    fn share(&self, worker: usize) -> u64 {
        let w = self.workers as u64;
        let base = self.n_samples / w;
        base + u64::from((worker as u64) < self.n_samples % w)
    }

    fn rng(&self, worker: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(worker as u64);
        rng
    }
}

/// Sample mean of a (possibly complex) quantity with per-component
/// standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub mean: ComplexValue,
    pub std_error_re: f64,
    pub std_error_im: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl EstimatorResult {
    /// Combined standard error `√(se_re² + se_im²)`.
    pub fn std_error(&self) -> f64 {
        self.std_error_re.hypot(self.std_error_im)
    }

    /// Largest per-component `|analytic - mean| / SE`. Components with zero
    /// SE count as infinitely far unless they match exactly.
    pub fn z_score(&self, analytic: ComplexValue) -> f64 {
        let z = |diff: f64, se: f64| {
            if diff == 0.0 {
                0.0
            } else if se == 0.0 {
                f64::INFINITY
            } else {
                diff.abs() / se
            }
        };
        z(analytic.re - self.mean.re, self.std_error_re).max(z(analytic.im - self.mean.im, self.std_error_im))
    }

    fn from_parts(re: &Moments, im: &Moments, config: &McConfig) -> Self {
        EstimatorResult {
            mean: Complex64::new(re.mean(), im.mean()),
            std_error_re: re.std_error(),
            std_error_im: im.std_error(),
            n_samples: re.count(),
            seed: config.seed,
            workers: config.workers,
        }
    }
}

/// Sample variance with the standard error implied by the fourth moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceEstimate {
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl VarianceEstimate {
    fn from_moments(m: &Moments, config: &McConfig) -> Self {
        VarianceEstimate {
            mean: m.mean(),
            variance: m.variance(),
            std_error: m.variance_std_error(),
            n_samples: m.count(),
            seed: config.seed,
        }
    }
}

/// Runs `body(rng, share)` once per worker in parallel and returns the
/// results in worker order.
fn per_worker<T, F>(config: &McConfig, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    (0..config.workers)
        .into_par_iter()
        .map(|k| {
            let mut rng = config.rng(k);
            body(&mut rng, config.share(k))
        })
        .collect()
}

fn complex_mean<F>(config: &McConfig, sample: F) -> EstimatorResult
where
    F: Fn(&mut ChaCha8Rng) -> Complex64 + Sync,
{
    let parts = per_worker(config, |rng, share| {
        let (mut re, mut im) = (Moments::new(), Moments::new());
        for _ in 0..share {
            let v = sample(rng);
            re.push(v.re);
            im.push(v.im);
        }
        (re, im)
    });
    let (mut re, mut im) = (Moments::new(), Moments::new());
    for (r, i) in &parts {
        re.merge(r);
        im.merge(i);
    }
    EstimatorResult::from_parts(&re, &im, config)
}

fn real_moments<F>(config: &McConfig, sample: F) -> Moments
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let parts = per_worker(config, |rng, share| {
        let mut acc = Moments::new();
        for _ in 0..share {
            acc.push(sample(rng));
        }
        acc
    });
    parts.iter().fold(Moments::new(), |mut acc, p| {
        acc.merge(p);
        acc
    })
}

fn start_state<R: Rng + ?Sized>(source: &TelegraphSource, start: Start, rng: &mut R) -> State {
    draw_start(source.start_probability(start), rng)
}

fn sample_theta<R: Rng + ?Sized>(source: &TelegraphSource, t: f64, start: Start, rng: &mut R) -> f64 {
    let s = start_state(source, start, rng);
    run_segment(source, t, s, rng, None).theta
}

fn phase(m: f64, theta: f64) -> Complex64 {
    let (s, c) = (m * theta).sin_cos();
    Complex64::new(c, s)
}

/// Sample mean of `exp(imθ)`.
pub fn estimate_char_fn(
    source: &TelegraphSource,
    point: &EvaluationPoint,
    start: Start,
    config: &McConfig,
) -> Result<EstimatorResult> {
    config.validate()?;
    Ok(complex_mean(config, |rng| phase(point.m, sample_theta(source, point.t, start, rng))))
}

/// Sample mean of `g(θ)`; the result has a zero imaginary part.
pub fn estimate_expectation<G>(
    source: &TelegraphSource,
    t: f64,
    start: Start,
    config: &McConfig,
    g: G,
) -> Result<EstimatorResult>
where
    G: Fn(f64) -> f64 + Sync,
{
    config.validate()?;
    Ok(complex_mean(config, |rng| Complex64::new(g(sample_theta(source, t, start, rng)), 0.0)))
}

/// Sample variance of θ.
pub fn estimate_variance(source: &TelegraphSource, t: f64, start: Start, config: &McConfig) -> Result<VarianceEstimate> {
    config.validate()?;
    let m = real_moments(config, |rng| sample_theta(source, t, start, rng));
    Ok(VarianceEstimate::from_moments(&m, config))
}

/// Sample mean of `exp(imΣθᵢ)` over independent sources.
pub fn estimate_multi_source(
    sources: &[(TelegraphSource, Start)],
    point: &EvaluationPoint,
    config: &McConfig,
) -> Result<EstimatorResult> {
    config.validate()?;
    Ok(complex_mean(config, |rng| {
        let theta: f64 = sources
            .iter()
            .map(|(s, start)| sample_theta(s, point.t, *start, rng))
            .sum();
        phase(point.m, theta)
    }))
}

/// Mean of `g(θ)` over paths with exactly `flips` flips, by rejection on the
/// flip count. `n_samples` counts accepted paths.
///
/// Restricted to symmetric sources, where the flip count is Poisson(λ)
/// whatever the start and the acceptance rate is known in advance.
pub fn estimate_conditional_with<G>(
    source: &TelegraphSource,
    t: f64,
    flips: u32,
    config: &McConfig,
    g: G,
) -> Result<EstimatorResult>
where
    G: Fn(f64) -> f64 + Sync,
{
    config.validate()?;
    source.require_symmetric()?;
    let lambda = source.lambda_plus(t);
    let probability = poisson_weights(lambda, flips as usize)[flips as usize];
    if probability < MIN_ACCEPTANCE {
        return Err(Error::InfeasibleRejection {
            flips,
            probability,
            threshold: MIN_ACCEPTANCE,
        });
    }
    let parts = per_worker(config, |rng, share| {
        let mut acc = Moments::new();
        let mut accepted = 0;
        while accepted < share {
            let s = start_state(source, Start::Mixed, rng);
            let out = run_segment(source, t, s, rng, None);
            if out.flips == flips as usize {
                acc.push(g(out.theta));
                accepted += 1;
            }
        }
        acc
    });
    let re = parts.iter().fold(Moments::new(), |mut acc, p| {
        acc.merge(p);
        acc
    });
    Ok(EstimatorResult::from_parts(&re, &Moments::new(), config))
}

/// `E[cos(mθ) | flips]` by rejection sampling; see [`estimate_conditional_with`].
pub fn estimate_conditional(
    source: &TelegraphSource,
    point: &EvaluationPoint,
    flips: u32,
    config: &McConfig,
) -> Result<EstimatorResult> {
    let m = point.m;
    estimate_conditional_with(source, point.t, flips, config, move |theta| (m * theta).cos())
}

/// Accumulated signed θ over a schedule, carrying the state across segments.
pub(crate) fn schedule_theta<R: Rng + ?Sized>(
    schedule: &PulseSchedule,
    source: &TelegraphSource,
    start: Start,
    rng: &mut R,
) -> f64 {
    let mut state = start_state(source, start, rng);
    let mut theta = 0.0;
    for seg in schedule.segments() {
        match *seg {
            Segment::Drive { duration, sign } => {
                let out = run_segment(source, duration, state, rng, None);
                theta += sign.value() * out.theta;
                state = out.end;
            }
            Segment::Wait { duration } => {
                state = run_segment(source, duration, state, rng, None).end;
            }
        }
    }
    theta
}

/// Sample mean of `exp(imθ_total)` for a pulse schedule.
pub fn estimate_schedule(
    schedule: &PulseSchedule,
    source: &TelegraphSource,
    m: f64,
    start: Start,
    config: &McConfig,
) -> Result<EstimatorResult> {
    config.validate()?;
    Ok(complex_mean(config, |rng| phase(m, schedule_theta(schedule, source, start, rng))))
}

/// Sample variance of the summed θ of `r` symmetric sources redrawn per
/// realization: dwell times log-uniform on `[τ_b, τ_a]`, amplitudes
/// `|N(Δ_m, Δ_s²)|`, equiprobable starts.
pub fn estimate_ensemble_variance(ensemble: &OneOverFEnsemble, t: f64, config: &McConfig) -> Result<VarianceEstimate> {
    config.validate()?;
    let amplitude = Normal::new(ensemble.delta_mean(), ensemble.delta_sd())
        .map_err(|e| Error::invalid("delta_sd", e.to_string()))?;
    let (lo, hi) = (ensemble.tau_b().ln(), ensemble.tau_a().ln());
    let m = real_moments(config, |rng| {
        let mut theta = 0.0;
        for _ in 0..ensemble.r() {
            let tau = if hi > lo { rng.random_range(lo..hi).exp() } else { ensemble.tau_b() };
            let delta = amplitude.sample(rng).abs();
            let source = TelegraphSource::symmetric(delta, tau).expect("validated ensemble parameters");
            theta += sample_theta(&source, t, Start::Mixed, rng);
        }
        theta
    });
    Ok(VarianceEstimate::from_moments(&m, config))
}

/// Histogram of θ over `bins` equal bins of `[-θ_c, θ_c]`, with the
/// zero-flip paths counted separately as point masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaHistogram {
    pub theta_c: f64,
    pub counts: Vec<u64>,
    pub atom_plus: u64,
    pub atom_minus: u64,
    pub n_samples: u64,
}

impl ThetaHistogram {
    pub fn bin_width(&self) -> f64 {
        2.0 * self.theta_c / self.counts.len() as f64
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        -self.theta_c + (i as f64 + 0.5) * self.bin_width()
    }

    /// Density estimate and its binomial standard error for bin `i`.
    pub fn density(&self, i: usize) -> (f64, f64) {
        let n = self.n_samples as f64;
        let p = self.counts[i] as f64 / n;
        let w = self.bin_width();
        (p / w, (p * (1.0 - p) / n).sqrt() / w)
    }
}

pub fn theta_histogram(
    source: &TelegraphSource,
    t: f64,
    start: Start,
    bins: usize,
    config: &McConfig,
) -> Result<ThetaHistogram> {
    config.validate()?;
    let theta_c = source.theta_c(t);
    if !(theta_c > 0.0) || bins == 0 {
        return Err(Error::Domain("histogram needs Δt > 0 and at least one bin".into()));
    }
    let parts = per_worker(config, |rng, share| {
        let mut counts = vec![0u64; bins];
        let (mut plus, mut minus) = (0u64, 0u64);
        for _ in 0..share {
            let s = start_state(source, start, rng);
            let out = run_segment(source, t, s, rng, None);
            if out.flips == 0 {
                match s {
                    State::Positive => plus += 1,
                    State::Negative => minus += 1,
                }
                continue;
            }
            let idx = ((out.theta + theta_c) / (2.0 * theta_c) * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
        (counts, plus, minus)
    });
    let mut hist = ThetaHistogram {
        theta_c,
        counts: vec![0; bins],
        atom_plus: 0,
        atom_minus: 0,
        n_samples: config.n_samples,
    };
    for (counts, plus, minus) in parts {
        hist.counts.iter_mut().zip(counts).for_each(|(a, b)| *a += b);
        hist.atom_plus += plus;
        hist.atom_minus += minus;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shares_cover_all_samples() {
        let c = McConfig::new(1003, 1).with_workers(8);
        assert_eq!((0..8).map(|k| c.share(k)).sum::<u64>(), 1003);
        let c = McConfig::new(3, 1).with_workers(8);
        assert_eq!((0..8).map(|k| c.share(k)).sum::<u64>(), 3);
    }

    #[test]
    fn zero_multiplier_is_exact() {
        let s = TelegraphSource::symmetric(1.0, 0.5).unwrap();
        let r = estimate_char_fn(&s, &EvaluationPoint::new(0.0, 2.0).unwrap(), Start::Mixed, &McConfig::new(1000, 3))
            .unwrap();
        assert_eq!(r.mean, Complex64::new(1.0, 0.0));
        assert_eq!(r.std_error(), 0.0);
        assert_eq!(r.z_score(Complex64::new(1.0, 0.0)), 0.0);
    }

    #[test]
    fn reproducible_for_fixed_triple() {
        let s = TelegraphSource::new(1.0, 0.5, 2.0, 0.3).unwrap();
        let p = EvaluationPoint::new(1.3, 1.0).unwrap();
        let c = McConfig::new(5000, 42).with_workers(3);
        let a = estimate_char_fn(&s, &p, Start::Mixed, &c).unwrap();
        let b = estimate_char_fn(&s, &p, Start::Mixed, &c).unwrap();
        assert_eq!(a, b);
        let other = estimate_char_fn(&s, &p, Start::Mixed, &McConfig::new(5000, 43).with_workers(3)).unwrap();
        assert_ne!(a.mean, other.mean);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let s = TelegraphSource::symmetric(1.0, 0.5).unwrap();
        let p = EvaluationPoint::new(1.0, 1.0).unwrap();
        assert!(matches!(
            estimate_char_fn(&s, &p, Start::Mixed, &McConfig::new(1, 0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn infeasible_rejection_is_reported() {
        let s = TelegraphSource::symmetric(1.0, 1.0).unwrap();
        let p = EvaluationPoint::new(1.0, 1.0).unwrap();
        let err = estimate_conditional(&s, &p, 15, &McConfig::new(100, 0)).unwrap_err();
        assert!(matches!(err, Error::InfeasibleRejection { flips: 15, .. }));
    }

    #[test]
    fn zero_flip_conditional_is_deterministic() {
        let s = TelegraphSource::symmetric(1.0, 2.0).unwrap();
        let p = EvaluationPoint::new(0.7, 1.0).unwrap();
        let r = estimate_conditional(&s, &p, 0, &McConfig::new(200, 5)).unwrap();
        assert!((r.mean.re - 0.7f64.cos()).abs() < 1e-15);
        assert!(r.std_error() < 1e-15);
    }
}
