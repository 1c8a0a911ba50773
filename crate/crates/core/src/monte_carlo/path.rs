//! Event-driven sampling of telegraph paths.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::{State, TelegraphSource};

/// One sampled trajectory of `Y` on `[0, t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub t: f64,
    pub flip_times: Vec<f64>,
    /// `∫₀ᵗ Y(s) ds`, exact for the sampled flip times.
    pub theta_final: f64,
    pub flip_count: usize,
    pub start_state: State,
    pub end_state: State,
}

impl PathSample {
    /// `(time, Y just after time, θ at time)` at the start, at every flip and at `t`.
    pub fn events(&self, delta: f64) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.flip_times.len() + 2);
        let mut state = self.start_state;
        let mut theta = 0.0;
        let mut last = 0.0;
        out.push((0.0, state.sign() * delta, 0.0));
        for &s in &self.flip_times {
            theta += state.sign() * delta * (s - last);
            state = state.flipped();
            last = s;
            out.push((s, state.sign() * delta, theta));
        }
        out.push((self.t, state.sign() * delta, self.theta_final));
        out
    }
}

/// Outcome of one segment without storing flip times.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SegmentOutcome {
    pub theta: f64,
    pub flips: usize,
    pub end: State,
}

fn dwell<R: Rng + ?Sized>(tau: f64, rng: &mut R) -> f64 {
    if tau.is_infinite() {
        return f64::INFINITY;
    }
    let e: f64 = rng.sample(Exp1);
    tau * e
}

pub(crate) fn draw_start<R: Rng + ?Sized>(p_plus: f64, rng: &mut R) -> State {
    if p_plus >= 1.0 {
        State::Positive
    } else if p_plus <= 0.0 {
        State::Negative
    } else if rng.random::<f64>() < p_plus {
        State::Positive
    } else {
        State::Negative
    }
}

/// Runs the chain for `t` from `start`, optionally recording flip times.
///
/// Dwell times are memoryless, so a segment that starts mid-dwell can draw
/// a fresh dwell time without biasing the path.
pub(crate) fn run_segment<R: Rng + ?Sized>(
    source: &TelegraphSource,
    t: f64,
    start: State,
    rng: &mut R,
    mut record: Option<&mut Vec<f64>>,
) -> SegmentOutcome {
    let mut state = start;
    let mut now = 0.0;
    let mut signed_time = 0.0;
    let mut flips = 0;
    loop {
        let tau = match state {
            State::Positive => source.tau_plus(),
            State::Negative => source.tau_minus(),
        };
        let next = now + dwell(tau, rng);
        if next >= t {
            signed_time += state.sign() * (t - now);
            break;
        }
        signed_time += state.sign() * (next - now);
        if let Some(times) = record.as_deref_mut() {
            times.push(next);
        }
        now = next;
        state = state.flipped();
        flips += 1;
    }
    let bound = source.delta() * t;
    SegmentOutcome {
        theta: (source.delta() * signed_time).clamp(-bound, bound),
        flips,
        end: state,
    }
}

/// Samples one path over `[0, t]` with the start state drawn from `p_plus`.
pub fn sample_path<R: Rng + ?Sized>(source: &TelegraphSource, t: f64, rng: &mut R) -> PathSample {
    let start = draw_start(source.p_plus(), rng);
    sample_path_from(source, t, start, rng)
}

/// Samples one path over `[0, t]` from a fixed start state.
pub fn sample_path_from<R: Rng + ?Sized>(source: &TelegraphSource, t: f64, start: State, rng: &mut R) -> PathSample {
    let t = t.max(0.0);
    let mut flip_times = Vec::new();
    let out = run_segment(source, t, start, rng, Some(&mut flip_times));
    PathSample {
        t,
        flip_times,
        theta_final: out.theta,
        flip_count: out.flips,
        start_state: start,
        end_state: out.end,
    }
}
