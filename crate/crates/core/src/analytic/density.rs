//! Probability density of θ, resolved by flip count.
//!
//! With a positive start, `f` flips and `h(θ) = exp(λ₀(θ-θ_c)/(2θ_c) - λ₁(θ+θ_c)/(2θ_c))`:
//!
//! ```text
//! f = 0:        e^{-λ₁} δ(θ - θ_c)
//! odd f:        h λ₁ (λ₀λ₁)^{(f-1)/2} (θ_c² - θ²)^{(f-1)/2} / ((2θ_c)^f ((f-1)/2)!²)
//! even f > 0:   h (λ₀λ₁)^{f/2} (θ_c + θ)(θ_c² - θ²)^{f/2-1} / ((2θ_c)^f (f/2)! (f/2-1)!)
//! ```
//!
//! Terms are summed in log space so that large rates neither underflow `h`
//! nor overflow the powers.

use crate::analytic::quad::integrate;
use crate::analytic::symmetric::poisson_truncation;
use crate::error::{Error, Result};
use crate::TelegraphSource;

/// Density of θ at a point: the continuous part plus the point masses at
/// `±θ_c` from paths that never flip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub continuous: f64,
    pub atom_plus: f64,
    pub atom_minus: f64,
}

/// The density of θ restricted to exactly `flips` flips.
///
/// The symmetric form is the conditional density for an equiprobable start
/// and integrates to 1. The asymmetric form is the positive-start joint
/// density and integrates to `P(flips)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipConditionedDensity {
    theta_c: f64,
    flips: u32,
    /// `(λ₀, λ₁)`: expected exits from the negative and positive states.
    rates: Option<(f64, f64)>,
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn ln_pow(base: f64, exp: u32) -> f64 {
    if exp == 0 {
        0.0
    } else {
        exp as f64 * base.ln()
    }
}

impl FlipConditionedDensity {
    pub fn symmetric(theta_c: f64, flips: u32) -> Result<Self> {
        Self::checked(theta_c, flips, None)
    }

    pub fn positive_start(theta_c: f64, flips: u32, lambda_minus: f64, lambda_plus: f64) -> Result<Self> {
        if !(lambda_minus >= 0.0 && lambda_plus >= 0.0) {
            return Err(Error::invalid("lambda", "flip rates must be >= 0"));
        }
        Self::checked(theta_c, flips, Some((lambda_minus, lambda_plus)))
    }

    fn checked(theta_c: f64, flips: u32, rates: Option<(f64, f64)>) -> Result<Self> {
        if !(theta_c > 0.0 && theta_c.is_finite()) {
            return Err(Error::invalid("theta_c", format!("must be finite and > 0, got {theta_c}")));
        }
        Ok(FlipConditionedDensity { theta_c, flips, rates })
    }

    pub fn theta_c(&self) -> f64 {
        self.theta_c
    }

    pub fn flips(&self) -> u32 {
        self.flips
    }

    /// Point masses `(at +θ_c, at -θ_c)`; nonzero only for zero flips.
    pub fn atoms(&self) -> (f64, f64) {
        if self.flips != 0 {
            return (0.0, 0.0);
        }
        match self.rates {
            None => (0.5, 0.5),
            Some((_, l1)) => ((-l1).exp(), 0.0),
        }
    }

    /// Continuous density at `theta`; zero outside `[-θ_c, θ_c]`.
    pub fn eval(&self, theta: f64) -> f64 {
        let tc = self.theta_c;
        if self.flips == 0 || theta.abs() > tc {
            return 0.0;
        }
        let gap = (tc - theta) * (tc + theta);
        match self.rates {
            None => {
                let f = if self.flips % 2 == 0 { self.flips - 1 } else { self.flips };
                let k = (f - 1) / 2;
                (ln_factorial(f) - 2.0 * ln_factorial(k) + ln_pow(gap, k) - f as f64 * (2.0 * tc).ln()).exp()
            }
            Some((l0, l1)) => {
                let ln_h = l0 * (theta - tc) / (2.0 * tc) - l1 * (theta + tc) / (2.0 * tc);
                ln_general_term(self.flips, tc, theta, gap, l0, l1, ln_h).exp()
            }
        }
    }

    /// Total probability carried by this flip count.
    pub fn mass(&self) -> f64 {
        let (p, m) = self.atoms();
        if self.flips == 0 {
            return p + m;
        }
        let tc = self.theta_c;
        integrate(|x| self.eval(x), -tc, tc, 1e-13)
    }
}

fn ln_general_term(f: u32, tc: f64, theta: f64, gap: f64, l0: f64, l1: f64, ln_h: f64) -> f64 {
    let ln_rates = l0.ln() + l1.ln();
    if f % 2 == 1 {
        let n = (f - 1) / 2;
        let ln_rate_pow = if n == 0 { 0.0 } else { n as f64 * ln_rates };
        ln_h + l1.ln() + ln_rate_pow + ln_pow(gap, n)
            - f as f64 * (2.0 * tc).ln()
            - 2.0 * ln_factorial(n)
    } else {
        let n = f / 2;
        ln_h + n as f64 * ln_rates + (tc + theta).ln() + ln_pow(gap, n - 1)
            - f as f64 * (2.0 * tc).ln()
            - ln_factorial(n)
            - ln_factorial(n - 1)
    }
}

/// Continuous part of the positive-start density, summed over `1..=max_flips`.
fn continuous_positive(l0: f64, l1: f64, tc: f64, theta: f64, max_flips: usize) -> f64 {
    if l1 == 0.0 {
        return 0.0;
    }
    let gap = (tc - theta) * (tc + theta);
    let ln_h = l0 * (theta - tc) / (2.0 * tc) - l1 * (theta + tc) / (2.0 * tc);
    // Odd terms: ratio y/((n+1)²); even terms: ratio y/((n+1) n).
    let ln_y = if l0 > 0.0 && gap > 0.0 {
        l0.ln() + l1.ln() + gap.ln() - 2.0 * (2.0 * tc).ln()
    } else {
        f64::NEG_INFINITY
    };
    let mut total = 0.0;
    let mut ln_odd = ln_h + l1.ln() - (2.0 * tc).ln();
    let mut ln_even = if l0 > 0.0 && tc + theta > 0.0 {
        ln_h + l0.ln() + l1.ln() + (tc + theta).ln() - 2.0 * (2.0 * tc).ln()
    } else {
        f64::NEG_INFINITY
    };
    let mut n = 0usize;
    loop {
        let f_odd = 2 * n + 1;
        if f_odd > max_flips {
            break;
        }
        total += ln_odd.exp();
        let f_even = 2 * n + 2;
        if f_even > max_flips {
            break;
        }
        total += ln_even.exp();
        if ln_y == f64::NEG_INFINITY {
            break;
        }
        let k = (n + 1) as f64;
        ln_odd += ln_y - 2.0 * k.ln();
        ln_even += ln_y - k.ln() - (k + 1.0).ln();
        n += 1;
    }
    total
}

/// Density of θ after time `t`, mixing both start states by `p_plus`.
///
/// `max_flips` defaults to `⌈λ + 12√λ + 30⌉` with `λ` the larger expected
/// flip count, which leaves a Poisson tail below 1e-12.
pub fn density_eval(source: &TelegraphSource, t: f64, theta: f64, max_flips: Option<usize>) -> Result<DensityValue> {
    let tc = source.theta_c(t);
    if !(tc > 0.0) {
        return Err(Error::Domain(format!("density needs Δt > 0, got Δ = {}, t = {t}", source.delta())));
    }
    if theta.abs() > tc {
        return Err(Error::Domain(format!("|θ| = {} exceeds θ_c = {tc}", theta.abs())));
    }
    let l1 = source.lambda_plus(t);
    let l0 = source.lambda_minus(t);
    let max_flips = max_flips.unwrap_or_else(|| poisson_truncation(l0.max(l1)));
    let p = source.p_plus();
    let mut continuous = 0.0;
    if p > 0.0 {
        continuous += p * continuous_positive(l0, l1, tc, theta, max_flips);
    }
    if p < 1.0 {
        continuous += (1.0 - p) * continuous_positive(l1, l0, tc, -theta, max_flips);
    }
    Ok(DensityValue {
        continuous,
        atom_plus: p * (-l1).exp(),
        atom_minus: (1.0 - p) * (-l0).exp(),
    })
}
