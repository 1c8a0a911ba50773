//! Carlitz Bessel polynomials `pₙ(x)`, defined by the exponential
//! generating function `Σ pₖ(x) tᵏ/k! = exp(x(1 - √(1-2t)))`.
//!
//! The inner function `g(t) = 1 - √(1-2t)` has derivatives
//! `g⁽ʲ⁾(0) = (2j-3)!!` (with `(-1)!! = 1`), so by Faà di Bruno the
//! coefficient of `xᵏ` in `pₙ` is the partial Bell polynomial
//! `Bₙ,ₖ(g'(0), g''(0), …)`. All coefficients are non-negative integers and
//! are kept exactly; evaluation converts them to `f64` once.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

pub const DEFAULT_MAX_ORDER: usize = 64;

#[derive(Debug, Clone)]
pub struct CarlitzTable {
    exact: Vec<Vec<BigUint>>,
    float: Vec<Vec<f64>>,
}

impl CarlitzTable {
    /// Builds `p₀ … p_max_order`.
    pub fn new(max_order: usize) -> Self {
        let n_max = max_order;
        // g⁽ʲ⁾(0) for j = 1..=n_max.
        let mut derivs = vec![BigUint::zero(); n_max + 1];
        let mut odd_fact = BigUint::one();
        for (j, d) in derivs.iter_mut().enumerate().skip(1) {
            if j >= 3 {
                odd_fact *= BigUint::from(2 * j as u64 - 3);
            }
            *d = odd_fact.clone();
        }
        let binom = binomial_rows(n_max);

        // bell[n][k] = B_{n,k}
        let mut bell = vec![vec![BigUint::zero(); n_max + 1]; n_max + 1];
        bell[0][0] = BigUint::one();
        for n in 1..=n_max {
            for k in 1..=n {
                let mut acc = BigUint::zero();
                for i in 1..=(n - k + 1) {
                    let prev = &bell[n - i][k - 1];
                    if prev.is_zero() {
                        continue;
                    }
                    acc += &binom[n - 1][i - 1] * &derivs[i] * prev;
                }
                bell[n][k] = acc;
            }
        }
        let float = bell
            .iter()
            .map(|row| row.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect())
            .collect();
        CarlitzTable { exact: bell, float }
    }

    pub fn max_order(&self) -> usize {
        self.exact.len() - 1
    }

    /// Exact coefficients of `pₙ`, indexed by power of `x`.
    pub fn coefficients(&self, n: usize) -> &[BigUint] {
        &self.exact[n]
    }

    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.float[n].iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, n: usize, x: Complex64) -> Complex64 {
        self.float[n]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// `p'ₙ(x)` from the exact coefficients.
    pub fn eval_derivative(&self, n: usize, x: f64) -> f64 {
        self.float[n]
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c)
    }
}

fn binomial_rows(n_max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = vec![BigUint::one(); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

fn default_table() -> &'static CarlitzTable {
    static TABLE: OnceLock<CarlitzTable> = OnceLock::new();
    TABLE.get_or_init(|| CarlitzTable::new(DEFAULT_MAX_ORDER))
}

/// `pₙ(x)`. Orders above [`DEFAULT_MAX_ORDER`] build a dedicated table.
pub fn carlitz_bessel_p(n: usize, x: f64) -> f64 {
    if n <= DEFAULT_MAX_ORDER {
        default_table().eval(n, x)
    } else {
        CarlitzTable::new(n).eval(n, x)
    }
}

pub fn carlitz_bessel_p_complex(n: usize, x: Complex64) -> Complex64 {
    if n <= DEFAULT_MAX_ORDER {
        default_table().eval_complex(n, x)
    } else {
        CarlitzTable::new(n).eval_complex(n, x)
    }
}
