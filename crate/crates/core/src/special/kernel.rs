//! Even kernels `cosh(√x)` and `sinh(√x)/√x`.
//!
//! Both are entire functions of `x`, so one code path covers the hyperbolic
//! (`x > 0`) and oscillatory (`x < 0`) regimes and the removable point at 0.
//! Below [`TAYLOR_THRESHOLD`] a four-term series is used; its truncation
//! error is below `x⁴/8! < 3e-21`.

use num_complex::Complex64;

/// `|x| < TAYLOR_THRESHOLD` switches to the series.
pub const TAYLOR_THRESHOLD: f64 = 1e-4;

/// `cosh(√x2)` for `x2 ≥ 0`, `cos(√-x2)` for `x2 < 0`.
pub fn kernel_cosh_even(x2: f64) -> f64 {
    if x2.abs() < TAYLOR_THRESHOLD {
        1.0 + x2 * (1.0 / 2.0 + x2 * (1.0 / 24.0 + x2 / 720.0))
    } else if x2 > 0.0 {
        x2.sqrt().cosh()
    } else {
        (-x2).sqrt().cos()
    }
}

/// `sinh(√x2)/√x2` for `x2 > 0`, `sin(√-x2)/√-x2` for `x2 < 0`, 1 at 0.
pub fn kernel_sinch_even(x2: f64) -> f64 {
    if x2.abs() < TAYLOR_THRESHOLD {
        1.0 + x2 * (1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 / 5040.0))
    } else if x2 > 0.0 {
        let s = x2.sqrt();
        s.sinh() / s
    } else {
        let s = (-x2).sqrt();
        s.sin() / s
    }
}

pub fn kernel_cosh_even_complex(w: Complex64) -> Complex64 {
    if w.norm() < TAYLOR_THRESHOLD {
        1.0 + w * (1.0 / 2.0 + w * (1.0 / 24.0 + w / 720.0))
    } else {
        w.sqrt().cosh()
    }
}

pub fn kernel_sinch_even_complex(w: Complex64) -> Complex64 {
    if w.norm() < TAYLOR_THRESHOLD {
        1.0 + w * (1.0 / 6.0 + w * (1.0 / 120.0 + w / 5040.0))
    } else {
        let s = w.sqrt();
        s.sinh() / s
    }
}
