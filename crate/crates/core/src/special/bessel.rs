//! Spherical Bessel functions of the first kind.
//!
//! Three regimes:
//! - `x² ≤ 2n + 3`: the power series, whose terms then decrease
//!   monotonically in magnitude, so the alternating sum loses no digits;
//! - `x ≥ n`: upward recurrence from `j₀`, `j₁`, stable below the turning point;
//! - otherwise: Miller's downward recurrence normalised against `j₀` or `j₁`.

/// `jₙ(x)`.
pub fn spherical_bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let v = spherical_bessel_j(n, -x);
        return if n % 2 == 1 { -v } else { v };
    }
    let nf = n as f64;
    if x * x <= 2.0 * nf + 3.0 {
        // xⁿ / (2n+1)!! times the normalised series.
        let mut prefactor = 1.0;
        for i in 1..=n {
            prefactor *= x / (2 * i + 1) as f64;
        }
        return prefactor * normalized_series(n, x);
    }
    if x >= nf {
        upward(n, x)
    } else {
        downward(n, x)
    }
}

/// `(2n+1)!! · jₙ(x) / xⁿ`, equal to 1 at `x = 0`.
///
/// This is the flip-conditioned characteristic function of the symmetric
/// telegraph with `2n + 1` flips, evaluated without the `0/0` at small `x`.
pub fn spherical_bessel_j_normalized(n: u32, x: f64) -> f64 {
    let x = x.abs();
    let nf = n as f64;
    if x * x <= 2.0 * nf + 3.0 {
        return normalized_series(n, x);
    }
    // Interleave the (2i+1)/x factors so neither the double factorial nor
    // xⁿ overflows on its own.
    let mut value = spherical_bessel_j(n, x);
    for i in 1..=n {
        value *= (2 * i + 1) as f64 / x;
    }
    value
}

/// Σₛ (-x²/2)ˢ / (s! (2n+3)(2n+5)⋯(2n+2s+1)).
fn normalized_series(n: u32, x: f64) -> f64 {
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut s = 0.0;
    loop {
        term *= y / ((s + 1.0) * (2.0 * n as f64 + 2.0 * s + 3.0));
        sum += term;
        s += 1.0;
        if term.abs() <= 1e-17 * sum.abs() || s > 500.0 {
            return sum;
        }
    }
}

fn j0(x: f64) -> f64 {
    x.sin() / x
}

fn j1(x: f64) -> f64 {
    (x.sin() / x - x.cos()) / x
}

fn upward(n: u32, x: f64) -> f64 {
    let mut prev = j0(x);
    if n == 0 {
        return prev;
    }
    let mut cur = j1(x);
    for k in 1..n {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn downward(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let start = n + 32 + (60.0 * nf.max(x)).sqrt() as u32;
    let mut above = 0.0;
    let mut cur = 1e-300;
    let mut at_n = if start == n { cur } else { 0.0 };
    let mut f1 = 0.0;
    // cur holds f_k on entry, above holds f_{k+1}.
    let mut k = start;
    while k > 0 {
        let below = (2 * k + 1) as f64 / x * cur - above;
        above = cur;
        cur = below;
        k -= 1;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            at_n *= 1e-250;
            f1 *= 1e-250;
        }
        if k == n {
            at_n = cur;
        }
        if k == 1 {
            f1 = cur;
        }
    }
    let f0 = cur;
    let (t0, t1) = (j0(x), j1(x));
    if t0.abs() >= t1.abs() {
        at_n * (t0 / f0)
    } else {
        at_n * (t1 / f1)
    }
}
