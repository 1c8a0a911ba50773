//! Streaming moment accumulators with exact pairwise merging.

/// Count, mean and central moment sums up to fourth order.
///
/// Updates and merges use the pairwise formulas of Chan et al. and Pébay,
/// so merging per-worker accumulators in a fixed order is deterministic.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.n;
        let n = n1 + 1.0;
        let delta = x - self.mean;
        let dn = delta / n;
        let dn2 = dn * dn;
        let term1 = delta * dn * n1;
        self.mean += dn;
        self.m4 += term1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += term1 * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += term1;
        self.n = n;
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0.0 {
            return;
        }
        if self.n == 0.0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.n, other.n);
        let n = na + nb;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let m4 = self.m4
            + other.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        let m3 = self.m3
            + other.m3
            + d2 * delta * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        self.m2 += other.m2 + d2 * na * nb / n;
        self.mean += delta * nb / n;
        self.m3 = m3;
        self.m4 = m4;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n as u64
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero below two samples.
    pub fn variance(&self) -> f64 {
        if self.n < 2.0 {
            0.0
        } else {
            self.m2 / (self.n - 1.0)
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.n < 2.0 {
            0.0
        } else {
            (self.variance() / self.n).sqrt()
        }
    }

    /// Standard error of [`Moments::variance`], from the fourth central moment.
    pub fn variance_std_error(&self) -> f64 {
        let n = self.n;
        if n < 4.0 {
            return 0.0;
        }
        let s2 = self.variance();
        let mu4 = self.m4 / n;
        ((mu4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
    }
}
