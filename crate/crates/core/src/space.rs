//! Space accounting in 64-bit words.
//!
//! Each stateful algorithm reports the words of state it declares: hash
//! coefficients, counters, stored edges. Input buffering is never charged.

use alloc::string::String;

use crate::util::ln;

/// Implemented by every sketch and tester state.
pub trait SpaceAccounted {
    fn words_used(&self) -> u64;
}

/// Words charged to one algorithm run.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceReport {
    pub algorithm: String,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub alpha: Option<u64>,
    pub words_used: u64,
}

impl SpaceReport {
    pub fn new(algorithm: impl Into<String>, words_used: u64) -> Self {
        SpaceReport { algorithm: algorithm.into(), n: None, k: None, alpha: None, words_used }
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_alpha(mut self, alpha: u64) -> Self {
        self.alpha = Some(alpha);
        self
    }
}

/// Report the words of `state` under `algorithm`.
pub fn space_audit<S: SpaceAccounted + ?Sized>(algorithm: &str, state: &S) -> SpaceReport {
    SpaceReport::new(algorithm, state.words_used())
}

/// Least-squares slope of `ln(y)` against `ln(x)`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (ln(x), ln(y));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::ln;

    #[test]
    fn ln_matches_std() {
        for &x in &[1e-6, 0.3, 1.0, 2.0, core::f64::consts::E, 10.0, 1234.5, 1e12] {
            assert!((ln(x) - f64::ln(x)).abs() < 1e-12, "{x}");
        }
    }

    #[test]
    fn slope_of_power_laws() {
        let lin: std::vec::Vec<_> = [8.0, 16.0, 32.0, 64.0].iter().map(|&k| (k, 3.0 * k + 0.0)).collect();
        assert!((log_log_slope(&lin) - 1.0).abs() < 1e-9);
        let quad: std::vec::Vec<_> = [8.0, 16.0, 32.0].iter().map(|&k| (k, 0.5 * k * k)).collect();
        assert!((log_log_slope(&quad) - 2.0).abs() < 1e-9);
    }
}
