//! Transcendental helpers and the slowly-varying scales used throughout.
//!
//! All logarithms are natural. `libm` is used unconditionally so that values
//! are identical with and without the standard library, which keeps golden
//! files portable.

/// Natural logarithm.
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// Exponential.
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `x^y` for real exponents.
#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Square root.
#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Iterated logarithm `ln ln n`.
#[inline]
pub fn log_log(n: u64) -> f64 {
    ln(ln(n as f64))
}

/// Triple logarithm `ln ln ln n`.
#[inline]
pub fn log_log_log(n: u64) -> f64 {
    ln(log_log(n))
}

/// Minimal depth for a trapping valley at horizon `n`: `ln n + gamma·ln ln n`.
#[inline]
pub fn valley_depth_threshold(n: u64, gamma: f64) -> f64 {
    ln(n as f64) + gamma * log_log(n)
}

/// Half-width of the reconstruction error band: `c0·ln ln ln n / ln n`.
#[inline]
pub fn error_band_half_width(n: u64, c0: f64) -> f64 {
    c0 * log_log_log(n) / ln(n as f64)
}

/// Visit-count threshold `(ln n)^gamma` defining the well-visited set.
#[inline]
pub fn visit_threshold(n: u64, gamma: f64) -> f64 {
    powf(ln(n as f64), gamma)
}

/// Barrier bound `ln n − (gamma/2)·ln ln n` for the low-barrier interval.
#[inline]
pub fn barrier_bound(n: u64, gamma: f64) -> f64 {
    ln(n as f64) - 0.5 * gamma * log_log(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: u64 = 500_000;

    #[test]
    fn depth_threshold_at_half_million() {
        // ln(5e5) ≈ 13.1224, ln ln ≈ 2.5743
        let g = valley_depth_threshold(N, 7.0);
        assert!((ln(N as f64) - 13.122_363_377_404_328).abs() < 1e-12);
        assert!((g - 31.1428).abs() < 1e-3, "got {g}");
    }

    #[test]
    fn band_half_width_at_half_million() {
        let u = error_band_half_width(N, 10.0);
        assert!((u - 0.7206).abs() < 1e-4, "got {u}");
    }

    #[test]
    fn visit_threshold_examples() {
        // (ln 5e5)^7 ≈ 6.70e7, far above n itself: the set is empty there.
        let t7 = visit_threshold(N, 7.0);
        assert!((t7 - 6.70e7).abs() / 6.70e7 < 1e-2, "got {t7}");
        assert!(t7 > N as f64);
        assert!((visit_threshold(N, 4.0) - 2.97e4).abs() / 2.97e4 < 1e-2);
    }

    #[test]
    fn localization_bounds_at_half_million() {
        let spread = log_log(N) * log_log(N);
        let tgap = powf(ln(N as f64), 3.0);
        assert!((spread - 6.627).abs() < 1e-3, "got {spread}");
        assert!((tgap - 2259.9).abs() < 0.5, "got {tgap}");
    }
}
