//! Sparsity heuristics and the pilot-count diagnostic.

use crate::error::{Error, Result};

/// `ceil(Q / (2 log10 M))`.
///
/// The base-10 logarithm is the reading of `S = ceil(Q/(2 log M))` that gives
/// S = 262 for Q = 2048 and M = 8192; the natural logarithm would give 114.
pub fn sparsity_estimate(q: usize, m: usize) -> Result<usize> {
    if q == 0 || m < 2 {
        return Err(Error::invalid("sparsity estimate needs Q >= 1 and M >= 2"));
    }
    let v = q as f64 / (2.0 * (m as f64).log10());
    // guard against 49.999999 style round-off just below an integer
    let r = v.round();
    Ok(if (v - r).abs() < 1e-9 { r as usize } else { v.ceil() as usize })
}

/// `C gamma^-2 (ln(JD))^4 mu^2 S ln(1/eta)`: sufficient pilot count for
/// restricted isometry with constant `gamma` and failure probability `eta`.
pub fn pilot_count_bound(s: usize, j: usize, d: usize, mu: f64, gamma: f64, eta: f64, c: f64) -> f64 {
    let jd = (j * d) as f64;
    c / (gamma * gamma) * jd.ln().powi(4) * mu * mu * s as f64 * (1.0 / eta).ln()
}

/// Same bound with a real-valued `J D` product.
pub fn pilot_count_bound_f(s: f64, jd: f64, mu: f64, gamma: f64, eta: f64, c: f64) -> f64 {
    c / (gamma * gamma) * jd.ln().powi(4) * mu * mu * s * (1.0 / eta).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparsity_examples() {
        assert_eq!(sparsity_estimate(2048, 8192).unwrap(), 262);
        assert_eq!(sparsity_estimate(100, 10).unwrap(), 50);
        assert_eq!(sparsity_estimate(1, 2).unwrap(), 2);
        assert!(sparsity_estimate(0, 10).is_err());
        assert!(sparsity_estimate(5, 1).is_err());
    }

    #[test]
    fn bound_examples() {
        let e = std::f64::consts::E;
        assert!((pilot_count_bound_f(1.0, e, 1.0, 1.0, 1.0 / e, 1.0) - 1.0).abs() < 1e-12);
        let one = pilot_count_bound(3, 16, 64, 1.3, 0.5, 0.01, 2.0);
        let two = pilot_count_bound(6, 16, 64, 1.3, 0.5, 0.01, 2.0);
        assert!((two / one - 2.0).abs() < 1e-12);
        let u = pilot_count_bound(262, 16, 512, 1.0, 0.5, 0.01, 1.0);
        let v = pilot_count_bound(262, 16, 512, 2.237, 0.5, 0.01, 1.0);
        assert!((v / u - 5.004).abs() < 1e-3);
    }
}
