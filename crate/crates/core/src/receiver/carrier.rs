use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Coarse offset in cycles per symbol from the mean lag-1 phase increment of
/// the modulation-stripped reference symbols.
pub fn coarse_cfo_estimate(symbols: &[Complex64], reference: &[Complex64]) -> Result<f64> {
    coarse_cfo_estimate_lag(symbols, reference, 1)
}

/// Same estimator with the phase increment measured over `lag` symbols.
/// Unambiguous for `|CCFO| < 1/(2·lag)`.
pub fn coarse_cfo_estimate_lag(symbols: &[Complex64], reference: &[Complex64], lag: usize) -> Result<f64> {
    let n = symbols.len().min(reference.len());
    if lag == 0 || n < lag + 1 {
        return Err(Error::InsufficientReference {
            needed: lag.max(1) + 1,
            got: n,
        });
    }
    let z: Vec<Complex64> = symbols.iter().zip(reference).map(|(y, p)| y * p.conj()).collect();
    let acc: Complex64 = (lag..n).map(|i| z[i] * z[i - lag].conj()).sum();
    Ok(acc.arg() / (2.0 * PI * lag as f64))
}

/// First-order frequency update `f ← f + β·e`.
pub fn fll_step(freq: f64, error: f64, beta: f64) -> f64 {
    freq + beta * error
}

/// Frequency error (cycles/symbol) seen at `z_now` relative to `z_then`,
/// `lag` symbols earlier, both modulation-stripped and NCO-corrected.
pub fn fll_error(z_now: Complex64, z_then: Complex64, lag: usize) -> f64 {
    (z_now * z_then.conj()).arg() / (2.0 * PI * lag as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framing::sof_symbols;

    #[test]
    fn noise_free_tone_is_exact() {
        let p = sof_symbols();
        let y: Vec<Complex64> = p
            .iter()
            .enumerate()
            .map(|(n, s)| s * Complex64::from_polar(1.0, 2.0 * PI * 1e-3 * n as f64))
            .collect();
        let c = coarse_cfo_estimate(&y, &p).unwrap();
        assert!((c - 1e-3).abs() < 1e-12);
        assert!((c * 1e6 - 1000.0).abs() < 1e-6);
        assert!(coarse_cfo_estimate(&p, &p).unwrap().abs() < 1e-15);
        assert!((coarse_cfo_estimate_lag(&y, &p, 13).unwrap() - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn range_edge_is_quarter_rate() {
        let p = vec![Complex64::new(1.0, 0.0); 10];
        let at = |f: f64| {
            let y: Vec<_> = (0..10).map(|n| Complex64::from_polar(1.0, 2.0 * PI * f * n as f64)).collect();
            coarse_cfo_estimate(&y, &p).unwrap()
        };
        assert!((at(0.24) - 0.24).abs() < 1e-12);
        assert!((at(-0.24) + 0.24).abs() < 1e-12);
    }

    #[test]
    fn too_few_symbols() {
        let one = [Complex64::new(1.0, 0.0)];
        assert!(coarse_cfo_estimate(&one, &one).is_err());
    }

    #[test]
    fn fll_arithmetic_and_convergence() {
        assert_eq!(fll_step(0.3, 0.0, 0.8e-3), 0.3);
        assert!((fll_step(0.0, 0.01, 0.8e-3) - 8e-6).abs() < 1e-18);
        let (f0, beta) = (1e-3, 0.8e-3);
        let mut f = 0.0;
        let mut theta = 0.0;
        let mut prev: Option<Complex64> = None;
        for n in 0..5000 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * f0 * n as f64 - theta);
            if let Some(p) = prev {
                f = fll_step(f, fll_error(z, p, 1), beta);
            }
            prev = Some(z);
            theta += 2.0 * PI * f;
        }
        assert!((f / f0 - 1.0).abs() < 0.05, "{f}");
    }
}
