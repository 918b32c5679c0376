use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, Normal};

use super::oscillator::MAX_FRACTIONAL_ERROR;
use crate::dsp::{interp_unchecked, rng};
use crate::iq::IqBlock;
use crate::{Error, Result};

/// Multiplies sample `n` by `exp(j(2π·Δf·n/F_s + φ[n]))`, where φ is a
/// Gaussian random walk with increment std `phase_noise_std` (φ[0] = 0).
pub fn apply_cfo_and_phase_noise(
    x: &IqBlock,
    delta_f: f64,
    phase_noise_std: f64,
    seed: u64,
) -> Result<IqBlock> {
    if !(phase_noise_std >= 0.0) || !delta_f.is_finite() {
        return Err(Error::InvalidParameter("invalid CFO or phase-noise std".into()));
    }
    let w = 2.0 * PI * delta_f / x.sample_rate;
    let mut r = rng(seed);
    let normal = Normal::new(0.0, phase_noise_std.max(0.0)).expect("finite std");
    let mut phi = 0.0;
    let samples = x
        .samples
        .iter()
        .enumerate()
        .map(|(n, &s)| {
            if n > 0 && phase_noise_std > 0.0 {
                phi += normal.sample(&mut r);
            }
            s * Complex64::from_polar(1.0, w * n as f64 + phi)
        })
        .collect();
    Ok(IqBlock::new(samples, x.sample_rate))
}

/// Resamples so that output sample `n` reads the input at
/// `n·(1 + ε_s) − delay`, `delay` in samples. Reads beyond the input are zero;
/// the output keeps the input length.
pub fn apply_timing(x: &IqBlock, eps_s: f64, delay_samples: f64) -> Result<IqBlock> {
    if !eps_s.is_finite() || eps_s.abs() >= MAX_FRACTIONAL_ERROR {
        return Err(Error::InvalidParameter(format!("|ε_s| = {eps_s} must be below {MAX_FRACTIONAL_ERROR}")));
    }
    if !delay_samples.is_finite() {
        return Err(Error::InvalidParameter("non-finite delay".into()));
    }
    if eps_s == 0.0 && delay_samples == 0.0 {
        return Ok(x.clone());
    }
    let samples = (0..x.len())
        .map(|n| interp_unchecked(&x.samples, n as f64 * (1.0 + eps_s) - delay_samples))
        .collect();
    Ok(IqBlock::new(samples, x.sample_rate))
}

/// Sampling-clock offset: the effective sampling period becomes `T_s(1+ε_s)`,
/// so timing error accumulates as `n·ε_s` samples.
pub fn apply_sco(x: &IqBlock, eps_s: f64) -> Result<IqBlock> {
    apply_timing(x, eps_s, 0.0)
}

/// Adds circular complex Gaussian noise of total variance `noise_power`.
pub fn add_awgn(x: &IqBlock, noise_power: f64, seed: u64) -> Result<IqBlock> {
    if !(noise_power >= 0.0) {
        return Err(Error::InvalidParameter("noise power must be non-negative".into()));
    }
    if noise_power == 0.0 {
        return Ok(x.clone());
    }
    let mut r = rng(seed);
    let normal = Normal::new(0.0, (noise_power / 2.0).sqrt()).expect("finite std");
    let samples = x
        .samples
        .iter()
        .map(|&s| s + Complex64::new(normal.sample(&mut r), normal.sample(&mut r)))
        .collect();
    Ok(IqBlock::new(samples, x.sample_rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ones(n: usize) -> IqBlock {
        IqBlock::new(vec![Complex64::new(1.0, 0.0); n], 2e6)
    }

    #[test]
    fn quarter_rate_tone() {
        let y = apply_cfo_and_phase_noise(&ones(8), 0.5e6, 0.0, 0).unwrap();
        let want = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (n, s) in y.samples.iter().enumerate() {
            let (a, b) = want[n % 4];
            assert!((s - Complex64::new(a, b)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_cfo_is_identity() {
        let x = IqBlock::new((0..50).map(|i| Complex64::new(i as f64, 1.0)).collect(), 2e6);
        assert_eq!(apply_cfo_and_phase_noise(&x, 0.0, 0.0, 9).unwrap(), x);
        assert_eq!(apply_sco(&x, 0.0).unwrap(), x);
        assert_eq!(add_awgn(&x, 0.0, 1).unwrap(), x);
    }

    #[test]
    fn awgn_variance_and_determinism() {
        let z = IqBlock::zeros(1_000_000, 2e6);
        let a = add_awgn(&z, 0.1, 42).unwrap();
        assert!((a.mean_power() - 0.1).abs() < 0.002, "{}", a.mean_power());
        let i_var: f64 = a.samples.iter().map(|s| s.re * s.re).sum::<f64>() / 1e6;
        assert!((i_var - 0.05).abs() < 0.001);
        assert_eq!(a, add_awgn(&z, 0.1, 42).unwrap());
    }

    fn marker_block(len: usize, centers: &[f64]) -> IqBlock {
        let samples = (0..len)
            .map(|n| {
                let v: f64 = centers
                    .iter()
                    .map(|c| (-((n as f64 - c) / 3.0).powi(2) / 2.0).exp())
                    .sum();
                Complex64::new(v, 0.0)
            })
            .collect();
        IqBlock::new(samples, 2e6)
    }

    fn centroid(x: &IqBlock, around: f64) -> f64 {
        let lo = (around - 20.0) as usize;
        let hi = (around + 20.0) as usize;
        let (mut num, mut den) = (0.0, 0.0);
        for n in lo..=hi {
            let w = x.samples[n].re;
            num += w * n as f64;
            den += w;
        }
        num / den
    }

    #[test]
    fn sco_drift_matches_accumulated_offset() {
        let x = marker_block(22_000, &[10_000.0, 20_000.0]);
        for eps in [1e-4 * 0.999, -1e-4 * 0.999] {
            let y = apply_sco(&x, eps).unwrap();
            let d1 = centroid(&y, 10_000.0) - 10_000.0;
            let d2 = centroid(&y, 20_000.0) - 20_000.0;
            assert!((d1.abs() - 0.999).abs() < 0.05, "drift {d1}");
            assert_eq!(d1.signum(), -eps.signum());
            assert!((d2 / d1 - 2.0).abs() < 0.1, "ratio {}", d2 / d1);
        }
    }

    #[test]
    fn sco_out_of_range_rejected() {
        assert!(apply_sco(&ones(4), 2e-4).is_err());
    }

    proptest! {
        #[test]
        fn cfo_preserves_magnitude(
            v in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..200),
            df in -1e5f64..1e5, pn in 0.0f64..0.1, seed in any::<u64>()
        ) {
            let x = IqBlock::new(v.iter().map(|&(a, b)| Complex64::new(a, b)).collect(), 2e6);
            let y = apply_cfo_and_phase_noise(&x, df, pn, seed).unwrap();
            for (a, b) in x.samples.iter().zip(&y.samples) {
                prop_assert!((a.norm() - b.norm()).abs() < 1e-12);
            }
        }
    }
}
