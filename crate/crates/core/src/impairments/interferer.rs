use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dsp::{lowpass_taps, rng};
use crate::iq::IqBlock;
use crate::{Error, Result};

const STOPBAND_DB: f64 = 60.0;
/// Transition band as a fraction of the occupied bandwidth.
const TRANSITION_FRACTION: f64 = 0.1;

/// Band-limited Gaussian noise source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererConfig {
    /// Two-sided occupied bandwidth, Hz.
    pub bandwidth: f64,
    /// Centre relative to the signal centre, Hz.
    pub center_offset: f64,
    /// Mean power relative to unit signal power.
    pub power: f64,
}

impl InterfererConfig {
    pub fn validate(&self, sample_rate: f64) -> Result<()> {
        if !(self.bandwidth > 0.0) || self.bandwidth > sample_rate {
            return Err(Error::InvalidParameter(format!(
                "interferer bandwidth {} must be in (0, {sample_rate}]",
                self.bandwidth
            )));
        }
        if !(self.power >= 0.0) || !self.center_offset.is_finite() {
            return Err(Error::InvalidParameter("interferer power must be non-negative".into()));
        }
        Ok(())
    }
}

/// Kaiser-designed low-pass whose stopband (≥ 60 dB) begins at half the
/// occupied bandwidth.
pub fn interferer_taps(bandwidth: f64, sample_rate: f64) -> Vec<f64> {
    let stop = bandwidth / 2.0 / sample_rate;
    let width = (TRANSITION_FRACTION * bandwidth / sample_rate).min(stop);
    let cutoff = stop - width / 2.0;
    let beta = 0.1102 * (STOPBAND_DB - 8.7);
    let n = ((STOPBAND_DB - 8.0) / (2.285 * 2.0 * PI * width)).ceil() as usize;
    let n = n.clamp(3, 4001) | 1;
    lowpass_taps(cutoff, n, beta)
}

pub fn generate_interferer(
    cfg: &InterfererConfig,
    n_samples: usize,
    sample_rate: f64,
    seed: u64,
) -> Result<IqBlock> {
    cfg.validate(sample_rate)?;
    if cfg.power == 0.0 || n_samples == 0 {
        return Ok(IqBlock::zeros(n_samples, sample_rate));
    }
    let taps = interferer_taps(cfg.bandwidth, sample_rate);
    let gain: f64 = taps.iter().map(|h| h * h).sum();
    let scale = (cfg.power / gain).sqrt();
    let l = taps.len();
    let mut r = rng(seed);
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("finite std");
    let white: Vec<Complex64> = (0..n_samples + l - 1)
        .map(|_| Complex64::new(normal.sample(&mut r), normal.sample(&mut r)))
        .collect();
    let w = 2.0 * PI * cfg.center_offset / sample_rate;
    let samples = (0..n_samples)
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &h) in taps.iter().enumerate() {
                acc += white[n + l - 1 - j] * h;
            }
            acc * scale * Complex64::from_polar(1.0, w * n as f64)
        })
        .collect();
    Ok(IqBlock::new(samples, sample_rate))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(power: f64) -> InterfererConfig {
        InterfererConfig {
            bandwidth: 300e3,
            center_offset: 0.0,
            power,
        }
    }

    #[test]
    fn zero_power_is_silent() {
        let b = generate_interferer(&cfg(0.0), 1000, 2e6, 1).unwrap();
        assert!(b.samples.iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn mean_power_matches() {
        let b = generate_interferer(&cfg(0.5), 1_000_000, 2e6, 5).unwrap();
        assert!((b.mean_power() - 0.5).abs() < 0.01, "{}", b.mean_power());
    }

    #[test]
    fn stopband_attenuation() {
        let taps = interferer_taps(300e3, 2e6);
        // frequency response at and beyond the stop edge
        for k in 0..200 {
            let f = 0.075 + k as f64 * 0.002;
            let h: Complex64 = taps
                .iter()
                .enumerate()
                .map(|(n, &t)| Complex64::from_polar(t, -2.0 * PI * f * n as f64))
                .sum();
            assert!(20.0 * h.norm().log10() < -59.0, "f={f}: {}", h.norm());
        }
    }

    #[test]
    fn bandwidth_above_rate_rejected() {
        let mut c = cfg(1.0);
        c.bandwidth = 3e6;
        assert!(generate_interferer(&c, 10, 2e6, 0).is_err());
    }
}
