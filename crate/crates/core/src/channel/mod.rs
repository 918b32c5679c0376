//! Software LEO channel: circular-orbit Doppler, NTN-TDL-C tapped delay line
//! with a Rician LOS tap, log-normal shadowing, and SNR bookkeeping.

mod fading;
mod geometry;
mod tdl;

pub use fading::{FadingProcess, SOS_SINUSOIDS};
pub use geometry::{doppler_shift, Geometry, EARTH_RADIUS};
pub use tdl::{load_ntn_tdl_c, TdlProfile, TdlTap, DEFAULT_SHADOWING_STD_DB};

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dsp::{derive_seed, rng};
use crate::iq::IqBlock;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingTap {
    /// Integer delay k_l, samples.
    pub delay: usize,
    pub process: FadingProcess,
}

/// One draw of the channel for a burst of `n_samples`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub los_amplitude: f64,
    pub los_phase: f64,
    pub los_doppler_hz: f64,
    pub los_delay: usize,
    pub taps: Vec<FadingTap>,
    pub shadowing_db: f64,
    pub sample_rate: f64,
    pub n_samples: usize,
}

impl ChannelRealization {
    /// Unit LOS path with no Doppler, phase or multipath.
    pub fn los_only(n_samples: usize, sample_rate: f64) -> Self {
        Self {
            los_amplitude: 1.0,
            los_phase: 0.0,
            los_doppler_hz: 0.0,
            los_delay: 0,
            taps: Vec::new(),
            shadowing_db: 0.0,
            sample_rate,
            n_samples,
        }
    }

    /// Time-invariant taps `(delay, gain)` and no separate LOS path.
    pub fn static_taps(n_samples: usize, sample_rate: f64, taps: &[(usize, Complex64)]) -> Self {
        Self {
            los_amplitude: 0.0,
            taps: taps
                .iter()
                .map(|&(delay, g)| FadingTap {
                    delay,
                    process: FadingProcess::Static(g),
                })
                .collect(),
            ..Self::los_only(n_samples, sample_rate)
        }
    }

    pub fn shadowing_gain(&self) -> f64 {
        10f64.powf(self.shadowing_db / 20.0)
    }
}

/// Draws a channel realization. NLOS taps fade with a Jakes spectrum whose
/// maximum Doppler equals the LOS Doppler magnitude.
pub fn realize_channel(
    profile: &TdlProfile,
    geom: &Geometry,
    f0: f64,
    sample_rate: f64,
    n_samples: usize,
    seed: u64,
) -> Result<ChannelRealization> {
    geom.validate()?;
    let f_d0 = doppler_shift(geom, f0);
    let mut r = rng(derive_seed(seed, &[0]));
    let los_phase = r.random_range(0.0..2.0 * PI);
    let shadowing_db = if profile.shadowing_std_db > 0.0 {
        Normal::new(0.0, profile.shadowing_std_db)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .sample(&mut r)
    } else {
        0.0
    };
    let span = n_samples as f64 / sample_rate;
    let mut taps = Vec::new();
    for (i, t) in profile.taps.iter().enumerate() {
        if t.delay > span {
            return Err(Error::InvalidParameter(format!(
                "tap delay {} s exceeds burst duration {span} s",
                t.delay
            )));
        }
        if t.is_los {
            continue;
        }
        let power = 10f64.powf(t.power_db / 10.0);
        taps.push(FadingTap {
            delay: (t.delay * sample_rate).round() as usize,
            process: FadingProcess::rayleigh(power, f_d0.abs(), sample_rate, derive_seed(seed, &[1, i as u64])),
        });
    }
    Ok(ChannelRealization {
        los_amplitude: profile.los_power().sqrt(),
        los_phase,
        los_doppler_hz: f_d0,
        los_delay: 0,
        taps,
        shadowing_db,
        sample_rate,
        n_samples,
    })
}

/// Passes `x` through the realization (no noise added).
pub fn apply_channel(x: &IqBlock, real: &ChannelRealization) -> Result<IqBlock> {
    if x.len() > real.n_samples {
        return Err(Error::Length {
            what: "input longer than channel realization",
            expected: real.n_samples,
            actual: x.len(),
        });
    }
    if (x.sample_rate - real.sample_rate).abs() > 1e-9 * real.sample_rate {
        return Err(Error::InvalidParameter("sample rate differs from realization".into()));
    }
    let n = x.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if real.los_amplitude != 0.0 {
        let w = 2.0 * PI * real.los_doppler_hz / real.sample_rate;
        for i in real.los_delay..n {
            out[i] += x.samples[i - real.los_delay]
                * Complex64::from_polar(real.los_amplitude, w * i as f64 + real.los_phase);
        }
    }
    for tap in &real.taps {
        let g = tap.process.gains(n);
        for i in tap.delay..n {
            out[i] += x.samples[i - tap.delay] * g[i];
        }
    }
    let sh = real.shadowing_gain();
    if sh != 1.0 {
        out.iter_mut().for_each(|v| *v *= sh);
    }
    Ok(IqBlock::new(out, x.sample_rate))
}

/// Mean received power for a unit-power input, including shadowing.
pub fn signal_power(real: &ChannelRealization) -> f64 {
    let multipath: f64 = real.taps.iter().map(|t| t.process.power()).sum();
    real.shadowing_gain().powi(2) * (real.los_amplitude.powi(2) + multipath)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn block(v: &[(f64, f64)]) -> IqBlock {
        IqBlock::new(v.iter().map(|&(a, b)| Complex64::new(a, b)).collect(), 2e6)
    }

    #[test]
    fn los_only_identity_and_negation() {
        let x = block(&[(1.0, 2.0), (-0.5, 0.3), (0.0, 1.0)]);
        let mut r = ChannelRealization::los_only(3, 2e6);
        assert_eq!(apply_channel(&x, &r).unwrap(), x);
        r.los_phase = PI;
        let y = apply_channel(&x, &r).unwrap();
        for (a, b) in x.samples.iter().zip(&y.samples) {
            assert!((a + b).norm() < 1e-12);
        }
        assert_eq!(signal_power(&ChannelRealization::los_only(3, 2e6)), 1.0);
    }

    #[test]
    fn two_tap_static_matches_convolution() {
        let x: Vec<(f64, f64)> = (0..1000).map(|i| ((i as f64 * 0.7).sin(), (i as f64 * 0.31).cos())).collect();
        let x = block(&x);
        let taps = [(0, Complex64::new(0.8, 0.1)), (3, Complex64::new(-0.2, 0.4))];
        let r = ChannelRealization::static_taps(1000, 2e6, &taps);
        let y = apply_channel(&x, &r).unwrap();
        for n in 0..1000 {
            let mut want = Complex64::new(0.0, 0.0);
            for &(d, g) in &taps {
                if n >= d {
                    want += g * x.samples[n - d];
                }
            }
            assert!((y.samples[n] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn signal_power_sums_components() {
        let mut r = ChannelRealization::static_taps(10, 2e6, &[(1, Complex64::new(0.2f64.sqrt(), 0.0))]);
        r.los_amplitude = 0.8f64.sqrt();
        assert!((signal_power(&r) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realization_is_deterministic() {
        let p = load_ntn_tdl_c(80e-9).unwrap();
        let g = Geometry::default();
        let a = realize_channel(&p, &g, 437e6, 2e6, 1000, 5).unwrap();
        let b = realize_channel(&p, &g, 437e6, 2e6, 1000, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.taps.len(), 2);
        assert_eq!(a.taps[1].delay, 2);
    }

    #[test]
    fn input_longer_than_realization_rejected() {
        let r = ChannelRealization::los_only(2, 2e6);
        assert!(apply_channel(&block(&[(1.0, 0.0); 3]), &r).is_err());
    }

    proptest! {
        #[test]
        fn channel_is_linear(
            v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 10..200),
            a in -2.0f64..2.0, b in -2.0f64..2.0, seed in any::<u64>()
        ) {
            let n = v.len();
            let p = load_ntn_tdl_c(80e-9).unwrap();
            let r = realize_channel(&p, &Geometry::default(), 437e6, 2e6, n, seed).unwrap();
            let x = block(&v.iter().map(|t| (t.0, t.1)).collect::<Vec<_>>());
            let y = block(&v.iter().map(|t| (t.2, t.3)).collect::<Vec<_>>());
            let mix = IqBlock::new(x.samples.iter().zip(&y.samples).map(|(p, q)| p * a + q * b).collect(), 2e6);
            let lhs = apply_channel(&mix, &r).unwrap();
            let cx = apply_channel(&x, &r).unwrap();
            let cy = apply_channel(&y, &r).unwrap();
            for i in 0..n {
                prop_assert!((lhs.samples[i] - (cx.samples[i] * a + cy.samples[i] * b)).norm() < 1e-10);
            }
        }
    }
}
