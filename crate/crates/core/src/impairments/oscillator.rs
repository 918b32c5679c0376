use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dsp::rng;
use crate::{Error, Result};

/// Largest fractional error an oscillator model may carry.
pub const MAX_FRACTIONAL_ERROR: f64 = 1e-4;

/// Frequency/timing behaviour of one radio end.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorModel {
    /// Fractional carrier frequency error ε.
    pub fractional_freq_error: f64,
    /// Fractional sampling-clock error ε_s.
    pub sampling_clock_error: f64,
    /// Random-walk phase increment std, rad/sample.
    pub phase_noise_std: f64,
}

impl OscillatorModel {
    pub fn ideal() -> Self {
        Self::default()
    }

    /// A free-running oscillator: ε drawn uniformly in ±`ppm_bound`, with
    /// the sampling clock derived from the same reference (ε_s = ε).
    pub fn internal(ppm_bound: f64, phase_noise_std: f64, seed: u64) -> Self {
        let mut r = rng(seed);
        let eps = if ppm_bound > 0.0 {
            r.random_range(-ppm_bound..=ppm_bound)
        } else {
            0.0
        };
        Self {
            fractional_freq_error: eps,
            sampling_clock_error: eps,
            phase_noise_std,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v.abs() < MAX_FRACTIONAL_ERROR;
        if !ok(self.fractional_freq_error) || !ok(self.sampling_clock_error) {
            return Err(Error::InvalidParameter(format!(
                "oscillator errors must be below {MAX_FRACTIONAL_ERROR} in magnitude: {self:?}"
            )));
        }
        if !(self.phase_noise_std >= 0.0) {
            return Err(Error::InvalidParameter("phase noise std must be non-negative".into()));
        }
        Ok(())
    }
}

/// Carrier offset between the two ends, `f_0·(ε_tx − ε_rx)`.
pub fn derive_cfo(f0: f64, tx: &OscillatorModel, rx: &OscillatorModel) -> f64 {
    f0 * (tx.fractional_freq_error - rx.fractional_freq_error)
}

/// Net sampling-clock error seen by the receiver. Both ends clock their
/// converters from their own reference, so the offsets subtract.
pub fn effective_sco(tx: &OscillatorModel, rx: &OscillatorModel) -> f64 {
    rx.sampling_clock_error - tx.sampling_clock_error
}

/// Combined phase-noise increment std of two independent random walks.
pub fn combined_phase_noise(tx: &OscillatorModel, rx: &OscillatorModel) -> f64 {
    tx.phase_noise_std.hypot(rx.phase_noise_std)
}

/// Locks an oscillator to a GPS-disciplined reference: ε and ε_s are redrawn
/// uniformly within ±`stability` and phase noise is divided by
/// `phase_noise_factor`.
pub fn gpsdo_discipline(
    osc: &OscillatorModel,
    stability: f64,
    phase_noise_factor: f64,
    seed: u64,
) -> Result<OscillatorModel> {
    if !(stability >= 0.0) || stability >= MAX_FRACTIONAL_ERROR {
        return Err(Error::InvalidParameter(format!("GPSDO stability {stability} out of range")));
    }
    if !(phase_noise_factor >= 1.0) {
        return Err(Error::InvalidParameter("phase-noise factor must be at least 1".into()));
    }
    let mut r = rng(seed);
    let mut draw = || {
        if stability > 0.0 {
            r.random_range(-stability..=stability)
        } else {
            0.0
        }
    };
    Ok(OscillatorModel {
        fractional_freq_error: draw(),
        sampling_clock_error: draw(),
        phase_noise_std: osc.phase_noise_std / phase_noise_factor,
    })
}

/// GPSDO reference parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GpsdoConfig {
    pub stability: f64,
    pub phase_noise_factor: f64,
    /// Bound on the start-time offset, seconds.
    pub timing_accuracy_s: f64,
}

impl Default for GpsdoConfig {
    fn default() -> Self {
        Self {
            stability: 1e-11,
            phase_noise_factor: 100.0,
            timing_accuracy_s: 20e-9,
        }
    }
}

impl GpsdoConfig {
    /// Constant start-time offset for one run, uniform in ±timing accuracy.
    pub fn draw_timing_offset(&self, seed: u64) -> f64 {
        if self.timing_accuracy_s > 0.0 {
            rng(seed).random_range(-self.timing_accuracy_s..=self.timing_accuracy_s)
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn osc(eps: f64) -> OscillatorModel {
        OscillatorModel {
            fractional_freq_error: eps,
            sampling_clock_error: eps,
            phase_noise_std: 1e-4,
        }
    }

    #[test]
    fn cfo_arithmetic() {
        assert!((derive_cfo(437e6, &osc(2.5e-6), &osc(0.0)) - 1092.5).abs() < 1e-9);
        assert_eq!(derive_cfo(437e6, &osc(1e-6), &osc(1e-6)), 0.0);
        assert!((derive_cfo(437e6, &osc(1e-11), &osc(-1e-11)) - 8.74e-3).abs() < 1e-12);
    }

    #[test]
    fn discipline_bounds() {
        let d = gpsdo_discipline(&osc(2.5e-6), 1e-11, 100.0, 3).unwrap();
        assert!(d.fractional_freq_error.abs() <= 1e-11);
        assert!(d.sampling_clock_error.abs() <= 1e-11);
        assert!((d.phase_noise_std - 1e-6).abs() < 1e-18);
        let z = gpsdo_discipline(&osc(2.5e-6), 0.0, 100.0, 3).unwrap();
        assert_eq!(z.fractional_freq_error, 0.0);
        let tx = gpsdo_discipline(&osc(2e-6), 1e-11, 100.0, 4).unwrap();
        assert!(derive_cfo(437e6, &tx, &d).abs() <= 437e6 * 2e-11);
    }

    #[test]
    fn internal_draw_within_bound() {
        for s in 0..200 {
            let o = OscillatorModel::internal(2.5e-6, 1e-4, s);
            assert!(o.fractional_freq_error.abs() <= 2.5e-6);
            assert_eq!(o.fractional_freq_error, o.sampling_clock_error);
            o.validate().unwrap();
        }
    }

    #[test]
    fn validation_rejects_large_errors() {
        assert!(osc(2e-4).validate().is_err());
        let mut o = osc(0.0);
        o.phase_noise_std = -1.0;
        assert!(o.validate().is_err());
    }

    proptest! {
        #[test]
        fn disciplined_always_within_stability(
            eps in -9e-5f64..9e-5, stab in 0.0f64..1e-6, seed in any::<u64>()
        ) {
            let d = gpsdo_discipline(&osc(eps), stab, 100.0, seed).unwrap();
            prop_assert!(d.fractional_freq_error.abs() <= stab);
            prop_assert!(d.sampling_clock_error.abs() <= stab);
        }
    }
}
