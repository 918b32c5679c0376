//! Hardware-path emulation: oscillator offsets, phase noise, sampling-clock
//! drift, additive noise and an RF interferer, plus GPSDO discipline.

mod interferer;
mod oscillator;
mod signal;

pub use interferer::{generate_interferer, interferer_taps, InterfererConfig};
pub use oscillator::{
    combined_phase_noise, derive_cfo, effective_sco, gpsdo_discipline, GpsdoConfig,
    OscillatorModel, MAX_FRACTIONAL_ERROR,
};
pub use signal::{add_awgn, apply_cfo_and_phase_noise, apply_sco, apply_timing};

use serde::{Deserialize, Serialize};

use crate::dsp::derive_seed;
use crate::iq::IqBlock;
use crate::{Error, Result};

const SEED_PHASE: u64 = 1;
const SEED_NOISE: u64 = 2;
const SEED_INTERFERER: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpairmentConfig {
    pub tx_osc: OscillatorModel,
    pub rx_osc: OscillatorModel,
    /// Carrier frequency f_0, Hz.
    pub carrier_freq: f64,
    /// σ_w², linear, relative to unit signal power.
    pub noise_power: f64,
    #[serde(default)]
    pub interferer: Option<InterfererConfig>,
    /// Extra carrier offset on top of the oscillator CFO (e.g. residual
    /// Doppler), Hz.
    #[serde(default)]
    pub extra_cfo_hz: f64,
    /// Constant start-time offset, seconds.
    #[serde(default)]
    pub timing_offset_s: f64,
}

impl ImpairmentConfig {
    /// No offsets, no noise.
    pub fn ideal(carrier_freq: f64) -> Self {
        Self {
            tx_osc: OscillatorModel::ideal(),
            rx_osc: OscillatorModel::ideal(),
            carrier_freq,
            noise_power: 0.0,
            interferer: None,
            extra_cfo_hz: 0.0,
            timing_offset_s: 0.0,
        }
    }

    pub fn validate(&self, sample_rate: f64) -> Result<()> {
        self.tx_osc.validate()?;
        self.rx_osc.validate()?;
        if !(self.carrier_freq > 0.0) {
            return Err(Error::InvalidParameter("carrier frequency must be positive".into()));
        }
        if !(self.noise_power >= 0.0) {
            return Err(Error::InvalidParameter("noise power must be non-negative".into()));
        }
        if let Some(i) = &self.interferer {
            i.validate(sample_rate)?;
        }
        Ok(())
    }

    /// Total carrier offset applied to the signal, Hz.
    pub fn total_cfo(&self) -> f64 {
        derive_cfo(self.carrier_freq, &self.tx_osc, &self.rx_osc) + self.extra_cfo_hz
    }

    /// Frequency offset, phase noise, sampling-clock drift and timing offset.
    pub fn apply_oscillators(&self, x: &IqBlock, seed: u64) -> Result<IqBlock> {
        self.validate(x.sample_rate)?;
        let pn = combined_phase_noise(&self.tx_osc, &self.rx_osc);
        let y = apply_cfo_and_phase_noise(x, self.total_cfo(), pn, derive_seed(seed, &[SEED_PHASE]))?;
        let sco = effective_sco(&self.tx_osc, &self.rx_osc);
        apply_timing(&y, sco, self.timing_offset_s * x.sample_rate)
    }

    /// Interferer and thermal noise.
    pub fn apply_additive(&self, x: &IqBlock, seed: u64) -> Result<IqBlock> {
        self.validate(x.sample_rate)?;
        let mut y = x.clone();
        if let Some(cfg) = &self.interferer {
            let i = generate_interferer(cfg, x.len(), x.sample_rate, derive_seed(seed, &[SEED_INTERFERER]))?;
            y = y.add(&i);
        }
        add_awgn(&y, self.noise_power, derive_seed(seed, &[SEED_NOISE]))
    }

    pub fn apply(&self, x: &IqBlock, seed: u64) -> Result<IqBlock> {
        let y = self.apply_oscillators(x, seed)?;
        self.apply_additive(&y, seed)
    }
}
