use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PlFrame;
use crate::dsp::convolve;
use crate::iq::IqBlock;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseShapeConfig {
    pub rolloff: f64,
    /// Filter length in symbols.
    pub span: usize,
    pub samples_per_symbol: usize,
}

impl Default for PulseShapeConfig {
    fn default() -> Self {
        Self {
            rolloff: 0.35,
            span: 10,
            samples_per_symbol: 2,
        }
    }
}

impl PulseShapeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rolloff > 0.0 && self.rolloff <= 1.0) {
            return Err(Error::InvalidParameter(format!("roll-off {} not in (0, 1]", self.rolloff)));
        }
        if self.span == 0 || self.samples_per_symbol == 0 {
            return Err(Error::InvalidParameter("span and samples per symbol must be positive".into()));
        }
        Ok(())
    }

    /// Delay from a symbol's input index to its peak after transmit and
    /// matched filtering, in samples.
    pub fn cascade_delay(&self) -> usize {
        self.span * self.samples_per_symbol
    }
}

fn rrc(t: f64, beta: f64) -> f64 {
    if t.abs() < 1e-12 {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    let edge = 1.0 / (4.0 * beta);
    if (t.abs() - edge).abs() < 1e-9 {
        let a = PI / (4.0 * beta);
        return beta / 2f64.sqrt() * ((1.0 + 2.0 / PI) * a.sin() + (1.0 - 2.0 / PI) * a.cos());
    }
    let num = (PI * t * (1.0 - beta)).sin() + 4.0 * beta * t * (PI * t * (1.0 + beta)).cos();
    let den = PI * t * (1.0 - (4.0 * beta * t).powi(2));
    num / den
}

/// Transmit taps, `span·sps + 1` long, scaled so `Σh² = sps` (unit power per
/// output sample for unit-energy symbols).
pub fn rrc_taps(cfg: &PulseShapeConfig) -> Vec<f64> {
    let sps = cfg.samples_per_symbol;
    let n = cfg.span * sps + 1;
    let mid = (n / 2) as f64;
    let mut h: Vec<f64> = (0..n)
        .map(|i| rrc((i as f64 - mid) / sps as f64, cfg.rolloff))
        .collect();
    let e: f64 = h.iter().map(|v| v * v).sum();
    let scale = (sps as f64 / e).sqrt();
    h.iter_mut().for_each(|v| *v *= scale);
    h
}

/// Receive matched-filter taps; the TX/RX cascade has unit gain at the
/// symbol peak.
pub fn matched_filter_taps(cfg: &PulseShapeConfig) -> Vec<f64> {
    let sps = cfg.samples_per_symbol as f64;
    rrc_taps(cfg).into_iter().map(|v| v / sps).collect()
}

/// Upsamples and filters a symbol sequence. Output has
/// `(symbols + span)·sps` samples.
pub fn shape_symbols(symbols: &[Complex64], cfg: &PulseShapeConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let sps = cfg.samples_per_symbol;
    let mut up = vec![Complex64::new(0.0, 0.0); symbols.len() * sps];
    for (i, &s) in symbols.iter().enumerate() {
        up[i * sps] = s;
    }
    let mut y = convolve(&up, &rrc_taps(cfg));
    y.resize((symbols.len() + cfg.span) * sps, Complex64::new(0.0, 0.0));
    Ok(y)
}

/// Concatenates the frames' on-air symbols and pulse-shapes them.
pub fn pulse_shape(frames: &[PlFrame], cfg: &PulseShapeConfig, symbol_rate: f64) -> Result<IqBlock> {
    if !(symbol_rate > 0.0) {
        return Err(Error::InvalidParameter("symbol rate must be positive".into()));
    }
    let symbols: Vec<Complex64> = frames.iter().flat_map(|f| f.symbols()).collect();
    let samples = shape_symbols(&symbols, cfg)?;
    Ok(IqBlock::new(samples, symbol_rate * cfg.samples_per_symbol as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tap_count_and_energy() {
        let cfg = PulseShapeConfig::default();
        let h = rrc_taps(&cfg);
        assert_eq!(h.len(), 21);
        let e: f64 = h.iter().map(|v| v * v).sum();
        assert!((e - 2.0).abs() < 1e-12);
        for i in 0..h.len() {
            assert!((h[i] - h[h.len() - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn cascade_peak_is_unity() {
        let cfg = PulseShapeConfig::default();
        let tx = rrc_taps(&cfg);
        let rx = matched_filter_taps(&cfg);
        let peak: f64 = tx.iter().zip(&rx).map(|(a, b)| a * b).sum();
        assert!((peak - 1.0).abs() < 1e-12);
    }

    #[test]
    fn output_length() {
        let cfg = PulseShapeConfig::default();
        let s = vec![Complex64::new(1.0, 0.0); 100];
        assert_eq!(shape_symbols(&s, &cfg).unwrap().len(), 220);
    }

    #[test]
    fn edge_singularity_is_continuous() {
        let b = 0.35;
        let t = 1.0 / (4.0 * b);
        let l = rrc(t - 1e-6, b);
        let r = rrc(t + 1e-6, b);
        assert!((rrc(t, b) - 0.5 * (l + r)).abs() < 1e-5);
    }
}
