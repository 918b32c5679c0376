use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dsp::rng;

/// Sinusoids per quadrature branch.
pub const SOS_SINUSOIDS: usize = 16;
/// Rotators are re-anchored to exact phases at this interval to stop
/// rounding drift.
const REANCHOR: usize = 4096;

/// Time-varying complex gain of one tap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FadingProcess {
    Static(Complex64),
    /// Zheng–Xiao sum-of-sinusoids Rayleigh process with a Jakes spectrum.
    SumOfSinusoids {
        power: f64,
        max_doppler_hz: f64,
        sample_rate: f64,
        /// Normalized frequencies (cycles/sample) of the in-phase branch.
        freq_i: Vec<f64>,
        phase_i: Vec<f64>,
        freq_q: Vec<f64>,
        phase_q: Vec<f64>,
    },
}

impl FadingProcess {
    pub fn rayleigh(power: f64, max_doppler_hz: f64, sample_rate: f64, seed: u64) -> Self {
        let mut r = rng(seed);
        let m = SOS_SINUSOIDS;
        let theta: f64 = r.random_range(-PI..PI);
        let fd = max_doppler_hz / sample_rate;
        let alpha: Vec<f64> = (1..=m)
            .map(|n| (2.0 * PI * n as f64 - PI + theta) / (4.0 * m as f64))
            .collect();
        let mut phases = || -> Vec<f64> { (0..m).map(|_| r.random_range(-PI..PI)).collect() };
        let phase_i = phases();
        let phase_q = phases();
        Self::SumOfSinusoids {
            power,
            max_doppler_hz,
            sample_rate,
            freq_i: alpha.iter().map(|a| fd * a.cos()).collect(),
            phase_i,
            freq_q: alpha.iter().map(|a| fd * a.sin()).collect(),
            phase_q,
        }
    }

    /// Mean power E|h|².
    pub fn power(&self) -> f64 {
        match self {
            Self::Static(g) => g.norm_sqr(),
            Self::SumOfSinusoids { power, .. } => *power,
        }
    }

    pub fn gain_at(&self, n: usize) -> Complex64 {
        match self {
            Self::Static(g) => *g,
            Self::SumOfSinusoids {
                power,
                freq_i,
                phase_i,
                freq_q,
                phase_q,
                ..
            } => {
                let t = n as f64;
                let xi: f64 = freq_i.iter().zip(phase_i).map(|(f, p)| (2.0 * PI * f * t + p).cos()).sum();
                let xq: f64 = freq_q.iter().zip(phase_q).map(|(f, p)| (2.0 * PI * f * t + p).cos()).sum();
                Complex64::new(xi, xq) * (power / freq_i.len() as f64).sqrt()
            }
        }
    }

    /// Gains for samples `0..len`.
    pub fn gains(&self, len: usize) -> Vec<Complex64> {
        match self {
            Self::Static(g) => vec![*g; len],
            Self::SumOfSinusoids {
                power,
                freq_i,
                phase_i,
                freq_q,
                phase_q,
                ..
            } => {
                let amp = (power / freq_i.len() as f64).sqrt();
                let mut out = vec![Complex64::new(0.0, 0.0); len];
                let branch = |freqs: &[f64], phases: &[f64], out: &mut [Complex64], quad: bool| {
                    for (f, p) in freqs.iter().zip(phases) {
                        let step = Complex64::from_polar(1.0, 2.0 * PI * f);
                        let mut rot = Complex64::new(0.0, 0.0);
                        for (n, o) in out.iter_mut().enumerate() {
                            if n % REANCHOR == 0 {
                                rot = Complex64::from_polar(1.0, 2.0 * PI * f * n as f64 + p);
                            }
                            if quad {
                                o.im += rot.re * amp;
                            } else {
                                o.re += rot.re * amp;
                            }
                            rot *= step;
                        }
                    }
                };
                branch(freq_i, phase_i, &mut out, false);
                branch(freq_q, phase_q, &mut out, true);
                out
            }
        }
    }
}
