use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsp::interp_unchecked;

/// Fractional-offset grid for feed-forward acquisition, per sample.
const ACQ_GRID: usize = 8;
const ACQ_SYMBOLS: usize = 4096;

/// Gardner timing error `Re{ y[n_k − N_s/2] · (y[n_k] − y[n_k − N_s])* }`.
pub fn gardner_ted(mid: Complex64, current: Complex64, previous: Complex64) -> f64 {
    (mid * (current - previous).conj()).re
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LockFlags {
    pub timing: bool,
    pub frame: bool,
    pub coarse_freq: bool,
    pub fine_freq: bool,
}

impl LockFlags {
    /// Flags only ever go from false to true within a burst.
    pub fn assert(&mut self, other: LockFlags) {
        self.timing |= other.timing;
        self.frame |= other.frame;
        self.coarse_freq |= other.coarse_freq;
        self.fine_freq |= other.fine_freq;
    }
}

/// Loop state carried from symbol to symbol.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SyncState {
    /// τ_k in samples, kept in `[0, N_s)`.
    pub timing_phase: f64,
    /// Whole-symbol corrections from τ wraps; the strobe for symbol k sits at
    /// `origin + (k + symbol_slips)·N_s − τ_k`.
    pub symbol_slips: i64,
    /// f̂_k, cycles per symbol.
    pub freq_estimate: f64,
    pub lock: LockFlags,
}

/// First-order timing update `τ ← τ + β·ε`, wrapped into `[0, N_s)`.
pub fn timing_loop_step(state: &SyncState, error: f64, beta: f64, sps: usize) -> SyncState {
    let ns = sps as f64;
    let mut next = state.clone();
    next.timing_phase += beta * error;
    while next.timing_phase >= ns {
        next.timing_phase -= ns;
        next.symbol_slips -= 1;
    }
    while next.timing_phase < 0.0 {
        next.timing_phase += ns;
        next.symbol_slips += 1;
    }
    next
}

#[derive(Debug, Clone, Default)]
pub struct TimingOutput {
    pub symbols: Vec<Complex64>,
    /// Sample position of each strobe.
    pub strobes: Vec<f64>,
    pub tau: Vec<f64>,
}

/// Picks the sampling phase with the largest symbol-spaced energy over the
/// opening symbols.
pub fn acquire_timing(x: &[Complex64], sps: usize) -> f64 {
    let n_sym = (x.len() / sps).min(ACQ_SYMBOLS);
    let mut best = (0.0, f64::MIN);
    for g in 0..ACQ_GRID * sps {
        let off = g as f64 / ACQ_GRID as f64;
        let e: f64 = (0..n_sym)
            .map(|k| interp_unchecked(x, off + (k * sps) as f64).norm_sqr())
            .sum();
        if e > best.1 {
            best = (off, e);
        }
    }
    best.0
}

/// Runs acquisition followed by the closed Gardner loop over a matched-filter
/// output sampled at `sps` samples per symbol.
pub fn recover_timing(x: &[Complex64], sps: usize, beta: f64) -> TimingOutput {
    let mut out = TimingOutput::default();
    if x.len() < 2 * sps {
        return out;
    }
    let origin = acquire_timing(x, sps);
    let ns = sps as f64;
    let last = (x.len() - 1) as f64;
    let mut state = SyncState::default();
    let mut prev: Option<Complex64> = None;
    for k in 0.. {
        let t = origin + (k as i64 + state.symbol_slips) as f64 * ns - state.timing_phase;
        if t > last {
            break;
        }
        let y = interp_unchecked(x, t);
        if let Some(p) = prev {
            let mid = interp_unchecked(x, t - ns / 2.0);
            let e = gardner_ted(mid, y, p);
            state = timing_loop_step(&state, e, beta, sps);
        }
        out.symbols.push(y);
        out.strobes.push(t);
        out.tau.push(state.timing_phase);
        prev = Some(y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ted_trivial_cases() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(gardner_ted(Complex64::new(0.0, 0.0), -one, one), 0.0);
        assert_eq!(gardner_ted(Complex64::new(0.3, 0.2), one, one), 0.0);
    }

    #[test]
    fn loop_step_arithmetic_and_wrap() {
        let s = SyncState {
            timing_phase: 0.5,
            ..Default::default()
        };
        let n = timing_loop_step(&s, 0.01, 0.6e-3, 2);
        assert!((n.timing_phase - 0.500006).abs() < 1e-12);
        assert_eq!(timing_loop_step(&s, 0.0, 0.6e-3, 2), s);
        let w = timing_loop_step(&s, 2.0, 1.0, 2);
        assert!((w.timing_phase - 0.5).abs() < 1e-12);
        assert_eq!(w.symbol_slips, -1);
        let w = timing_loop_step(&s, -1.0, 1.0, 2);
        assert!((w.timing_phase - 1.5).abs() < 1e-12);
        assert_eq!(w.symbol_slips, 1);
    }

    #[test]
    fn lock_flags_are_monotone() {
        let mut f = LockFlags {
            timing: true,
            ..Default::default()
        };
        f.assert(LockFlags::default());
        assert!(f.timing);
    }
}
