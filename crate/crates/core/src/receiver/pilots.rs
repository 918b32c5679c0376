use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Phase of the block correlation `Σ y[k]·p*[k]`.
pub fn pilot_phase_estimate(rx: &[Complex64], known: &[Complex64]) -> Result<f64> {
    Ok(block_gain(rx, known)?.arg())
}

/// Least-squares complex gain of a received reference block,
/// `Σ y·p* / Σ |p|²`.
pub fn block_gain(rx: &[Complex64], known: &[Complex64]) -> Result<Complex64> {
    if rx.is_empty() || rx.len() != known.len() {
        return Err(Error::Length {
            what: "pilot block",
            expected: known.len(),
            actual: rx.len(),
        });
    }
    let num: Complex64 = rx.iter().zip(known).map(|(y, p)| y * p.conj()).sum();
    let den: f64 = known.iter().map(|p| p.norm_sqr()).sum();
    Ok(num / den)
}

/// Removes ±2π jumps between consecutive phases.
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(phases.len());
    for &p in phases {
        let v = match out.last() {
            Some(&prev) => {
                let mut d = p - prev;
                d -= 2.0 * PI * (d / (2.0 * PI)).round();
                prev + d
            }
            None => p,
        };
        out.push(v);
    }
    out
}

/// Residual frequency in Hz from the mean phase increment between
/// consecutive pilot blocks spaced `spacing` symbols of `symbol_period` s.
pub fn pilot_freq_estimate(block_phases: &[f64], spacing: usize, symbol_period: f64) -> Result<f64> {
    if block_phases.len() < 2 {
        return Err(Error::InsufficientReference {
            needed: 2,
            got: block_phases.len(),
        });
    }
    let u = unwrap_phases(block_phases);
    let mean_step = (u[u.len() - 1] - u[0]) / (u.len() - 1) as f64;
    Ok(mean_step / (2.0 * PI * spacing as f64 * symbol_period))
}

/// Piecewise-linear phase trajectory through `(block_indices, phases)`,
/// held constant outside the first and last block. `block_indices` must be
/// increasing.
pub fn phase_interpolate(phases: &[f64], block_indices: &[f64], data_indices: &[usize]) -> Vec<f64> {
    if phases.is_empty() {
        return vec![0.0; data_indices.len()];
    }
    let last = phases.len() - 1;
    let mut seg = 0;
    data_indices
        .iter()
        .map(|&d| {
            let x = d as f64;
            if x <= block_indices[0] {
                return phases[0];
            }
            if x >= block_indices[last] {
                return phases[last];
            }
            while block_indices[seg + 1] < x {
                seg += 1;
            }
            let (x0, x1) = (block_indices[seg], block_indices[seg + 1]);
            phases[seg] + (phases[seg + 1] - phases[seg]) * (x - x0) / (x1 - x0)
        })
        .collect()
}
