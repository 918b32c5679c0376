//! Error-rate, SNR and comparison metrics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Lower bound reported for error-free BER/FER.
pub const RATE_FLOOR: f64 = 1e-8;
/// Upper bound on reported SNR estimates, dB.
pub const SNR_CEILING_DB: f64 = 40.0;
pub const MIN_SNR_SYMBOLS: usize = 36;

fn floor(v: f64) -> f64 {
    v.clamp(RATE_FLOOR, 1.0)
}

/// Bit errors between two equal-length bit slices.
pub fn bit_errors(tx: &[u8], rx: &[u8]) -> Result<usize> {
    if tx.len() != rx.len() {
        return Err(Error::Length {
            what: "bit streams",
            expected: tx.len(),
            actual: rx.len(),
        });
    }
    Ok(tx.iter().zip(rx).filter(|(a, b)| a != b).count())
}

/// Floored bit error rate over frames; `None` marks an erased frame whose
/// bits all count as wrong.
pub fn ber(tx_frames: &[&[u8]], rx_frames: &[Option<&[u8]>]) -> Result<f64> {
    if tx_frames.len() != rx_frames.len() {
        return Err(Error::Length {
            what: "frame count",
            expected: tx_frames.len(),
            actual: rx_frames.len(),
        });
    }
    let mut errors = 0;
    let mut total = 0;
    for (tx, rx) in tx_frames.iter().zip(rx_frames) {
        total += tx.len();
        errors += match rx {
            Some(rx) => bit_errors(tx, rx)?,
            None => tx.len(),
        };
    }
    if total == 0 {
        return Err(Error::InvalidParameter("no bits to count".into()));
    }
    Ok(floor(errors as f64 / total as f64))
}

/// Floored fraction of frames not received intact.
pub fn fer(per_frame_ok: &[bool]) -> Result<f64> {
    if per_frame_ok.is_empty() {
        return Err(Error::InvalidParameter("no frames to count".into()));
    }
    let bad = per_frame_ok.iter().filter(|ok| !**ok).count();
    Ok(floor(bad as f64 / per_frame_ok.len() as f64))
}

/// Data-aided SNR in dB. The complex gain is fitted by least squares
/// against the known symbols; signal power is the bias-corrected fitted
/// power and noise the residual variance. Capped at [`SNR_CEILING_DB`].
pub fn estimate_snr(rx: &[Complex64], known: &[Complex64]) -> Result<f64> {
    let n = rx.len().min(known.len());
    if n < MIN_SNR_SYMBOLS || rx.len() != known.len() {
        return Err(Error::InsufficientReference {
            needed: MIN_SNR_SYMBOLS,
            got: n,
        });
    }
    let energy: f64 = known.iter().map(|p| p.norm_sqr()).sum();
    if energy == 0.0 {
        return Err(Error::ZeroPower);
    }
    let a: Complex64 = rx.iter().zip(known).map(|(y, p)| y * p.conj()).sum::<Complex64>() / energy;
    let var = rx.iter().zip(known).map(|(y, p)| (y - a * p).norm_sqr()).sum::<f64>() / (n - 1) as f64;
    let sig = (a.norm_sqr() - var / energy).max(0.0) * energy / n as f64;
    if var <= sig * 10f64.powf(-SNR_CEILING_DB / 10.0) {
        return Ok(SNR_CEILING_DB);
    }
    if sig == 0.0 {
        return Ok(-SNR_CEILING_DB);
    }
    Ok((10.0 * (sig / var).log10()).clamp(-SNR_CEILING_DB, SNR_CEILING_DB))
}

/// Normalized performance gain `(unsync − sync)/(unsync + sync)`.
pub fn npg(unsync: f64, sync: f64) -> f64 {
    let den = unsync + sync;
    if den == 0.0 {
        0.0
    } else {
        (unsync - sync) / den
    }
}

pub fn snr_gain(snr_sync_db: f64, snr_unsync_db: f64) -> f64 {
    snr_sync_db - snr_unsync_db
}

/// Effective throughput `R_s·n_b·r_c`, bits/s.
pub fn throughput(symbol_rate: f64, bits_per_symbol: f64, code_rate: f64) -> f64 {
    symbol_rate * bits_per_symbol * code_rate
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkMetrics {
    pub ber: f64,
    pub fer: f64,
    pub snr_estimate_db: f64,
    pub bits_counted: usize,
    pub frames_counted: usize,
}

impl LinkMetrics {
    /// Total-loss metrics for a burst nothing could be recovered from.
    pub fn total_loss(bits: usize, frames: usize) -> Self {
        Self {
            ber: 1.0,
            fer: 1.0,
            snr_estimate_db: -SNR_CEILING_DB,
            bits_counted: bits,
            frames_counted: frames,
        }
    }

    /// Mean of rates and SNR over iterations; counts are summed.
    pub fn aggregate(items: &[LinkMetrics]) -> Option<LinkMetrics> {
        if items.is_empty() {
            return None;
        }
        let n = items.len() as f64;
        Some(LinkMetrics {
            ber: floor(items.iter().map(|m| m.ber).sum::<f64>() / n),
            fer: floor(items.iter().map(|m| m.fer).sum::<f64>() / n),
            snr_estimate_db: items.iter().map(|m| m.snr_estimate_db).sum::<f64>() / n,
            bits_counted: items.iter().map(|m| m.bits_counted).sum(),
            frames_counted: items.iter().map(|m| m.frames_counted).sum(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NpgReport {
    pub npg_ber: f64,
    pub npg_fer: f64,
    pub snr_gain_db: f64,
}

impl NpgReport {
    pub fn compare(unsync: &LinkMetrics, sync: &LinkMetrics) -> Self {
        Self {
            npg_ber: npg(unsync.ber, sync.ber),
            npg_fer: npg(unsync.fer, sync.fer),
            snr_gain_db: snr_gain(sync.snr_estimate_db, unsync.snr_estimate_db),
        }
    }
}
