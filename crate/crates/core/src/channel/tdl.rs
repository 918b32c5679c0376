use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const NTN_TDL_C: &str = include_str!("../../data/ntn_tdl_c.txt");

/// Default large-scale shadowing std, dB.
pub const DEFAULT_SHADOWING_STD_DB: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TdlTap {
    /// Delay, seconds.
    pub delay: f64,
    pub power_db: f64,
    pub is_los: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdlProfile {
    pub taps: Vec<TdlTap>,
    pub rician_k_db: f64,
    pub rms_delay_spread: f64,
    pub shadowing_std_db: f64,
}

impl TdlProfile {
    /// Parses a tap table (see `data/ntn_tdl_c.txt` for the column order),
    /// normalizes tap powers to unit sum and scales delays to the requested
    /// r.m.s. delay spread.
    pub fn from_table_str(text: &str, rms_delay_spread: f64) -> Result<Self> {
        if !(rms_delay_spread > 0.0) {
            return Err(Error::InvalidParameter("delay spread must be positive".into()));
        }
        let mut raw = Vec::new();
        let mut k_db = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| Error::Table {
                line: i + 1,
                reason: reason.into(),
            };
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 4 {
                return Err(bad("expected 4 columns"));
            }
            let delay: f64 = cols[0].parse().map_err(|_| bad("bad delay"))?;
            let power_db: f64 = cols[1].parse().map_err(|_| bad("bad power"))?;
            let is_los = match cols[2] {
                "1" => true,
                "0" => false,
                _ => return Err(bad("los flag must be 0 or 1")),
            };
            if !delay.is_finite() || delay < 0.0 || !power_db.is_finite() {
                return Err(bad("delay and power must be finite, delay non-negative"));
            }
            if is_los {
                if k_db.is_some() {
                    return Err(bad("more than one LOS tap"));
                }
                if delay != 0.0 {
                    return Err(bad("LOS tap must have zero delay"));
                }
                k_db = Some(cols[3].parse::<f64>().map_err(|_| bad("LOS tap needs a K-factor"))?);
            }
            raw.push((delay, power_db, is_los));
        }
        let rician_k_db = k_db.ok_or(Error::Table {
            line: 0,
            reason: "no LOS tap".into(),
        })?;
        let total: f64 = raw.iter().map(|t| 10f64.powf(t.1 / 10.0)).sum();
        let lin: Vec<f64> = raw.iter().map(|t| 10f64.powf(t.1 / 10.0) / total).collect();
        let mean: f64 = raw.iter().zip(&lin).map(|(t, p)| p * t.0).sum();
        let second: f64 = raw.iter().zip(&lin).map(|(t, p)| p * t.0 * t.0).sum();
        let table_rms = (second - mean * mean).max(0.0).sqrt();
        let scale = if table_rms > 0.0 {
            rms_delay_spread / table_rms
        } else {
            0.0
        };
        let taps = raw
            .iter()
            .zip(&lin)
            .map(|(t, p)| TdlTap {
                delay: t.0 * scale,
                power_db: 10.0 * p.log10(),
                is_los: t.2,
            })
            .collect();
        Ok(Self {
            taps,
            rician_k_db,
            rms_delay_spread,
            shadowing_std_db: DEFAULT_SHADOWING_STD_DB,
        })
    }

    pub fn from_file(path: &Path, rms_delay_spread: f64) -> Result<Self> {
        Self::from_table_str(&fs::read_to_string(path)?, rms_delay_spread)
    }

    pub fn linear_powers(&self) -> Vec<f64> {
        self.taps.iter().map(|t| 10f64.powf(t.power_db / 10.0)).collect()
    }

    /// Power-weighted r.m.s. delay spread of the taps, seconds.
    pub fn realized_rms_delay(&self) -> f64 {
        let p = self.linear_powers();
        let total: f64 = p.iter().sum();
        let mean: f64 = self.taps.iter().zip(&p).map(|(t, p)| p * t.delay).sum::<f64>() / total;
        let second: f64 = self.taps.iter().zip(&p).map(|(t, p)| p * t.delay * t.delay).sum::<f64>() / total;
        (second - mean * mean).max(0.0).sqrt()
    }

    /// Linear power of the LOS component, |A_0|².
    pub fn los_power(&self) -> f64 {
        self.taps
            .iter()
            .filter(|t| t.is_los)
            .map(|t| 10f64.powf(t.power_db / 10.0))
            .sum()
    }
}

/// The bundled NTN-TDL-C profile scaled to `rms_delay_spread` seconds.
pub fn load_ntn_tdl_c(rms_delay_spread: f64) -> Result<TdlProfile> {
    TdlProfile::from_table_str(NTN_TDL_C, rms_delay_spread)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_sum_to_one() {
        let p = load_ntn_tdl_c(80e-9).unwrap();
        let s: f64 = p.linear_powers().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(p.taps.iter().filter(|t| t.is_los).count(), 1);
    }

    #[test]
    fn realized_spread_matches() {
        let p = load_ntn_tdl_c(80e-9).unwrap();
        assert!((p.realized_rms_delay() / 80e-9 - 1.0).abs() < 0.01);
        let q = load_ntn_tdl_c(160e-9).unwrap();
        for (a, b) in p.taps.iter().zip(&q.taps) {
            assert!((b.delay - 2.0 * a.delay).abs() < 1e-20);
        }
    }

    #[test]
    fn k_factor_consistent_with_table() {
        let p = load_ntn_tdl_c(80e-9).unwrap();
        let los = p.los_power();
        let diffuse_at_zero: f64 = p
            .taps
            .iter()
            .filter(|t| !t.is_los && t.delay == 0.0)
            .map(|t| 10f64.powf(t.power_db / 10.0))
            .sum();
        let k = 10.0 * (los / diffuse_at_zero).log10();
        assert!((k - p.rician_k_db).abs() < 0.01, "{k}");
    }

    #[test]
    fn corrupt_tables_rejected() {
        assert!(TdlProfile::from_table_str("0 -1 0 -\n", 80e-9).is_err());
        assert!(TdlProfile::from_table_str("0 x 1 10\n", 80e-9).is_err());
        assert!(TdlProfile::from_table_str("5 -1 1 10\n", 80e-9).is_err());
        assert!(TdlProfile::from_table_str("0 -1 1\n", 80e-9).is_err());
        assert!(load_ntn_tdl_c(0.0).is_err());
    }
}
