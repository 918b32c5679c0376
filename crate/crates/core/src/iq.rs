//! Complex baseband sample blocks and their on-disk format.
//!
//! Blocks are written as interleaved little-endian `f32` I/Q pairs. A JSON
//! sidecar (`<file>.json`) carries the sample rate and, when relevant, the
//! MODCOD of the frames inside.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::framing::ModCod;
use crate::{Error, Result};

/// A finite run of complex baseband samples at a fixed sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct IqBlock {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
}

impl IqBlock {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64) -> Self {
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn zeros(len: usize, sample_rate: f64) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); len], sample_rate)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean of |x|² over the block (0 for an empty block).
    pub fn mean_power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    /// Element-wise sum of two blocks. The shorter one is zero-extended.
    pub fn add(&self, other: &IqBlock) -> IqBlock {
        let n = self.len().max(other.len());
        let zero = Complex64::new(0.0, 0.0);
        let samples = (0..n)
            .map(|i| {
                self.samples.get(i).copied().unwrap_or(zero)
                    + other.samples.get(i).copied().unwrap_or(zero)
            })
            .collect();
        IqBlock::new(samples, self.sample_rate)
    }

    pub fn scaled(&self, gain: f64) -> IqBlock {
        IqBlock::new(
            self.samples.iter().map(|s| s * gain).collect(),
            self.sample_rate,
        )
    }
}

/// Sidecar metadata stored next to an I/Q binary file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IqHeader {
    pub sample_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modcod: Option<ModCod>,
    pub samples: usize,
    pub format: String,
}

pub const IQ_FORMAT: &str = "cf32_le";

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".json");
    PathBuf::from(p)
}

/// Writes `block` as interleaved f32 I/Q plus a JSON sidecar.
pub fn write_iq(path: &Path, block: &IqBlock, modcod: Option<ModCod>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for s in &block.samples {
        out.write_all(&(s.re as f32).to_le_bytes())?;
        out.write_all(&(s.im as f32).to_le_bytes())?;
    }
    out.flush()?;
    let header = IqHeader {
        sample_rate: block.sample_rate,
        modcod,
        samples: block.len(),
        format: IQ_FORMAT.to_string(),
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&header)?)?;
    Ok(())
}

/// Reads a block written by [`write_iq`].
pub fn read_iq(path: &Path) -> Result<(IqBlock, IqHeader)> {
    let header: IqHeader = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    if header.format != IQ_FORMAT {
        return Err(Error::InvalidParameter(format!(
            "unsupported I/Q format {:?}",
            header.format
        )));
    }
    let raw = fs::read(path)?;
    if raw.len() != header.samples * 8 {
        return Err(Error::Length {
            what: "I/Q payload bytes",
            expected: header.samples * 8,
            actual: raw.len(),
        });
    }
    let samples = raw
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect();
    Ok((IqBlock::new(samples, header.sample_rate), header))
}
