use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::LockFlags;
use crate::Result;

/// Loop state sampled at the end of each reference block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub symbol_index: usize,
    pub tau: f64,
    pub freq_estimate_hz: f64,
    pub pilot_phase: f64,
    pub lock: LockFlags,
}

pub fn write_trace_csv(rows: &[TraceRow], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "symbol_index,tau,freq_estimate_hz,pilot_phase,timing_lock,frame_lock,coarse_lock,fine_lock")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.symbol_index,
            r.tau,
            r.freq_estimate_hz,
            r.pilot_phase,
            r.lock.timing as u8,
            r.lock.frame as u8,
            r.lock.coarse_freq as u8,
            r.lock.fine_freq as u8
        )?;
    }
    w.flush()?;
    Ok(())
}
