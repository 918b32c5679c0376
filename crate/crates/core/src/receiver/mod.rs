//! Two-stage data-aided receiver.
//!
//! Stage 1 runs AGC, matched filtering, Gardner timing recovery, header
//! correlation, a coarse carrier estimate on the first header and an FLL
//! driven by every header and pilot block. Stage 2 works frame by frame:
//! reference-block gains are unwrapped and interpolated across the data
//! symbols, a decision-directed gain tracker removes what is left, and the
//! symbols are demapped and decoded.

mod agc;
mod carrier;
mod demap;
mod framesync;
mod pilots;
mod timing;
mod trace;

pub use agc::{agc_normalize, agc_normalize_with_window, AGC_WINDOW};
pub use carrier::{coarse_cfo_estimate, coarse_cfo_estimate_lag, fll_error, fll_step};
pub use demap::{demap, nearest_point};
pub use framesync::{frame_sync, frame_sync_with_spacing, header_metric};
pub use pilots::{
    block_gain, phase_interpolate, pilot_freq_estimate, pilot_phase_estimate, unwrap_phases,
};
pub use timing::{
    acquire_timing, gardner_ted, recover_timing, timing_loop_step, LockFlags, SyncState,
    TimingOutput,
};
pub use trace::{write_trace_csv, TraceRow};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsp::convolve;
use crate::framing::{
    assemble_plframe, descramble_payload, matched_filter_taps, FecCodec, FrameLayout, IdentityCodec, ModCod,
    PulseShapeConfig, PACKET_BITS, PILOT_BLOCK_LEN, PLHEADER_LEN,
};
use crate::iq::IqBlock;
use crate::metrics::estimate_snr;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverConfig {
    /// β_FLL, per reference-symbol update.
    pub fll_loop_bw: f64,
    /// β_tim, per symbol.
    pub timing_loop_bw: f64,
    pub samples_per_symbol: usize,
    pub rolloff: f64,
    pub rrc_span: usize,
    pub frame_sync_threshold: f64,
    /// Pilot block period, symbols.
    pub pilot_spacing: usize,
    pub pilots: bool,
    pub symbol_rate: f64,
    /// The coarse estimate is clamped to ± this many Hz.
    pub cfo_search_range_hz: f64,
    /// Lag, in symbols, of the coarse header estimator.
    pub coarse_lag: usize,
    /// Step size of the decision-directed gain tracker.
    pub dd_gain: f64,
    pub agc_window: usize,
    pub scrambling_index: u32,
}

impl Default for ReceiverConfig {
    fn default() -> Self {
        Self {
            fll_loop_bw: 0.8e-3,
            timing_loop_bw: 0.6e-3,
            samples_per_symbol: 2,
            rolloff: 0.35,
            rrc_span: 10,
            frame_sync_threshold: 0.5,
            pilot_spacing: 1476,
            pilots: true,
            symbol_rate: 1e6,
            cfo_search_range_hz: 2.0 * 437e6 * 2.5e-6,
            coarse_lag: PLHEADER_LEN / 2,
            dd_gain: 0.01,
            agc_window: AGC_WINDOW,
            scrambling_index: 0,
        }
    }
}

impl ReceiverConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(self.fll_loop_bw) || !unit(self.timing_loop_bw) {
            return Err(Error::InvalidParameter("loop bandwidths must lie in (0, 1)".into()));
        }
        if self.samples_per_symbol < 2 || self.samples_per_symbol % 2 != 0 {
            return Err(Error::InvalidParameter("samples per symbol must be even and at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.frame_sync_threshold) {
            return Err(Error::InvalidParameter("frame sync threshold must lie in [0, 1]".into()));
        }
        if !(self.symbol_rate > 0.0) || !(self.cfo_search_range_hz >= 0.0) || !(self.dd_gain >= 0.0) {
            return Err(Error::InvalidParameter("invalid rate, search range or tracker gain".into()));
        }
        if self.coarse_lag == 0 || self.coarse_lag >= PLHEADER_LEN || self.pilot_spacing == 0 || self.agc_window == 0 {
            return Err(Error::InvalidParameter("invalid lag, pilot spacing or AGC window".into()));
        }
        self.pulse().validate()
    }

    pub fn pulse(&self) -> PulseShapeConfig {
        PulseShapeConfig {
            rolloff: self.rolloff,
            span: self.rrc_span,
            samples_per_symbol: self.samples_per_symbol,
        }
    }

    pub fn sample_rate(&self) -> f64 {
        self.symbol_rate * self.samples_per_symbol as f64
    }
}

/// Outcome for one detected frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameResult {
    /// Position of the frame within the transmitted burst.
    pub index: usize,
    pub start_symbol: usize,
    pub start_sample: f64,
    /// Decoded information bits; `None` when the frame ran past the end of
    /// the capture.
    pub bits: Option<Vec<u8>>,
    pub snr_db: Option<f64>,
    /// Carrier offset left after the FLL, from this frame's pilots, Hz.
    pub residual_cfo_hz: Option<f64>,
    /// Data symbols after carrier and gain correction, as fed to the
    /// demapper. Empty for erased frames.
    #[serde(skip)]
    pub data_symbols: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemodReport {
    pub modcod: ModCod,
    pub frames: Vec<FrameResult>,
    /// Clamped coarse estimate from the first header, Hz.
    pub initial_cfo_hz: Option<f64>,
    /// Final FLL frequency, Hz.
    pub fll_freq_hz: f64,
    /// Carrier offset left after the FLL at burst end, Hz.
    pub residual_cfo_hz: Option<f64>,
    /// Receiver's total carrier-offset estimate at burst end, Hz.
    pub cfo_estimate_hz: Option<f64>,
    pub lock: LockFlags,
    pub trace: Vec<TraceRow>,
}

impl DemodReport {
    fn empty(modcod: ModCod) -> Self {
        Self {
            modcod,
            frames: Vec::new(),
            initial_cfo_hz: None,
            fll_freq_hz: 0.0,
            residual_cfo_hz: None,
            cfo_estimate_hz: None,
            lock: LockFlags::default(),
            trace: Vec::new(),
        }
    }

    pub fn frame_start_indices(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.start_sample).collect()
    }

    pub fn decoded_frames(&self) -> usize {
        self.frames.iter().filter(|f| f.bits.is_some()).count()
    }

    /// Decoded bits per transmitted frame slot `0..n_frames`; `None` for
    /// frames that were never detected or could not be decoded.
    pub fn recovered_bits(&self, n_frames: usize) -> Vec<Option<&[u8]>> {
        let mut out = vec![None; n_frames];
        for f in &self.frames {
            if f.index < n_frames && out[f.index].is_none() {
                out[f.index] = f.bits.as_deref();
            }
        }
        out
    }

    /// Mean of the per-frame SNR estimates, dB.
    pub fn mean_snr_db(&self) -> Option<f64> {
        let v: Vec<f64> = self.frames.iter().filter_map(|f| f.snr_db).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }
}

pub fn receive_burst(x: &IqBlock, cfg: &ReceiverConfig, modcod: ModCod) -> Result<DemodReport> {
    receive_burst_with_codec(x, cfg, modcod, &IdentityCodec)
}

struct RefBlock {
    start: usize,
    len: usize,
    /// Offset of the block within the frame template.
    template_offset: usize,
}

pub fn receive_burst_with_codec(
    x: &IqBlock,
    cfg: &ReceiverConfig,
    modcod: ModCod,
    codec: &dyn FecCodec,
) -> Result<DemodReport> {
    cfg.validate()?;
    if (x.sample_rate - cfg.sample_rate()).abs() > 1e-6 * cfg.sample_rate() {
        return Err(Error::InvalidParameter(format!(
            "capture at {} S/s, receiver expects {}",
            x.sample_rate,
            cfg.sample_rate()
        )));
    }
    let sps = cfg.samples_per_symbol;
    let rs = cfg.symbol_rate;

    // stage 1: AGC, matched filter, timing
    let agc = agc_normalize_with_window(x, cfg.agc_window)?;
    let mf = convolve(&agc.samples, &matched_filter_taps(&cfg.pulse()));
    let timing = recover_timing(&mf, sps, cfg.timing_loop_bw);
    let sym = &timing.symbols;
    let mut report = DemodReport::empty(modcod);
    report.lock.timing = !sym.is_empty();

    let layout = FrameLayout::new(modcod, cfg.pilots);
    let frame_len = layout.len;
    let starts = frame_sync_with_spacing(sym, cfg.frame_sync_threshold, frame_len.saturating_sub(4).max(1));
    if starts.is_empty() {
        return Ok(report);
    }
    report.lock.frame = true;

    let mut template_frame = assemble_plframe(
        vec![Complex64::new(0.0, 0.0); modcod.payload_symbols()],
        modcod,
        cfg.pilots,
    )?;
    template_frame.scrambling_index = cfg.scrambling_index;
    // on-air reference for stage 1, descrambled reference for stage 2
    let template = template_frame.symbols();
    let mut plain = template_frame.header.clone();
    plain.extend(template_frame.body());

    // coarse estimate on the first header, limited to the search range
    let s0 = starts[0];
    let ccfo = coarse_cfo_estimate_lag(&sym[s0..s0 + PLHEADER_LEN], &template[..PLHEADER_LEN], cfg.coarse_lag)?;
    let limit = cfg.cfo_search_range_hz / rs;
    let mut freq = ccfo.clamp(-limit, limit);
    report.initial_cfo_hz = Some(freq * rs);
    report.lock.coarse_freq = true;

    // reference blocks of every detected frame, in stream order
    let mut blocks: Vec<RefBlock> = Vec::new();
    for &s in &starts {
        let mut push = |off: usize, len: usize| {
            let start = s + off;
            let clear = blocks.last().is_none_or(|b| b.start + b.len <= start);
            if start + len <= sym.len() && clear {
                blocks.push(RefBlock {
                    start,
                    len,
                    template_offset: off,
                });
            }
        };
        push(0, PLHEADER_LEN);
        for &p in &layout.pilot_starts {
            push(p, PILOT_BLOCK_LEN);
        }
    }

    // FLL: NCO over the whole stream, updated on reference symbols
    let mut theta = vec![0.0; sym.len()];
    let mut derot = sym.clone();
    let mut acc = 0.0;
    let mut bi = 0;
    for n in s0..sym.len() {
        theta[n] = acc;
        derot[n] = sym[n] * Complex64::from_polar(1.0, -acc);
        while bi < blocks.len() && blocks[bi].start + blocks[bi].len <= n {
            bi += 1;
        }
        if let Some(b) = blocks.get(bi).filter(|b| n >= b.start) {
            let i = n - b.start;
            let lag = b.len / 2;
            if i >= lag {
                let r = &template[b.template_offset..b.template_offset + b.len];
                let z_now = derot[n] * r[i].conj();
                let z_then = derot[n - lag] * r[i - lag].conj();
                freq = fll_step(freq, fll_error(z_now, z_then, lag), cfg.fll_loop_bw);
            }
            if i + 1 == b.len {
                let r = &template[b.template_offset..b.template_offset + b.len];
                let phase = block_gain(&derot[b.start..b.start + b.len], r)?.arg();
                report.trace.push(TraceRow {
                    symbol_index: b.start,
                    tau: timing.tau[b.start],
                    freq_estimate_hz: freq * rs,
                    pilot_phase: phase,
                    lock: report.lock,
                });
            }
        }
        acc += 2.0 * PI * freq;
    }
    report.fll_freq_hz = freq * rs;

    // stage 2: per-frame fine correction, tracking and demapping
    let points = modcod.constellation().points();
    let data_idx = layout.data_indices();
    let info_len = modcod.packets_per_frame() * PACKET_BITS;
    let mut ref_blocks: Vec<(usize, usize)> = vec![(0, PLHEADER_LEN)];
    ref_blocks.extend(layout.pilot_starts.iter().map(|&p| (p, PILOT_BLOCK_LEN)));
    let ref_idx: Vec<usize> = ref_blocks.iter().flat_map(|&(o, l)| o..o + l).collect();

    for (fi, &s) in starts.iter().enumerate() {
        let index = (s + frame_len / 2) / frame_len;
        let mut result = FrameResult {
            index,
            start_symbol: s,
            start_sample: timing.strobes[s],
            bits: None,
            snr_db: None,
            residual_cfo_hz: None,
            data_symbols: Vec::new(),
        };
        if s + frame_len > sym.len() {
            report.frames.push(result);
            continue;
        }
        let mut y = derot[s..s + PLHEADER_LEN].to_vec();
        y.extend(descramble_payload(&derot[s + PLHEADER_LEN..s + frame_len], cfg.scrambling_index));

        let mut centers = Vec::new();
        let mut gains = Vec::new();
        for &(o, l) in &ref_blocks {
            centers.push(o as f64 + (l - 1) as f64 / 2.0);
            gains.push(block_gain(&y[o..o + l], &plain[o..o + l])?);
        }
        if let Some(&next) = starts.get(fi + 1) {
            if next.abs_diff(s + frame_len) <= 3 && next + PLHEADER_LEN <= sym.len() {
                let rel = next - s;
                centers.push(rel as f64 + (PLHEADER_LEN - 1) as f64 / 2.0);
                gains.push(block_gain(&derot[next..next + PLHEADER_LEN], &template[..PLHEADER_LEN])?);
            }
        }
        let phases = unwrap_phases(&gains.iter().map(|g| g.arg()).collect::<Vec<_>>());
        let amp = gains.iter().map(|g| g.norm()).sum::<f64>() / gains.len() as f64;
        if amp == 0.0 {
            report.frames.push(result);
            continue;
        }

        // carrier offset left after the FLL, from the pilot blocks
        let n_pilots = layout.pilot_starts.len();
        if n_pilots >= 2 {
            let pilot_phases = &phases[1..1 + n_pilots];
            let residual = pilot_freq_estimate(pilot_phases, cfg.pilot_spacing, 1.0 / rs)?;
            result.residual_cfo_hz = Some(residual);
            report.residual_cfo_hz = Some(residual);
            // NCO advance plus pilot phase advance between first and last pilot block
            let (c0, c1) = (s + layout.pilot_starts[0], s + layout.pilot_starts[n_pilots - 1]);
            let total = (theta[c1] - theta[c0]) + (pilot_phases[n_pilots - 1] - pilot_phases[0]);
            report.cfo_estimate_hz = Some(total / (2.0 * PI * (c1 - c0) as f64) * rs);
            report.lock.fine_freq = true;
        }

        let data_phase = phase_interpolate(&phases, &centers, &data_idx);
        let mut g = Complex64::new(1.0, 0.0);
        let mut decisions = Vec::with_capacity(data_idx.len());
        let mut equalized = Vec::with_capacity(data_idx.len());
        for (&d, &ph) in data_idx.iter().zip(&data_phase) {
            let r = y[d] * Complex64::from_polar(1.0 / amp, -ph);
            let k = nearest_point(r / g, points);
            let p = points[k];
            equalized.push(r / g);
            g += cfg.dd_gain * (r - g * p) * p.conj();
            decisions.push(p);
        }
        result.data_symbols = equalized;
        let coded = demap(&decisions, modcod);
        result.bits = Some(codec.decode(&coded, info_len)?);

        let ref_phase = phase_interpolate(&phases, &centers, &ref_idx);
        let corrected: Vec<Complex64> = ref_idx
            .iter()
            .zip(&ref_phase)
            .map(|(&i, &ph)| y[i] * Complex64::from_polar(1.0 / amp, -ph))
            .collect();
        let known: Vec<Complex64> = ref_idx.iter().map(|&i| plain[i]).collect();
        result.snr_db = Some(estimate_snr(&corrected, &known)?);
        report.frames.push(result);
    }
    if report.cfo_estimate_hz.is_none() {
        report.cfo_estimate_hz = Some(report.fll_freq_hz);
    }
    Ok(report)
}
