use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Antenna, Scenario, ScenarioConfig, SimConfig, SyncMode};
use crate::channel::{apply_channel, load_ntn_tdl_c, realize_channel, Geometry, TdlProfile};
use crate::dsp::{derive_seed, rng};
use crate::framing::{build_bit_burst, build_burst_frames, pulse_shape, IdentityCodec, ModCod, PulseShapeConfig};
use crate::impairments::{gpsdo_discipline, GpsdoConfig, ImpairmentConfig, InterfererConfig, OscillatorModel};
use crate::iq::IqBlock;
use crate::metrics::{ber, estimate_snr, fer, LinkMetrics, SNR_CEILING_DB};
use crate::receiver::{receive_burst, write_trace_csv, DemodReport, ReceiverConfig};
use crate::{Error, Result};

use rand::Rng;

/// Zero samples added before and after the shaped burst so that timing
/// offsets and clock drift never push a frame out of the capture.
pub const GUARD_SAMPLES: usize = 256;

// Seed labels. None of them depends on the sync mode, so both modes of a
// cell see the same bits, noise, channel and interferer.
const SEED_BITS: u64 = 1;
const SEED_TX_OSC: u64 = 2;
const SEED_RX_OSC: u64 = 3;
const SEED_GPSDO_TX: u64 = 4;
const SEED_GPSDO_RX: u64 = 5;
const SEED_GPSDO_TIME: u64 = 6;
const SEED_DELAY: u64 = 7;
const SEED_OSC_PATH: u64 = 8;
const SEED_CHANNEL: u64 = 9;
const SEED_ADDITIVE: u64 = 10;

/// Fixed oscillator models that replace the random draws of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OscillatorOverride {
    pub tx: Option<OscillatorModel>,
    pub rx: Option<OscillatorModel>,
}

/// Everything observed for one burst.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstOutcome {
    pub metrics: LinkMetrics,
    /// Carrier offset actually applied, Hz.
    pub true_cfo_hz: f64,
    /// `None` when the receiver gave up on the burst.
    pub report: Option<DemodReport>,
}

fn scenario_id(s: Scenario) -> u64 {
    s as u64
}

/// Seed shared by both sync modes of one cell and iteration.
pub fn burst_seed(sc: &ScenarioConfig, iteration: usize) -> u64 {
    derive_seed(
        sc.master_seed,
        &[scenario_id(sc.scenario), sc.modcod.pls_index() as u64, sc.antenna as u64, iteration as u64],
    )
}

pub fn receiver_config(sim: &SimConfig, sync_mode: SyncMode, residual_doppler_hz: f64) -> ReceiverConfig {
    let tolerance = match sync_mode {
        SyncMode::Internal => sim.internal_osc_tolerance,
        SyncMode::Gpsdo => sim.gpsdo_stability,
    };
    ReceiverConfig {
        fll_loop_bw: sim.fll_loop_bw,
        timing_loop_bw: sim.timing_loop_bw,
        samples_per_symbol: sim.samples_per_symbol(),
        rolloff: sim.rolloff,
        rrc_span: sim.rrc_span,
        frame_sync_threshold: sim.frame_sync_threshold,
        pilots: sim.pilots,
        symbol_rate: sim.symbol_rate_hz,
        cfo_search_range_hz: 2.0 * sim.carrier_freq_hz * tolerance + residual_doppler_hz.abs(),
        ..ReceiverConfig::default()
    }
}

fn pulse_config(sim: &SimConfig) -> PulseShapeConfig {
    PulseShapeConfig {
        rolloff: sim.rolloff,
        span: sim.rrc_span,
        samples_per_symbol: sim.samples_per_symbol(),
    }
}

fn channel_profile(sim: &SimConfig) -> Result<TdlProfile> {
    let mut p = match &sim.tdl_profile_path {
        Some(path) => TdlProfile::from_file(Path::new(path), sim.rms_delay_spread_s)?,
        None => load_ntn_tdl_c(sim.rms_delay_spread_s)?,
    };
    p.shadowing_std_db = sim.shadowing_std_db;
    Ok(p)
}

fn oscillators(
    sim: &SimConfig,
    sc: &ScenarioConfig,
    seed: u64,
    ov: &OscillatorOverride,
) -> Result<(OscillatorModel, OscillatorModel, f64)> {
    let tol = sim.internal_osc_tolerance;
    let tx = ov
        .tx
        .unwrap_or_else(|| OscillatorModel::internal(tol, sim.phase_noise_std, derive_seed(seed, &[SEED_TX_OSC])));
    let rx = ov
        .rx
        .unwrap_or_else(|| OscillatorModel::internal(tol, sim.phase_noise_std, derive_seed(seed, &[SEED_RX_OSC])));
    match sc.sync_mode {
        SyncMode::Internal => Ok((tx, rx, 0.0)),
        SyncMode::Gpsdo => {
            let g = GpsdoConfig {
                stability: sim.gpsdo_stability,
                phase_noise_factor: sim.gpsdo_phase_noise_factor,
                timing_accuracy_s: sim.gpsdo_timing_accuracy_s,
            };
            let tx = gpsdo_discipline(&tx, g.stability, g.phase_noise_factor, derive_seed(seed, &[SEED_GPSDO_TX]))?;
            let rx = gpsdo_discipline(&rx, g.stability, g.phase_noise_factor, derive_seed(seed, &[SEED_GPSDO_RX]))?;
            Ok((tx, rx, g.draw_timing_offset(derive_seed(seed, &[SEED_GPSDO_TIME]))))
        }
    }
}

/// Transmit, impair, receive and score one burst. The reported SNR is
/// measured on each decoded frame's corrected data symbols against the
/// known transmitted payload.
pub fn run_burst(sim: &SimConfig, sc: &ScenarioConfig, iteration: usize) -> Result<BurstOutcome> {
    run_burst_with(sim, sc, iteration, &OscillatorOverride::default())
}

pub fn run_burst_with(
    sim: &SimConfig,
    sc: &ScenarioConfig,
    iteration: usize,
    ov: &OscillatorOverride,
) -> Result<BurstOutcome> {
    sim.validate()?;
    sc.validate()?;
    let seed = burst_seed(sc, iteration);
    let fs = sim.sample_rate_hz;
    let n_frames = sc.frames_per_burst;

    let burst = build_bit_burst(derive_seed(seed, &[SEED_BITS]), sc.modcod, n_frames)?;
    let frames = build_burst_frames(&burst, sim.pilots, &IdentityCodec)?;
    let shaped = pulse_shape(&frames, &pulse_config(sim), sim.symbol_rate_hz)?;
    let mut padded = vec![num_complex::Complex64::new(0.0, 0.0); shaped.len() + 2 * GUARD_SAMPLES];
    padded[GUARD_SAMPLES..GUARD_SAMPLES + shaped.len()].copy_from_slice(&shaped.samples);
    let x = IqBlock::new(padded, fs);

    let (tx_osc, rx_osc, gpsdo_offset_s) = oscillators(sim, sc, seed, ov)?;
    let fractional_delay = rng(derive_seed(seed, &[SEED_DELAY])).random_range(0.0..1.0) / fs;
    let imp = ImpairmentConfig {
        tx_osc,
        rx_osc,
        carrier_freq: sim.carrier_freq_hz,
        noise_power: sim.samples_per_symbol() as f64 / 10f64.powf(sc.es_n0_db / 10.0),
        interferer: sc.has_interferer().then(|| InterfererConfig {
            bandwidth: sim.interferer_bandwidth_hz,
            center_offset: sim.interferer_center_offset_hz,
            power: 10f64.powf(-sim.carrier_to_interference_db / 10.0),
        }),
        extra_cfo_hz: sc.residual_doppler_hz,
        timing_offset_s: fractional_delay + gpsdo_offset_s,
    };
    let y = imp.apply_oscillators(&x, derive_seed(seed, &[SEED_OSC_PATH]))?;

    let geom = Geometry::from_elevation(sim.elevation_deg, sim.sat_altitude_m, sim.sat_velocity_mps, 1);
    let mut chan = realize_channel(&channel_profile(sim)?, &geom, sim.carrier_freq_hz, fs, y.len(), derive_seed(seed, &[SEED_CHANNEL]))?;
    // Geometric Doppler is assumed precompensated; only the scenario's
    // residual offset reaches the receiver.
    chan.los_doppler_hz = 0.0;
    let y = apply_channel(&y, &chan)?;
    let y = imp.apply_additive(&y, derive_seed(seed, &[SEED_ADDITIVE]))?;

    let rcfg = receiver_config(sim, sc.sync_mode, sc.residual_doppler_hz);
    let tx_bits: Vec<&[u8]> = (0..n_frames).map(|f| burst.frame_bits(f)).collect();
    let bits_counted = tx_bits.iter().map(|b| b.len()).sum();
    let true_cfo_hz = imp.total_cfo();

    let report = match receive_burst(&y, &rcfg, sc.modcod) {
        Ok(r) => r,
        Err(_) => {
            return Ok(BurstOutcome {
                metrics: LinkMetrics::total_loss(bits_counted, n_frames),
                true_cfo_hz,
                report: None,
            })
        }
    };
    let rx_bits = report.recovered_bits(n_frames);
    let snr: Vec<f64> = report
        .frames
        .iter()
        .filter(|f| f.index < n_frames && !f.data_symbols.is_empty())
        .filter_map(|f| estimate_snr(&f.data_symbols, &frames[f.index].payload).ok())
        .collect();
    let ok: Vec<bool> = tx_bits.iter().zip(&rx_bits).map(|(t, r)| r.is_some_and(|r| r == *t)).collect();
    let metrics = LinkMetrics {
        ber: ber(&tx_bits, &rx_bits)?,
        fer: fer(&ok)?,
        snr_estimate_db: if snr.is_empty() {
            -SNR_CEILING_DB
        } else {
            snr.iter().sum::<f64>() / snr.len() as f64
        },
        bits_counted,
        frames_counted: n_frames,
    };
    Ok(BurstOutcome {
        metrics,
        true_cfo_hz,
        report: Some(report),
    })
}

/// Restricts which cells of the matrix are run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatrixFilter {
    pub scenario: Option<Scenario>,
    pub sync_mode: Option<SyncMode>,
    pub modcod: Option<ModCod>,
}

/// Per-iteration results of one scenario configuration, or the error that
/// stopped it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub config: ScenarioConfig,
    pub iterations: Vec<LinkMetrics>,
    pub aggregate: Option<LinkMetrics>,
    pub error: Option<String>,
}

impl CellResult {
    pub fn name(&self) -> String {
        self.config.cell_name()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixResult {
    pub config: SimConfig,
    pub cells: Vec<CellResult>,
}

impl MatrixResult {
    pub fn failed_cells(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.error.is_some())
    }

    pub fn cell(&self, scenario: Scenario, antenna: Antenna, modcod: ModCod, sync: SyncMode) -> Option<&CellResult> {
        self.cells.iter().find(|c| {
            c.config.scenario == scenario
                && c.config.antenna == antenna
                && c.config.modcod == modcod
                && c.config.sync_mode == sync
        })
    }
}

pub fn scenario_configs(sim: &SimConfig, filter: &MatrixFilter) -> Vec<ScenarioConfig> {
    let mut out = Vec::new();
    for scenario in Scenario::ALL {
        for antenna in Antenna::ALL {
            for modcod in ModCod::ALL {
                for sync in SyncMode::ALL {
                    let keep = filter.scenario.is_none_or(|s| s == scenario)
                        && filter.sync_mode.is_none_or(|s| s == sync)
                        && filter.modcod.is_none_or(|m| m == modcod);
                    if keep {
                        out.push(ScenarioConfig::new(sim, scenario, sync, modcod, antenna));
                    }
                }
            }
        }
    }
    out
}

/// Runs every selected cell. Bursts run in parallel; results are identical
/// for any thread count. With `trace_dir`, loop traces are written per burst.
pub fn run_matrix(sim: &SimConfig, filter: &MatrixFilter, trace_dir: Option<&Path>) -> Result<MatrixResult> {
    sim.validate()?;
    if let Some(d) = trace_dir {
        std::fs::create_dir_all(d)?;
    }
    let configs = scenario_configs(sim, filter);
    let jobs: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|c| (0..configs[c].iterations).map(move |i| (c, i)))
        .collect();
    let outcomes: Vec<Result<LinkMetrics>> = jobs
        .par_iter()
        .map(|&(c, i)| {
            let sc = &configs[c];
            let out = run_burst(sim, sc, i)?;
            if let (Some(dir), Some(rep)) = (trace_dir, &out.report) {
                write_trace_csv(&rep.trace, &dir.join(format!("trace_{}_{i}.csv", sc.cell_name())))?;
            }
            Ok(out.metrics)
        })
        .collect();

    let mut cells: Vec<CellResult> = configs
        .into_iter()
        .map(|config| CellResult {
            config,
            iterations: Vec::new(),
            aggregate: None,
            error: None,
        })
        .collect();
    for (&(c, _), outcome) in jobs.iter().zip(outcomes) {
        let cell = &mut cells[c];
        match outcome {
            Ok(m) => cell.iterations.push(m),
            Err(e) if cell.error.is_none() => cell.error = Some(e.to_string()),
            Err(_) => {}
        }
    }
    for cell in &mut cells {
        if cell.error.is_some() {
            cell.iterations.clear();
        }
        cell.aggregate = LinkMetrics::aggregate(&cell.iterations);
    }
    Ok(MatrixResult {
        config: sim.clone(),
        cells,
    })
}

/// Runs one scenario configuration for all its iterations.
pub fn run_scenario(sim: &SimConfig, sc: &ScenarioConfig) -> Result<Vec<BurstOutcome>> {
    (0..sc.iterations)
        .into_par_iter()
        .map(|i| run_burst(sim, sc, i))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| match e {
            Error::Config(_) => e,
            other => Error::Config(format!("{}: {other}", sc.cell_name())),
        })
}
