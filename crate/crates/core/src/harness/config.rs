use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::framing::{ModCod, FRAME_BITS};
use crate::{Error, Result};

/// Flat parameter set for the whole experiment. Every key has a default;
/// unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub carrier_freq_hz: f64,
    pub sample_rate_hz: f64,
    pub symbol_rate_hz: f64,
    pub frame_bits: usize,
    pub pilots: bool,
    pub rolloff: f64,
    pub rrc_span: usize,
    pub fll_loop_bw: f64,
    pub timing_loop_bw: f64,
    pub frame_sync_threshold: f64,
    pub sat_altitude_m: f64,
    pub elevation_deg: f64,
    pub sat_velocity_mps: f64,
    pub shadowing_std_db: f64,
    pub rms_delay_spread_s: f64,
    /// Optional replacement for the bundled NTN-TDL-C table.
    pub tdl_profile_path: Option<String>,
    pub interferer_bandwidth_hz: f64,
    pub interferer_center_offset_hz: f64,
    pub carrier_to_interference_db: f64,
    pub gpsdo_stability: f64,
    pub gpsdo_timing_accuracy_s: f64,
    pub gpsdo_phase_noise_factor: f64,
    /// Free-running oscillator tolerance (fractional).
    pub internal_osc_tolerance: f64,
    /// Random-walk phase increment std, rad/sample.
    pub phase_noise_std: f64,
    pub residual_doppler_hz: f64,
    pub iterations: usize,
    pub frames_per_burst: usize,
    pub master_seed: u64,
    pub es_n0_db_mc4: f64,
    pub es_n0_db_mc12: f64,
    pub es_n0_db_mc24: f64,
    pub omni_gain_db: f64,
    pub rhcp_gain_db: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            carrier_freq_hz: 437e6,
            sample_rate_hz: 2e6,
            symbol_rate_hz: 1e6,
            frame_bits: FRAME_BITS,
            pilots: true,
            rolloff: 0.35,
            rrc_span: 10,
            fll_loop_bw: 0.8e-3,
            timing_loop_bw: 0.6e-3,
            frame_sync_threshold: 0.5,
            sat_altitude_m: 500e3,
            elevation_deg: 45.0,
            sat_velocity_mps: 7.8e3,
            shadowing_std_db: 0.8,
            rms_delay_spread_s: 80e-9,
            tdl_profile_path: None,
            interferer_bandwidth_hz: 300e3,
            interferer_center_offset_hz: 0.0,
            carrier_to_interference_db: 10.0,
            gpsdo_stability: 1e-11,
            gpsdo_timing_accuracy_s: 20e-9,
            gpsdo_phase_noise_factor: 100.0,
            internal_osc_tolerance: 2.5e-6,
            phase_noise_std: 1e-4,
            residual_doppler_hz: 1000.0,
            iterations: 10,
            frames_per_burst: 50,
            master_seed: 1,
            es_n0_db_mc4: 9.0,
            es_n0_db_mc12: 14.0,
            es_n0_db_mc24: 19.0,
            omni_gain_db: 0.0,
            rhcp_gain_db: 3.0,
        }
    }
}

/// Experiment defaults.
pub fn default_config() -> SimConfig {
    SimConfig::default()
}

impl SimConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn samples_per_symbol(&self) -> usize {
        (self.sample_rate_hz / self.symbol_rate_hz).round() as usize
    }

    pub fn es_n0_db(&self, modcod: ModCod) -> f64 {
        match modcod {
            ModCod::Mc4 => self.es_n0_db_mc4,
            ModCod::Mc12 => self.es_n0_db_mc12,
            ModCod::Mc24 => self.es_n0_db_mc24,
        }
    }

    pub fn antenna_gain_db(&self, antenna: Antenna) -> f64 {
        match antenna {
            Antenna::Omni => self.omni_gain_db,
            Antenna::RhcpDirectional => self.rhcp_gain_db,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.frame_bits != FRAME_BITS {
            return bad("only short frames (16200 bits) are supported");
        }
        if !(self.carrier_freq_hz > 0.0) || !(self.symbol_rate_hz > 0.0) || !(self.sample_rate_hz > 0.0) {
            return bad("frequencies and rates must be positive");
        }
        let sps = self.sample_rate_hz / self.symbol_rate_hz;
        if (sps - sps.round()).abs() > 1e-9 || sps.round() < 2.0 || sps.round() as usize % 2 != 0 {
            return bad("sample rate must be an even multiple (≥ 2) of the symbol rate");
        }
        if self.iterations == 0 || self.frames_per_burst == 0 {
            return bad("iterations and frames per burst must be positive");
        }
        if !(self.internal_osc_tolerance >= 0.0 && self.internal_osc_tolerance < 5e-5) {
            return bad("internal oscillator tolerance out of range");
        }
        if !(self.gpsdo_stability >= 0.0 && self.gpsdo_stability < 5e-5) {
            return bad("GPSDO stability out of range");
        }
        if !(self.phase_noise_std >= 0.0) || !(self.gpsdo_phase_noise_factor >= 1.0) {
            return bad("invalid phase-noise settings");
        }
        if !(self.rms_delay_spread_s > 0.0) || !(self.shadowing_std_db >= 0.0) {
            return bad("invalid channel statistics");
        }
        if !(self.interferer_bandwidth_hz > 0.0) || self.interferer_bandwidth_hz > self.sample_rate_hz {
            return bad("interferer bandwidth must lie in (0, sample rate]");
        }
        if self.residual_doppler_hz == 0.0 {
            return bad("the Doppler scenario needs a non-zero residual Doppler");
        }
        if !(self.elevation_deg > 0.0 && self.elevation_deg <= 90.0) {
            return bad("elevation must lie in (0, 90] degrees");
        }
        Ok(())
    }
}

macro_rules! named_enum {
    ($name:ident { $($variant:ident => $label:literal $(| $alias:literal)*),+ $(,)? }) => {
        impl $name {
            pub fn label(self) -> &'static str {
                match self { $($name::$variant => $label),+ }
            }
        }
        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }
        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                let l = s.to_ascii_lowercase();
                $(if l == $label.to_ascii_lowercase() $(|| l == $alias)* { return Ok($name::$variant); })+
                Err(Error::Config(format!("unknown {} '{s}'", stringify!($name))))
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scenario {
    Clean,
    Doppler,
    Interference,
}
named_enum!(Scenario { Clean => "Clean", Doppler => "Doppler", Interference => "Interference" | "rfi" });

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Clean, Scenario::Doppler, Scenario::Interference];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SyncMode {
    Internal,
    Gpsdo,
}
named_enum!(SyncMode { Internal => "Internal" | "unsync", Gpsdo => "Gpsdo" | "sync" });

impl SyncMode {
    pub const ALL: [SyncMode; 2] = [SyncMode::Internal, SyncMode::Gpsdo];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Antenna {
    Omni,
    RhcpDirectional,
}
named_enum!(Antenna { Omni => "Omni", RhcpDirectional => "RHCP" | "rhcpdirectional" });

impl Antenna {
    pub const ALL: [Antenna; 2] = [Antenna::Omni, Antenna::RhcpDirectional];
}

/// One cell of the experiment matrix for one sync mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub sync_mode: SyncMode,
    pub modcod: ModCod,
    pub antenna: Antenna,
    pub iterations: usize,
    pub frames_per_burst: usize,
    pub es_n0_db: f64,
    pub residual_doppler_hz: f64,
    pub master_seed: u64,
}

impl ScenarioConfig {
    pub fn new(sim: &SimConfig, scenario: Scenario, sync_mode: SyncMode, modcod: ModCod, antenna: Antenna) -> Self {
        Self {
            scenario,
            sync_mode,
            modcod,
            antenna,
            iterations: sim.iterations,
            frames_per_burst: sim.frames_per_burst,
            es_n0_db: sim.es_n0_db(modcod) + sim.antenna_gain_db(antenna),
            residual_doppler_hz: if scenario == Scenario::Doppler {
                sim.residual_doppler_hz
            } else {
                0.0
            },
            master_seed: sim.master_seed,
        }
    }

    pub fn has_interferer(&self) -> bool {
        self.scenario == Scenario::Interference
    }

    pub fn validate(&self) -> Result<()> {
        match (self.scenario, self.residual_doppler_hz != 0.0) {
            (Scenario::Doppler, false) => return Err(Error::Config("Doppler scenario needs residual Doppler".into())),
            (Scenario::Clean | Scenario::Interference, true) => {
                return Err(Error::Config(format!("{} scenario must not carry residual Doppler", self.scenario)))
            }
            _ => {}
        }
        if self.iterations == 0 || self.frames_per_burst == 0 || !self.es_n0_db.is_finite() {
            return Err(Error::Config("invalid iteration count, burst size or Es/N0".into()));
        }
        Ok(())
    }

    /// `scenario_antenna_modcod_sync`, lower case.
    pub fn cell_name(&self) -> String {
        format!("{}_{}_{}_{}", self.scenario, self.antenna, self.modcod, self.sync_mode).to_ascii_lowercase()
    }
}
