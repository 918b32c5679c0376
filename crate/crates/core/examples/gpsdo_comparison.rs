//! Clean-channel QPSK at 9 dB: free-running against GPSDO-disciplined
//! oscillators, with identical bits, noise and channel in both modes.

use dvbs2_linksim::framing::ModCod;
use dvbs2_linksim::harness::{default_config, run_scenario, Antenna, Scenario, ScenarioConfig, SyncMode};
use dvbs2_linksim::metrics::{LinkMetrics, NpgReport};

fn main() -> dvbs2_linksim::Result<()> {
    let mut sim = default_config();
    sim.iterations = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let mut agg = Vec::new();
    for sync in SyncMode::ALL {
        let sc = ScenarioConfig::new(&sim, Scenario::Clean, sync, ModCod::Mc4, Antenna::Omni);
        let runs: Vec<LinkMetrics> = run_scenario(&sim, &sc)?.into_iter().map(|o| o.metrics).collect();
        let m = LinkMetrics::aggregate(&runs).expect("at least one iteration");
        println!("{sync:<9} BER {:.3e}  FER {:.3}  SNR {:.2} dB", m.ber, m.fer, m.snr_estimate_db);
        agg.push(m);
    }
    let r = NpgReport::compare(&agg[0], &agg[1]);
    println!("NPG-BER {:.3}  NPG-FER {:.3}  SNR gain {:.2} dB", r.npg_ber, r.npg_fer, r.snr_gain_db);
    Ok(())
}
