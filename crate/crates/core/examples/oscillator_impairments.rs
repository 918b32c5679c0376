//! Draws free-running and GPSDO-disciplined oscillator pairs and shows the
//! carrier and sampling-clock offsets they impose at 437 MHz.

use dvbs2_linksim::impairments::{derive_cfo, effective_sco, gpsdo_discipline, GpsdoConfig, OscillatorModel};

fn main() -> dvbs2_linksim::Result<()> {
    let f0 = 437e6;
    let gpsdo = GpsdoConfig::default();
    println!("{:>4} {:>12} {:>12} {:>12} {:>12}", "run", "CFO int Hz", "SCO int", "CFO gps Hz", "SCO gps");
    for run in 0..8u64 {
        let tx = OscillatorModel::internal(2.5e-6, 1e-4, 2 * run);
        let rx = OscillatorModel::internal(2.5e-6, 1e-4, 2 * run + 1);
        let tx_g = gpsdo_discipline(&tx, gpsdo.stability, gpsdo.phase_noise_factor, 100 + run)?;
        let rx_g = gpsdo_discipline(&rx, gpsdo.stability, gpsdo.phase_noise_factor, 200 + run)?;
        println!(
            "{run:>4} {:>12.1} {:>12.2e} {:>12.2e} {:>12.2e}",
            derive_cfo(f0, &tx, &rx),
            effective_sco(&tx, &rx),
            derive_cfo(f0, &tx_g, &rx_g),
            effective_sco(&tx_g, &rx_g)
        );
    }
    println!("worst case internal CFO: {:.1} Hz", 2.0 * 2.5e-6 * f0);
    println!("GPSDO start-time offset draw: {:.1} ns", gpsdo.draw_timing_offset(9) * 1e9);
    Ok(())
}
