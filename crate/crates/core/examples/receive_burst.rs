//! Sends a 50-frame QPSK burst through free-running oscillators
//! (2.5 ppm apart) and noise, then demodulates it.

use dvbs2_linksim::framing::{build_bit_burst, build_burst_frames, pulse_shape, IdentityCodec, ModCod, PulseShapeConfig};
use dvbs2_linksim::impairments::{ImpairmentConfig, OscillatorModel};
use dvbs2_linksim::metrics::ber;
use dvbs2_linksim::receiver::{receive_burst, ReceiverConfig};

fn main() -> dvbs2_linksim::Result<()> {
    let modcod = ModCod::Mc4;
    let burst = build_bit_burst(3, modcod, 50)?;
    let frames = build_burst_frames(&burst, true, &IdentityCodec)?;
    let x = pulse_shape(&frames, &PulseShapeConfig::default(), 1e6)?;

    let mut imp = ImpairmentConfig::ideal(437e6);
    imp.tx_osc = OscillatorModel {
        fractional_freq_error: 2.5e-6,
        sampling_clock_error: 0.0,
        phase_noise_std: 1e-4,
    };
    imp.rx_osc = OscillatorModel {
        fractional_freq_error: 0.0,
        sampling_clock_error: 2.5e-6,
        phase_noise_std: 1e-4,
    };
    imp.noise_power = 2.0 / 10f64.powf(1.2);
    let y = imp.apply(&x, 11)?;

    let report = receive_burst(&y, &ReceiverConfig::default(), modcod)?;
    let tx: Vec<&[u8]> = (0..50).map(|f| burst.frame_bits(f)).collect();
    println!("applied CFO        {:9.1} Hz", imp.total_cfo());
    println!("coarse estimate    {:9.1} Hz", report.initial_cfo_hz.unwrap_or(f64::NAN));
    println!("final estimate     {:9.1} Hz", report.cfo_estimate_hz.unwrap_or(f64::NAN));
    println!("frames detected    {:9}", report.frames.iter().filter(|f| f.index < 50).count());
    println!("mean pilot SNR     {:9.2} dB", report.mean_snr_db().unwrap_or(f64::NAN));
    println!("BER                {:9.2e}", ber(&tx, &report.recovered_bits(50))?);
    println!("lock               {:?}", report.lock);
    Ok(())
}
