use dvbs2_linksim::framing::{build_bit_burst, build_burst_frames, pulse_shape, shape_symbols, IdentityCodec, ModCod, PulseShapeConfig};
use dvbs2_linksim::impairments::{apply_sco, ImpairmentConfig, OscillatorModel};
use dvbs2_linksim::iq::IqBlock;
use dvbs2_linksim::receiver::{receive_burst, recover_timing, ReceiverConfig};
use dvbs2_linksim::dsp::{convolve, rng};
use dvbs2_linksim::framing::matched_filter_taps;
use rand::Rng;

fn burst(modcod: ModCod, n: usize, seed: u64) -> (dvbs2_linksim::framing::BitBurst, IqBlock) {
    let b = build_bit_burst(seed, modcod, n).unwrap();
    let frames = build_burst_frames(&b, true, &IdentityCodec).unwrap();
    let x = pulse_shape(&frames, &PulseShapeConfig::default(), 1e6).unwrap();
    (b, x)
}

/// Steady-state timing error over a window, symbols: (mean, rms about mean).
fn timing_error(eps: f64, window: std::ops::Range<usize>) -> (f64, f64) {
    let cfg = PulseShapeConfig::default();
    let mut r = rng(3);
    let pts = ModCod::Mc4.constellation().points();
    let symbols: Vec<_> = (0..60_000).map(|_| pts[r.random_range(0..4)]).collect();
    let x = IqBlock::new(shape_symbols(&symbols, &cfg).unwrap(), 2e6);
    let y = apply_sco(&x, eps).unwrap();
    let mf = convolve(&y.samples, &matched_filter_taps(&cfg));
    let out = recover_timing(&mf, 2, 0.6e-3);
    // symbol k peaks at input time delay + 2k, read by output index t at t(1+eps)
    let delay = cfg.cascade_delay() as f64;
    let err: Vec<f64> = out.strobes[window]
        .iter()
        .map(|&t| {
            let k = ((t * (1.0 + eps) - delay) / 2.0).round();
            (t - (delay + 2.0 * k) / (1.0 + eps)) / 2.0
        })
        .collect();
    let mean = err.iter().sum::<f64>() / err.len() as f64;
    let rms = (err.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / err.len() as f64).sqrt();
    (mean, rms)
}

/// The first-order loop tracks a clock ramp with a constant lag
/// proportional to the drift.
#[test]
fn timing_loop_follows_clock_drift() {
    let (early, _) = timing_error(1e-5, 30_000..35_000);
    let (late, rms) = timing_error(1e-5, 50_000..55_000);
    assert!((early - late).abs() < 0.002, "lag moved {early} -> {late}");
    assert!(rms < 0.01, "jitter {rms}");
    assert!(late.abs() < 0.1, "lag {late}");
    let (double, _) = timing_error(2e-5, 50_000..55_000);
    assert!((double / late - 2.0).abs() < 0.1, "lag ratio {}", double / late);
    let (none, _) = timing_error(1e-9, 50_000..55_000);
    assert!(none.abs() < 0.002, "no-drift bias {none}");
}

#[test]
fn truncated_burst_erases_only_the_last_frame() {
    let (b, x) = burst(ModCod::Mc4, 5, 8);
    let cut = IqBlock::new(x.samples[..x.len() - 3000].to_vec(), x.sample_rate);
    let report = receive_burst(&cut, &ReceiverConfig::default(), ModCod::Mc4).unwrap();
    let rx = report.recovered_bits(5);
    for f in 0..4 {
        assert_eq!(rx[f], Some(b.frame_bits(f)), "frame {f}");
    }
    assert_eq!(rx[4], None);
}

#[test]
fn gpsdo_grade_offsets_give_a_tiny_initial_estimate() {
    let (_, x) = burst(ModCod::Mc4, 4, 9);
    let mut imp = ImpairmentConfig::ideal(437e6);
    imp.tx_osc = OscillatorModel { fractional_freq_error: 1e-11, sampling_clock_error: 1e-11, phase_noise_std: 1e-6 };
    imp.noise_power = 2.0 / 10f64.powf(1.2);
    let y = imp.apply(&x, 2).unwrap();
    let mut cfg = ReceiverConfig::default();
    cfg.cfo_search_range_hz = 2.0 * 437e6 * 1e-11;
    let report = receive_burst(&y, &cfg, ModCod::Mc4).unwrap();
    let normalized = report.initial_cfo_hz.unwrap().abs() / 1e6;
    assert!(normalized <= 1e-6, "{normalized}");

    // free-running: the same estimator sees the ppm-level offset
    imp.tx_osc.fractional_freq_error = 2.5e-6;
    let y = imp.apply(&x, 2).unwrap();
    let report = receive_burst(&y, &ReceiverConfig::default(), ModCod::Mc4).unwrap();
    assert!(report.initial_cfo_hz.unwrap().abs() / 1e6 >= 1e-4 * 0.9);
}

#[test]
fn every_modcod_survives_a_ppm_offset_at_high_snr() {
    for m in ModCod::ALL {
        let (b, x) = burst(m, 8, 10 + m.pls_index() as u64);
        let mut imp = ImpairmentConfig::ideal(437e6);
        imp.tx_osc = OscillatorModel { fractional_freq_error: -2e-6, sampling_clock_error: 0.0, phase_noise_std: 1e-4 };
        imp.rx_osc = OscillatorModel { fractional_freq_error: 0.0, sampling_clock_error: 2e-6, phase_noise_std: 1e-4 };
        imp.noise_power = 2.0 / 10f64.powf(3.0);
        let y = imp.apply(&x, 4).unwrap();
        let report = receive_burst(&y, &ReceiverConfig::default(), m).unwrap();
        let rx = report.recovered_bits(8);
        let good = (0..8).filter(|&f| rx[f] == Some(b.frame_bits(f))).count();
        assert!(good >= 7, "{m}: {good}/8 frames exact");
    }
}
