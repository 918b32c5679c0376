use dvbs2_linksim::impairments::{generate_interferer, InterfererConfig};
use rustfft::FftPlanner;

/// Averaged periodogram: fraction of interferer power within ±160 kHz of
/// its centre for a 300 kHz band at 2 MS/s.
#[test]
fn interferer_power_is_confined_to_its_band() {
    let cfg = InterfererConfig {
        bandwidth: 300e3,
        center_offset: 0.0,
        power: 1.0,
    };
    let fs = 2e6;
    let nfft = 4096;
    let x = generate_interferer(&cfg, nfft * 64, fs, 5).unwrap();
    let measured = x.mean_power();
    assert!((measured - 1.0).abs() < 0.05, "power {measured}");

    let fft = FftPlanner::new().plan_fft_forward(nfft);
    let mut psd = vec![0.0; nfft];
    for chunk in x.samples.chunks_exact(nfft) {
        let mut buf = chunk.to_vec();
        fft.process(&mut buf);
        for (p, v) in psd.iter_mut().zip(&buf) {
            *p += v.norm_sqr();
        }
    }
    let total: f64 = psd.iter().sum();
    let in_band: f64 = psd
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let f = if *k < nfft / 2 { *k as f64 } else { *k as f64 - nfft as f64 } * fs / nfft as f64;
            f.abs() <= 160e3
        })
        .map(|(_, p)| p)
        .sum();
    assert!(in_band / total >= 0.99, "in-band fraction {}", in_band / total);
}

#[test]
fn offset_interferer_moves_its_band() {
    let cfg = InterfererConfig {
        bandwidth: 300e3,
        center_offset: 500e3,
        power: 0.1,
    };
    let nfft = 2048;
    let x = generate_interferer(&cfg, nfft * 32, 2e6, 6).unwrap();
    let fft = FftPlanner::new().plan_fft_forward(nfft);
    let mut near_dc = 0.0;
    let mut near_offset = 0.0;
    for chunk in x.samples.chunks_exact(nfft) {
        let mut buf = chunk.to_vec();
        fft.process(&mut buf);
        near_dc += buf[..50].iter().map(|v| v.norm_sqr()).sum::<f64>();
        near_offset += buf[512 - 25..512 + 25].iter().map(|v| v.norm_sqr()).sum::<f64>();
    }
    assert!(near_offset > 1e4 * near_dc, "{near_offset} vs {near_dc}");
}
