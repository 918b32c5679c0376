//! LEO geometry and NTN-TDL-C channel: Doppler against elevation and the
//! power of a few channel realizations.

use dvbs2_linksim::channel::{apply_channel, doppler_shift, load_ntn_tdl_c, realize_channel, signal_power, Geometry};
use dvbs2_linksim::dsp::rng;
use dvbs2_linksim::iq::IqBlock;
use dvbs2_linksim::Complex64;
use rand_distr::{Distribution, Normal};

fn main() -> dvbs2_linksim::Result<()> {
    let f0 = 437e6;
    for el in [10.0, 20.0, 45.0, 70.0, 90.0] {
        let g = Geometry::from_elevation(el, 500e3, 7.8e3, 1);
        println!("elevation {el:>4}°: Doppler {:>9.1} Hz", doppler_shift(&g, f0));
    }

    let profile = load_ntn_tdl_c(80e-9)?;
    println!("NTN-TDL-C at 80 ns: realized rms delay {:.1} ns", profile.realized_rms_delay() * 1e9);
    let fs = 2e6;
    let n = 200_000;
    let norm = Normal::new(0.0, 0.5f64.sqrt()).unwrap();
    let mut r = rng(1);
    let x = IqBlock::new((0..n).map(|_| Complex64::new(norm.sample(&mut r), norm.sample(&mut r))).collect(), fs);
    for seed in 0..4 {
        let real = realize_channel(&profile, &Geometry::default(), f0, fs, n, seed)?;
        let y = apply_channel(&x, &real)?;
        println!(
            "realization {seed}: shadowing {:+.2} dB, expected power {:.3}, measured {:.3}",
            real.shadowing_db,
            signal_power(&real),
            y.mean_power()
        );
    }
    Ok(())
}
