//! Builds a short burst for every MODCOD, prints the PLFRAME layout and
//! writes the pulse-shaped MC4 burst to an I/Q file.

use dvbs2_linksim::framing::{build_bit_burst, build_burst_frames, pulse_shape, IdentityCodec, ModCod, PulseShapeConfig};
use dvbs2_linksim::iq::write_iq;

fn main() -> dvbs2_linksim::Result<()> {
    let pulse = PulseShapeConfig::default();
    for modcod in ModCod::ALL {
        let burst = build_bit_burst(7, modcod, 4)?;
        let frames = build_burst_frames(&burst, true, &IdentityCodec)?;
        let layout = frames[0].layout();
        println!(
            "{modcod}: {} info bits/frame, {} symbols/frame ({} without pilots), {} pilot blocks",
            burst.info_bits_per_frame(),
            layout.len,
            modcod.frame_len(false),
            layout.pilot_starts.len()
        );
        let iq = pulse_shape(&frames, &pulse, 1e6)?;
        println!("  shaped burst: {} samples at {} S/s, mean power {:.3}", iq.len(), iq.sample_rate, iq.mean_power());
        if modcod == ModCod::Mc4 {
            let path = std::env::temp_dir().join("mc4_burst.cf32");
            write_iq(&path, &iq, Some(modcod))?;
            println!("  written to {}", path.display());
        }
    }
    Ok(())
}
