//! Transmit chain: payload bits, constellation mapping, PLFRAME assembly and
//! pulse shaping.

mod bits;
mod codec;
mod constellation;
mod frame;
mod header;
mod modcod;
mod pulse;
mod scrambler;

pub use bits::{build_bit_burst, BitBurst};
pub use codec::{FecCodec, IdentityCodec};
pub use constellation::{map_constellation, Constellation, APSK32_GAMMA1, APSK32_GAMMA2};
pub use frame::{assemble_plframe, build_burst_frames, build_frame, pilot_symbol, FrameLayout, PlFrame};
pub use header::{
    pi2_bpsk, pls_code, plheader, plsc_bits, plsc_pair_products, sof_bits, sof_symbols,
    PLSC_SCRAMBLER, SOF_BITS,
};
pub use modcod::ModCod;
pub use pulse::{matched_filter_taps, pulse_shape, rrc_taps, shape_symbols, PulseShapeConfig};
pub use scrambler::{descramble_payload, scramble_payload, scrambling_sequence};

/// Coded bits per short frame.
pub const FRAME_BITS: usize = 16_200;
/// Bits per transport packet.
pub const PACKET_BITS: usize = 1_504;
pub const PLHEADER_LEN: usize = 90;
pub const SOF_LEN: usize = 26;
pub const SLOT_LEN: usize = 90;
pub const PILOT_BLOCK_LEN: usize = 36;
pub const SLOTS_PER_PILOT: usize = 16;
/// Shortest PLFRAME among the supported MODCODs.
pub const MIN_FRAME_LEN: usize = 3_330;
