//! Forward-error-correction hook. Frames carry `FRAME_BITS` coded bits; a
//! codec turns a frame's information bits into that many bits and back.

use super::FRAME_BITS;
use crate::{Error, Result};

pub trait FecCodec: Send + Sync {
    /// Produces exactly `FRAME_BITS` bits.
    fn encode(&self, info: &[u8]) -> Result<Vec<u8>>;

    /// Recovers `info_len` information bits from hard-decision frame bits.
    fn decode(&self, frame: &[u8], info_len: usize) -> Result<Vec<u8>>;
}

/// Pass-through codec: information bits occupy the head of the frame and the
/// remainder is filled with a fixed PRBS (x^15 + x^14 + 1) so the payload
/// stays spectrally white.
#[derive(Debug, Default, Clone, Copy)]
pub struct IdentityCodec;

fn filler(len: usize) -> impl Iterator<Item = u8> {
    let mut state: u16 = 0b100_1010_1000_0000;
    (0..len).map(move |_| {
        let b = ((state >> 14) ^ (state >> 13)) & 1;
        state = ((state << 1) | b) & 0x7FFF;
        b as u8
    })
}

impl FecCodec for IdentityCodec {
    fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() > FRAME_BITS {
            return Err(Error::Length {
                what: "information bits exceed frame capacity",
                expected: FRAME_BITS,
                actual: info.len(),
            });
        }
        let mut out = Vec::with_capacity(FRAME_BITS);
        out.extend_from_slice(info);
        out.extend(filler(FRAME_BITS - info.len()));
        Ok(out)
    }

    fn decode(&self, frame: &[u8], info_len: usize) -> Result<Vec<u8>> {
        if frame.len() != FRAME_BITS || info_len > FRAME_BITS {
            return Err(Error::Length {
                what: "frame bits",
                expected: FRAME_BITS,
                actual: frame.len(),
            });
        }
        Ok(frame[..info_len].to_vec())
    }
}
