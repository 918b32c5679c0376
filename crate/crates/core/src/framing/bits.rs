use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ModCod, PACKET_BITS};
use crate::dsp::rng;
use crate::{Error, Result};

/// Pseudo-random payload for one burst: a `PACKET_BITS × (packets × frames)`
/// matrix stored column-major, one column per 1504-bit packet. The packets of
/// frame `f` are the contiguous columns `f·P .. (f+1)·P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitBurst {
    pub modcod: ModCod,
    pub frames: usize,
    pub seed: u64,
    bits: Vec<u8>,
}

impl BitBurst {
    pub fn rows(&self) -> usize {
        PACKET_BITS
    }

    pub fn cols(&self) -> usize {
        self.modcod.packets_per_frame() * self.frames
    }

    pub fn column(&self, c: usize) -> &[u8] {
        &self.bits[c * PACKET_BITS..(c + 1) * PACKET_BITS]
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[col * PACKET_BITS + row]
    }

    /// Information bits carried by frame `f` (all of its packets, in order).
    pub fn frame_bits(&self, f: usize) -> &[u8] {
        let n = self.info_bits_per_frame();
        &self.bits[f * n..(f + 1) * n]
    }

    pub fn info_bits_per_frame(&self) -> usize {
        self.modcod.packets_per_frame() * PACKET_BITS
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

pub fn build_bit_burst(seed: u64, modcod: ModCod, n_frames: usize) -> Result<BitBurst> {
    if n_frames == 0 {
        return Err(Error::InvalidParameter("a burst needs at least one frame".into()));
    }
    let total = PACKET_BITS * modcod.packets_per_frame() * n_frames;
    let mut r = rng(seed);
    let bits = (0..total).map(|_| r.random::<bool>() as u8).collect();
    Ok(BitBurst {
        modcod,
        frames: n_frames,
        seed,
        bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_shapes() {
        let b = build_bit_burst(7, ModCod::Mc4, 50).unwrap();
        assert_eq!((b.rows(), b.cols()), (1504, 200));
        let b = build_bit_burst(7, ModCod::Mc24, 1).unwrap();
        assert_eq!((b.rows(), b.cols()), (1504, 7));
        assert_eq!(b.len(), 1504 * 7);
    }

    #[test]
    fn seed_deterministic() {
        let a = build_bit_burst(7, ModCod::Mc12, 3).unwrap();
        let b = build_bit_burst(7, ModCod::Mc12, 3).unwrap();
        let c = build_bit_burst(8, ModCod::Mc12, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.as_slice(), c.as_slice());
    }

    #[test]
    fn roughly_balanced() {
        let b = build_bit_burst(1, ModCod::Mc4, 10).unwrap();
        let ones = b.as_slice().iter().filter(|&&x| x == 1).count() as f64;
        let frac = ones / b.len() as f64;
        assert!((frac - 0.5).abs() < 0.01, "{frac}");
    }

    #[test]
    fn zero_frames_rejected() {
        assert!(build_bit_burst(1, ModCod::Mc4, 0).is_err());
    }

    #[test]
    fn frame_slices_follow_columns() {
        let b = build_bit_burst(3, ModCod::Mc12, 2).unwrap();
        assert_eq!(&b.frame_bits(1)[..PACKET_BITS], b.column(6));
        assert_eq!(b.get(5, 6), b.column(6)[5]);
    }
}
