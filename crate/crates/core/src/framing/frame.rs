use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::bits::BitBurst;
use super::codec::FecCodec;
use super::constellation::map_constellation;
use super::header::plheader;
use super::scrambler::scramble_payload;
use super::{ModCod, PILOT_BLOCK_LEN, PLHEADER_LEN, SLOTS_PER_PILOT, SLOT_LEN};
use crate::{Error, Result};

pub fn pilot_symbol() -> Complex64 {
    Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)
}

/// Positions of the pieces of a PLFRAME, in symbols from the frame start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameLayout {
    pub modcod: ModCod,
    pub pilots: bool,
    pub len: usize,
    /// Start of each 36-symbol pilot block.
    pub pilot_starts: Vec<usize>,
    /// (start, len) of each contiguous run of data symbols.
    pub data_runs: Vec<(usize, usize)>,
}

impl FrameLayout {
    pub fn new(modcod: ModCod, pilots: bool) -> Self {
        let slots = modcod.slots();
        let mut pos = PLHEADER_LEN;
        let mut pilot_starts = Vec::new();
        let mut data_runs: Vec<(usize, usize)> = Vec::new();
        for s in 0..slots {
            match data_runs.last_mut() {
                Some((start, len)) if *start + *len == pos => *len += SLOT_LEN,
                _ => data_runs.push((pos, SLOT_LEN)),
            }
            pos += SLOT_LEN;
            if pilots && (s + 1) % SLOTS_PER_PILOT == 0 && s + 1 < slots {
                pilot_starts.push(pos);
                pos += PILOT_BLOCK_LEN;
            }
        }
        debug_assert_eq!(pos, modcod.frame_len(pilots));
        Self {
            modcod,
            pilots,
            len: pos,
            pilot_starts,
            data_runs,
        }
    }

    /// Frame-relative indices of all data symbols, in transmission order.
    pub fn data_indices(&self) -> Vec<usize> {
        self.data_runs
            .iter()
            .flat_map(|&(s, l)| s..s + l)
            .collect()
    }
}

/// One physical-layer frame. `payload` and `pilot_blocks` are stored before
/// scrambling; [`PlFrame::symbols`] yields the on-air sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PlFrame {
    pub modcod: ModCod,
    pub pilots: bool,
    pub scrambling_index: u32,
    pub header: Vec<Complex64>,
    pub payload: Vec<Complex64>,
    pub pilot_blocks: Vec<Vec<Complex64>>,
    pub ground_truth_bits: Vec<u8>,
}

impl PlFrame {
    pub fn len(&self) -> usize {
        self.header.len()
            + self.payload.len()
            + self.pilot_blocks.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn layout(&self) -> FrameLayout {
        FrameLayout::new(self.modcod, self.pilots)
    }

    /// Unscrambled body (payload slots with pilot blocks interleaved).
    pub fn body(&self) -> Vec<Complex64> {
        let layout = self.layout();
        let mut body = Vec::with_capacity(layout.len - PLHEADER_LEN);
        let mut data = self.payload.iter();
        let mut blocks = self.pilot_blocks.iter();
        let mut pos = PLHEADER_LEN;
        let mut next_pilot = layout.pilot_starts.iter().peekable();
        while pos < layout.len {
            if next_pilot.peek() == Some(&&pos) {
                next_pilot.next();
                body.extend_from_slice(blocks.next().expect("pilot block count"));
                pos += PILOT_BLOCK_LEN;
            } else {
                body.extend(data.by_ref().take(SLOT_LEN));
                pos += SLOT_LEN;
            }
        }
        body
    }

    /// On-air symbols: PLHEADER followed by the scrambled body.
    pub fn symbols(&self) -> Vec<Complex64> {
        let mut out = self.header.clone();
        out.extend(scramble_payload(&self.body(), self.scrambling_index));
        out
    }
}

/// Wraps mapped payload symbols into a PLFRAME with header and (optionally)
/// pilot blocks after every 16th slot except the last.
pub fn assemble_plframe(
    payload_symbols: Vec<Complex64>,
    modcod: ModCod,
    pilots_enabled: bool,
) -> Result<PlFrame> {
    if payload_symbols.len() != modcod.payload_symbols() {
        return Err(Error::Length {
            what: "payload symbols",
            expected: modcod.payload_symbols(),
            actual: payload_symbols.len(),
        });
    }
    let n_blocks = if pilots_enabled {
        modcod.pilot_block_count()
    } else {
        0
    };
    Ok(PlFrame {
        modcod,
        pilots: pilots_enabled,
        scrambling_index: 0,
        header: plheader(modcod, pilots_enabled),
        payload: payload_symbols,
        pilot_blocks: vec![vec![pilot_symbol(); PILOT_BLOCK_LEN]; n_blocks],
        ground_truth_bits: Vec::new(),
    })
}

/// Encodes, maps and assembles one frame from its information bits.
pub fn build_frame(
    info_bits: &[u8],
    modcod: ModCod,
    pilots: bool,
    codec: &dyn FecCodec,
) -> Result<PlFrame> {
    let coded = codec.encode(info_bits)?;
    let symbols = map_constellation(&coded, modcod)?;
    let mut frame = assemble_plframe(symbols, modcod, pilots)?;
    frame.ground_truth_bits = coded;
    Ok(frame)
}

/// One frame per `burst` frame, in order.
pub fn build_burst_frames(burst: &BitBurst, pilots: bool, codec: &dyn FecCodec) -> Result<Vec<PlFrame>> {
    (0..burst.frames)
        .map(|f| build_frame(burst.frame_bits(f), burst.modcod, pilots, codec))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framing::codec::IdentityCodec;

    #[test]
    fn frame_symbol_counts() {
        let expect = [(ModCod::Mc4, 8370, 8190), (ModCod::Mc12, 5598, 5490), (ModCod::Mc24, 3402, 3330)];
        for (m, with, without) in expect {
            let f = assemble_plframe(vec![pilot_symbol(); m.payload_symbols()], m, true).unwrap();
            assert_eq!(f.symbols().len(), with);
            let f = assemble_plframe(vec![pilot_symbol(); m.payload_symbols()], m, false).unwrap();
            assert_eq!(f.symbols().len(), without);
        }
    }

    #[test]
    fn pilots_after_every_16_slots() {
        let l = FrameLayout::new(ModCod::Mc4, true);
        assert_eq!(l.pilot_starts, vec![90 + 1440, 90 + 2 * 1440 + 36, 90 + 3 * 1440 + 72, 90 + 4 * 1440 + 108, 90 + 5 * 1440 + 144]);
        for w in l.pilot_starts.windows(2) {
            assert_eq!(w[1] - w[0], 1476);
        }
        assert_eq!(l.data_indices().len(), 8100);
        // final slot is never followed by pilots
        assert_eq!(*l.pilot_starts.last().unwrap() + 36 + 10 * 90, l.len);
    }

    #[test]
    fn pilot_symbols_unit_magnitude() {
        let f = assemble_plframe(vec![pilot_symbol(); 3240], ModCod::Mc24, true).unwrap();
        assert_eq!(f.pilot_blocks.len(), 2);
        assert!(f.pilot_blocks.iter().flatten().all(|p| (p.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn wrong_payload_length_rejected() {
        assert!(assemble_plframe(vec![pilot_symbol(); 100], ModCod::Mc4, true).is_err());
    }

    #[test]
    fn body_places_data_in_order() {
        let info: Vec<u8> = (0..6016).map(|i| (i % 5 == 0) as u8).collect();
        let f = build_frame(&info, ModCod::Mc4, true, &IdentityCodec).unwrap();
        let body = f.body();
        let l = f.layout();
        let data: Vec<_> = l.data_indices().iter().map(|&i| body[i - PLHEADER_LEN]).collect();
        assert_eq!(data, f.payload);
        assert_eq!(f.ground_truth_bits.len(), 16200);
    }
}
