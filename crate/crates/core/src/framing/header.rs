//! PLHEADER construction: 26-symbol SOF followed by the 64-symbol PLS code,
//! both π/2-BPSK modulated.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{ModCod, PLHEADER_LEN, SOF_LEN};

/// Start-of-frame bit pattern (MSB transmitted first).
pub const SOF_BITS: u32 = 0x18D_2E82;
/// Scrambling word XORed onto the 64 PLSC bits.
pub const PLSC_SCRAMBLER: u64 = 0x719D_83C9_5342_2DFA;

const RM_GENERATOR: [u32; 6] = [
    0x5555_5555,
    0x3333_3333,
    0x0F0F_0F0F,
    0x00FF_00FF,
    0x0000_FFFF,
    0xFFFF_FFFF,
];

/// π/2-BPSK: even positions rotate by (1+j)/√2, odd ones by (−1+j)/√2.
pub fn pi2_bpsk(bit: u8, position: usize) -> Complex64 {
    let a = if bit & 1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    if position % 2 == 0 {
        Complex64::new(a, a)
    } else {
        Complex64::new(-a, a)
    }
}

pub fn sof_bits() -> [u8; SOF_LEN] {
    let mut out = [0u8; SOF_LEN];
    for (i, b) in out.iter_mut().enumerate() {
        *b = ((SOF_BITS >> (SOF_LEN - 1 - i)) & 1) as u8;
    }
    out
}

pub fn sof_symbols() -> Vec<Complex64> {
    sof_bits()
        .iter()
        .enumerate()
        .map(|(i, &b)| pi2_bpsk(b, i))
        .collect()
}

/// 7-bit PLS code: 5-bit MODCOD, short-frame flag, pilot flag.
pub fn pls_code(modcod: ModCod, pilots: bool) -> u8 {
    (modcod.pls_index() << 2) | 0b10 | pilots as u8
}

/// The 64 scrambled PLSC bits for a 7-bit PLS code.
pub fn plsc_bits(code: u8) -> [u8; 64] {
    let mut codeword = 0u32;
    for (i, row) in RM_GENERATOR.iter().enumerate() {
        if (code >> (6 - i)) & 1 == 1 {
            codeword ^= row;
        }
    }
    let last = code & 1;
    let mut out = [0u8; 64];
    for j in 0..32 {
        let c = ((codeword >> (31 - j)) & 1) as u8;
        out[2 * j] = c;
        out[2 * j + 1] = c ^ last;
    }
    for (i, b) in out.iter_mut().enumerate() {
        *b ^= ((PLSC_SCRAMBLER >> (63 - i)) & 1) as u8;
    }
    out
}

/// Full 90-symbol PLHEADER for the given MODCOD and pilot configuration.
pub fn plheader(modcod: ModCod, pilots: bool) -> Vec<Complex64> {
    let mut out = sof_symbols();
    let plsc = plsc_bits(pls_code(modcod, pilots));
    out.extend(
        plsc.iter()
            .enumerate()
            .map(|(j, &b)| pi2_bpsk(b, SOF_LEN + j)),
    );
    debug_assert_eq!(out.len(), PLHEADER_LEN);
    out
}

/// Expected lag-1 products `s[2j+1]·conj(s[2j])` of the PLSC, one per symbol
/// pair, up to a global sign set by the pilot flag. These do not depend on
/// the MODCOD, so a receiver can correlate against them before it knows
/// which MODCOD is on air.
pub fn plsc_pair_products() -> [Complex64; 32] {
    let mut out = [Complex64::new(0.0, 0.0); 32];
    for (j, o) in out.iter_mut().enumerate() {
        let s0 = ((PLSC_SCRAMBLER >> (63 - 2 * j)) & 1) as u8;
        let s1 = ((PLSC_SCRAMBLER >> (63 - 2 * j - 1)) & 1) as u8;
        let sign = if s0 ^ s1 == 0 { 1.0 } else { -1.0 };
        *o = Complex64::new(0.0, sign);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_90_unit_symbols() {
        for m in ModCod::ALL {
            for p in [false, true] {
                let h = plheader(m, p);
                assert_eq!(h.len(), PLHEADER_LEN);
                assert!(h.iter().all(|s| (s.norm() - 1.0).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn sof_bits_match_pattern() {
        let bits = sof_bits();
        let v = bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        assert_eq!(v, SOF_BITS);
    }

    #[test]
    fn plsc_differs_between_modcods() {
        let a = plsc_bits(pls_code(ModCod::Mc4, true));
        let b = plsc_bits(pls_code(ModCod::Mc12, true));
        let c = plsc_bits(pls_code(ModCod::Mc24, true));
        assert_ne!(a, b);
        assert_ne!(b, c);
        // first-order Reed-Muller: distinct codewords differ in ≥ 16 of 32 positions, ×2 after interleave
        let d = a.iter().zip(&b).filter(|(x, y)| x != y).count();
        assert!(d >= 32, "distance {d}");
    }

    #[test]
    fn pair_products_hold_up_to_pilot_sign() {
        let pairs = plsc_pair_products();
        for pilots in [false, true] {
            let h = plheader(ModCod::Mc12, pilots);
            let sign = if pilots { -1.0 } else { 1.0 };
            for j in 0..32 {
                let p = h[SOF_LEN + 2 * j + 1] * h[SOF_LEN + 2 * j].conj();
                assert!((p - pairs[j] * sign).norm() < 1e-12);
            }
        }
    }
}
