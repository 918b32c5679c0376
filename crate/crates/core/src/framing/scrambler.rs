//! Physical-layer Gold-sequence scrambler. Each body symbol is rotated by
//! `j^R(i)`, `R(i) ∈ {0,1,2,3}`; descrambling applies the conjugate rotation.

use std::sync::OnceLock;

use num_complex::Complex64;

const PERIOD: usize = (1 << 18) - 1;
const HALF_OFFSET: usize = 131_072;

struct MSequences {
    x: Vec<u8>,
    y: Vec<u8>,
}

fn sequences() -> &'static MSequences {
    static SEQ: OnceLock<MSequences> = OnceLock::new();
    SEQ.get_or_init(|| {
        let mut x = vec![0u8; PERIOD + 18];
        let mut y = vec![0u8; PERIOD + 18];
        x[0] = 1;
        y[..18].fill(1);
        for i in 0..PERIOD {
            x[i + 18] = x[i + 7] ^ x[i];
            y[i + 18] = y[i + 10] ^ y[i + 7] ^ y[i + 5] ^ y[i];
        }
        x.truncate(PERIOD);
        y.truncate(PERIOD);
        MSequences { x, y }
    })
}

/// First `len` rotation indices `R_n(i)` for scrambling code `index`.
pub fn scrambling_sequence(index: u32, len: usize) -> Vec<u8> {
    let s = sequences();
    let n = index as usize % PERIOD;
    let z = |i: usize| s.x[(i + n) % PERIOD] ^ s.y[i % PERIOD];
    (0..len)
        .map(|i| 2 * z((i + HALF_OFFSET) % PERIOD) + z(i))
        .collect()
}

fn rotate(s: Complex64, quarter_turns: u8) -> Complex64 {
    match quarter_turns & 3 {
        0 => s,
        1 => Complex64::new(-s.im, s.re),
        2 => Complex64::new(-s.re, -s.im),
        _ => Complex64::new(s.im, -s.re),
    }
}

pub fn scramble_payload(symbols: &[Complex64], index: u32) -> Vec<Complex64> {
    scrambling_sequence(index, symbols.len())
        .into_iter()
        .zip(symbols)
        .map(|(r, &s)| rotate(s, r))
        .collect()
}

pub fn descramble_payload(symbols: &[Complex64], index: u32) -> Vec<Complex64> {
    scrambling_sequence(index, symbols.len())
        .into_iter()
        .zip(symbols)
        .map(|(r, &s)| rotate(s, (4 - r) & 3))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn m_sequences_have_full_period_balance() {
        let s = sequences();
        // an m-sequence of degree 18 has 2^17 ones per period
        assert_eq!(s.x.iter().filter(|&&b| b == 1).count(), 1 << 17);
        assert_eq!(s.y.iter().filter(|&&b| b == 1).count(), 1 << 17);
    }

    #[test]
    fn distinct_indices_give_distinct_outputs() {
        let input = vec![Complex64::new(1.0, 0.0); 500];
        let a = scramble_payload(&input, 0);
        let b = scramble_payload(&input, 1);
        assert_ne!(a, b);
        assert_ne!(a, input);
    }

    proptest! {
        #[test]
        fn descramble_inverts_exactly(
            v in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 0..300),
            index in 0u32..1000,
        ) {
            let x: Vec<Complex64> = v.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let y = scramble_payload(&x, index);
            let p_in: f64 = x.iter().map(|s| s.norm_sqr()).sum();
            let p_out: f64 = y.iter().map(|s| s.norm_sqr()).sum();
            prop_assert_eq!(p_in, p_out);
            prop_assert_eq!(descramble_payload(&y, index), x);
        }
    }
}
