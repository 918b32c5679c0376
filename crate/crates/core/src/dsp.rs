//! Small DSP helpers shared across the signal path.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Half-width of the fractional-delay interpolator, in samples.
pub const INTERP_HALF_TAPS: i64 = 4;
const INTERP_KAISER_BETA: f64 = 7.0;

/// Zeroth-order modified Bessel function of the first kind (power series).
pub fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let q = x * x / 4.0;
    for k in 1..200 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Kaiser window evaluated at a continuous offset `d` from the centre of a
/// window with half-length `half`.
pub fn kaiser(d: f64, half: f64, beta: f64) -> f64 {
    let r = d / half;
    if r.abs() > 1.0 {
        return 0.0;
    }
    bessel_i0(beta * (1.0 - r * r).sqrt()) / bessel_i0(beta)
}

/// Evaluates `x` at the fractional position `t` (in samples) with an 8-tap
/// Kaiser-windowed sinc kernel whose weights are normalized to unit sum.
/// Samples outside the block read as zero. Integer `t` returns the stored
/// sample exactly.
pub fn interp_unchecked(x: &[Complex64], t: f64) -> Complex64 {
    let base = t.floor();
    let mu = t - base;
    let base = base as i64;
    if mu == 0.0 {
        return if base >= 0 && (base as usize) < x.len() {
            x[base as usize]
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let weights = interp_weights(mu);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, w) in weights.iter().enumerate() {
        let idx = base - INTERP_HALF_TAPS + 1 + i as i64;
        if idx >= 0 && (idx as usize) < x.len() {
            acc += x[idx as usize] * *w;
        }
    }
    acc
}

fn exact_weights(mu: f64) -> [f64; 8] {
    let mut w = [0.0; 8];
    let mut total = 0.0;
    for (i, wi) in w.iter_mut().enumerate() {
        let m = i as f64 - (INTERP_HALF_TAPS - 1) as f64;
        let d = mu - m;
        *wi = sinc(d) * kaiser(d, INTERP_HALF_TAPS as f64, INTERP_KAISER_BETA);
        total += *wi;
    }
    for wi in &mut w {
        *wi /= total;
    }
    w
}

const WEIGHT_TABLE_STEPS: usize = 4096;

/// Kernel weights tabulated over the fractional offset and linearly
/// interpolated between entries.
fn interp_weights(mu: f64) -> [f64; 8] {
    static TABLE: OnceLock<Vec<[f64; 8]>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=WEIGHT_TABLE_STEPS)
            .map(|i| exact_weights(i as f64 / WEIGHT_TABLE_STEPS as f64))
            .collect()
    });
    let pos = mu * WEIGHT_TABLE_STEPS as f64;
    let i = (pos as usize).min(WEIGHT_TABLE_STEPS - 1);
    let frac = pos - i as f64;
    let (a, b) = (&table[i], &table[i + 1]);
    let mut w = [0.0; 8];
    for k in 0..8 {
        w[k] = a[k] + (b[k] - a[k]) * frac;
    }
    w
}

/// Bounds-checked fractional-sample read; `t` must lie in `[0, len - 1]`.
pub fn interpolate_at(x: &[Complex64], t: f64) -> Result<Complex64> {
    if x.is_empty() || !t.is_finite() || t < 0.0 || t > (x.len() - 1) as f64 {
        return Err(Error::OutOfBounds {
            index: t,
            len: x.len(),
        });
    }
    Ok(interp_unchecked(x, t))
}

/// Full linear convolution of a complex signal with real taps
/// (output length `x.len() + taps.len() - 1`).
pub fn convolve(x: &[Complex64], taps: &[f64]) -> Vec<Complex64> {
    if x.is_empty() || taps.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); x.len() + taps.len() - 1];
    for (i, &s) in x.iter().enumerate() {
        if s.re == 0.0 && s.im == 0.0 {
            continue;
        }
        for (j, &h) in taps.iter().enumerate() {
            out[i + j] += s * h;
        }
    }
    out
}

/// Kaiser-windowed sinc low-pass with cutoff `cutoff` (cycles/sample, one
/// sided) and `len` taps, normalized to unit DC gain.
pub fn lowpass_taps(cutoff: f64, len: usize, beta: f64) -> Vec<f64> {
    let half = (len - 1) as f64 / 2.0;
    let mut taps: Vec<f64> = (0..len)
        .map(|i| {
            let d = i as f64 - half;
            2.0 * cutoff * sinc(2.0 * cutoff * d) * kaiser(d, half + 1e-9, beta)
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= dc;
    }
    taps
}

/// Deterministically derives an independent 64-bit seed from a parent seed
/// and a list of labels (SplitMix64 finalizer chained over the inputs).
pub fn derive_seed(parent: u64, labels: &[u64]) -> u64 {
    let mut z = parent ^ 0x9E37_79B9_7F4A_7C15;
    for &l in labels {
        z = splitmix(z ^ splitmix(l.wrapping_add(0x632B_E59B_D9B4_E019)));
    }
    splitmix(z)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Wraps an angle into (-π, π].
pub fn wrap_phase(mut p: f64) -> f64 {
    while p > PI {
        p -= 2.0 * PI;
    }
    while p <= -PI {
        p += 2.0 * PI;
    }
    p
}
