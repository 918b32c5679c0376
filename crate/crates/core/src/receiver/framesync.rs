use num_complex::Complex64;

use crate::framing::{plsc_pair_products, sof_symbols, MIN_FRAME_LEN, PLHEADER_LEN, SOF_LEN};

const PAIRS: usize = 32;

/// Normalized header-correlation metric at every candidate start.
///
/// Uses lag-1 differential products `d[n] = y[n+1]·y*[n]`, so a carrier
/// offset only rotates the correlation. The SOF part matches 25 known
/// products; the PLSC part matches the 32 intra-pair products, which are
/// known up to one sign for every MODCOD. The result lies in `[0, 1]`.
pub fn header_metric(symbols: &[Complex64]) -> Vec<f64> {
    if symbols.len() < PLHEADER_LEN {
        return Vec::new();
    }
    let sof = sof_symbols();
    let sof_ref: Vec<Complex64> = (0..SOF_LEN - 1).map(|i| (sof[i + 1] * sof[i].conj()).conj()).collect();
    let pair_ref: Vec<Complex64> = plsc_pair_products().iter().map(|p| p.conj()).collect();
    let d: Vec<Complex64> = symbols.windows(2).map(|w| w[1] * w[0].conj()).collect();
    let n_pos = symbols.len() - PLHEADER_LEN + 1;
    (0..n_pos)
        .map(|s| {
            let mut c_sof = Complex64::new(0.0, 0.0);
            let mut norm = 0.0;
            for (i, r) in sof_ref.iter().enumerate() {
                let v = d[s + i];
                c_sof += v * r;
                norm += v.norm();
            }
            let mut c_pl = Complex64::new(0.0, 0.0);
            for (j, r) in pair_ref.iter().enumerate().take(PAIRS) {
                let v = d[s + SOF_LEN + 2 * j];
                c_pl += v * r;
                norm += v.norm();
            }
            if norm > 0.0 {
                (c_sof.norm() + c_pl.norm()) / norm
            } else {
                0.0
            }
        })
        .collect()
}

/// Frame starts whose metric reaches `threshold`, at least one minimum frame
/// length apart.
pub fn frame_sync(symbols: &[Complex64], threshold: f64) -> Vec<usize> {
    frame_sync_with_spacing(symbols, threshold, MIN_FRAME_LEN)
}

/// Local metric maxima above `threshold`, accepted strongest first while
/// keeping at least `spacing` symbols between accepted starts.
pub fn frame_sync_with_spacing(symbols: &[Complex64], threshold: f64, spacing: usize) -> Vec<usize> {
    let m = header_metric(symbols);
    let mut cand: Vec<usize> = (0..m.len())
        .filter(|&i| {
            m[i] >= threshold
                && (i == 0 || m[i] >= m[i - 1])
                && (i + 1 == m.len() || m[i] > m[i + 1])
        })
        .collect();
    cand.sort_by(|&a, &b| m[b].total_cmp(&m[a]).then(a.cmp(&b)));
    let mut accepted: Vec<usize> = Vec::new();
    for c in cand {
        if accepted.iter().all(|&a| a.abs_diff(c) >= spacing) {
            accepted.push(c);
        }
    }
    accepted.sort_unstable();
    accepted
}
