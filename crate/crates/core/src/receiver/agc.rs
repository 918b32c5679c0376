use crate::iq::IqBlock;
use crate::{Error, Result};

/// Default AGC averaging window, samples.
pub const AGC_WINDOW: usize = 2048;

pub fn agc_normalize(x: &IqBlock) -> Result<IqBlock> {
    agc_normalize_with_window(x, AGC_WINDOW)
}

/// Divides each sample by the root of the trailing mean power over the last
/// `window` samples (a cumulative mean until the window fills).
pub fn agc_normalize_with_window(x: &IqBlock, window: usize) -> Result<IqBlock> {
    if window == 0 {
        return Err(Error::InvalidParameter("AGC window must be positive".into()));
    }
    if x.samples.iter().all(|s| s.norm_sqr() == 0.0) {
        return Err(Error::ZeroPower);
    }
    let p: Vec<f64> = x.samples.iter().map(|s| s.norm_sqr()).collect();
    let mut sum = 0.0;
    let mut out = Vec::with_capacity(x.len());
    for n in 0..x.len() {
        sum += p[n];
        if n >= window {
            sum -= p[n - window];
        }
        let mean = sum.max(0.0) / (n + 1).min(window) as f64;
        // a zero mean means the whole window, this sample included, is zero
        let gain = if mean > 0.0 { 1.0 / mean.sqrt() } else { 0.0 };
        out.push(x.samples[n] * gain);
    }
    Ok(IqBlock::new(out, x.sample_rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::dsp::rng;
    use rand_distr::{Distribution, Normal};

    fn mean_power(x: &[Complex64]) -> f64 {
        x.iter().map(|s| s.norm_sqr()).sum::<f64>() / x.len() as f64
    }

    fn noise(n: usize, seed: u64) -> IqBlock {
        let mut r = rng(seed);
        let g = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
        IqBlock::new((0..n).map(|_| Complex64::new(g.sample(&mut r), g.sample(&mut r))).collect(), 2e6)
    }

    #[test]
    fn scale_invariance() {
        let x = noise(10_000, 1);
        let a = agc_normalize(&x).unwrap();
        let b = agc_normalize(&x.scaled(10.0)).unwrap();
        let d = a
            .samples
            .iter()
            .zip(&b.samples)
            .skip(AGC_WINDOW)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max);
        assert!(d < 1e-3);
    }

    #[test]
    fn steady_state_unit_power() {
        let y = agc_normalize(&noise(100_000, 2)).unwrap();
        let p = mean_power(&y.samples[AGC_WINDOW..]);
        assert!((p - 1.0).abs() < 0.01, "{p}");
    }

    #[test]
    fn step_change_recovers_within_window() {
        let mut x = noise(40_000, 3);
        for s in &mut x.samples[20_000..] {
            *s *= 2.0;
        }
        let y = agc_normalize(&x).unwrap();
        let p = mean_power(&y.samples[20_000 + AGC_WINDOW..20_000 + 3 * AGC_WINDOW]);
        assert!((p - 1.0).abs() < 0.05, "{p}");
    }

    #[test]
    fn zero_input_rejected() {
        assert!(agc_normalize(&IqBlock::zeros(100, 1.0)).is_err());
    }
}
