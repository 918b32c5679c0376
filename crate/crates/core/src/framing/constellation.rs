//! DVB-S2 constellations (QPSK, 8PSK, 32APSK for rate 3/4), all normalized to
//! unit average symbol energy. Point `i` of a table is the symbol for the
//! bit group whose MSB-first value is `i`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::ModCod;
use crate::{Error, Result};

/// 32APSK ring ratios R2/R1 and R3/R1 for code rate 3/4.
pub const APSK32_GAMMA1: f64 = 2.84;
pub const APSK32_GAMMA2: f64 = 5.27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constellation {
    Qpsk,
    Psk8,
    Apsk32,
}

impl Constellation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Constellation::Qpsk => 2,
            Constellation::Psk8 => 3,
            Constellation::Apsk32 => 5,
        }
    }

    pub fn points(self) -> &'static [Complex64] {
        static QPSK: OnceLock<Vec<Complex64>> = OnceLock::new();
        static PSK8: OnceLock<Vec<Complex64>> = OnceLock::new();
        static APSK32: OnceLock<Vec<Complex64>> = OnceLock::new();
        match self {
            Constellation::Qpsk => QPSK.get_or_init(qpsk_points),
            Constellation::Psk8 => PSK8.get_or_init(psk8_points),
            Constellation::Apsk32 => APSK32.get_or_init(apsk32_points),
        }
    }
}

fn qpsk_points() -> Vec<Complex64> {
    let a = FRAC_1_SQRT_2;
    vec![
        Complex64::new(a, a),
        Complex64::new(a, -a),
        Complex64::new(-a, a),
        Complex64::new(-a, -a),
    ]
}

fn psk8_points() -> Vec<Complex64> {
    // phase in units of π/4 for bit groups 000..111
    [1.0, 0.0, 4.0, 5.0, 2.0, 7.0, 3.0, 6.0]
        .iter()
        .map(|k| Complex64::from_polar(1.0, k * PI / 4.0))
        .collect()
}

fn apsk32_points() -> Vec<Complex64> {
    let (r1, r2, r3) = (1.0, APSK32_GAMMA1, APSK32_GAMMA2);
    // (ring radius, phase) for bit groups 0..31
    let table: [(f64, f64); 32] = [
        (r2, PI / 4.0),
        (r2, 5.0 * PI / 12.0),
        (r2, -PI / 4.0),
        (r2, -5.0 * PI / 12.0),
        (r2, 3.0 * PI / 4.0),
        (r2, 7.0 * PI / 12.0),
        (r2, -3.0 * PI / 4.0),
        (r2, -7.0 * PI / 12.0),
        (r3, PI / 8.0),
        (r3, 3.0 * PI / 8.0),
        (r3, -PI / 4.0),
        (r3, -PI / 2.0),
        (r3, 3.0 * PI / 4.0),
        (r3, PI / 2.0),
        (r3, -7.0 * PI / 8.0),
        (r3, -5.0 * PI / 8.0),
        (r2, PI / 12.0),
        (r1, PI / 4.0),
        (r2, -PI / 12.0),
        (r1, -PI / 4.0),
        (r2, 11.0 * PI / 12.0),
        (r1, 3.0 * PI / 4.0),
        (r2, -11.0 * PI / 12.0),
        (r1, -3.0 * PI / 4.0),
        (r3, 0.0),
        (r3, PI / 4.0),
        (r3, -PI / 8.0),
        (r3, -3.0 * PI / 8.0),
        (r3, 7.0 * PI / 8.0),
        (r3, 5.0 * PI / 8.0),
        (r3, PI),
        (r3, -3.0 * PI / 4.0),
    ];
    let energy = (4.0 * r1 * r1 + 12.0 * r2 * r2 + 16.0 * r3 * r3) / 32.0;
    let scale = 1.0 / energy.sqrt();
    table
        .iter()
        .map(|&(r, p)| Complex64::from_polar(r * scale, p))
        .collect()
}

/// Maps MSB-first bit groups onto constellation symbols.
pub fn map_constellation(bits: &[u8], modcod: ModCod) -> Result<Vec<Complex64>> {
    let c = modcod.constellation();
    let nb = c.bits_per_symbol();
    if bits.len() % nb != 0 {
        return Err(Error::Length {
            what: "bit count must be a multiple of bits per symbol",
            expected: bits.len() - bits.len() % nb + nb,
            actual: bits.len(),
        });
    }
    let points = c.points();
    Ok(bits
        .chunks_exact(nb)
        .map(|group| {
            let idx = group.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
            points[idx]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_energy(points: &[Complex64]) -> f64 {
        points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64
    }

    #[test]
    fn unit_average_energy_by_enumeration() {
        for c in [Constellation::Qpsk, Constellation::Psk8, Constellation::Apsk32] {
            let pts = c.points();
            assert_eq!(pts.len(), 1 << c.bits_per_symbol());
            assert!((mean_energy(pts) - 1.0).abs() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn qpsk_zero_bits() {
        let s = map_constellation(&[0, 0], ModCod::Mc4).unwrap();
        let a = FRAC_1_SQRT_2;
        assert!((s[0] - Complex64::new(a, a)).norm() < 1e-15);
    }

    #[test]
    fn apsk32_ring_structure() {
        let pts = Constellation::Apsk32.points();
        let mut radii: Vec<f64> = pts.iter().map(|p| p.norm()).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let r1 = radii[0];
        assert!(radii[..4].iter().all(|r| (r - r1).abs() < 1e-12));
        assert!(radii[4..16].iter().all(|r| (r / r1 - APSK32_GAMMA1).abs() < 1e-12));
        assert!(radii[16..].iter().all(|r| (r / r1 - APSK32_GAMMA2).abs() < 1e-12));
        // all points distinct
        for i in 0..32 {
            for j in i + 1..32 {
                assert!((pts[i] - pts[j]).norm() > 1e-3, "{i} {j}");
            }
        }
    }

    #[test]
    fn psk_neighbours_are_gray() {
        // adjacent 8PSK points differ in exactly one bit
        let pts = Constellation::Psk8.points();
        let mut by_angle: Vec<(f64, usize)> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.arg().rem_euclid(2.0 * PI), i))
            .collect();
        by_angle.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for k in 0..8 {
            let a = by_angle[k].1;
            let b = by_angle[(k + 1) % 8].1;
            assert_eq!((a ^ b).count_ones(), 1, "{a:03b} {b:03b}");
        }
    }

    #[test]
    fn length_must_divide() {
        assert!(map_constellation(&[0, 1, 1], ModCod::Mc4).is_err());
        assert!(map_constellation(&[0, 1, 1, 0], ModCod::Mc24).is_err());
    }
}
