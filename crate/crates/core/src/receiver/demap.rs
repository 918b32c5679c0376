use num_complex::Complex64;

use crate::framing::ModCod;

/// Index of the nearest constellation point; ties go to the lower index.
pub fn nearest_point(s: Complex64, points: &[Complex64]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, p) in points.iter().enumerate() {
        let d = (s - p).norm_sqr();
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// Minimum-distance hard decisions, MSB-first bit groups.
pub fn demap(symbols: &[Complex64], modcod: ModCod) -> Vec<u8> {
    let c = modcod.constellation();
    let points = c.points();
    let m = c.bits_per_symbol();
    let mut bits = Vec::with_capacity(symbols.len() * m);
    for &s in symbols {
        let idx = nearest_point(s, points);
        for b in (0..m).rev() {
            bits.push(((idx >> b) & 1) as u8);
        }
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framing::map_constellation;

    #[test]
    fn exact_points_round_trip() {
        for m in ModCod::ALL {
            let k = m.bits_per_symbol();
            let bits: Vec<u8> = (0..(1 << k)).flat_map(|i| (0..k).rev().map(move |b| ((i >> b) & 1) as u8)).collect();
            let sym = map_constellation(&bits, m).unwrap();
            assert_eq!(demap(&sym, m), bits);
        }
    }

    #[test]
    fn origin_ties_to_lowest_index() {
        // every QPSK point is equidistant from the origin
        assert_eq!(demap(&[Complex64::new(0.0, 0.0)], ModCod::Mc4), vec![0, 0]);
        assert_eq!(demap(&[Complex64::new(0.0, 0.0)], ModCod::Mc12), vec![0, 0, 0]);
    }
}
