use std::f64::consts::PI;

use crate::field::FpSet;

/// `|sum_{s in S} e(psi s / p)|^2` for every additive character `psi = 0..p-1`.
pub fn additive_char_power(set: &FpSet) -> Vec<f64> {
    let p = set.modulus().as_usize();
    let twiddle: Vec<(f64, f64)> = (0..p)
        .map(|j| {
            let ang = 2.0 * PI * j as f64 / p as f64;
            (ang.cos(), ang.sin())
        })
        .collect();
    let elems: Vec<usize> = set.iter().map(|x| x as usize).collect();
    (0..p)
        .map(|psi| {
            let (mut re, mut im) = (0.0, 0.0);
            for &s in &elems {
                let (c, d) = twiddle[psi * s % p];
                re += c;
                im += d;
            }
            re * re + im * im
        })
        .collect()
}

/// Sum of [`additive_char_power`]; equals `p |S|` by Parseval.
pub fn parseval_total(set: &FpSet) -> f64 {
    additive_char_power(set).iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{residue_set, Prime};

    #[test]
    fn trivial_character_and_full_set() {
        let p = Prime::new(13).unwrap();
        let s = FpSet::from_elems(p, [1, 4, 5]);
        assert!((additive_char_power(&s)[0] - 9.0).abs() < 1e-12);
        let full = additive_char_power(&FpSet::full(p));
        assert!((full[0] - 169.0).abs() < 1e-9);
        assert!(full[1..].iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn parseval_on_residues() {
        for n in [7u64, 11, 101] {
            let p = Prime::new(n).unwrap();
            let r = residue_set(p);
            let total = parseval_total(&r);
            let expect = (n as usize * r.len()) as f64;
            assert!(((total - expect) / expect).abs() < 1e-9);
            // nontrivial psi give |(g - 1)/2|^2 for a quadratic Gauss sum g = +-sqrt(p*)
            let mut lv: Vec<f64> = additive_char_power(&r)[1..].to_vec();
            lv.sort_by(f64::total_cmp);
            lv.dedup_by(|a, b| (*a - *b).abs() < 1e-7);
            assert!(lv.len() <= 2);
        }
    }
}
