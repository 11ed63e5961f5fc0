//! Fixed workloads shared by the benchmarks.

use qrdecomp_core::{FpSet, Prime};

pub fn prime(n: u64) -> Prime {
    Prime::new(n).expect("benchmark moduli are odd primes")
}

/// Deterministic pair of sets of the given sizes, spread across F_p.
pub fn spread_pair(p: Prime, na: u64, nb: u64) -> (FpSet, FpSet) {
    let n = p.get() as i64;
    let a = FpSet::from_elems(p, (0..na as i64).map(|i| i * i % n));
    let b = FpSet::from_elems(p, (0..nb as i64).map(|i| (3 * i + 1) % n));
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_pair_sizes() {
        let (a, b) = spread_pair(prime(101), 10, 20);
        assert_eq!(a.len(), 10);
        assert_eq!(b.len(), 20);
    }
}
