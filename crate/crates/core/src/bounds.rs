//! Conditional inequalities for pairs with `A + B` inside the residues, and
//! the size constraints they impose on a decomposition `A + B = R_p`.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{odd_primes_in, residue_set, FpSet, LegendreTable, Prime};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsCertificate {
    pub p: u32,
    pub checks: Vec<CheckEntry>,
    pub all_passed: bool,
}

impl BoundsCertificate {
    pub fn new(p: Prime, checks: Vec<CheckEntry>) -> Self {
        let all_passed = checks.iter().all(|c| c.passed);
        Self {
            p: p.get(),
            checks,
            all_passed,
        }
    }
}

fn same_modulus(a: &FpSet, b: &FpSet) -> Result<Prime> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.modulus().get(), b.modulus().get()));
    }
    Ok(a.modulus())
}

/// First pair `(a, b)` with `a + b` not a nonzero square, if any.
fn residue_violation(a: &FpSet, b: &FpSet) -> Result<Option<(u32, u32)>> {
    let p = same_modulus(a, b)?;
    let t = LegendreTable::new(p);
    let n = p.get();
    for x in a.iter() {
        for y in b.iter() {
            if t.get((x + y) % n) != 1 {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// `A + B` is contained in `R_p`.
pub fn check_subset_residues(a: &FpSet, b: &FpSet) -> Result<bool> {
    Ok(residue_violation(a, b)?.is_none())
}

fn require_hypothesis(a: &FpSet, b: &FpSet) -> Result<Prime> {
    let p = same_modulus(a, b)?;
    if let Some((x, y)) = residue_violation(a, b)? {
        return Err(Error::HypothesisViolated { a: x, b: y });
    }
    Ok(p)
}

/// `|B||A|(|A|+2)^2 <= 2 sqrt(p)(|A|^2-1)(|A|-2) - |A|^3 + 11|A| - 15 + p(3|A|+2)`.
///
/// The verdict is decided in integers: with `X = (|A|^2-1)(|A|-2) >= 0` and
/// `D = LHS - (rest of RHS)`, the inequality reads `D <= 2X sqrt(p)`.
pub fn check_lemma_ab_bound(a: &FpSet, b: &FpSet) -> Result<CheckEntry> {
    let p = require_hypothesis(a, b)?;
    let (na, nb, pp) = (a.len() as i128, b.len() as i128, p.get() as i128);
    let lhs = nb * na * (na + 2) * (na + 2);
    let x = (na * na - 1) * (na - 2);
    let rest = -na * na * na + 11 * na - 15 + pp * (3 * na + 2);
    let d = lhs - rest;
    let passed = if d <= 0 {
        true
    } else {
        x > 0 && d * d <= 4 * x * x * pp
    };
    Ok(CheckEntry {
        name: "lemma_ab_bound".into(),
        lhs: lhs as f64,
        rhs: 2.0 * p.sqrt() * x as f64 + rest as f64,
        passed,
    })
}

/// `p|A||B| <= (p - |A|)(p - |B|)`.
pub fn check_lemma_p_ab(a: &FpSet, b: &FpSet) -> Result<CheckEntry> {
    let p = require_hypothesis(a, b)?;
    let (na, nb, pp) = (a.len() as i128, b.len() as i128, p.get() as i128);
    let lhs = pp * na * nb;
    let rhs = (pp - na) * (pp - nb);
    Ok(CheckEntry {
        name: "lemma_p_ab".into(),
        lhs: lhs as f64,
        rhs: rhs as f64,
        passed: lhs <= rhs,
    })
}

/// Both conditional lemmas for one pair.
pub fn certify(a: &FpSet, b: &FpSet) -> Result<BoundsCertificate> {
    let checks = vec![check_lemma_ab_bound(a, b)?, check_lemma_p_ab(a, b)?];
    Ok(BoundsCertificate::new(a.modulus(), checks))
}

/// Builds a random pair with `A + B` inside `R_p`.
///
/// `A` grows one element at a time, each drawn uniformly from the elements
/// that keep the pool `C = intersection of (R_p - a)` at size `>= nb`; `B` is
/// then a uniform `nb`-subset of `C`.
pub fn generate_residue_instance<R: Rng>(
    p: Prime,
    na: usize,
    nb: usize,
    rng: &mut R,
) -> Result<(FpSet, FpSet)> {
    if na == 0 || nb == 0 {
        return Err(Error::InvalidArgument(
            "instance sizes must be positive".into(),
        ));
    }
    let r = residue_set(p);
    let shifted: Vec<FpSet> = (0..p.get()).map(|x| r.translate(-(x as i64))).collect();
    let mut a = FpSet::empty(p);
    let mut pool = FpSet::full(p);
    let mut members = Vec::with_capacity(na);
    while members.len() < na {
        let options: Vec<u32> = (0..p.get())
            .filter(|&x| {
                !a.contains(x) && pool.bits().intersection_count(shifted[x as usize].bits()) >= nb
            })
            .collect();
        let Some(&x) = options.choose(rng) else {
            return Err(Error::ConstructionFailed {
                na,
                nb,
                pool: pool.len(),
            });
        };
        members.push(x);
        a = FpSet::from_elems(p, members.iter().map(|&m| m as i64));
        pool = pool.intersection(&shifted[x as usize]);
    }
    let cand = pool.to_vec();
    let b = FpSet::from_elems(
        p,
        index::sample(rng, cand.len(), nb)
            .into_iter()
            .map(|i| cand[i] as i64),
    );
    Ok((a, b))
}

/// `count` instances from [`generate_residue_instance`], sizes drawn
/// uniformly from `[1, floor(sqrt p)]` and redrawn when construction fails.
/// Instance `i` depends only on `(seed, p, i)`.
pub fn residue_instance_panel(p: Prime, count: usize, seed: u64) -> Result<Vec<(FpSet, FpSet)>> {
    const ATTEMPTS: usize = 256;
    let cap = (1..)
        .take_while(|&u: &usize| u * u <= p.as_usize())
        .last()
        .unwrap_or(1);
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((p.get() as u64) << 32) | i as u64);
            let mut last = None;
            for _ in 0..ATTEMPTS {
                let (na, nb) = (rng.gen_range(1..=cap), rng.gen_range(1..=cap));
                match generate_residue_instance(p, na, nb, &mut rng) {
                    Ok(pair) => return Ok(pair),
                    Err(e) => last = Some(e),
                }
            }
            Err(last.expect("at least one attempt"))
        })
        .collect()
}

/// Which size constraints to impose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeRules {
    /// `sqrt(p)/4 + 1/8 <= |A|, |B| < 2 sqrt(p) - 1`, together with the
    /// product window `(p-1)/2 <= |A||B| <= p - 1` and `p|A||B| <= (p-|A|)(p-|B|)`.
    pub theorem1: bool,
    /// `|A|, |B| >= 5`.
    pub lemma5: bool,
}

impl SizeRules {
    pub const ALL: SizeRules = SizeRules {
        theorem1: true,
        lemma5: true,
    };
    pub const NONE: SizeRules = SizeRules {
        theorem1: false,
        lemma5: false,
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeRange {
    pub p: u32,
    pub lower_a: u32,
    pub upper_a: u32,
    pub product_min: u32,
    pub product_max: u32,
    /// Every `(|A|, |B|)` meeting all constraints.
    pub lattice: Vec<(u32, u32)>,
    pub feasible: bool,
}

/// Smallest integer `u` with `u >= sqrt(p)/4 + 1/8`, i.e. `(8u - 1)^2 >= 4p`.
pub fn theorem1_lower(p: Prime) -> u32 {
    let four_p = 4 * p.get() as u64;
    (1u64..)
        .find(|&u| (8 * u - 1) * (8 * u - 1) >= four_p)
        .unwrap() as u32
}

/// Largest integer `u` with `u < 2 sqrt(p) - 1`, i.e. `(u + 1)^2 < 4p`.
pub fn theorem1_upper(p: Prime) -> u32 {
    let four_p = 4 * p.get() as u64;
    let mut u = (2.0 * p.sqrt()) as u64 + 1;
    while (u + 1) * (u + 1) >= four_p {
        u -= 1;
    }
    u as u32
}

/// Size window for each of `|A|, |B|` under `rules`, clamped to `[min_size, (p-1)/2]`.
pub fn size_window(p: Prime, rules: SizeRules, min_size: u32) -> (u32, u32) {
    let mut lo = min_size.max(1);
    let mut hi = p.half();
    if rules.lemma5 {
        lo = lo.max(5);
    }
    if rules.theorem1 {
        lo = lo.max(theorem1_lower(p));
        hi = hi.min(theorem1_upper(p));
    }
    (lo, hi)
}

/// Whether `(s, t)` is admissible under `rules`; always requires `s t >= (p-1)/2`.
pub fn admissible_pair(p: Prime, rules: SizeRules, s: u32, t: u32) -> bool {
    let (pp, s, t) = (p.get() as u64, s as u64, t as u64);
    if s * t < (pp - 1) / 2 {
        return false;
    }
    if rules.theorem1 && (s * t > pp - 1 || pp * s * t > (pp - s) * (pp - t)) {
        return false;
    }
    true
}

pub fn size_range(p: Prime, rules: SizeRules, min_a: u32, min_b: u32) -> SizeRange {
    let (lo_a, hi_a) = size_window(p, rules, min_a);
    let (lo_b, hi_b) = size_window(p, rules, min_b);
    let mut lattice = Vec::new();
    for s in lo_a..=hi_a {
        for t in lo_b..=hi_b {
            if admissible_pair(p, rules, s, t) {
                lattice.push((s, t));
            }
        }
    }
    let product_max = if rules.theorem1 {
        p.get() - 1
    } else {
        p.half() * p.half()
    };
    SizeRange {
        p: p.get(),
        lower_a: lo_a,
        upper_a: hi_a,
        product_min: p.half(),
        product_max,
        feasible: lo_a <= hi_a && p.half() <= product_max && !lattice.is_empty(),
        lattice,
    }
}

/// Sizes a decomposition with `|A|, |B| >= 2` would need, under every rule.
pub fn admissible_size_range(p: Prime) -> SizeRange {
    size_range(p, SizeRules::ALL, 2, 2)
}

/// `sqrt(p) / log 2 - 1.6`.
pub fn theorem2_lower_bound(p: Prime) -> f64 {
    p.sqrt() / std::f64::consts::LN_2 - 1.6
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Theorem3Bounds {
    pub energy_min: f64,
    pub size_min: f64,
}

/// Energy and size floors when at most `eta (p-1)` sums are unique.
pub fn theorem3_bounds(eta: f64, p: Prime) -> Result<Theorem3Bounds> {
    if !(0.0..0.5).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    let num = 2f64.powf(2.0 - 4.0 * eta) - 2f64.powf(3.0 - 2.0 * eta) * eta + 4.0 * eta - 1.0;
    let den = 2.0 - 4.0 * eta;
    Ok(Theorem3Bounds {
        energy_min: (0.5 + num / den) * (p.as_f64() - 1.0),
        size_min: p.sqrt() / (2.0 * 4f64.powf(eta)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeltaBounds {
    pub lower_a: f64,
    pub upper_a: f64,
    pub lower_b: f64,
    pub upper_b: f64,
}

/// Size windows for `|A| = delta |B|`, `delta in (1/8, 1]`.
pub fn proposition_delta_bounds(delta: f64, p: Prime) -> Result<DeltaBounds> {
    if !(delta > 0.125 && delta <= 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let q = p.as_f64() - 1.0;
    Ok(DeltaBounds {
        lower_a: (delta * q / 2.0).sqrt(),
        upper_a: (2.0 * delta).min(delta.sqrt()) * q.sqrt(),
        lower_b: (q / (2.0 * delta)).sqrt(),
        upper_b: 2f64.min((1.0 / delta).sqrt()) * q.sqrt(),
    })
}

/// Both sides of `1/2 log(p-1) + log(sqrt(p)+1) - log p >= sqrt(p)/(p-1) - 1.6 log 2/(p-1)`.
///
/// The left side is evaluated as `1/2 log1p(-1/p) + log1p(1/sqrt(p))`, which has no
/// cancellation; the naive three-log form loses about four digits at p ~ 10^6.
pub fn theorem2_step_sides(p: Prime) -> (f64, f64) {
    let pf = p.as_f64();
    let lhs = 0.5 * (-1.0 / pf).ln_1p() + (1.0 / pf.sqrt()).ln_1p();
    let rhs = (pf.sqrt() - 1.6 * std::f64::consts::LN_2) / (pf - 1.0);
    (lhs, rhs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem2StepReport {
    pub p_max: u64,
    pub primes_checked: u64,
    pub verdict: bool,
    pub failures: Vec<u32>,
    /// Smallest prime `>= 37` from which every prime passes.
    pub smallest_passing: Option<u32>,
    /// Prime with the smallest relative margin `(lhs - rhs) / rhs`.
    pub tightest_prime: u32,
    pub tightest_margin: f64,
}

pub fn verify_theorem2_step(p_max: u64) -> Result<Theorem2StepReport> {
    if p_max < 37 {
        return Err(Error::InvalidArgument(format!("p_max = {p_max} < 37")));
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut tight = (0u32, f64::INFINITY);
    let primes = odd_primes_in(37, p_max);
    for &p in &primes {
        let (l, r) = theorem2_step_sides(p);
        checked += 1;
        let margin = (l - r) / r.abs();
        if margin < tight.1 {
            tight = (p.get(), margin);
        }
        if l.is_nan() || r.is_nan() || l < r {
            failures.push(p.get());
        }
    }
    let smallest_passing = match failures.last() {
        None => primes.first().map(|p| p.get()),
        Some(&f) => primes.iter().map(|p| p.get()).find(|&q| q > f),
    };
    Ok(Theorem2StepReport {
        p_max,
        primes_checked: checked,
        verdict: failures.is_empty(),
        failures,
        smallest_passing,
        tightest_prime: tight.0,
        tightest_margin: tight.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn set(n: u64, xs: &[i64]) -> FpSet {
        FpSet::from_elems(p(n), xs.iter().copied())
    }

    #[test]
    fn subset_residue_examples() {
        assert!(check_subset_residues(&set(7, &[1]), &set(7, &[0, 1, 3])).unwrap());
        assert!(!check_subset_residues(&set(7, &[1]), &set(7, &[0, 2])).unwrap());
        for n in [3, 7, 11, 101] {
            assert!(!check_subset_residues(&set(n, &[0]), &set(n, &[0])).unwrap());
        }
        assert_eq!(
            check_subset_residues(&set(7, &[1]), &set(11, &[1])),
            Err(Error::ModulusMismatch(7, 11))
        );
    }

    #[test]
    fn lemma_examples() {
        let (a, b) = (set(7, &[1]), set(7, &[0, 1, 3]));
        let e = check_lemma_ab_bound(&a, &b).unwrap();
        assert_eq!((e.lhs, e.rhs, e.passed), (27.0, 30.0, true));
        let e = check_lemma_p_ab(&a, &b).unwrap();
        assert_eq!((e.lhs, e.rhs, e.passed), (21.0, 24.0, true));
        assert_eq!(
            check_lemma_ab_bound(&a, &set(7, &[0, 2])),
            Err(Error::HypothesisViolated { a: 1, b: 2 })
        );
        let cert = certify(&a, &b).unwrap();
        assert!(cert.all_passed && cert.checks.len() == 2);
    }

    #[test]
    fn singleton_lemma_cases() {
        // |A| = |B| = 1: p <= (p-1)^2
        for n in [3u64, 5, 7, 13, 101] {
            let q = p(n);
            let e = check_lemma_p_ab(&set(n, &[0]), &set(n, &[1])).unwrap();
            assert!(e.passed && e.lhs == n as f64 && e.rhs == ((n - 1) * (n - 1)) as f64);
            let r = residue_set(q);
            for a0 in [0i64, 3] {
                let b = r.translate(-a0);
                assert!(check_lemma_ab_bound(&set(n, &[a0]), &b).unwrap().passed);
            }
        }
    }

    #[test]
    fn ab_bound_exact_verdict_matches_float() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [31u64, 101] {
            for na in 1..6 {
                for _ in 0..20 {
                    let nb = rng.gen_range(1..=3);
                    if let Ok((a, b)) = generate_residue_instance(p(n), na, nb, &mut rng) {
                        let e = check_lemma_ab_bound(&a, &b).unwrap();
                        assert_eq!(e.passed, e.lhs <= e.rhs + 1e-9 * e.rhs.abs());
                    }
                }
            }
        }
    }

    #[test]
    fn instance_panel_is_reproducible() {
        let a = residue_instance_panel(p(101), 20, 3).unwrap();
        assert_eq!(a, residue_instance_panel(p(101), 20, 3).unwrap());
        assert_ne!(a, residue_instance_panel(p(101), 20, 4).unwrap());
        let r = residue_set(p(101));
        for (x, y) in &a {
            assert!(x.sumset(y).is_subset(&r));
        }
    }

    #[test]
    fn instance_generation() {
        let q = p(31);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (a, b) = generate_residue_instance(q, 1, 15, &mut rng).unwrap();
        assert_eq!(b, residue_set(q).translate(-(a.to_vec()[0] as i64)));
        for _ in 0..50 {
            if let Ok((a, b)) = generate_residue_instance(q, 3, 2, &mut rng) {
                assert_eq!((a.len(), b.len()), (3, 2));
                assert!(check_subset_residues(&a, &b).unwrap());
            }
        }
        // p = 7, A = {0, 3}: (R_7) & (R_7 - 3) = {1}
        let r = residue_set(p(7));
        assert_eq!(r.intersection(&r.translate(-3)).to_vec(), vec![1]);
        assert!(matches!(
            generate_residue_instance(p(7), 2, 3, &mut rng),
            Err(Error::ConstructionFailed { .. })
        ));
    }

    #[test]
    fn size_range_examples() {
        let r7 = admissible_size_range(p(7));
        assert!(!r7.feasible);
        assert_eq!((r7.product_min, r7.product_max), (3, 6));
        let r43 = admissible_size_range(p(43));
        assert_eq!((r43.lower_a, r43.product_max, r43.product_min), (5, 42, 21));
        assert!(r43.feasible);
        // the product window alone admits (5,5)..(5,8), (6,6), (6,7); the
        // quadratic constraint p|A||B| <= (p-|A|)(p-|B|) keeps only these
        assert_eq!(r43.lattice, vec![(5, 5), (5, 6), (6, 5)]);
        let r = admissible_size_range(p(1009));
        assert_eq!((r.lower_a, r.upper_a), (9, 62));
        assert!(1009f64.sqrt() / 4.0 + 0.125 > 8.0);
        assert!(2.0 * 1009f64.sqrt() - 1.0 > 62.0 && 2.0 * 1009f64.sqrt() - 1.0 < 63.0);
        let r61 = admissible_size_range(p(61));
        assert_eq!((r61.lower_a, r61.upper_a), (5, 14));
        assert!(r61.lattice.iter().all(|&(s, t)| s <= 9 && t <= 9));
    }

    #[test]
    fn infeasible_below_37() {
        for q in odd_primes_in(3, 200) {
            let r = admissible_size_range(q);
            if q.get() < 26 {
                assert!(r.lattice.iter().all(|&(s, t)| s * t > q.get() - 1) && !r.feasible);
            }
            assert_eq!(r.feasible, q.get() >= 37, "p = {q}");
        }
    }

    #[test]
    fn theorem1_integer_bounds_match_floats() {
        for q in odd_primes_in(3, 20_000) {
            let s = q.sqrt();
            let lo = theorem1_lower(q) as f64;
            assert!(lo >= s / 4.0 + 0.125 && lo - 1.0 < s / 4.0 + 0.125);
            let hi = theorem1_upper(q) as f64;
            assert!(hi < 2.0 * s - 1.0 && hi + 1.0 >= 2.0 * s - 1.0);
        }
    }

    #[test]
    fn theorem2_examples() {
        let v = theorem2_lower_bound(p(1009));
        assert!((v - (1009f64.sqrt() / 2f64.ln() - 1.6)).abs() < 1e-12);
        assert!((v - 44.23).abs() < 0.01);
        assert!((theorem2_lower_bound(p(37)) - 7.18).abs() < 0.01);
        let ps = odd_primes_in(3, 2000);
        for w in ps.windows(2) {
            assert!(theorem2_lower_bound(w[0]) < theorem2_lower_bound(w[1]));
        }
        for q in ps {
            assert!(theorem2_lower_bound(q) <= q.half() as f64);
        }
    }

    #[test]
    fn theorem3_examples() {
        let b = theorem3_bounds(0.0, p(101)).unwrap();
        assert_eq!(b.energy_min, 200.0);
        assert_eq!(b.size_min, 101f64.sqrt() / 2.0);
        let b = theorem3_bounds(0.25, p(101)).unwrap();
        let expect = (0.5 + (2.0 - 2f64.powf(2.5) / 4.0)) * 100.0;
        assert!((b.energy_min - expect).abs() < 1e-9);
        assert!((b.energy_min - 108.58).abs() < 0.01);
        assert!((b.size_min - 3.553).abs() < 1e-3);
        assert_eq!(theorem3_bounds(0.5, p(101)), Err(Error::EtaOutOfRange(0.5)));
        assert!(theorem3_bounds(-0.1, p(101)).is_err());
    }

    /// The energy floor falls from 2(p-1) at eta = 0 toward (p-1)/2 as
    /// eta -> 1/2: the numerator vanishes to second order at the pole.
    #[test]
    fn theorem3_grid_behaviour() {
        let q = p(101);
        let grid: Vec<f64> = (0..5000).map(|i| i as f64 * 0.5 / 5000.0).collect();
        let vals: Vec<f64> = grid
            .iter()
            .map(|&e| theorem3_bounds(e, q).unwrap().energy_min)
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0]);
            assert!((w[0] - w[1]).abs() < 0.2);
        }
        let near = theorem3_bounds(0.5 - 1e-6, q).unwrap().energy_min;
        assert!((near - 50.0).abs() < 1e-3);
    }

    #[test]
    fn delta_examples() {
        let b = proposition_delta_bounds(1.0, p(101)).unwrap();
        assert!((b.lower_a - 50f64.sqrt()).abs() < 1e-12);
        assert!((b.upper_a - 10.0).abs() < 1e-12);
        assert!((b.lower_b - b.lower_a).abs() < 1e-12 && (b.upper_b - b.upper_a).abs() < 1e-12);
        assert!((b.lower_a / 100f64.sqrt() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let b = proposition_delta_bounds(0.25, p(101)).unwrap();
        assert!((b.upper_a - 5.0).abs() < 1e-12);
        assert!(proposition_delta_bounds(0.125, p(101)).is_err());
        assert!(proposition_delta_bounds(1.5, p(101)).is_err());
    }

    #[test]
    fn theorem2_step_boundary() {
        let (l, r) = theorem2_step_sides(p(37));
        // independent naive evaluation
        let pf = 37f64;
        let naive_l = 0.5 * (pf - 1.0).ln() + (pf.sqrt() + 1.0).ln() - pf.ln();
        assert!((l - naive_l).abs() < 1e-14);
        assert!((l - 0.138_505_576).abs() < 1e-8);
        assert!((r - 0.138_159_084).abs() < 1e-8);
        assert!(l > r);
        let rep = verify_theorem2_step(10_000).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.smallest_passing, Some(37));
        assert!(verify_theorem2_step(36).is_err());
    }

    /// lhs - rhs = (1.6 log 2 - 1)/p + O(p^-3/2): positive, with p * margin
    /// settling at 1.6 log 2 - 1 ~ 0.109.
    #[test]
    fn theorem2_step_asymptotics() {
        let c = 1.6 * std::f64::consts::LN_2 - 1.0;
        let scaled = |n: u64| {
            let (l, r) = theorem2_step_sides(p(n));
            assert!(l > r);
            (l - r) * n as f64
        };
        let errs: Vec<f64> = [1009u64, 10_007, 100_003]
            .iter()
            .map(|&n| (scaled(n) - c).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!(errs[2] < 0.01);
    }
}
