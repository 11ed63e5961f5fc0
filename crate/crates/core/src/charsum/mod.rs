//! Complete character sums `S_k(a; p) = sum_x chi((x + a_1)...(x + a_k))`
//! with exact integer bound checks.

mod equidistribution;
mod fourier;

pub use equidistribution::{
    horizontal_sweep, semicircle_cdf, semicircle_density, vertical_histogram, Histogram,
    SweepPoint, SweepReport,
};
pub use fourier::{additive_char_power, parseval_total};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{reduce, FpElement, LegendreTable, Prime};

/// Default ceiling on tuple evaluations for exhaustive enumerations.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// A point `a in F_p^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTuple {
    coords: Vec<u32>,
    #[serde(skip)]
    modulus: Prime,
    distinct: bool,
}

impl KTuple {
    pub fn new(p: Prime, coords: &[i64]) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidK(coords.len()));
        }
        Ok(Self::from_residues(
            p,
            coords.iter().map(|&c| reduce(c, p)).collect(),
        ))
    }

    pub fn from_elements(elems: &[FpElement]) -> Result<Self> {
        let p = elems.first().ok_or(Error::InvalidK(0))?.modulus();
        if elems.iter().any(|e| e.modulus() != p) {
            return Err(Error::ModulusMismatch(
                p.get(),
                elems
                    .iter()
                    .find(|e| e.modulus() != p)
                    .unwrap()
                    .modulus()
                    .get(),
            ));
        }
        Self::new(
            p,
            &elems.iter().map(|e| e.residue() as i64).collect::<Vec<_>>(),
        )
    }

    fn from_residues(p: Prime, coords: Vec<u32>) -> Self {
        let distinct = coords
            .iter()
            .enumerate()
            .all(|(i, a)| coords[..i].iter().all(|b| a != b));
        Self {
            coords,
            modulus: p,
            distinct,
        }
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharSumRecord {
    pub p: u32,
    pub tuple: KTuple,
    pub value: i64,
    /// `value / sqrt(p)`
    pub normalized: f64,
    /// `(value + 1) / sqrt(p)`
    pub shifted_normalized: f64,
    /// `None` when the coordinates collide.
    pub weil_ok: Option<bool>,
    /// `None` unless the coordinates are distinct and `k` is even.
    pub wan_ok: Option<bool>,
}

/// `sum_x chi(prod_i (x + a_i))`, summed as a product of table lookups.
pub fn raw_char_sum(table: &LegendreTable, coords: &[u32]) -> i64 {
    let chi = table.as_slice();
    let p = chi.len();
    let mut total = 0i64;
    for x in 0..p {
        let mut v = 1i8;
        for &a in coords {
            let y = x + a as usize;
            v *= chi[if y >= p { y - p } else { y }];
            if v == 0 {
                break;
            }
        }
        total += v as i64;
    }
    total
}

/// `|value| <= (k-1) sqrt(p)`, compared as `value^2 <= (k-1)^2 p`.
pub fn weil_holds(value: i64, k: usize, p: Prime) -> bool {
    let v = value as i128;
    let c = k as i128 - 1;
    v * v <= c * c * p.get() as i128
}

/// `value <= (k-2) sqrt(p) - 1`, compared in integers.
pub fn wan_holds(value: i64, k: usize, p: Prime) -> bool {
    let v1 = value as i128 + 1;
    if v1 <= 0 {
        return true;
    }
    let c = k as i128 - 2;
    v1 * v1 <= c * c * p.get() as i128
}

/// Evaluates `S_k(a; p)` and the bounds that apply to it.
pub fn char_sum(tuple: &KTuple, table: &LegendreTable) -> CharSumRecord {
    let p = tuple.modulus;
    assert_eq!(p, table.modulus(), "table built for a different modulus");
    let value = raw_char_sum(table, &tuple.coords);
    let k = tuple.k();
    let sq = p.sqrt();
    CharSumRecord {
        p: p.get(),
        tuple: tuple.clone(),
        value,
        normalized: value as f64 / sq,
        shifted_normalized: (value + 1) as f64 / sq,
        weil_ok: tuple.distinct.then(|| weil_holds(value, k, p)),
        wan_ok: (tuple.distinct && k.is_multiple_of(2)).then(|| wan_holds(value, k, p)),
    }
}

/// `sum_x chi(prod_{i>=2} (1 + (a_i - a_1) x))`.
///
/// For even `k` this equals `S_k(a; p) + 1`. For odd `k` the substitution
/// leaves an extra factor `chi(x)` behind and the identity does not hold.
pub fn shift_reduced_sum(tuple: &KTuple, table: &LegendreTable) -> Result<i64> {
    if !tuple.distinct {
        return Err(Error::NotDistinct);
    }
    let p = tuple.modulus.get();
    let a1 = tuple.coords[0];
    let diffs: Vec<u64> = tuple.coords[1..]
        .iter()
        .map(|&a| ((a + p - a1) % p) as u64)
        .collect();
    let m = p as u64;
    let mut total = 0i64;
    for x in 0..m {
        let mut prod = 1u64;
        for &h in &diffs {
            prod = prod * ((1 + h * x) % m) % m;
        }
        total += table.get(prod as u32) as i64;
    }
    Ok(total)
}

pub fn check_weil(record: &CharSumRecord, p: Prime) -> Result<bool> {
    if !record.tuple.distinct {
        return Err(Error::NotDistinct);
    }
    Ok(weil_holds(record.value, record.tuple.k(), p))
}

pub fn check_wan(record: &CharSumRecord, p: Prime) -> Result<bool> {
    let k = record.tuple.k();
    if k % 2 == 1 {
        return Err(Error::OddK(k));
    }
    if !record.tuple.distinct {
        return Err(Error::NotDistinct);
    }
    Ok(wan_holds(record.value, k, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { n: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CkEstimate {
    pub k: usize,
    pub p: u32,
    /// Largest `S_k` seen.
    pub max_value: i64,
    /// `max_value / sqrt(p)`; equals `c_k(p)` in exhaustive mode.
    pub ck: f64,
    /// Smallest tuple (lexicographically) attaining the maximum.
    pub argmax: Vec<u32>,
    pub tuples_evaluated: u128,
    pub exhaustive: bool,
}

pub(crate) fn binomial(n: u128, k: usize) -> u128 {
    if k as u128 > n {
        return 0;
    }
    let mut r = 1u128;
    for i in 0..k as u128 {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Visits every `(0, a_2, ..., a_k)` with `0 < a_2 < ... < a_k < p`, passing
/// the tuple and its exact sum. Work is split on `a_2`; `init`/`fold`/`merge`
/// must form an order-independent reduction.
pub(crate) fn fold_anchored_tuples<T, I, F, M>(
    table: &LegendreTable,
    k: usize,
    init: I,
    fold: F,
    merge: M,
) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &[u32], i64) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let p = table.modulus().get();
    let chi = table.as_slice();
    let n = chi.len();
    let base: Vec<i8> = chi.to_vec();
    (1..p)
        .into_par_iter()
        .fold(&init, |mut acc, a2| {
            let mut tuple = vec![0u32; k];
            tuple[1] = a2;
            let mut layers: Vec<Vec<i8>> = vec![base.clone(); k];
            // layer[d] = prod_{i<=d} chi(x + a_i)
            for x in 0..n {
                let y = (x + a2 as usize) % n;
                layers[1][x] = base[x] * chi[y];
            }
            if k == 2 {
                let s: i64 = layers[1].iter().map(|&v| v as i64).sum();
                fold(&mut acc, &tuple, s);
                return acc;
            }
            descend(
                chi,
                k,
                2,
                a2 + 1,
                p,
                &mut tuple,
                &mut layers,
                &fold,
                &mut acc,
            );
            acc
        })
        .reduce(&init, &merge)
}

#[allow(clippy::too_many_arguments)]
fn descend<T, F>(
    chi: &[i8],
    k: usize,
    depth: usize,
    start: u32,
    p: u32,
    tuple: &mut [u32],
    layers: &mut [Vec<i8>],
    fold: &F,
    acc: &mut T,
) where
    F: Fn(&mut T, &[u32], i64),
{
    let n = chi.len();
    let remaining = (k - depth - 1) as u32;
    for a in start..p - remaining {
        tuple[depth] = a;
        let (lo, hi) = layers.split_at_mut(depth);
        let prev = &lo[depth - 1];
        let shift = a as usize;
        // chi(x + a) for x = 0..n is chi rotated left by `shift`
        let (head, tail) = (&chi[shift..], &chi[..shift]);
        let (p_head, p_tail) = prev.split_at(n - shift);
        if depth + 1 == k {
            let dot = |u: &[i8], v: &[i8]| -> i64 {
                u.iter().zip(v).map(|(&x, &y)| (x * y) as i64).sum()
            };
            fold(acc, tuple, dot(p_head, head) + dot(p_tail, tail));
        } else {
            let (c_head, c_tail) = hi[0].split_at_mut(n - shift);
            for ((c, &x), &y) in c_head.iter_mut().zip(p_head).zip(head) {
                *c = x * y;
            }
            for ((c, &x), &y) in c_tail.iter_mut().zip(p_tail).zip(tail) {
                *c = x * y;
            }
            descend(chi, k, depth + 1, a + 1, p, tuple, layers, fold, acc);
        }
    }
}

/// Draws a uniform ordered tuple with pairwise distinct coordinates.
pub(crate) fn sample_distinct(rng: &mut ChaCha8Rng, p: u32, k: usize, out: &mut Vec<u32>) {
    out.clear();
    while out.len() < k {
        let c = rng.gen_range(0..p);
        if !out.contains(&c) {
            out.push(c);
        }
    }
}

pub(crate) const SAMPLE_BLOCK: u64 = 4096;

pub(crate) fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Calls `fold` on `n` sampled tuples. Samples are grouped in fixed blocks with
/// their own RNG stream, so the multiset of tuples is independent of threads.
pub(crate) fn fold_sampled_tuples<T, I, F, M>(
    table: &LegendreTable,
    k: usize,
    n: u64,
    seed: u64,
    init: I,
    fold: F,
    merge: M,
) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &[u32], i64) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let p = table.modulus().get();
    let blocks = n.div_ceil(SAMPLE_BLOCK);
    (0..blocks)
        .into_par_iter()
        .fold(&init, |mut acc, b| {
            let mut rng = block_rng(seed, b);
            let count = SAMPLE_BLOCK.min(n - b * SAMPLE_BLOCK);
            let mut t = Vec::with_capacity(k);
            for _ in 0..count {
                sample_distinct(&mut rng, p, k, &mut t);
                let s = raw_char_sum(table, &t);
                fold(&mut acc, &t, s);
            }
            acc
        })
        .reduce(&init, &merge)
}

fn check_k(k: usize, p: Prime) -> Result<()> {
    if k < 2 || k > p.as_usize() {
        return Err(Error::InvalidK(k));
    }
    Ok(())
}

/// Number of tuples an anchored exhaustive pass evaluates.
pub fn anchored_tuple_count(k: usize, p: Prime) -> u128 {
    binomial(p.get() as u128 - 1, k - 1)
}

/// Largest normalized sum `S_k / sqrt(p)` over distinct tuples.
///
/// Exhaustive mode fixes `a_1 = 0` and sorts the rest (the sum is invariant
/// under translation and permutation), so it evaluates `C(p-1, k-1)` tuples.
pub fn ck_empirical(
    k: usize,
    table: &LegendreTable,
    mode: Mode,
    budget: u128,
) -> Result<CkEstimate> {
    let p = table.modulus();
    check_k(k, p)?;
    type Best = Option<(i64, Vec<u32>)>;
    let better = |a: Best, b: Best| -> Best {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                y
            } else {
                x
            }),
        }
    };
    let fold = |acc: &mut Best, t: &[u32], s: i64| {
        let replace = match acc {
            None => true,
            Some((v, arg)) => s > *v || (s == *v && t < arg.as_slice()),
        };
        if replace {
            *acc = Some((s, t.to_vec()));
        }
    };
    let (best, evaluated, exhaustive) = match mode {
        Mode::Exhaustive => {
            let required = anchored_tuple_count(k, p);
            if required > budget {
                return Err(Error::BudgetExceeded { required, budget });
            }
            let best = fold_anchored_tuples(table, k, || None, fold, better);
            (best, required, true)
        }
        Mode::Sampled { n, seed } => {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "sample count must be positive".into(),
                ));
            }
            let best = fold_sampled_tuples(table, k, n, seed, || None, fold, better);
            (best, n as u128, false)
        }
    };
    let (max_value, argmax) = best.expect("at least one tuple");
    Ok(CkEstimate {
        k,
        p: p.get(),
        max_value,
        ck: max_value as f64 / p.sqrt(),
        argmax,
        tuples_evaluated: evaluated,
        exhaustive,
    })
}
