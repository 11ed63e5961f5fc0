//! Distribution of the shifted normalized sums `(S_k + 1) / sqrt(p)`, both
//! as the tuple varies at fixed `p` and as `p` varies at a fixed tuple.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use super::{anchored_tuple_count, fold_anchored_tuples, fold_sampled_tuples, raw_char_sum, Mode};
use crate::error::{Error, Result};
use crate::field::{is_prime, reduce, LegendreTable, Prime};

/// `sqrt(4 - t^2) / (2 pi)` on `[-2, 2]`, zero outside.
pub fn semicircle_density(t: f64) -> f64 {
    if t.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - t * t).sqrt() / (2.0 * PI)
    }
}

pub fn semicircle_cdf(t: f64) -> f64 {
    if t <= -2.0 {
        0.0
    } else if t >= 2.0 {
        1.0
    } else {
        0.5 + (t * (4.0 - t * t).sqrt()) / (4.0 * PI) + (t / 2.0).asin() / PI
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
    pub statistic_mean: f64,
    pub statistic_variance: f64,
    /// Semicircle density at the bin centers (k = 4 only).
    pub reference_density: Option<Vec<f64>>,
    /// Every sample is `numerator / scale`; this is the exact multiset of
    /// numerators.
    #[serde(skip)]
    pub value_counts: BTreeMap<i64, u64>,
    #[serde(skip)]
    pub scale: f64,
}

impl Histogram {
    /// Bins the population `{n / scale : n with multiplicity c}` into
    /// `bins` equal cells on `[lo, hi]`; values outside land in the end
    /// cells. Moments come from the exact numerators, not from bin centers.
    pub fn from_values(
        value_counts: BTreeMap<i64, u64>,
        scale: f64,
        lo: f64,
        hi: f64,
        bins: usize,
    ) -> Result<Self> {
        if bins < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 bins, got {bins}"
            )));
        }
        let width = (hi - lo) / bins as f64;
        let bin_edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0u64; bins];
        let (mut total, mut s1, mut s2) = (0u64, 0i128, 0i128);
        for (&n, &c) in &value_counts {
            let v = n as f64 / scale;
            let idx = (((v - lo) / width).floor().max(0.0) as usize).min(bins - 1);
            counts[idx] += c;
            total += c;
            s1 += n as i128 * c as i128;
            s2 += (n as i128) * (n as i128) * c as i128;
        }
        let (mean, var) = if total == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let t = total as i128;
            // var = (t*s2 - s1^2) / (t^2 scale^2), numerator exact
            let num = t * s2 - s1 * s1;
            (
                s1 as f64 / (total as f64 * scale),
                num as f64 / ((total as f64) * (total as f64) * scale * scale),
            )
        };
        Ok(Self {
            bin_edges,
            counts,
            total,
            statistic_mean: mean,
            statistic_variance: var,
            reference_density: None,
            value_counts,
            scale,
        })
    }

    pub fn with_semicircle(mut self) -> Self {
        let dens = self
            .bin_edges
            .windows(2)
            .map(|w| semicircle_density(0.5 * (w[0] + w[1])))
            .collect();
        self.reference_density = Some(dens);
        self
    }

    pub fn sample_min(&self) -> Option<f64> {
        self.value_counts
            .keys()
            .next()
            .map(|&n| n as f64 / self.scale)
    }

    pub fn sample_max(&self) -> Option<f64> {
        self.value_counts
            .keys()
            .next_back()
            .map(|&n| n as f64 / self.scale)
    }

    /// `sup_t |F_emp(t) - F_ref(t)|` for a continuous reference CDF.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let total = self.total as f64;
        let mut below = 0u64;
        let mut worst = 0f64;
        for (&n, &c) in &self.value_counts {
            let t = n as f64 / self.scale;
            let f = cdf(t);
            worst = worst.max((below as f64 / total - f).abs());
            below += c;
            worst = worst.max((below as f64 / total - f).abs());
        }
        worst
    }

    /// CSV with columns `bin_left,bin_right,count,reference_density`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin_left", "bin_right", "count", "reference_density"])?;
        for (i, c) in self.counts.iter().enumerate() {
            let dens = self
                .reference_density
                .as_ref()
                .map(|d| d[i].to_string())
                .unwrap_or_default();
            w.write_record([
                self.bin_edges[i].to_string(),
                self.bin_edges[i + 1].to_string(),
                c.to_string(),
                dens,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn merge_counts(mut a: BTreeMap<i64, u64>, b: BTreeMap<i64, u64>) -> BTreeMap<i64, u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Histogram of `(S_k(a; p) + 1) / sqrt(p)` over pairwise-distinct tuples.
///
/// Exhaustive mode covers every ordered tuple with `a_1 = 0`: the anchored
/// sorted tuples each stand for `(k-1)!` orderings. Bins span `[2-k, k-2]`.
pub fn vertical_histogram(
    k: usize,
    table: &LegendreTable,
    bins: usize,
    mode: Mode,
    budget: u128,
) -> Result<Histogram> {
    let p = table.modulus();
    if k % 2 == 1 {
        return Err(Error::OddK(k));
    }
    if k < 4 || k > p.as_usize() {
        return Err(Error::InvalidK(k));
    }
    let add = |acc: &mut BTreeMap<i64, u64>, _t: &[u32], s: i64| {
        *acc.entry(s + 1).or_default() += 1;
    };
    let counts = match mode {
        Mode::Exhaustive => {
            let required = anchored_tuple_count(k, p);
            if required > budget {
                return Err(Error::BudgetExceeded { required, budget });
            }
            let weight: u64 = (1..k as u64).product();
            let mut c = fold_anchored_tuples(table, k, BTreeMap::new, add, merge_counts);
            c.values_mut().for_each(|v| *v *= weight);
            c
        }
        Mode::Sampled { n, seed } => {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "sample count must be positive".into(),
                ));
            }
            fold_sampled_tuples(table, k, n, seed, BTreeMap::new, add, merge_counts)
        }
    };
    let half = (k - 2) as f64;
    let h = Histogram::from_values(counts, p.sqrt(), -half, half, bins)?;
    Ok(if k == 4 { h.with_semicircle() } else { h })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub p: u32,
    pub sum: i64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub tuple: Vec<i64>,
    pub points: Vec<SweepPoint>,
    /// Primes where two coordinates coincide mod p.
    pub skipped: Vec<u32>,
    pub histogram: Histogram,
}

/// Fixed integer tuple, varying prime: `(S_k(a mod p; p) + 1) / sqrt(p)` for
/// every odd prime in `lo..=hi`.
pub fn horizontal_sweep(a: &[i64], lo: u64, hi: u64, bins: usize) -> Result<SweepReport> {
    let k = a.len();
    if k % 2 == 1 {
        return Err(Error::OddK(k));
    }
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    for (i, x) in a.iter().enumerate() {
        if a[..i].contains(x) {
            return Err(Error::NotDistinct);
        }
    }
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut samples = Vec::new();
    for n in lo.max(3)..=hi {
        if n % 2 == 0 || !is_prime(n) {
            continue;
        }
        let p = Prime::new(n)?;
        let coords: Vec<u32> = a.iter().map(|&x| reduce(x, p)).collect();
        let collide = coords
            .iter()
            .enumerate()
            .any(|(i, c)| coords[..i].contains(c));
        if collide {
            skipped.push(p.get());
            continue;
        }
        let s = raw_char_sum(&LegendreTable::new(p), &coords);
        let value = (s + 1) as f64 / p.sqrt();
        points.push(SweepPoint {
            p: p.get(),
            sum: s,
            value,
        });
        samples.push(value);
    }
    // Each prime has its own scale, so bin the floats directly; the exact
    // numerator map is only meaningful for a single p.
    let half = (k - 2) as f64;
    let width = 2.0 * half / bins.max(2) as f64;
    let mut hist = Histogram::from_values(BTreeMap::new(), 1.0, -half, half, bins)?;
    for v in &samples {
        let idx = (((v + half) / width).floor().max(0.0) as usize).min(bins - 1);
        hist.counts[idx] += 1;
    }
    hist.total = samples.len() as u64;
    if !samples.is_empty() {
        let m = samples.iter().sum::<f64>() / samples.len() as f64;
        hist.statistic_mean = m;
        hist.statistic_variance =
            samples.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / samples.len() as f64;
    }
    let hist = if k == 4 { hist.with_semicircle() } else { hist };
    Ok(SweepReport {
        tuple: a.to_vec(),
        points,
        skipped,
        histogram: hist,
    })
}
