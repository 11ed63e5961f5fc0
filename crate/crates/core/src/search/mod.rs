//! Exhaustive search for decompositions `A + B = T`, mainly `T = R_p`.
//!
//! The search fixes `0 in A` (every decomposition is a translate
//! `(A + t, B - t)` of one with `0 in A`), grows `A` in increasing order and
//! keeps the pool `C(A)` of elements still allowed in `B` as a bitset.
//! Found pairs are expanded back to every raw pair and re-verified through
//! [`build_profile`](crate::sumset::build_profile) before they are reported.
//!
//! Node accounting: one node per visited partial `A`, plus one per leaf
//! coverage test and one per step of the `B` enumeration at that leaf.

mod engine;
mod range;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::bounds::{admissible_pair, size_range, size_window, SizeRules};
use crate::error::{Error, Result};
use crate::field::{mul_mod, residue_set, FpSet, LegendreTable, Prime};
use crate::parallel::with_workers;
use crate::sumset::build_profile;

use engine::{Budget, PairEngine, SizeTable, Stats, SymmetricEngine, PRUNE_NAMES};

pub use range::{verify_conjecture_range, write_range_csv, RangeRow, Verdict};

pub const DEFAULT_NODE_LIMIT: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub modulus: Prime,
    pub min_size_a: u32,
    pub min_size_b: u32,
    pub use_theorem1_pruning: bool,
    pub use_lemma5_pruning: bool,
    pub symmetric_only: bool,
    /// Restrict to `A` containing `0` and either `1` or the least
    /// non-residue `n` (then `A \ {0}` is all non-residues). Any other
    /// decomposition is a residue dilate of one of these.
    pub use_multiplicative_symmetry: bool,
    pub node_limit: u64,
    /// 0 = all cores. Not serialized: reports must not depend on it.
    #[serde(skip)]
    pub worker_count: usize,
}

impl SearchConfig {
    /// Minimum sizes `(2, 2)`, every pruning rule on.
    pub fn new(modulus: Prime) -> Self {
        Self {
            modulus,
            min_size_a: 2,
            min_size_b: 2,
            use_theorem1_pruning: true,
            use_lemma5_pruning: true,
            symmetric_only: false,
            use_multiplicative_symmetry: false,
            node_limit: DEFAULT_NODE_LIMIT,
            worker_count: 0,
        }
    }

    pub fn with_min_sizes(mut self, a: u32, b: u32) -> Self {
        self.min_size_a = a;
        self.min_size_b = b;
        self
    }

    pub fn with_pruning(mut self, theorem1: bool, lemma5: bool) -> Self {
        self.use_theorem1_pruning = theorem1;
        self.use_lemma5_pruning = lemma5;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.worker_count = workers;
        self
    }

    /// Size rules in force. They only speak about `|A|, |B| >= 2`, so they
    /// are dropped when singletons are allowed.
    pub fn rules(&self) -> SizeRules {
        if self.min_size_a < 2 || self.min_size_b < 2 {
            return SizeRules::NONE;
        }
        SizeRules {
            theorem1: self.use_theorem1_pruning,
            lemma5: self.use_lemma5_pruning,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.node_limit == 0 {
            return Err(Error::InvalidArgument("node_limit must be positive".into()));
        }
        if self.min_size_a == 0 || self.min_size_b == 0 {
            return Err(Error::InvalidArgument(
                "minimum sizes must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Decomposition {
    #[serde(rename = "A")]
    pub a: Vec<u32>,
    #[serde(rename = "B")]
    pub b: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    /// Sorted, duplicate free, each re-verified.
    pub decompositions_found: Vec<Decomposition>,
    pub nodes_explored: u64,
    pub prune_counts: BTreeMap<String, u64>,
    /// False iff the node limit was hit.
    pub exhaustive: bool,
    /// The size constraints alone leave nothing to search.
    pub certified_by_size_range: bool,
    #[serde(skip)]
    pub seconds: f64,
}

impl SearchReport {
    pub fn found(&self) -> bool {
        !self.decompositions_found.is_empty()
    }
}

/// Searches for `A + B = R_p` under `config`.
///
/// Hitting the node limit is not an error: the report comes back with
/// `exhaustive = false`.
pub fn search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let start = Instant::now();
    let p = config.modulus;
    let target = residue_set(p);
    if config.symmetric_only {
        let rules = config.rules();
        let lo = config.min_size_a.max(config.min_size_b);
        let (lo, hi) = size_window(p, rules, lo);
        let feasible = (lo..=hi).any(|s| admissible_pair(p, rules, s, s));
        return Ok(run_symmetric(config, &target, lo, hi, feasible, start));
    }
    let rules = config.rules();
    let range = size_range(p, rules, config.min_size_a, config.min_size_b);
    let (b_lo, b_hi) = size_window(p, rules, config.min_size_b);
    let sizes = SizeTable::new(range.lower_a, range.upper_a, b_lo, b_hi, |s, t| {
        admissible_pair(p, rules, s, t)
    });
    let mut engine = PairEngine::new(p.get(), target.bits(), sizes);
    let mut second = None;
    let mut dilations = vec![1u32];
    if config.use_multiplicative_symmetry {
        let table = LegendreTable::new(p);
        let n = table.least_nonresidue();
        let nonres = BitSet::from_indices(
            p.as_usize(),
            (1..p.get())
                .filter(|&x| table.get(x) < 0)
                .map(|x| x as usize),
        );
        engine.restrict_after_second = Some((n, nonres));
        second = Some(vec![1, n]);
        dilations = target.to_vec();
    }
    Ok(run_pairs(
        config,
        &engine,
        second.as_deref(),
        &dilations,
        &target,
        start,
    ))
}

/// Searches for `A + B = target` with no size rules beyond the minimum
/// sizes and `|A||B| >= |target|`.
pub fn search_target(
    target: &FpSet,
    min_size_a: u32,
    min_size_b: u32,
    node_limit: u64,
    workers: usize,
) -> Result<SearchReport> {
    let p = target.modulus();
    let config = SearchConfig {
        modulus: p,
        min_size_a,
        min_size_b,
        use_theorem1_pruning: false,
        use_lemma5_pruning: false,
        symmetric_only: false,
        use_multiplicative_symmetry: false,
        node_limit,
        worker_count: workers,
    };
    config.validate()?;
    if target.is_empty() {
        return Err(Error::EmptySet);
    }
    let start = Instant::now();
    let n = target.len() as u32;
    let sizes = SizeTable::new(min_size_a, n, min_size_b, n, |s, t| s * t >= n);
    let engine = PairEngine::new(p.get(), target.bits(), sizes);
    Ok(run_pairs(&config, &engine, None, &[1], target, start))
}

/// Searches for `A + A = R_p` with `|A| >= min_size`, no size rules.
pub fn search_symmetric(p: Prime, min_size: u32) -> Result<SearchReport> {
    let mut config = SearchConfig::new(p)
        .with_pruning(false, false)
        .with_min_sizes(min_size, min_size);
    config.symmetric_only = true;
    search(&config)
}

fn run_pairs(
    config: &SearchConfig,
    engine: &PairEngine<'_>,
    second: Option<&[u32]>,
    dilations: &[u32],
    target: &FpSet,
    start: Instant,
) -> SearchReport {
    let p = config.modulus;
    let budget = Budget::new(config.node_limit);
    let certified = engine.sizes.is_empty();
    let stats = if certified {
        Stats::default()
    } else {
        with_workers(config.worker_count, || engine.run(second, &budget))
    };
    let mut raw = BTreeSet::new();
    for (a, b) in &stats.found {
        for &u in dilations {
            for t in 0..p.get() {
                let image = |set: &[u32], shift: u32| -> Vec<u32> {
                    let mut v: Vec<u32> = set
                        .iter()
                        .map(|&x| (mul_mod(u, x, p.get()) + shift) % p.get())
                        .collect();
                    v.sort_unstable();
                    v
                };
                raw.insert(Decomposition {
                    a: image(a, t),
                    b: image(b, (p.get() - t) % p.get()),
                });
            }
        }
    }
    let found = reverify(raw, target, config.min_size_a, config.min_size_b);
    finish(config, stats, found, budget.exceeded(), certified, start)
}

fn run_symmetric(
    config: &SearchConfig,
    target: &FpSet,
    lo: u32,
    hi: u32,
    feasible: bool,
    start: Instant,
) -> SearchReport {
    let budget = Budget::new(config.node_limit);
    let stats = if feasible {
        let engine = SymmetricEngine::new(config.modulus.get(), target.bits(), lo, hi);
        with_workers(config.worker_count, || engine.run(&budget))
    } else {
        Stats::default()
    };
    let raw = stats
        .found
        .iter()
        .map(|(a, b)| Decomposition {
            a: a.clone(),
            b: b.clone(),
        })
        .collect();
    let found = reverify(raw, target, lo, lo);
    finish(config, stats, found, budget.exceeded(), !feasible, start)
}

/// Keeps the pairs whose sumset, recomputed from scratch, is exactly `target`.
fn reverify(
    raw: BTreeSet<Decomposition>,
    target: &FpSet,
    min_a: u32,
    min_b: u32,
) -> Vec<Decomposition> {
    let p = target.modulus();
    raw.into_iter()
        .filter(|d| {
            let a = FpSet::from_elems(p, d.a.iter().map(|&x| x as i64));
            let b = FpSet::from_elems(p, d.b.iter().map(|&x| x as i64));
            a.len() >= min_a as usize
                && b.len() >= min_b as usize
                && build_profile(&a, &b).is_ok_and(|prof| &prof.support == target)
        })
        .collect()
}

fn finish(
    config: &SearchConfig,
    stats: Stats,
    found: Vec<Decomposition>,
    limit_hit: bool,
    certified: bool,
    start: Instant,
) -> SearchReport {
    let prune_counts = PRUNE_NAMES
        .iter()
        .zip(stats.prunes)
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    SearchReport {
        config: config.clone(),
        decompositions_found: found,
        nodes_explored: stats.nodes,
        prune_counts,
        exhaustive: !limit_hit,
        certified_by_size_range: certified,
        seconds: start.elapsed().as_secs_f64(),
    }
}
