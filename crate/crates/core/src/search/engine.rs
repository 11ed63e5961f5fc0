//! Depth-first branch and bound over `A`, with `B` confined to the pool
//! `C(A) = intersection over a in A of (T - a)`.
//!
//! A node is one visited partial `A` or one step of the `B` enumeration at a
//! leaf. Children of a node are pruned before they are visited, so the set of
//! visited nodes only shrinks as more size rules are switched on.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::bitset::BitSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Prune {
    CandidateSetTooSmall = 0,
    CoverageImpossible = 1,
    SizeCap = 2,
    ProductCap = 3,
}

pub(crate) const PRUNE_NAMES: [&str; 4] = [
    "candidate-set-too-small",
    "coverage-impossible",
    "size-cap",
    "product-cap",
];

#[derive(Clone, Debug, Default)]
pub(crate) struct Stats {
    pub nodes: u64,
    pub prunes: [u64; 4],
    pub found: Vec<(Vec<u32>, Vec<u32>)>,
    pending: u64,
}

impl Stats {
    fn merge(mut self, other: Stats) -> Stats {
        self.nodes += other.nodes;
        for (a, b) in self.prunes.iter_mut().zip(other.prunes) {
            *a += b;
        }
        self.found.extend(other.found);
        self
    }

    #[inline]
    fn prune(&mut self, why: Prune) {
        self.prunes[why as usize] += 1;
    }
}

type Frontier = Vec<(Vec<u32>, BitSet)>;

pub(crate) struct Budget {
    limit: u64,
    used: AtomicU64,
    hit: AtomicBool,
}

const FLUSH_EVERY: u64 = 1024;

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
            hit: AtomicBool::new(false),
        }
    }

    /// Counts one node; returns false once the global limit is exceeded.
    #[inline]
    fn tick(&self, stats: &mut Stats) -> bool {
        stats.nodes += 1;
        stats.pending += 1;
        if stats.pending >= FLUSH_EVERY {
            self.flush(stats);
        }
        !self.hit.load(Ordering::Relaxed)
    }

    fn flush(&self, stats: &mut Stats) {
        let used = self.used.fetch_add(stats.pending, Ordering::Relaxed) + stats.pending;
        stats.pending = 0;
        if used > self.limit {
            self.hit.store(true, Ordering::Relaxed);
        }
    }

    pub fn exceeded(&self) -> bool {
        self.hit.load(Ordering::Relaxed)
    }
}

/// Allowed `|B|` for each `|A|`, plus the derived pruning thresholds.
#[derive(Clone, Debug)]
pub(crate) struct SizeTable {
    /// Smallest `|A|` at which a leaf is examined.
    pub a_lo: u32,
    /// `|A|` is never extended past this.
    pub a_hi: u32,
    /// Pool floor below which no `B` can fit.
    pub b_lo: u32,
    /// `windows[s] = Some((t_lo, t_hi))` if `|A| = s` admits `|B| in [t_lo, t_hi]`.
    pub windows: Vec<Option<(u32, u32)>>,
    /// `min_tlo_from[s]` = smallest `t_lo` over admissible `s' >= s`.
    pub min_tlo_from: Vec<u32>,
    /// Largest `s` with a nonempty window.
    pub s_max: u32,
}

impl SizeTable {
    pub fn new(
        a_lo: u32,
        a_hi: u32,
        b_lo: u32,
        b_hi: u32,
        allowed: impl Fn(u32, u32) -> bool,
    ) -> Self {
        let mut windows = vec![None; a_hi as usize + 2];
        for s in a_lo..=a_hi {
            let ts: Vec<u32> = (b_lo..=b_hi).filter(|&t| allowed(s, t)).collect();
            if let (Some(&lo), Some(&hi)) = (ts.first(), ts.last()) {
                windows[s as usize] = Some((lo, hi));
            }
        }
        let mut min_tlo_from = vec![u32::MAX; a_hi as usize + 2];
        for s in (0..=a_hi as usize).rev() {
            let here = windows[s].map_or(u32::MAX, |w| w.0);
            min_tlo_from[s] = here.min(min_tlo_from[s + 1]);
        }
        let s_max = (a_lo..=a_hi)
            .rev()
            .find(|&s| windows[s as usize].is_some())
            .unwrap_or(0);
        Self {
            a_lo,
            a_hi,
            b_lo,
            windows,
            min_tlo_from,
            s_max,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.windows.iter().all(Option::is_none)
    }
}

pub(crate) struct PairEngine<'a> {
    pub p: u32,
    pub target: &'a BitSet,
    pub target_len: u32,
    /// `shifted[x] = {b : x + b in T}`
    pub shifted: Vec<BitSet>,
    pub sizes: SizeTable,
    /// Elements allowed after the second one, when the dilation reduction
    /// restricts the non-residue branch.
    pub restrict_after_second: Option<(u32, BitSet)>,
}

impl<'a> PairEngine<'a> {
    pub fn new(p: u32, target: &'a BitSet, sizes: SizeTable) -> Self {
        let shifted = (0..p as usize)
            .map(|x| target.rotated((p as usize - x) % p as usize))
            .collect();
        Self {
            p,
            target,
            target_len: target.count() as u32,
            shifted,
            sizes,
            restrict_after_second: None,
        }
    }

    /// Runs the search over every `A` containing 0, restricted to the given
    /// second elements (all of `1..p` when `None`).
    pub fn run(&self, second: Option<&[u32]>, budget: &Budget) -> Stats {
        let mut stats = Stats::default();
        let mut tasks = Vec::new();
        let root = self.shifted[0].clone();
        let mut a = vec![0u32];
        self.visit(
            &mut a,
            &root,
            budget,
            &mut stats,
            Some((2, &mut tasks)),
            second,
        );
        let merged = tasks
            .into_par_iter()
            .map(|(mut a, pool)| {
                let mut s = Stats::default();
                self.visit(&mut a, &pool, budget, &mut s, None, None);
                budget.flush(&mut s);
                s
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Stats::default(), Stats::merge);
        budget.flush(&mut stats);
        stats.merge(merged)
    }

    /// Child `A + {x}` with pool `c` survives every rule?
    fn admit_child(&self, s: u32, c: u32, stats: &mut Stats) -> bool {
        let t = &self.sizes;
        if c < t.b_lo {
            stats.prune(Prune::CandidateSetTooSmall);
            return false;
        }
        if (t.s_max as u64) * (c as u64) < self.target_len as u64 {
            stats.prune(Prune::CoverageImpossible);
            return false;
        }
        if t.min_tlo_from.get(s as usize).is_none_or(|&lo| lo > c) {
            stats.prune(Prune::ProductCap);
            return false;
        }
        true
    }

    fn visit(
        &self,
        a: &mut Vec<u32>,
        pool: &BitSet,
        budget: &Budget,
        stats: &mut Stats,
        mut split: Option<(usize, &mut Frontier)>,
        second: Option<&[u32]>,
    ) {
        if !budget.tick(stats) {
            return;
        }
        let s = a.len() as u32;
        if s >= self.sizes.a_lo {
            self.leaf(a, pool, budget, stats);
        }
        if s >= self.sizes.a_hi {
            stats.prune(Prune::SizeCap);
            return;
        }
        let last = *a.last().unwrap();
        let candidates: Vec<u32> = match second {
            Some(list) if a.len() == 1 => list.to_vec(),
            _ => {
                let mut v: Vec<u32> = (last + 1..self.p).collect();
                if let Some((second, allowed)) = &self.restrict_after_second {
                    if a.len() >= 2 && a[1] == *second {
                        v.retain(|&x| allowed.contains(x as usize));
                    }
                }
                v
            }
        };
        for x in candidates {
            if budget.exceeded() {
                return;
            }
            let mut child = pool.clone();
            child.intersect_with(&self.shifted[x as usize]);
            let c = child.count() as u32;
            if !self.admit_child(s + 1, c, stats) {
                continue;
            }
            a.push(x);
            match split.as_mut() {
                Some((depth, tasks)) if a.len() >= *depth => tasks.push((a.clone(), child)),
                Some((depth, tasks)) => {
                    let d = *depth;
                    self.visit(a, &child, budget, stats, Some((d, tasks)), None)
                }
                None => self.visit(a, &child, budget, stats, None, None),
            }
            a.pop();
        }
    }

    /// Enumerates every `B` in the pool with `A + B = T` and admissible size.
    fn leaf(&self, a: &[u32], pool: &BitSet, budget: &Budget, stats: &mut Stats) {
        let s = a.len();
        let Some((t_lo, t_hi)) = self.sizes.windows.get(s).copied().flatten() else {
            return;
        };
        let elems: Vec<u32> = pool.iter().map(|x| x as u32).collect();
        if (elems.len() as u32) < t_lo {
            return;
        }
        if !budget.tick(stats) {
            return;
        }
        let p = self.p as usize;
        let mut cover = vec![0u32; p];
        for &x in a {
            for &y in &elems {
                cover[(x as usize + y as usize) % p] += 1;
            }
        }
        if self.target.iter().any(|t| cover[t] == 0) {
            return;
        }
        let mut chosen = Vec::with_capacity(elems.len());
        let mut en = BEnum {
            p,
            a,
            elems: &elems,
            t_lo,
            t_hi,
            cover,
            chosen: &mut chosen,
            budget,
        };
        en.go(0, stats);
    }
}

struct BEnum<'e> {
    p: usize,
    a: &'e [u32],
    elems: &'e [u32],
    t_lo: u32,
    t_hi: u32,
    /// Representation counts of `A + (chosen + undecided)`.
    cover: Vec<u32>,
    chosen: &'e mut Vec<u32>,
    budget: &'e Budget,
}

impl BEnum<'_> {
    fn go(&mut self, i: usize, stats: &mut Stats) {
        if !self.budget.tick(stats) {
            return;
        }
        let k = self.chosen.len() as u32;
        if k > self.t_hi || k + (self.elems.len() - i) as u32 <= self.t_lo.saturating_sub(1) {
            return;
        }
        if i == self.elems.len() {
            stats.found.push((self.a.to_vec(), self.chosen.clone()));
            return;
        }
        let y = self.elems[i] as usize;
        self.chosen.push(y as u32);
        self.go(i + 1, stats);
        self.chosen.pop();
        // drop y: every a + y must stay covered by something else
        let mut ok = true;
        for &x in self.a {
            let t = (x as usize + y) % self.p;
            self.cover[t] -= 1;
            ok &= self.cover[t] > 0;
        }
        if ok {
            self.go(i + 1, stats);
        }
        for &x in self.a {
            self.cover[(x as usize + y) % self.p] += 1;
        }
    }
}

/// Sets `A` with `A + A = T`, grown in increasing order.
pub(crate) struct SymmetricEngine<'a> {
    pub p: u32,
    pub target: &'a BitSet,
    pub target_len: u32,
    pub shifted: Vec<BitSet>,
    pub min_size: u32,
    pub max_size: u32,
}

impl<'a> SymmetricEngine<'a> {
    pub fn new(p: u32, target: &'a BitSet, min_size: u32, max_size: u32) -> Self {
        let shifted = (0..p as usize)
            .map(|x| target.rotated((p as usize - x) % p as usize))
            .collect();
        Self {
            p,
            target,
            target_len: target.count() as u32,
            shifted,
            min_size,
            max_size,
        }
    }

    pub fn run(&self, budget: &Budget) -> Stats {
        // x may join A only if 2x is in T
        let p = self.p as usize;
        let roots: Vec<u32> = (0..self.p)
            .filter(|&x| self.target.contains(2 * x as usize % p))
            .collect();
        let pool0 = BitSet::from_indices(p, roots.iter().map(|&x| x as usize));
        let mut stats = Stats::default();
        if !budget.tick(&mut stats) {
            return stats;
        }
        let per_root = roots
            .par_iter()
            .map(|&x| {
                let mut s = Stats::default();
                let mut pool = pool0.clone();
                pool.intersect_with(&self.shifted[x as usize]);
                pool.clear_below(x as usize + 1);
                if self.admit(1, pool.count() as u32, &mut s) {
                    let mut a = vec![x];
                    self.visit(&mut a, &pool, budget, &mut s);
                }
                budget.flush(&mut s);
                s
            })
            .collect::<Vec<_>>();
        budget.flush(&mut stats);
        per_root.into_iter().fold(stats, Stats::merge)
    }

    fn admit(&self, s: u32, c: u32, stats: &mut Stats) -> bool {
        let m = (s + c).min(self.max_size) as u64;
        if m < self.min_size as u64 {
            stats.prune(Prune::CandidateSetTooSmall);
            return false;
        }
        if m * (m + 1) / 2 < self.target_len as u64 {
            stats.prune(Prune::CoverageImpossible);
            return false;
        }
        true
    }

    fn visit(&self, a: &mut Vec<u32>, pool: &BitSet, budget: &Budget, stats: &mut Stats) {
        if !budget.tick(stats) {
            return;
        }
        let s = a.len() as u32;
        if s >= self.min_size {
            let p = self.p as usize;
            let mut sum = BitSet::new(p);
            for (i, &x) in a.iter().enumerate() {
                for &y in &a[i..] {
                    sum.insert((x + y) as usize % p);
                }
            }
            if &sum == self.target {
                stats.found.push((a.clone(), a.clone()));
            }
        }
        if s >= self.max_size {
            stats.prune(Prune::SizeCap);
            return;
        }
        for x in pool.iter() {
            if budget.exceeded() {
                return;
            }
            let mut child = pool.clone();
            child.intersect_with(&self.shifted[x]);
            child.clear_below(x + 1);
            if !self.admit(s + 1, child.count() as u32, stats) {
                continue;
            }
            a.push(x as u32);
            self.visit(a, &child, budget, stats);
            a.pop();
        }
    }
}
