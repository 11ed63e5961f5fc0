//! Representation function of a sumset and its moments.
//!
//! For `A, B` in F_p, `r(x) = #{(a, b) : a + b = x}`. The moments
//! `M_theta = sum_{x in A+B} r(x)^theta` give `M_0 = |A+B|`, `M_1 = |A||B|`
//! and `M_2 = E(A, B)`; `unique_count` is the number of `x` with `r(x) = 1`.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FpSet, Prime};

/// Relative tolerance for floating-point inequality checks.
pub const REL_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn leq_rel(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + REL_TOL * lhs.abs().max(rhs.abs())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepProfile {
    pub modulus: Prime,
    pub a: FpSet,
    pub b: FpSet,
    pub support: FpSet,
    /// Dense `r(x)` for every `x in F_p`.
    pub rep_counts: Vec<u32>,
    pub m0: u64,
    pub m1: u64,
    pub energy: u64,
    pub unique_count: u64,
}

pub fn build_profile(a: &FpSet, b: &FpSet) -> Result<RepProfile> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.modulus().get(), b.modulus().get()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = a.modulus();
    let n = p.get();
    let mut rep = vec![0u32; n as usize];
    let bs: Vec<u32> = b.iter().collect();
    for x in a.iter() {
        for &y in &bs {
            let s = x + y;
            rep[(if s >= n { s - n } else { s }) as usize] += 1;
        }
    }
    let support = FpSet::from_elems(
        p,
        rep.iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(|(x, _)| x as i64),
    );
    let m1 = rep.iter().map(|&r| r as u64).sum();
    let energy = rep.iter().map(|&r| (r as u64) * (r as u64)).sum();
    let unique_count = rep.iter().filter(|&&r| r == 1).count() as u64;
    Ok(RepProfile {
        modulus: p,
        a: a.clone(),
        b: b.clone(),
        m0: support.len() as u64,
        support,
        rep_counts: rep,
        m1,
        energy,
        unique_count,
    })
}

impl RepProfile {
    /// `M_theta`; exact integers for theta in {0, 1, 2}.
    pub fn moment(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            return self.m0 as f64;
        }
        if theta == 1.0 {
            return self.m1 as f64;
        }
        if theta == 2.0 {
            return self.energy as f64;
        }
        self.rep_counts
            .iter()
            .filter(|&&r| r > 0)
            .map(|&r| (r as f64).powf(theta))
            .sum()
    }

    /// `0 <= unique <= M_0 <= M_1 <= E`, `M_1 = |A||B|`.
    pub fn chain_holds(&self) -> bool {
        self.unique_count <= self.m0
            && self.m0 <= self.m1
            && self.m1 <= self.energy
            && self.m1 == (self.a.len() * self.b.len()) as u64
    }

    pub fn tau(&self) -> f64 {
        self.unique_count as f64 / self.m0 as f64
    }

    pub fn dump(&self) -> ProfileDump {
        ProfileDump {
            p: self.modulus.get(),
            a: self.a.to_vec(),
            b: self.b.to_vec(),
            support: self.support.to_vec(),
            r_nonzero: self
                .rep_counts
                .iter()
                .enumerate()
                .filter(|(_, &r)| r > 0)
                .map(|(x, &r)| [x as u32, r])
                .collect(),
            m0: self.m0,
            m1: self.m1,
            energy: self.energy,
            unique: self.unique_count,
        }
    }
}

/// JSON shape of a profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileDump {
    pub p: u32,
    #[serde(rename = "A")]
    pub a: Vec<u32>,
    #[serde(rename = "B")]
    pub b: Vec<u32>,
    pub support: Vec<u32>,
    pub r_nonzero: Vec<[u32; 2]>,
    #[serde(rename = "M0")]
    pub m0: u64,
    #[serde(rename = "M1")]
    pub m1: u64,
    #[serde(rename = "E")]
    pub energy: u64,
    pub unique: u64,
}

fn positive_integer(theta: f64) -> Option<u32> {
    (theta > 0.0 && theta.fract() == 0.0 && theta <= 64.0).then_some(theta as u32)
}

/// Hölder: `M_0 <= M_1^(theta/(theta+1)) M_{-theta}^(1/(theta+1))`.
pub fn check_holder(profile: &RepProfile, theta: f64) -> bool {
    assert!(theta > 0.0, "theta must be positive");
    let lhs = profile.m0 as f64;
    let rhs = (profile.m1 as f64).powf(theta / (theta + 1.0))
        * profile.moment(-theta).powf(1.0 / (theta + 1.0));
    leq_rel(lhs, rhs)
}

/// `2^t |A+B|^(t+1) <= (|A||B|)^t (|A+B| + (2^t - 1) U)`.
pub fn check_kappa_one(profile: &RepProfile, theta: f64) -> bool {
    assert!(theta > 0.0, "theta must be positive");
    let (m0, m1, u) = (profile.m0, profile.m1, profile.unique_count);
    if let Some(n) = positive_integer(theta) {
        let exact = || -> Option<bool> {
            let two = 1u128.checked_shl(n)?;
            let lhs = two.checked_mul((m0 as u128).checked_pow(n + 1)?)?;
            let rhs = (m1 as u128)
                .checked_pow(n)?
                .checked_mul(m0 as u128 + (two - 1) * u as u128)?;
            Some(lhs <= rhs)
        };
        if let Some(v) = exact() {
            return v;
        }
    }
    let two = 2f64.powf(theta);
    let lhs = two * (m0 as f64).powf(theta + 1.0);
    let rhs = (m1 as f64).powf(theta) * (m0 as f64 + (two - 1.0) * u as f64);
    leq_rel(lhs, rhs)
}

/// `(M_1 - U)^2 <= (E - U)(M_0 - U)`, exact.
pub fn check_kappa_two(profile: &RepProfile) -> bool {
    let u = profile.unique_count as i128;
    let d = profile.m1 as i128 - u;
    d * d <= (profile.energy as i128 - u) * (profile.m0 as i128 - u)
}

/// With `tau = U / M_0`: `M_1 >= 2^(1 - tau) M_0`.
pub fn check_tau_bound(profile: &RepProfile) -> bool {
    let rhs = 2f64.powf(1.0 - profile.tau()) * profile.m0 as f64;
    leq_rel(rhs, profile.m1 as f64)
}

/// Uniform random pair with `|A|, |B|` uniform in `[2, min(p-1, 40)]`.
pub fn random_pair<R: Rng>(p: Prime, rng: &mut R) -> (FpSet, FpSet) {
    let n = p.as_usize();
    let hi = (n - 1).clamp(2, 40);
    let pick = |rng: &mut R| {
        let size = rng.gen_range(2..=hi).min(n);
        FpSet::from_elems(p, index::sample(rng, n, size).into_iter().map(|x| x as i64))
    };
    let a = pick(rng);
    let b = pick(rng);
    (a, b)
}

/// `count` pairs from [`random_pair`]; pair `i` depends only on `(seed, p, i)`.
pub fn random_pair_panel(p: Prime, count: usize, seed: u64) -> Vec<(FpSet, FpSet)> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((p.get() as u64) << 32) | i as u64);
            random_pair(p, &mut rng)
        })
        .collect()
}
