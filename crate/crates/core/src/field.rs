//! Arithmetic in the prime field F_p, the quadratic character and the set
//! of quadratic residues.
//!
//! Moduli are capped below 2^31 so that every product of two residues fits
//! in a `u64` with room to spare.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1 << 31;

/// An odd prime `p < 2^31`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(n: u64) -> Result<Self> {
        if n == 2 {
            return Err(Error::EvenInput(n));
        }
        if !(3..MAX_MODULUS).contains(&n) {
            return Err(Error::ModulusOutOfRange(n));
        }
        if !is_prime(n) {
            return Err(Error::CompositeInput(n));
        }
        Ok(Prime(n as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub fn sqrt(self) -> f64 {
        (self.0 as f64).sqrt()
    }

    /// `(p - 1) / 2`, the number of nonzero quadratic residues.
    #[inline]
    pub fn half(self) -> u32 {
        (self.0 - 1) / 2
    }

    #[inline]
    pub fn elem(self, n: i64) -> FpElement {
        FpElement::new(n, self)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self> {
        Prime::new(n)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Checks `n` for primality and returns it as a [`Prime`].
pub fn validate_prime(n: u64) -> Result<Prime> {
    Prime::new(n)
}

/// Deterministic trial division; `n < 2^31` keeps this under ~23k divisions.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Odd primes in `lo..=hi`, by a sieve of Eratosthenes.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<Prime> {
    let hi = hi.min(MAX_MODULUS - 1);
    if hi < 3 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 3;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    (lo.max(3) as usize..=n)
        .filter(|&m| m % 2 == 1 && !composite[m])
        .map(|m| Prime(m as u32))
        .collect()
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow_mod(base: u32, mut exp: u64, p: u32) -> u32 {
    let m = p as u64;
    let mut b = base as u64 % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u32
}

/// Reduces an arbitrary integer into `[0, p)`.
#[inline]
pub fn reduce(n: i64, p: Prime) -> u32 {
    n.rem_euclid(p.0 as i64) as u32
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElement {
    residue: u32,
    modulus: Prime,
}

impl FpElement {
    pub fn new(n: i64, p: Prime) -> Self {
        Self {
            residue: reduce(n, p),
            modulus: p,
        }
    }

    #[inline]
    pub fn residue(self) -> u32 {
        self.residue
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn pow(self, exp: u64) -> Self {
        Self {
            residue: pow_mod(self.residue, exp, self.modulus.0),
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(self.modulus.0 as u64 - 2))
    }
}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus.0)
    }
}

impl Add for FpElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.0;
        let s = self.residue + rhs.residue;
        Self {
            residue: if s >= p { s - p } else { s },
            modulus: self.modulus,
        }
    }
}

impl Neg for FpElement {
    type Output = Self;
    fn neg(self) -> Self {
        let p = self.modulus.0;
        Self {
            residue: if self.residue == 0 {
                0
            } else {
                p - self.residue
            },
            modulus: self.modulus,
        }
    }
}

impl Sub for FpElement {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for FpElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            residue: mul_mod(self.residue, rhs.residue, self.modulus.0),
            modulus: self.modulus,
        }
    }
}

/// The Legendre symbol via Euler's criterion `x^((p-1)/2)`.
pub fn legendre(x: FpElement) -> i8 {
    if x.is_zero() {
        return 0;
    }
    let p = x.modulus.0;
    match pow_mod(x.residue, ((p - 1) / 2) as u64, p) {
        1 => 1,
        r => {
            debug_assert_eq!(r, p - 1);
            -1
        }
    }
}

/// Precomputed quadratic character for every residue class; the fast path
/// for anything that loops over F_p.
#[derive(Clone)]
pub struct LegendreTable {
    modulus: Prime,
    chi: Vec<i8>,
}

impl LegendreTable {
    pub fn new(p: Prime) -> Self {
        let n = p.as_usize();
        let mut chi = vec![-1i8; n];
        chi[0] = 0;
        for y in 1..=p.half() as u64 {
            chi[(y * y % n as u64) as usize] = 1;
        }
        Self { modulus: p, chi }
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    /// `chi(x)` for `x` already reduced into `[0, p)`.
    #[inline]
    pub fn get(&self, x: u32) -> i8 {
        self.chi[x as usize]
    }

    #[inline]
    pub fn as_slice(&self) -> &[i8] {
        &self.chi
    }

    /// Smallest quadratic non-residue.
    pub fn least_nonresidue(&self) -> u32 {
        self.chi.iter().position(|&c| c == -1).expect("p is odd") as u32
    }
}

/// A subset of F_p with cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpSet {
    modulus: Prime,
    bits: BitSet,
    cardinality: usize,
}

impl FpSet {
    pub fn empty(p: Prime) -> Self {
        Self {
            modulus: p,
            bits: BitSet::new(p.as_usize()),
            cardinality: 0,
        }
    }

    pub fn full(p: Prime) -> Self {
        Self::from_bits(p, BitSet::full(p.as_usize()))
    }

    /// Builds a set from arbitrary integers, reducing each mod p.
    pub fn from_elems<I: IntoIterator<Item = i64>>(p: Prime, elems: I) -> Self {
        let bits = BitSet::from_indices(
            p.as_usize(),
            elems.into_iter().map(|e| reduce(e, p) as usize),
        );
        Self::from_bits(p, bits)
    }

    pub fn from_bits(p: Prime, bits: BitSet) -> Self {
        assert_eq!(bits.len(), p.as_usize());
        let cardinality = bits.count();
        Self {
            modulus: p,
            bits,
            cardinality,
        }
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cardinality
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    #[inline]
    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().map(|i| i as u32)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// `{x + t : x in self}`.
    pub fn translate(&self, t: i64) -> FpSet {
        let k = reduce(t, self.modulus) as usize;
        Self::from_bits(self.modulus, self.bits.rotated(k))
    }

    /// `{t x : x in self}`.
    pub fn dilate(&self, t: u32) -> FpSet {
        let p = self.modulus;
        Self::from_elems(p, self.iter().map(|x| mul_mod(x, t, p.get()) as i64))
    }

    pub fn intersection(&self, other: &FpSet) -> FpSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Self::from_bits(self.modulus, bits)
    }

    pub fn is_subset(&self, other: &FpSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// The sumset `self + other`.
    pub fn sumset(&self, other: &FpSet) -> FpSet {
        let p = self.modulus.get();
        let mut bits = BitSet::new(p as usize);
        for a in self.iter() {
            for b in other.iter() {
                let s = a + b;
                bits.insert((if s >= p { s - p } else { s }) as usize);
            }
        }
        Self::from_bits(self.modulus, bits)
    }
}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.bits, self.modulus)
    }
}

impl Serialize for FpSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// `R_p`, the nonzero squares of F_p. Zero is not a residue.
pub fn residue_set(p: Prime) -> FpSet {
    let n = p.get() as u64;
    FpSet::from_elems(p, (1..=p.half() as u64).map(|y| (y * y % n) as i64))
}
