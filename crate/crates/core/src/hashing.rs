//! Polynomial k-wise independent hashing over a prime field.
//!
//! The default modulus is the Mersenne prime `2^61 - 1`. Sampling with
//! threshold `floor(p * P)` is biased by at most `1/P` against `p`, and
//! `h mod g` bucketing is non-uniform by at most `g/P`; both are ignored.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::space::SpaceAccounted;

pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[inline]
fn reduce_m61(x: u128) -> u64 {
    let lo = (x as u64) & MERSENNE_61;
    let hi = (x >> 61) as u64;
    let mut r = lo + (hi & MERSENNE_61) + (hi >> 61);
    while r >= MERSENNE_61 {
        r -= MERSENNE_61;
    }
    r
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    let prod = a as u128 * b as u128;
    if p == MERSENNE_61 {
        reduce_m61(prod)
    } else {
        (prod % p as u128) as u64
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (if s >= p as u128 { s - p as u128 } else { s }) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// `h(x) = a_0 + a_1 x + ... + a_{k-1} x^{k-1} mod P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyHash {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl PolyHash {
    /// Coefficients are reduced modulo `modulus`, which must be a prime.
    pub fn from_coefficients(coeffs: Vec<u64>, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Parameter("hash modulus must be at least 2".into()));
        }
        if coeffs.is_empty() {
            return Err(Error::Parameter("hash needs at least one coefficient".into()));
        }
        let coeffs = coeffs.into_iter().map(|c| c % modulus).collect();
        Ok(PolyHash { coeffs, modulus })
    }

    /// Uniform coefficients in `[0, modulus)` drawn from `rng`.
    pub fn draw_with<R: Rng + ?Sized>(k: usize, modulus: u64, rng: &mut R) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter("independence order must be at least 2".into()));
        }
        let coeffs = (0..k).map(|_| rng.gen_range(0..modulus)).collect();
        Self::from_coefficients(coeffs, modulus)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Independence order `k`.
    pub fn independence(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        let p = self.modulus;
        let x = x % p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = add_mod(mul_mod(acc, x, p), c, p);
        }
        acc
    }
}

impl SpaceAccounted for PolyHash {
    fn words_used(&self) -> u64 {
        self.coeffs.len() as u64 + 1
    }
}

/// A `k`-wise independent hash over `2^61 - 1`; the same seed gives the same hash.
pub fn draw_hash(k: usize, seed: u64) -> Result<PolyHash> {
    PolyHash::draw_with(k, MERSENNE_61, &mut rng_from_seed(seed))
}

/// Vertex sampling with probability `p`: `v` is kept iff `h(v) < floor(p * P)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    p: f64,
    seed: u64,
    threshold: u64,
}

impl SampleSpec {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter("sampling probability must lie in [0, 1]".into()));
        }
        let threshold = if p >= 1.0 { MERSENNE_61 } else { ((p * MERSENNE_61 as f64) as u64).min(MERSENNE_61) };
        Ok(SampleSpec { p, seed, threshold })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// Exact inclusion probability `T / P`.
    pub fn inclusion_probability(&self) -> f64 {
        self.threshold as f64 / MERSENNE_61 as f64
    }
}

/// Deterministic four-wise independent vertex filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePredicate {
    hash: PolyHash,
    threshold: u64,
}

impl SamplePredicate {
    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.hash.eval(v as u64) < self.threshold
    }

    /// Whether both endpoints are kept.
    #[inline]
    pub fn keeps_edge(&self, u: u32, v: u32) -> bool {
        self.contains(u) && self.contains(v)
    }
}

impl SpaceAccounted for SamplePredicate {
    fn words_used(&self) -> u64 {
        self.hash.words_used() + 1
    }
}

pub fn sample_predicate(spec: &SampleSpec) -> SamplePredicate {
    let hash = draw_hash(4, spec.seed).expect("k = 4 is valid");
    SamplePredicate { hash, threshold: spec.threshold }
}

/// Vertex to group map `v -> h(v) mod g`, four-wise independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAssignment {
    hash: PolyHash,
    groups: u32,
}

impl GroupAssignment {
    pub fn groups(&self) -> u32 {
        self.groups
    }

    #[inline]
    pub fn group_of(&self, v: u32) -> u32 {
        (self.hash.eval(v as u64) % self.groups as u64) as u32
    }
}

impl SpaceAccounted for GroupAssignment {
    fn words_used(&self) -> u64 {
        self.hash.words_used() + 1
    }
}

pub fn group_assign(g_count: u32, seed: u64) -> Result<GroupAssignment> {
    if g_count == 0 {
        return Err(Error::Parameter("group count must be positive".into()));
    }
    Ok(GroupAssignment { hash: draw_hash(4, seed)?, groups: g_count })
}
