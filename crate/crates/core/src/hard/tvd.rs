//! Exact total variation distance between `Mx` and its complement when `x`
//! is uniform over a set `A` of single-parity vectors.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, split_seed, SeededRng};

/// Largest `n` enumerated exactly.
pub const TVD_MAX_N: usize = 16;

fn check_n(n: usize) -> Result<()> {
    if n > TVD_MAX_N {
        return Err(Error::ResourceGuard { what: "TVD enumeration length", limit: TVD_MAX_N, actual: n });
    }
    if n < 2 || n % 2 == 1 {
        return Err(Error::Parameter("TVD experiment needs an even n >= 2".into()));
    }
    Ok(())
}

/// TVD between `z = Mx` and `z` with every bit flipped, for `x` uniform on
/// `set` (bitmasks over `n` coordinates) and `pairs` a perfect matching of `[n]`.
pub fn tvd_for_set(n: usize, set: &[u32], pairs: &[(u32, u32)]) -> Result<f64> {
    check_n(n)?;
    let mut seen = vec![false; n];
    for &(a, b) in pairs {
        for v in [a, b] {
            if v as usize >= n || seen[v as usize] {
                return Err(Error::Parameter("pairs must form a perfect matching of [n]".into()));
            }
            seen[v as usize] = true;
        }
    }
    if pairs.len() * 2 != n {
        return Err(Error::Parameter("pairs must form a perfect matching of [n]".into()));
    }
    if set.is_empty() {
        return Err(Error::Parameter("set must be nonempty".into()));
    }
    let half = n / 2;
    let mut counts = vec![0i64; 1 << half];
    for &x in set {
        let mut z = 0usize;
        for (i, &(a, b)) in pairs.iter().enumerate() {
            z |= ((((x >> a) ^ (x >> b)) & 1) as usize) << i;
        }
        counts[z] += 1;
    }
    let flip = (1usize << half) - 1;
    let diff: i64 = (0..counts.len()).map(|z| (counts[z] - counts[z ^ flip]).abs()).sum();
    Ok(diff as f64 / (2.0 * set.len() as f64))
}

/// The first `2^(n - c)` vectors of a shuffled parity class; the class is
/// picked by `seed`. Sets for the same seed are nested as `c` grows.
pub fn single_parity_set(n: usize, c: usize, seed: u64) -> Result<Vec<u32>> {
    check_n(n)?;
    if c == 0 || c > n {
        return Err(Error::Parameter("set-size exponent c must lie in [1, n]".into()));
    }
    let mut rng = rng_from_seed(seed);
    let parity = rng.gen_range(0..2u32);
    let mut class: Vec<u32> = (0..1u32 << n).filter(|x| x.count_ones() % 2 == parity).collect();
    class.shuffle(&mut rng);
    class.truncate(1 << (n - c));
    Ok(class)
}

fn random_pairing(n: usize, rng: &mut SeededRng) -> Vec<(u32, u32)> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(rng);
    perm.chunks(2).map(|p| (p[0], p[1])).collect()
}

/// Mean TVD over `trials` random perfect matchings for a random
/// single-parity set of size `2^(n - c)`.
pub fn tvd_experiment(n: usize, c: usize, trials: usize, seed: u64) -> Result<f64> {
    let set = single_parity_set(n, c, split_seed(seed, 0))?;
    if trials == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    let mut total = 0.0;
    for i in 0..trials {
        let pairs = random_pairing(n, &mut rng_from_seed(split_seed(seed, i as u64 + 1)));
        total += tvd_for_set(n, &set, &pairs)?;
    }
    Ok(total / trials as f64)
}
