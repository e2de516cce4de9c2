//! Randomized greedy search for small Ruzsa-Szemeredi graphs.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{ordered, Graph, Matching, Vertex};
use crate::rng::{rng_from_seed, split_seed, SeededRng};
use crate::rs::{validate_rs_graph, RsGraph};

/// Candidate matchings tried per slot before a restart.
const CANDIDATES_PER_SLOT: usize = 200;

/// Result of [`build_rs_graph`]; failing to find a graph is an outcome, not an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RsBuild {
    Built(RsGraph),
    /// No graph found; `best_t` is the most matchings any attempt reached.
    Failure {
        best_t: usize,
        attempts: usize,
    },
}

impl RsBuild {
    pub fn built(self) -> Option<RsGraph> {
        match self {
            RsBuild::Built(rs) => Some(rs),
            RsBuild::Failure { .. } => None,
        }
    }
}

/// Greedily stack `t` induced matchings of size `r` on `n` vertices.
///
/// Each slot samples candidates: a random independent set of `2r` vertices
/// in the current union, paired so no pair lies inside the vertex set of an
/// accepted matching. Those two conditions are exactly what keeps every
/// matching induced and the matchings edge-disjoint. After
/// `CANDIDATES_PER_SLOT` misses the attempt restarts from scratch, up to
/// `restarts` times.
pub fn build_rs_graph(n: usize, r: usize, t: usize, seed: u64, restarts: usize) -> Result<RsBuild> {
    if r == 0 || t == 0 {
        return Err(Error::Parameter("RS graphs need r >= 1 and t >= 1".into()));
    }
    if 2 * r > n || n > u32::MAX as usize {
        return Err(Error::Size("RS graphs need 2r <= N".into()));
    }
    let mut best_t = 0;
    let attempts = restarts.max(1);
    for a in 0..attempts {
        let mut rng = rng_from_seed(split_seed(seed, a as u64));
        let found = attempt(n, r, t, &mut rng);
        if found.len() == t {
            let rs = RsGraph { n, r, matchings: found };
            debug_assert!(validate_rs_graph(&rs));
            return Ok(RsBuild::Built(rs));
        }
        best_t = best_t.max(found.len());
    }
    Ok(RsBuild::Failure { best_t, attempts })
}

fn attempt(n: usize, r: usize, t: usize, rng: &mut SeededRng) -> Vec<Matching> {
    let mut union = Graph::new(n);
    // owner[v] lists the accepted matchings covering v.
    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out = Vec::with_capacity(t);
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    while out.len() < t {
        let cand = (0..CANDIDATES_PER_SLOT).find_map(|_| candidate(&union, &owner, r, &mut order, rng));
        let Some(m) = cand else { return out };
        let idx = out.len();
        for &(u, v) in m.edges() {
            // In range and loop-free by construction.
            let _ = union.add_edge(u, v);
            owner[u as usize].push(idx);
            owner[v as usize].push(idx);
        }
        out.push(m);
    }
    out
}

fn candidate(union: &Graph, owner: &[Vec<usize>], r: usize, order: &mut [Vertex], rng: &mut SeededRng) -> Option<Matching> {
    order.shuffle(rng);
    let mut chosen: Vec<Vertex> = Vec::with_capacity(2 * r);
    for &v in order.iter() {
        if chosen.iter().all(|&c| !union.has_edge(c, v)) {
            chosen.push(v);
            if chosen.len() == 2 * r {
                break;
            }
        }
    }
    if chosen.len() < 2 * r {
        return None;
    }
    let shares = |a: Vertex, b: Vertex| owner[a as usize].iter().any(|i| owner[b as usize].contains(i));
    let mut pairs = Vec::with_capacity(r);
    let mut left = chosen;
    while let Some(a) = left.pop() {
        let ok: Vec<usize> = (0..left.len()).filter(|&i| !shares(a, left[i])).collect();
        if ok.is_empty() {
            return None;
        }
        let b = left.swap_remove(ok[rng.gen_range(0..ok.len())]);
        pairs.push(ordered(a, b));
    }
    Matching::new(pairs).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_single_matching() {
        for seed in 0..20 {
            let rs = build_rs_graph(8, 4, 1, seed, 1).unwrap().built().unwrap();
            assert!(validate_rs_graph(&rs));
            assert_eq!(rs.matchings[0].vertices().len(), 8);
        }
    }

    #[test]
    fn small_builds_validate() {
        for seed in 0..50 {
            let rs = build_rs_graph(10, 2, 3, seed, 20).unwrap().built().unwrap();
            assert!(validate_rs_graph(&rs));
            assert_eq!(rs.t(), 3);
        }
        let rs = build_rs_graph(24, 4, 6, 7, 50).unwrap().built().unwrap();
        assert!(validate_rs_graph(&rs));
    }

    #[test]
    fn three_perfect_matchings_on_eight_fail() {
        match build_rs_graph(8, 4, 3, 0, 10).unwrap() {
            RsBuild::Failure { best_t, attempts } => {
                assert_eq!(best_t, 1);
                assert_eq!(attempts, 10);
            }
            RsBuild::Built(_) => panic!("expected failure"),
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(build_rs_graph(7, 4, 1, 0, 1).is_err());
        assert!(build_rs_graph(8, 0, 1, 0, 1).is_err());
    }
}
