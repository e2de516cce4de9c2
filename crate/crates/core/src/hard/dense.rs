//! Instances where the players hold RS-graph copies and one hidden bit
//! decides whether a special matching is present in every copy.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Bound, HardInstance};
use crate::error::{Error, Result};
use crate::graph::{ordered, Graph, Vertex};
use crate::rng::{rng_from_seed, split_seed};
use crate::rs::{validate_rs_graph, RsGraph};

/// Vertex map of one player: the endpoints of the special matching go to a
/// private block, every other RS vertex `u` to `sigma(u)`.
pub(crate) struct PrivateCopy {
    map: Vec<Vertex>,
}

impl PrivateCopy {
    /// `special` sorted; its `j`-th entry maps to `sigma(base + j)`.
    pub(crate) fn new(rs_n: usize, special: &[Vertex], sigma: &[Vertex], base: usize) -> Self {
        let mut map: Vec<Vertex> = sigma[..rs_n].to_vec();
        for (j, &v) in special.iter().enumerate() {
            map[v as usize] = sigma[base + j];
        }
        PrivateCopy { map }
    }

    pub(crate) fn edge(&self, u: Vertex, v: Vertex) -> (Vertex, Vertex) {
        ordered(self.map[u as usize], self.map[v as usize])
    }

    pub(crate) fn vertex(&self, v: Vertex) -> Vertex {
        self.map[v as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseAlphaInstance {
    pub rs: RsGraph,
    pub alpha: usize,
    pub theta: bool,
    pub j_star: usize,
    /// Players: `(alpha + 1) N / r`.
    pub k: usize,
    /// Universe size `N + 2kr`.
    pub n: usize,
    /// `xs[i][j]`: whether player `i` keeps matching `j`.
    pub xs: Vec<Vec<bool>>,
    pub sigma: Vec<Vertex>,
    /// Relabeled edges of each player.
    pub players: Vec<Vec<(Vertex, Vertex)>>,
    /// Union of all players, with multiplicities.
    pub graph: Graph,
    pub seed: u64,
}

/// Every player drops matching `j` when its bit `x(j)` is 0, with
/// `x(j*) = theta` for all players and uniform bits elsewhere. The endpoints
/// of the special matching go to a private block per player.
pub fn gen_dense_alpha(rs: &RsGraph, alpha: usize, theta: bool, seed: u64) -> Result<DenseAlphaInstance> {
    if !validate_rs_graph(rs) {
        return Err(Error::Parameter("input is not a valid RS graph".into()));
    }
    if alpha == 0 {
        return Err(Error::Parameter("alpha must be positive".into()));
    }
    let (rn, r, t) = (rs.n, rs.r, rs.t());
    if !((alpha + 1) * rn).is_multiple_of(r) {
        return Err(Error::Parameter(format!("k = (alpha + 1) N / r is not integral for N = {rn}, r = {r}")));
    }
    let k = (alpha + 1) * rn / r;
    let n = rn + 2 * k * r;
    if n > u32::MAX as usize {
        return Err(Error::Size("instance universe exceeds u32".into()));
    }
    let mut rng = rng_from_seed(split_seed(seed, 0));
    let j_star = rng.gen_range(0..t);
    let mut sigma: Vec<Vertex> = (0..n as Vertex).collect();
    sigma.shuffle(&mut rng);
    let special = rs.matchings[j_star].vertices();

    let mut graph = Graph::new(n);
    let mut xs = Vec::with_capacity(k);
    let mut players = Vec::with_capacity(k);
    for i in 0..k {
        let mut prng = rng_from_seed(split_seed(seed, i as u64 + 1));
        let x: Vec<bool> = (0..t).map(|j| if j == j_star { theta } else { prng.gen_bool(0.5) }).collect();
        let copy = PrivateCopy::new(rn, &special, &sigma, rn + 2 * i * r);
        let mut edges = Vec::new();
        for (j, m) in rs.matchings.iter().enumerate() {
            if x[j] {
                edges.extend(m.edges().iter().map(|&(u, v)| copy.edge(u, v)));
            }
        }
        for &(u, v) in &edges {
            graph.add_edge(u, v)?;
        }
        xs.push(x);
        players.push(edges);
    }
    Ok(DenseAlphaInstance { rs: rs.clone(), alpha, theta, j_star, k, n, xs, sigma, players, graph, seed })
}

impl HardInstance for DenseAlphaInstance {
    fn id(&self) -> String {
        format!("dense-N{}-r{}-t{}-a{}-th{}-s{}", self.rs.n, self.rs.r, self.rs.t(), self.alpha, self.theta as u8, self.seed)
    }

    fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `theta = 1`: at least `(alpha + 1) N`. `theta = 0`: at most `N`.
    fn promise(&self) -> Option<Bound> {
        let big_n = self.rs.n as u64;
        Some(if self.theta { Bound::AtLeast((self.alpha as u64 + 1) * big_n) } else { Bound::AtMost(big_n) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hard::rs_builder::build_rs_graph;
    use crate::hard::verify_gap;
    use crate::matching::max_matching;

    fn rs() -> RsGraph {
        build_rs_graph(24, 4, 4, 11, 50).unwrap().built().unwrap()
    }

    #[test]
    fn gap_and_ratio() {
        let rs = rs();
        for seed in 0..10 {
            let one = gen_dense_alpha(&rs, 2, true, seed).unwrap();
            let zero = gen_dense_alpha(&rs, 2, false, seed).unwrap();
            assert_eq!((one.k, one.n), (18, 168));
            let r1 = verify_gap(&one).unwrap();
            let r0 = verify_gap(&zero).unwrap();
            assert!(r1.pass && r0.pass, "{r1:?} {r0:?}");
            assert!(r1.measured > 2 * r0.measured);
        }
    }

    #[test]
    fn structure() {
        let rs = rs();
        for seed in 0..200 {
            let theta = seed % 2 == 0;
            let d = gen_dense_alpha(&rs, 2, theta, seed).unwrap();
            assert!(d.xs.iter().all(|x| x[d.j_star] == theta));
            assert!(d.graph.edges_with_multiplicity().all(|(_, m)| m as usize <= d.k));
            // Private blocks are disjoint: vertex sigma(N + 2ir + j) only occurs in player i.
            for (i, edges) in d.players.iter().enumerate() {
                let lo = d.rs.n + 2 * i * d.rs.r;
                let private = &d.sigma[lo..lo + 2 * d.rs.r];
                for (j, other) in d.players.iter().enumerate() {
                    if j != i {
                        assert!(other.iter().all(|&(u, v)| !private.contains(&u) && !private.contains(&v)));
                    }
                }
                let kept = d.xs[i].iter().filter(|&&b| b).count();
                assert_eq!(edges.len(), kept * d.rs.r);
            }
        }
        let d = gen_dense_alpha(&rs, 2, false, 1).unwrap();
        assert!(max_matching(&d.graph).0 <= 24);
    }

    #[test]
    fn non_integral_k() {
        let rs = build_rs_graph(10, 4, 1, 0, 5).unwrap().built().unwrap();
        assert!(matches!(gen_dense_alpha(&rs, 2, true, 0), Err(Error::Parameter(_))));
    }
}
