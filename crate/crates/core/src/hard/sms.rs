//! Multi-player instances whose union has low arboricity: each player holds
//! a relabeled Boolean Hidden Matching instance and the players share the
//! vertices carrying ones.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::bhh::{gen_bhh0, BhhInstance};
use super::{Bound, HardInstance, Label};
use crate::error::{Error, Result};
use crate::graph::{ordered, Graph, Matching, Vertex};
use crate::rng::{rng_from_seed, split_seed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmsInstance {
    pub n: usize,
    pub k: usize,
    pub profile: Vec<Label>,
    /// Permutation of `[n + n/k]`.
    pub sigma: Vec<Vertex>,
    /// Player `i`'s instance on `[2n/k]` (arity 2).
    pub bhm: Vec<BhhInstance>,
    /// Player `i`'s matching of size `n/k` over the relabeled universe.
    pub matchings: Vec<Matching>,
    /// Union of the matchings, with multiplicities.
    pub graph: Graph,
    pub seed: u64,
}

impl SmsInstance {
    /// Vertices every player may touch: `sigma([n/k])`.
    pub fn shared_vertices(&self) -> &[Vertex] {
        &self.sigma[..self.n / self.k]
    }

    fn uniform(&self) -> Option<Label> {
        let first = *self.profile.first()?;
        self.profile.iter().all(|&l| l == first).then_some(first)
    }
}

/// Draw an instance with `k` players on `n + n/k` vertices.
///
/// Player `i` (0-based) maps the `l`-th one of its vector to `sigma(l)` and
/// the `l`-th zero to `sigma((i + 1) n/k + l)`, then relabels its hidden
/// matching accordingly.
pub fn gen_sms(n: usize, k: usize, profile: &[Label], seed: u64) -> Result<SmsInstance> {
    if k < 2 {
        return Err(Error::Parameter("need at least two players".into()));
    }
    if profile.len() != k {
        return Err(Error::Parameter(format!("profile has {} labels for {k} players", profile.len())));
    }
    if !n.is_multiple_of(k) || !(2 * n / k).is_multiple_of(4) || n / k == 0 {
        return Err(Error::Size(format!("2n/k must be a positive multiple of 4 (n = {n}, k = {k})")));
    }
    let block = n / k;
    let universe = n + block;
    let mut sigma: Vec<Vertex> = (0..universe as Vertex).collect();
    sigma.shuffle(&mut rng_from_seed(split_seed(seed, 0)));

    let mut graph = Graph::new(universe);
    let mut bhm = Vec::with_capacity(k);
    let mut matchings = Vec::with_capacity(k);
    for (i, &label) in profile.iter().enumerate() {
        let inst = gen_bhh0(2 * block, 2, label, split_seed(seed, i as u64 + 1))?;
        let mut relabel = alloc::vec![0 as Vertex; 2 * block];
        let (mut ones, mut zeros) = (0usize, 0usize);
        for (j, &bit) in inst.x.iter().enumerate() {
            relabel[j] = if bit {
                ones += 1;
                sigma[ones - 1]
            } else {
                zeros += 1;
                sigma[(i + 1) * block + zeros - 1]
            };
        }
        let pairs: Vec<(Vertex, Vertex)> = inst.blocks.iter().map(|b| ordered(relabel[b[0] as usize], relabel[b[1] as usize])).collect();
        for &(u, v) in &pairs {
            graph.add_edge(u, v)?;
        }
        matchings.push(Matching::new(pairs)?);
        bhm.push(inst);
    }
    Ok(SmsInstance { n, k, profile: profile.to_vec(), sigma, bhm, matchings, graph, seed })
}

impl HardInstance for SmsInstance {
    fn id(&self) -> String {
        let f: String = self.profile.iter().map(|l| if *l == Label::Yes { 'Y' } else { 'N' }).collect();
        format!("sms-n{}-k{}-{}-s{}", self.n, self.k, f, self.seed)
    }

    fn graph(&self) -> &Graph {
        &self.graph
    }

    /// All-Yes: at least `n/2 + n/(2k)`. All-No: at most `n/k`.
    fn promise(&self) -> Option<Bound> {
        let (n, k) = (self.n as u64, self.k as u64);
        match self.uniform()? {
            Label::Yes => Some(Bound::AtLeast((n * (k + 1)).div_ceil(2 * k))),
            Label::No => Some(Bound::AtMost(n / k)),
        }
    }
}
