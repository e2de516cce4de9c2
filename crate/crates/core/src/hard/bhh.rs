//! Boolean Hidden Hypermatching instances with the all-zero target and the
//! matching graph built from them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Bound, HardInstance, Label};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::rng::rng_from_seed;

/// `x ∈ {0,1}^n` with `|x| = n/2` and a perfect `t`-hypermatching whose
/// blocks all have XOR 0 (Yes) or all have XOR 1 (No).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BhhInstance {
    pub n: usize,
    pub arity: usize,
    pub x: Vec<bool>,
    /// `n / arity` blocks partitioning `[0, n)`, each sorted.
    pub blocks: Vec<Vec<u32>>,
    pub label: Label,
}

impl BhhInstance {
    pub fn weight(&self) -> usize {
        self.x.iter().filter(|&&b| b).count()
    }

    /// XOR of the bits of `x` in block `i`.
    pub fn block_parity(&self, i: usize) -> bool {
        self.blocks[i].iter().fold(false, |acc, &j| acc ^ self.x[j as usize])
    }

    /// Whether every structural promise holds.
    pub fn is_valid(&self) -> bool {
        if self.arity < 2 || self.x.len() != self.n || self.blocks.len() * self.arity != self.n {
            return false;
        }
        let mut seen = alloc::vec![false; self.n];
        for b in &self.blocks {
            if b.len() != self.arity {
                return false;
            }
            for &j in b {
                if j as usize >= self.n || seen[j as usize] {
                    return false;
                }
                seen[j as usize] = true;
            }
        }
        let want = self.label == Label::No;
        self.weight() * 2 == self.n && (0..self.blocks.len()).all(|i| self.block_parity(i) == want)
    }
}

/// Draw a BHH instance with label `label`.
///
/// Blocks come from a uniform permutation. Each block's bits are uniform
/// subject to the block parity, then the total weight is moved to `n/2` by
/// flipping two equal bits inside one block at a time, which keeps every
/// parity. The result satisfies the promise exactly but is not uniform over
/// all such vectors.
pub fn gen_bhh0(n: usize, arity: usize, label: Label, seed: u64) -> Result<BhhInstance> {
    if arity < 2 {
        return Err(Error::Parameter("hyperedge arity must be at least 2".into()));
    }
    if n == 0 || !n.is_multiple_of(2 * arity) {
        return Err(Error::Size(format!("n = {n} is not a positive multiple of 2t = {}", 2 * arity)));
    }
    if label == Label::No && arity % 2 == 1 {
        return Err(Error::InfeasibleLabel(format!("label No needs an even arity, got {arity}")));
    }
    // Every block parity is fixed, so the total weight has the parity of
    // (number of blocks) * (block parity); it must match n/2.
    let odd_blocks = if label == Label::No { n / arity } else { 0 };
    if (n / 2) % 2 != odd_blocks % 2 {
        return Err(Error::InfeasibleLabel(format!("weight n/2 = {} has the wrong parity for {} blocks", n / 2, n / arity)));
    }

    let mut rng = rng_from_seed(seed);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(&mut rng);
    let mut blocks: Vec<Vec<u32>> = perm
        .chunks(arity)
        .map(|c| {
            let mut b = c.to_vec();
            b.sort_unstable();
            b
        })
        .collect();
    blocks.sort_unstable();

    let want = label == Label::No;
    let mut x = alloc::vec![false; n];
    for b in &blocks {
        let mut par = false;
        for &j in &b[..arity - 1] {
            let bit = rng.gen_bool(0.5);
            x[j as usize] = bit;
            par ^= bit;
        }
        x[b[arity - 1] as usize] = par ^ want;
    }

    let target = n / 2;
    let mut weight = x.iter().filter(|&&b| b).count();
    while weight != target {
        let flip_ones = weight > target;
        let eligible: Vec<usize> =
            (0..blocks.len()).filter(|&i| blocks[i].iter().filter(|&&j| x[j as usize] == flip_ones).count() >= 2).collect();
        let &bi = eligible.choose(&mut rng).ok_or_else(|| Error::InfeasibleLabel("weight repair is stuck".into()))?;
        let mut cand: Vec<u32> = blocks[bi].iter().copied().filter(|&j| x[j as usize] == flip_ones).collect();
        cand.shuffle(&mut rng);
        x[cand[0] as usize] = !flip_ones;
        x[cand[1] as usize] = !flip_ones;
        weight = if flip_ones { weight - 2 } else { weight + 2 };
    }
    Ok(BhhInstance { n, arity, x, blocks, label })
}

/// Graph on `2n` vertices: `v_i = i`, `w_i = n + i`; edge `(v_i, w_i)` for
/// every `x_i = 1`, and a clique on `{w_i : i ∈ e}` for every block `e`.
pub fn bhh_to_matching_graph(inst: &BhhInstance) -> Result<Graph> {
    if inst.arity % 2 == 1 {
        return Err(Error::Parameter("the matching reduction needs an even arity".into()));
    }
    let n = inst.n;
    let mut g = Graph::new(2 * n);
    for (i, &bit) in inst.x.iter().enumerate() {
        if bit {
            g.add_edge(i as Vertex, (n + i) as Vertex)?;
        }
    }
    for b in &inst.blocks {
        for (a, &i) in b.iter().enumerate() {
            for &j in &b[a + 1..] {
                g.add_edge((n as u32) + i, (n as u32) + j)?;
            }
        }
    }
    Ok(g)
}

/// Matching size promised by the reduction graph: `3n/4` for Yes and
/// `3n/4 - n/(2t)` for No.
pub fn bhh_promised_matching(n: usize, arity: usize, label: Label) -> u64 {
    let yes = (3 * n / 4) as u64;
    match label {
        Label::Yes => yes,
        Label::No => yes - (n / (2 * arity)) as u64,
    }
}

/// A BHH instance bundled with its reduction graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BhhGraph {
    pub instance: BhhInstance,
    pub graph: Graph,
    pub seed: u64,
}

pub fn bhh_gap_instance(inst: BhhInstance, seed: u64) -> Result<BhhGraph> {
    let graph = bhh_to_matching_graph(&inst)?;
    Ok(BhhGraph { instance: inst, graph, seed })
}

impl HardInstance for BhhGraph {
    fn id(&self) -> String {
        let i = &self.instance;
        format!("bhh-n{}-t{}-{}-s{}", i.n, i.arity, i.label.as_str(), self.seed)
    }

    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn promise(&self) -> Option<Bound> {
        let i = &self.instance;
        Some(Bound::Exactly(bhh_promised_matching(i.n, i.arity, i.label)))
    }
}
