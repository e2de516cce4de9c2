//! Instances separating `opt` from `(1 - eps) opt`, embedding one hidden
//! hypermatching instance into a chosen matching of an RS graph.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::bhh::{gen_bhh0, BhhInstance};
use super::dense::PrivateCopy;
use super::{Bound, HardInstance, Label};
use crate::error::{Error, Result};
use crate::graph::{ordered, Graph, Matching, Vertex};
use crate::rng::{rng_from_seed, split_seed, SeededRng};
use crate::rs::{validate_rs_graph, RsGraph};
use crate::util::floor_f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsVariant {
    /// Two parties; Bob's edges follow Alice's.
    InsertionOnly,
    /// `k` players plus a referee.
    Dynamic,
}

/// Owner of a set of edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Party {
    Alice,
    /// Bob's perfect matching between the unused left vertices and the extra side.
    BobMatching,
    /// Bob's cliques on the right endpoints of the special matching.
    BobCliques,
    Player(usize),
    Referee,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyEdges {
    pub party: Party,
    pub edges: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsInstance {
    pub variant: EpsVariant,
    pub rs: RsGraph,
    /// `r / N` of the RS graph.
    pub c_rs: f64,
    pub eps: f64,
    /// Hyperedge arity `p` of the embedded instance.
    pub arity: usize,
    /// Number of players (1 for the insertion-only variant).
    pub players: usize,
    pub n: usize,
    pub j_star: usize,
    /// The embedded instance on `[r]`, indexing the edges of matching `j*`.
    pub bhh: BhhInstance,
    pub parties: Vec<PartyEdges>,
    pub graph: Graph,
    pub seed: u64,
}

impl EpsInstance {
    pub fn label(&self) -> Label {
        self.bhh.label
    }

    pub fn edges_of(&self, party: Party) -> impl Iterator<Item = &(Vertex, Vertex)> + '_ {
        self.parties.iter().filter(move |p| p.party == party).flat_map(|p| p.edges.iter())
    }
}

/// Arity for `variant`: `floor(c_rs / (2 eps))` or `floor(1 / (8 eps))`.
pub fn eps_arity(variant: EpsVariant, rs: &RsGraph, eps: f64) -> usize {
    let raw = match variant {
        EpsVariant::InsertionOnly => rs.r as f64 / (2.0 * eps * rs.n as f64),
        EpsVariant::Dynamic => 1.0 / (8.0 * eps),
    };
    floor_f64(raw + 1e-9) as usize
}

/// Build an instance of `variant` whose embedded label is `label`.
///
/// The embedded instance lives on the edges of matching `j*`: its `k`-th
/// coordinate is the `k`-th edge in sorted order, and its cliques are placed
/// on the second endpoints of those edges. The other matchings carry
/// independent filler instances of random label.
pub fn gen_eps_instance(variant: EpsVariant, rs: &RsGraph, eps: f64, label: Label, seed: u64) -> Result<EpsInstance> {
    if !validate_rs_graph(rs) {
        return Err(Error::Parameter("input is not a valid RS graph".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let p = eps_arity(variant, rs, eps);
    if p < 2 || p % 2 == 1 {
        return Err(Error::Parameter(format!("arity p = {p} must be an even integer >= 2")));
    }
    let r = rs.r;
    if !r.is_multiple_of(2 * p) || !r.is_multiple_of(4) {
        return Err(Error::Parameter(format!("r = {r} must be a multiple of 4 and of 2p = {}", 2 * p)));
    }
    let mut rng = rng_from_seed(split_seed(seed, 0));
    let j_star = rng.gen_range(0..rs.t());
    let bhh = gen_bhh0(r, p, label, split_seed(seed, 1))?;
    match variant {
        EpsVariant::InsertionOnly => insertion(rs, eps, p, j_star, bhh, &mut rng, seed),
        EpsVariant::Dynamic => dynamic(rs, eps, p, j_star, bhh, &mut rng, seed),
    }
}

fn filler(r: usize, p: usize, rng: &mut SeededRng, seed: u64, idx: u64) -> Result<Vec<bool>> {
    let label = if rng.gen_bool(0.5) { Label::Yes } else { Label::No };
    Ok(gen_bhh0(r, p, label, split_seed(seed, idx))?.x)
}

fn kept<'a>(m: &'a Matching, x: &'a [bool]) -> impl Iterator<Item = (Vertex, Vertex)> + 'a {
    m.edges().iter().zip(x).filter(|(_, &b)| b).map(|(&e, _)| e)
}

/// Edges of the cliques `{v_k : k in e}` where `v_k` is the second endpoint of edge `k`.
fn cliques(m: &Matching, bhh: &BhhInstance, map: impl Fn(Vertex) -> Vertex) -> Vec<(Vertex, Vertex)> {
    let right: Vec<Vertex> = m.edges().iter().map(|&(_, v)| map(v)).collect();
    let mut out = Vec::new();
    for b in &bhh.blocks {
        for (a, &i) in b.iter().enumerate() {
            for &j in &b[a + 1..] {
                out.push(ordered(right[i as usize], right[j as usize]));
            }
        }
    }
    out
}

fn insertion(rs: &RsGraph, eps: f64, p: usize, j_star: usize, bhh: BhhInstance, rng: &mut SeededRng, seed: u64) -> Result<EpsInstance> {
    let (big_n, r) = (rs.n, rs.r);
    let n = 2 * big_n - 2 * r;
    let mut alice = Vec::new();
    for (j, m) in rs.matchings.iter().enumerate() {
        let x = if j == j_star { bhh.x.clone() } else { filler(r, p, rng, seed, j as u64 + 2)? };
        alice.extend(kept(m, &x));
    }
    let special = &rs.matchings[j_star];
    let used = special.vertices();
    let free = (0..big_n as Vertex).filter(|v| used.binary_search(v).is_err());
    let bob_matching: Vec<(Vertex, Vertex)> = free.zip(big_n as Vertex..n as Vertex).collect();
    let bob_cliques = cliques(special, &bhh, |v| v);

    let mut graph = Graph::new(n);
    for &(u, v) in alice.iter().chain(&bob_matching).chain(&bob_cliques) {
        graph.add_edge(u, v)?;
    }
    let parties = alloc::vec![
        PartyEdges { party: Party::Alice, edges: alice },
        PartyEdges { party: Party::BobMatching, edges: bob_matching },
        PartyEdges { party: Party::BobCliques, edges: bob_cliques },
    ];
    Ok(EpsInstance {
        variant: EpsVariant::InsertionOnly,
        rs: rs.clone(),
        c_rs: r as f64 / big_n as f64,
        eps,
        arity: p,
        players: 1,
        n,
        j_star,
        bhh,
        parties,
        graph,
        seed,
    })
}

fn dynamic(rs: &RsGraph, eps: f64, p: usize, j_star: usize, bhh: BhhInstance, rng: &mut SeededRng, seed: u64) -> Result<EpsInstance> {
    let (big_n, r, t) = (rs.n, rs.r, rs.t());
    let k_real = big_n as f64 / (eps * r as f64);
    let k = floor_f64(k_real + 0.5) as usize;
    if k == 0 || (k as f64 - k_real).abs() > 1e-6 {
        return Err(Error::Parameter(format!("player count N / (eps r) = {k_real} is not integral")));
    }
    let n = big_n + 2 * k * r;
    if n > u32::MAX as usize {
        return Err(Error::Size("instance universe exceeds u32".into()));
    }
    let mut sigma: Vec<Vertex> = (0..n as Vertex).collect();
    sigma.shuffle(rng);
    let special = &rs.matchings[j_star];
    let used = special.vertices();

    let mut graph = Graph::new(n);
    let mut parties = Vec::with_capacity(k + 1);
    let mut referee = Vec::new();
    for i in 0..k {
        let copy = PrivateCopy::new(big_n, &used, &sigma, big_n + 2 * i * r);
        let mut edges = Vec::new();
        for (j, m) in rs.matchings.iter().enumerate() {
            let x = if j == j_star { bhh.x.clone() } else { filler(r, p, rng, seed, (2 + i * t + j) as u64)? };
            edges.extend(kept(m, &x).map(|(u, v)| copy.edge(u, v)));
        }
        referee.extend(cliques(special, &bhh, |v| copy.vertex(v)));
        parties.push(PartyEdges { party: Party::Player(i), edges });
    }
    parties.push(PartyEdges { party: Party::Referee, edges: referee });
    for pe in &parties {
        for &(u, v) in &pe.edges {
            graph.add_edge(u, v)?;
        }
    }
    Ok(EpsInstance {
        variant: EpsVariant::Dynamic,
        rs: rs.clone(),
        c_rs: r as f64 / big_n as f64,
        eps,
        arity: p,
        players: k,
        n,
        j_star,
        bhh,
        parties,
        graph,
        seed,
    })
}

impl HardInstance for EpsInstance {
    fn id(&self) -> String {
        let v = match self.variant {
            EpsVariant::InsertionOnly => "ins",
            EpsVariant::Dynamic => "dyn",
        };
        format!("eps-{v}-N{}-r{}-p{}-{}-s{}", self.rs.n, self.rs.r, self.arity, self.label().as_str(), self.seed)
    }

    fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Insertion-only: exactly `N - 5r/4` for Yes, `r/(2p)` less for No.
    /// Dynamic: more than `3kr/4` for Yes, at most `3kr/4 - 3N` for No.
    fn promise(&self) -> Option<Bound> {
        let (big_n, r, p, k) = (self.rs.n as u64, self.rs.r as u64, self.arity as u64, self.players as u64);
        Some(match (self.variant, self.label()) {
            (EpsVariant::InsertionOnly, Label::Yes) => Bound::Exactly(big_n - 5 * r / 4),
            (EpsVariant::InsertionOnly, Label::No) => Bound::Exactly(big_n - 5 * r / 4 - r / (2 * p)),
            (EpsVariant::Dynamic, Label::Yes) => Bound::GreaterThan(3 * k * r / 4),
            (EpsVariant::Dynamic, Label::No) => Bound::AtMost((3 * k * r / 4).saturating_sub(3 * big_n)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hard::rs_builder::build_rs_graph;
    use crate::hard::verify_gap;

    fn rs(n: usize, r: usize, t: usize) -> RsGraph {
        build_rs_graph(n, r, t, 3, 100).unwrap().built().unwrap()
    }

    #[test]
    fn insertion_gaps() {
        for (g, eps, p) in [(rs(16, 4, 3), 0.05, 2), (rs(24, 8, 2), 0.04, 4)] {
            for seed in 0..10 {
                for label in [Label::Yes, Label::No] {
                    let inst = gen_eps_instance(EpsVariant::InsertionOnly, &g, eps, label, seed).unwrap();
                    assert_eq!(inst.arity, p);
                    assert_eq!(inst.n, 2 * g.n - 2 * g.r);
                    let rep = verify_gap(&inst).unwrap();
                    assert!(rep.pass, "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn insertion_structure() {
        let g = rs(16, 4, 3);
        for seed in 0..200 {
            let inst = gen_eps_instance(EpsVariant::InsertionOnly, &g, 0.05, Label::No, seed).unwrap();
            assert!(inst.bhh.is_valid());
            let bm: Vec<_> = inst.edges_of(Party::BobMatching).copied().collect();
            let m = Matching::new(bm.iter().copied()).unwrap();
            assert_eq!(m.len(), 16 - 8);
            let used = inst.rs.matchings[inst.j_star].vertices();
            assert!(bm.iter().all(|&(u, v)| used.binary_search(&u).is_err() && v >= 16));
            let right: Vec<Vertex> = inst.rs.matchings[inst.j_star].edges().iter().map(|e| e.1).collect();
            assert!(inst.edges_of(Party::BobCliques).all(|&(u, v)| right.contains(&u) && right.contains(&v)));
            assert_eq!(inst.edges_of(Party::BobCliques).count(), 2);
            assert_eq!(inst.graph.total_multiplicity() as usize, inst.parties.iter().map(|p| p.edges.len()).sum::<usize>());
        }
    }

    #[test]
    fn dynamic_gaps() {
        let g = rs(16, 4, 3);
        for seed in 0..3 {
            for label in [Label::Yes, Label::No] {
                let inst = gen_eps_instance(EpsVariant::Dynamic, &g, 1.0 / 16.0, label, seed).unwrap();
                assert_eq!((inst.arity, inst.players, inst.n), (2, 64, 528));
                assert_eq!(inst.edges_of(Party::Referee).count(), 64 * 2);
                let rep = verify_gap(&inst).unwrap();
                assert!(rep.pass, "{rep:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = rs(16, 4, 3);
        // p = floor(4 / (2 * 0.1 * 16)) = 1.
        assert!(matches!(gen_eps_instance(EpsVariant::InsertionOnly, &g, 0.1, Label::Yes, 0), Err(Error::Parameter(_))));
        // p = 3 is odd.
        assert!(matches!(gen_eps_instance(EpsVariant::Dynamic, &g, 1.0 / 24.0, Label::Yes, 0), Err(Error::Parameter(_))));
        // N / (eps r) = 16 / (0.06 * 4) is not integral.
        assert!(gen_eps_instance(EpsVariant::Dynamic, &g, 0.06, Label::Yes, 0).is_err());
    }
}
