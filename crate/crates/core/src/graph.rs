//! Multigraphs with integer vertex ids, matchings, and induced subgraphs.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Normalise an unordered pair so that the smaller endpoint comes first.
#[inline]
pub fn ordered(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// An undirected multigraph on `[0, n)`.
///
/// Edges are stored once per unordered pair with a strictly positive
/// multiplicity. Matching computations ignore multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeMap<(Vertex, Vertex), u32>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: BTreeMap::new() }
    }

    /// Build a graph from a list of pairs; repeated pairs raise the multiplicity.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct vertex pairs carrying at least one edge.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.values().map(|&m| m as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub(crate) fn check_pair(&self, u: Vertex, v: Vertex) -> Result<(Vertex, Vertex)> {
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        for w in [u, v] {
            if w as usize >= self.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        Ok(ordered(u, v))
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.add_edge_with_multiplicity(u, v, 1)
    }

    pub fn add_edge_with_multiplicity(&mut self, u: Vertex, v: Vertex, mult: u32) -> Result<()> {
        let key = self.check_pair(u, v)?;
        if mult > 0 {
            *self.edges.entry(key).or_insert(0) += mult;
        }
        Ok(())
    }

    /// Remove one copy of `(u, v)`.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let key = self.check_pair(u, v)?;
        match self.edges.get_mut(&key) {
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                self.edges.remove(&key);
            }
            None => return Err(Error::PrefixViolation { u: key.0, v: key.1 }),
        }
        Ok(())
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> u32 {
        self.edges.get(&ordered(u, v)).copied().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.edges.contains_key(&ordered(u, v))
    }

    /// Distinct pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.keys().copied()
    }

    /// Distinct pairs together with their multiplicities.
    pub fn edges_with_multiplicity(&self) -> impl Iterator<Item = ((Vertex, Vertex), u32)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    /// Simple adjacency lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = alloc::vec![Vec::new(); self.n];
        for &(u, v) in self.edges.keys() {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Simple-graph degree of every vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = alloc::vec![0usize; self.n];
        for &(u, v) in self.edges.keys() {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    /// The graph on the vertices satisfying `keep`, relabelled `0..` in
    /// increasing order of original id.
    pub fn induced_subgraph<F>(&self, mut keep: F) -> InducedSubgraph
    where
        F: FnMut(Vertex) -> bool,
    {
        let mut new_id = alloc::vec![u32::MAX; self.n];
        let mut original = Vec::new();
        for v in 0..self.n as Vertex {
            if keep(v) {
                new_id[v as usize] = original.len() as Vertex;
                original.push(v);
            }
        }
        let mut graph = Graph::new(original.len());
        for (&(u, v), &m) in &self.edges {
            let (a, b) = (new_id[u as usize], new_id[v as usize]);
            if a != u32::MAX && b != u32::MAX {
                graph.edges.insert(ordered(a, b), m);
            }
        }
        InducedSubgraph { graph, original }
    }

    /// Copy with every multiplicity collapsed to one.
    pub fn simplified(&self) -> Graph {
        Graph { n: self.n, edges: self.edges.keys().map(|&e| (e, 1)).collect() }
    }
}

/// Result of [`Graph::induced_subgraph`]: the relabelled graph and the map
/// from new ids back to original ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub original: Vec<Vertex>,
}

impl InducedSubgraph {
    pub fn original_id(&self, v: Vertex) -> Vertex {
        self.original[v as usize]
    }

    /// Map a matching of the subgraph back to original vertex ids.
    pub fn lift(&self, m: &Matching) -> Matching {
        Matching::from_pairs_unchecked(m.edges().iter().map(|&(u, v)| (self.original_id(u), self.original_id(v))))
    }
}

/// A set of unordered vertex pairs, kept sorted.
///
/// Construction through [`Matching::new`] enforces vertex-disjointness.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    edges: Vec<(Vertex, Vertex)>,
}

impl Matching {
    /// Build a matching, rejecting self-loops and shared endpoints.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let m = Self::from_pairs_unchecked(pairs);
        for &(u, v) in &m.edges {
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
        }
        if !m.is_vertex_disjoint() {
            return Err(Error::Parameter("matching edges share an endpoint".into()));
        }
        Ok(m)
    }

    /// Normalise and sort without checking disjointness.
    pub fn from_pairs_unchecked<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut edges: Vec<_> = pairs.into_iter().map(|(u, v)| ordered(u, v)).collect();
        edges.sort_unstable();
        edges.dedup();
        Matching { edges }
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.binary_search(&ordered(u, v)).is_ok()
    }

    /// Matched vertices, sorted.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs
    }

    pub fn is_vertex_disjoint(&self) -> bool {
        let vs = self.vertices();
        vs.windows(2).all(|w| w[0] != w[1])
    }

    /// Whether every edge is present in `g` and no two edges share a vertex.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.is_vertex_disjoint() && self.edges.iter().all(|&(u, v)| g.has_edge(u, v))
    }
}
