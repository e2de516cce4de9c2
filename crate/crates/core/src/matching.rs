//! Exact and greedy matching algorithms.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Matching, Vertex};

/// Largest vertex count accepted by [`brute_force_matching`].
pub const BRUTE_FORCE_MAX_N: usize = 22;

const NONE: usize = usize::MAX;

/// Maximum-cardinality matching of a general graph (Edmonds' blossom
/// algorithm, seeded with a greedy matching). Multiplicities are ignored.
pub fn max_matching(g: &Graph) -> (usize, Matching) {
    let adj = g.adjacency();
    let mut b = Blossom::new(&adj);
    for (u, v) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        if b.mate[u] == NONE && b.mate[v] == NONE {
            b.mate[u] = v;
            b.mate[v] = u;
        }
    }
    for (root, nbrs) in adj.iter().enumerate() {
        if b.mate[root] == NONE && !nbrs.is_empty() {
            if let Some(end) = b.find_path(root) {
                b.augment(end);
            }
        }
    }
    let m = Matching::from_pairs_unchecked(
        (0..adj.len()).filter(|&v| b.mate[v] != NONE && v < b.mate[v]).map(|v| (v as Vertex, b.mate[v] as Vertex)),
    );
    (m.len(), m)
}

struct Blossom<'a> {
    adj: &'a [Vec<Vertex>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<Vertex>]) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            on_path: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.on_path.iter_mut().for_each(|x| *x = false);
        loop {
            a = self.base[a];
            self.on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free endpoint.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx] as usize;
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Exact maximum matching size by memoised search over vertex subsets.
///
/// Independent of [`max_matching`]; used to cross-check it. Rejects graphs
/// with more than [`BRUTE_FORCE_MAX_N`] vertices.
pub fn brute_force_matching(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::ResourceGuard { what: "brute-force vertex count", limit: BRUTE_FORCE_MAX_N, actual: n });
    }
    let mut nbr = vec![0u32; n];
    for (u, v) in g.edges() {
        nbr[u as usize] |= 1 << v;
        nbr[v as usize] |= 1 << u;
    }
    let mut memo = vec![u8::MAX; 1usize << n];
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    Ok(solve(full, &nbr, &mut memo) as usize)
}

fn solve(mask: u32, nbr: &[u32], memo: &mut [u8]) -> u8 {
    if mask == 0 {
        return 0;
    }
    if memo[mask as usize] != u8::MAX {
        return memo[mask as usize];
    }
    // The lowest vertex is either left unmatched or matched to a neighbour.
    let i = mask.trailing_zeros();
    let rest = mask & !(1 << i);
    let mut best = solve(rest, nbr, memo);
    let mut cand = nbr[i as usize] & rest;
    while cand != 0 {
        let j = cand.trailing_zeros();
        cand &= cand - 1;
        best = best.max(1 + solve(rest & !(1 << j), nbr, memo));
    }
    memo[mask as usize] = best;
    best
}

/// Greedy maximal matching over `edges` in the given order.
pub fn greedy_maximal_matching<I>(n: usize, edges: I) -> Matching
where
    I: IntoIterator<Item = (Vertex, Vertex)>,
{
    let mut matched = vec![false; n];
    let mut out = Vec::new();
    for (u, v) in edges {
        if u != v && !matched[u as usize] && !matched[v as usize] {
            matched[u as usize] = true;
            matched[v as usize] = true;
            out.push((u, v));
        }
    }
    Matching::from_pairs_unchecked(out)
}

/// Whether `m` is a matching of `g` whose vertex set induces exactly the
/// edges of `m`.
pub fn is_induced_matching(g: &Graph, m: &Matching) -> bool {
    if !m.is_valid_in(g) {
        return false;
    }
    let vs = m.vertices();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            if g.has_edge(a, b) && !m.contains(a, b) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::random_graph;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex))).unwrap()
    }

    #[test]
    fn small_examples() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(max_matching(&path).0, 2);
        assert_eq!(max_matching(&complete(3)).0, 1);
        assert_eq!(brute_force_matching(&Graph::new(0)).unwrap(), 0);
        assert_eq!(brute_force_matching(&Graph::new(5)).unwrap(), 0);
        assert_eq!(brute_force_matching(&Graph::from_edges(2, [(0, 1)]).unwrap()).unwrap(), 1);
        assert_eq!(brute_force_matching(&complete(5)).unwrap(), 2);
        assert!(matches!(brute_force_matching(&Graph::new(23)), Err(Error::ResourceGuard { .. })));
    }

    #[test]
    fn blossom_needs_contraction() {
        // Two triangles joined by a path: a greedy start leaves an odd cycle.
        let g = Graph::from_edges(8, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 5)]).unwrap();
        assert_eq!(max_matching(&g).0, 4);
        assert_eq!(max_matching(&cycle(9)).0, 4);
        assert_eq!(max_matching(&complete(11)).0, 5);
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..300u64 {
            let n = 1 + (seed % 14) as usize;
            let p = [0.1, 0.2, 0.3, 0.5][(seed % 4) as usize];
            let g = random_graph(n, p, seed);
            let (size, witness) = max_matching(&g);
            assert!(witness.is_valid_in(&g));
            assert_eq!(size, witness.len());
            assert_eq!(size, brute_force_matching(&g).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn greedy_is_a_two_approximation() {
        for seed in 0..100u64 {
            let g = random_graph(30, 0.08, seed);
            let opt = max_matching(&g).0;
            let greedy = greedy_maximal_matching(g.n(), g.edges());
            assert!(greedy.is_valid_in(&g));
            assert!(greedy.len() <= opt && 2 * greedy.len() >= opt);
        }
    }

    #[test]
    fn induced_matching_examples() {
        let three = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        assert!(is_induced_matching(&three, &Matching::new([(0, 1), (2, 3), (4, 5)]).unwrap()));
        let m = Matching::new([(0, 1), (2, 3)]).unwrap();
        assert!(!is_induced_matching(&complete(4), &m));
        let c6 = cycle(6);
        assert!(is_induced_matching(&c6, &Matching::new([(0, 1), (3, 4)]).unwrap()));
        assert!(!is_induced_matching(&c6, &Matching::new([(0, 1), (2, 3)]).unwrap()));
    }

    #[test]
    fn induced_subgraph_never_increases_matching() {
        for seed in 0..50u64 {
            let g = random_graph(40, 0.1, seed);
            let opt = max_matching(&g).0;
            assert_eq!(max_matching(&g.induced_subgraph(|_| true).graph).0, opt);
            let sub = g.induced_subgraph(|v| !(v as u64 + seed).is_multiple_of(3));
            let (s, w) = max_matching(&sub.graph);
            assert!(s <= opt);
            assert!(sub.lift(&w).is_valid_in(&g));
        }
    }
}
