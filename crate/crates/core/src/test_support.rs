use crate::graph::{Graph, Vertex};
use crate::rng::rng_from_seed;
use rand::Rng;

/// Erdos-Renyi `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::new(n);
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn perfect_matching(pairs: usize, n: usize) -> Graph {
    Graph::from_edges(n, (0..pairs as Vertex).map(|i| (2 * i, 2 * i + 1))).unwrap()
}
