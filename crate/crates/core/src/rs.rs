//! Ruzsa-Szemeredi graphs: unions of pairwise edge-disjoint induced matchings.

use alloc::vec::Vec;

use crate::graph::{Graph, Matching};
use crate::matching::is_induced_matching;

/// An `(r, t)`-RS graph on `n` vertices given by its `t` matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsGraph {
    pub n: usize,
    pub r: usize,
    pub matchings: Vec<Matching>,
}

impl RsGraph {
    pub fn t(&self) -> usize {
        self.matchings.len()
    }

    /// Union of all matchings; multiplicity 2 would mean two matchings share an edge.
    pub fn union_graph(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for m in &self.matchings {
            for &(u, v) in m.edges() {
                // Endpoints are range-checked by validation; skip bad ones here.
                let _ = g.add_edge(u, v);
            }
        }
        g
    }
}

/// Whether every matching has `r` edges, lies in `[0, n)`, is disjoint from
/// the others and is induced in the union graph.
pub fn validate_rs_graph(rs: &RsGraph) -> bool {
    let in_range = rs
        .matchings
        .iter()
        .all(|m| m.len() == rs.r && m.is_vertex_disjoint() && m.edges().iter().all(|&(u, v)| u != v && (v as usize) < rs.n));
    if !in_range {
        return false;
    }
    let g = rs.union_graph();
    if g.edges_with_multiplicity().any(|(_, m)| m > 1) {
        return false;
    }
    rs.matchings.iter().all(|m| is_induced_matching(&g, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_matching_is_rs() {
        let m = Matching::new([(0, 1), (2, 3), (4, 5)]).unwrap();
        assert!(validate_rs_graph(&RsGraph { n: 6, r: 3, matchings: vec![m] }));
    }

    #[test]
    fn k4_is_not_rs() {
        let ms = vec![
            Matching::new([(0, 1), (2, 3)]).unwrap(),
            Matching::new([(0, 2), (1, 3)]).unwrap(),
            Matching::new([(0, 3), (1, 2)]).unwrap(),
        ];
        assert!(!validate_rs_graph(&RsGraph { n: 4, r: 2, matchings: ms }));
    }

    #[test]
    fn rejects_shared_edges_and_wrong_sizes() {
        let a = Matching::new([(0, 1)]).unwrap();
        assert!(!validate_rs_graph(&RsGraph { n: 2, r: 1, matchings: vec![a.clone(), a.clone()] }));
        assert!(!validate_rs_graph(&RsGraph { n: 2, r: 2, matchings: vec![a.clone()] }));
        assert!(!validate_rs_graph(&RsGraph { n: 1, r: 1, matchings: vec![a] }));
    }
}
