//! Finite simple undirected graphs.
//!
//! Vertices are dense indices `0..n`. Neighbor lists are kept sorted so that
//! every iteration over a graph is deterministic, which the solvers rely on
//! for their tie-breaking rules.

mod cycles;
mod families;
mod formats;
mod iso;
mod predicates;
mod products;

pub use cycles::{count_cycles, triangle_count, MAX_CYCLE_GRAPH_ORDER};
pub use families::{generate, FamilySpec, RandomSeed};
pub use formats::{emit_edge_list, emit_graph6, parse_edge_list, parse_graph6, EdgeListParse};
pub use iso::{canonical_pair_mask, connected_graphs, MAX_CANONICAL_ORDER};
pub use predicates::{
    connected_components, dominated_nonadjacent_pair, has_universal_vertex, is_bipartite,
    is_connected, is_star, is_tree, max_degree, min_degree, DominatedPair,
};
pub use products::{cartesian_product, strong_product, tensor_product, MAX_PRODUCT_ORDER};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    Index { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph6 format error: {0}")]
    Format(String),
    #[error("graph too large: {0}")]
    TooLarge(String),
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::Index { vertex: w, order: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adjacency })
    }

    /// Edge construction for internal generators whose edges are known valid.
    pub(crate) fn from_valid_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, edges).expect("generator produced an invalid edge")
    }

    /// Builds a graph from the bits of an upper-triangle adjacency mask, with
    /// pairs ordered `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut edges = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        Self::from_valid_edges(n, edges)
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Degrees sorted in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees
    }

    /// The image of this graph under `perm`, where vertex `v` becomes
    /// `perm[v]`. Panics if `perm` is not a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order(), "permutation length mismatch");
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            assert!(p < perm.len() && !seen[p], "not a permutation");
            seen[p] = true;
        }
        Graph::from_valid_edges(
            self.order(),
            self.edges().map(|(u, v)| (perm[u], perm[v])),
        )
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order();
        Graph::from_valid_edges(
            shift + other.order(),
            self.edges()
                .chain(other.edges().map(|(u, v)| (u + shift, v + shift))),
        )
    }

    /// Adjacency rows as bitmasks. Only valid for graphs with at most 64
    /// vertices.
    pub(crate) fn bit_rows(&self) -> Vec<u64> {
        debug_assert!(self.order() <= 64);
        self.adjacency
            .iter()
            .map(|list| list.iter().fold(0u64, |acc, &v| acc | 1 << v))
            .collect()
    }
}
