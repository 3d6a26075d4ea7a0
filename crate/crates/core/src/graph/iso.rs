//! Brute-force canonical forms for very small graphs.

use super::{is_connected, Graph, GraphError};

/// Largest order accepted by [`canonical_pair_mask`].
pub const MAX_CANONICAL_ORDER: usize = 8;

/// Pair mask (as in [`Graph::from_pair_mask`]) of the smallest relabeling.
/// Two graphs of equal order are isomorphic iff their canonical masks agree.
pub fn canonical_pair_mask(graph: &Graph) -> Result<u64, GraphError> {
    let n = graph.order();
    if n > MAX_CANONICAL_ORDER {
        return Err(GraphError::TooLarge(format!(
            "canonical form needs order <= {MAX_CANONICAL_ORDER}, got {n}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        best = best.min(pair_mask_under(graph, &perm));
        if !next_permutation(&mut perm) {
            return Ok(best);
        }
    }
}

fn pair_mask_under(graph: &Graph, perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut mask = 0;
    for (u, v) in graph.edges() {
        let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
        // index of (a, b) in the row-major upper triangle
        let bit = a * (2 * n - a - 1) / 2 + (b - a - 1);
        mask |= 1 << bit;
    }
    mask
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
        return false;
    };
    let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, ordered by canonical mask.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n > 7 {
        return Err(GraphError::TooLarge(format!("class enumeration needs order <= 7, got {n}")));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let mut masks = std::collections::BTreeSet::new();
    for mask in 0..1u64 << pairs {
        let g = Graph::from_pair_mask(n, mask);
        if is_connected(&g) {
            masks.insert(canonical_pair_mask(&g)?);
        }
    }
    Ok(masks.into_iter().map(|m| Graph::from_pair_mask(n, m)).collect())
}
