//! Structural predicates used as solver certificates and family checks.

use serde::Serialize;

use super::Graph;

/// Non-adjacent vertices with `N(dominated) ⊆ N(dominator)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DominatedPair {
    pub dominated: usize,
    pub dominator: usize,
}

/// Lowest-index vertex adjacent to every other vertex, if any.
pub fn has_universal_vertex(graph: &Graph) -> Option<usize> {
    let n = graph.order();
    (0..n).find(|&v| graph.degree(v) == n - 1)
}

/// The lexicographically smallest `(dominated, dominator)` pair of distinct,
/// non-adjacent vertices with `N(dominated) ⊆ N(dominator)`.
pub fn dominated_nonadjacent_pair(graph: &Graph) -> Option<DominatedPair> {
    let n = graph.order();
    for dominated in 0..n {
        for dominator in 0..n {
            if dominator == dominated || graph.has_edge(dominated, dominator) {
                continue;
            }
            if is_subset(graph.neighbors(dominated), graph.neighbors(dominator)) {
                return Some(DominatedPair {
                    dominated,
                    dominator,
                });
            }
        }
    }
    None
}

fn is_subset(small: &[usize], large: &[usize]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < large.len() && large[j] < x {
            j += 1;
        }
        if j == large.len() || large[j] != x {
            return false;
        }
    }
    true
}

pub fn min_degree(graph: &Graph) -> usize {
    (0..graph.order()).map(|v| graph.degree(v)).min().unwrap_or(0)
}

pub fn max_degree(graph: &Graph) -> usize {
    (0..graph.order()).map(|v| graph.degree(v)).max().unwrap_or(0)
}

/// Components as sorted vertex lists, ordered by their smallest vertex.
pub fn connected_components(graph: &Graph) -> Vec<Vec<usize>> {
    let n = graph.order();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut component = vec![root];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &u in graph.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    component.push(u);
                    stack.push(u);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

pub fn is_connected(graph: &Graph) -> bool {
    connected_components(graph).len() <= 1
}

pub fn is_bipartite(graph: &Graph) -> bool {
    let n = graph.order();
    let mut side: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(false);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let s = side[v].unwrap();
            for &u in graph.neighbors(v) {
                match side[u] {
                    None => {
                        side[u] = Some(!s);
                        stack.push(u);
                    }
                    Some(t) if t == s => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

pub fn is_tree(graph: &Graph) -> bool {
    graph.order() >= 1 && graph.size() + 1 == graph.order() && is_connected(graph)
}

/// `K_{1,k}` for some `k >= 1` (so `P2` counts as a star).
pub fn is_star(graph: &Graph) -> bool {
    let n = graph.order();
    n >= 2
        && graph.size() == n - 1
        && has_universal_vertex(graph).is_some()
        && (n == 2 || (0..n).filter(|&v| graph.degree(v) == 1).count() == n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec, RandomSeed};

    fn family(spec: FamilySpec) -> Graph {
        generate(spec).unwrap()
    }

    #[test]
    fn universal_vertex_examples() {
        assert_eq!(has_universal_vertex(&family(FamilySpec::King(3, 3))), Some(4));
        assert_eq!(has_universal_vertex(&family(FamilySpec::King(4, 4))), None);
        assert_eq!(has_universal_vertex(&family(FamilySpec::Star(5))), Some(0));
    }

    #[test]
    fn dominated_pair_examples() {
        assert_eq!(
            dominated_nonadjacent_pair(&family(FamilySpec::Path(4))),
            Some(DominatedPair { dominated: 0, dominator: 2 })
        );
        assert_eq!(dominated_nonadjacent_pair(&family(FamilySpec::Cycle(5))), None);
        assert_eq!(
            dominated_nonadjacent_pair(&family(FamilySpec::Cycle(4))),
            Some(DominatedPair { dominated: 0, dominator: 2 })
        );
    }

    #[test]
    fn dominated_pair_matches_brute_force() {
        for seed in 0..50 {
            let g = family(FamilySpec::Gnp(8, 0.4, RandomSeed(seed)));
            let brute = (0..8)
                .flat_map(|v| (0..8).map(move |u| (v, u)))
                .find(|&(v, u)| {
                    u != v
                        && !g.has_edge(u, v)
                        && g.neighbors(v).iter().all(|w| g.neighbors(u).contains(w))
                })
                .map(|(dominated, dominator)| DominatedPair { dominated, dominator });
            assert_eq!(dominated_nonadjacent_pair(&g), brute);
        }
    }

    #[test]
    fn shape_predicates() {
        assert!(is_star(&family(FamilySpec::Star(3))));
        assert!(is_star(&family(FamilySpec::Path(2))));
        assert!(is_star(&family(FamilySpec::Path(3))));
        assert!(!is_star(&family(FamilySpec::Path(4))));
        assert!(!is_star(&family(FamilySpec::Cycle(3))));
        assert!(is_tree(&family(FamilySpec::Path(5))));
        assert!(!is_tree(&family(FamilySpec::Cycle(5))));
        assert!(is_bipartite(&family(FamilySpec::Cycle(6))));
        assert!(!is_bipartite(&family(FamilySpec::Cycle(5))));
        assert_eq!(min_degree(&family(FamilySpec::Star(4))), 1);
        assert_eq!(max_degree(&family(FamilySpec::Star(4))), 4);
        let two = family(FamilySpec::DisjointCycles(2, 3));
        assert_eq!(connected_components(&two), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(!is_connected(&two));
    }
}
