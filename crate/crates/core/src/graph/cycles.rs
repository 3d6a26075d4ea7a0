use super::{Graph, GraphError};

/// Largest graph accepted by [`count_cycles`].
pub const MAX_CYCLE_GRAPH_ORDER: usize = 64;

/// Counts cycles of exactly `len` vertices, each cycle once regardless of
/// starting point and orientation.
///
/// Each cycle is found from its lowest vertex `s`, walking only through
/// vertices above `s`, and kept only when its second vertex is smaller than
/// its last one.
pub fn count_cycles(graph: &Graph, len: usize) -> Result<u64, GraphError> {
    if !(3..=12).contains(&len) {
        return Err(GraphError::InvalidParams(format!(
            "cycle length must be in 3..=12, got {len}"
        )));
    }
    if graph.order() > MAX_CYCLE_GRAPH_ORDER {
        return Err(GraphError::TooLarge(format!(
            "cycle counting supports at most {MAX_CYCLE_GRAPH_ORDER} vertices, got {}",
            graph.order()
        )));
    }
    let rows = graph.bit_rows();
    let mut count = 0;
    let mut path = Vec::with_capacity(len);
    for start in 0..graph.order() {
        path.clear();
        path.push(start);
        extend(&rows, start, len, &mut path, 1u64 << start, &mut count);
    }
    Ok(count)
}

fn extend(rows: &[u64], start: usize, len: usize, path: &mut Vec<usize>, used: u64, count: &mut u64) {
    let last = *path.last().unwrap();
    if path.len() == len {
        if rows[last] >> start & 1 == 1 && path[1] < last {
            *count += 1;
        }
        return;
    }
    // Only vertices above `start` that are not yet on the path.
    let above = if start == 63 { 0 } else { !0u64 << (start + 1) };
    let mut candidates = rows[last] & above & !used;
    while candidates != 0 {
        let next = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        path.push(next);
        extend(rows, start, len, path, used | 1 << next, count);
        path.pop();
    }
}

/// Number of triangles, for graphs of any order.
pub fn triangle_count(graph: &Graph) -> u64 {
    let mut count = 0;
    for u in 0..graph.order() {
        let nu = graph.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = graph.neighbors(v);
            // sorted-list intersection restricted to w > v
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            count += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};

    fn family(spec: FamilySpec) -> Graph {
        generate(spec).unwrap()
    }

    /// Counts cycles by enumerating every vertex sequence and dividing out the
    /// `2 * len` rotations and reflections of each cycle.
    fn brute_force_cycles(g: &Graph, len: usize) -> u64 {
        fn walk(g: &Graph, len: usize, path: &mut Vec<usize>, total: &mut u64) {
            if path.len() == len {
                if g.has_edge(*path.last().unwrap(), path[0]) {
                    *total += 1;
                }
                return;
            }
            for v in 0..g.order() {
                if !path.contains(&v) && g.has_edge(*path.last().unwrap(), v) {
                    path.push(v);
                    walk(g, len, path, total);
                    path.pop();
                }
            }
        }
        let mut total = 0;
        for s in 0..g.order() {
            walk(g, len, &mut vec![s], &mut total);
        }
        total / (2 * len as u64)
    }

    #[test]
    fn examples() {
        assert_eq!(count_cycles(&family(FamilySpec::Cycle(5)), 5).unwrap(), 1);
        assert_eq!(count_cycles(&family(FamilySpec::PentagonPlus), 3).unwrap(), 3);
        assert_eq!(count_cycles(&family(FamilySpec::TriangleChain(7)), 3).unwrap(), 7);
        assert_eq!(count_cycles(&family(FamilySpec::Complete(4)), 4).unwrap(), 3);
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..30 {
            let g = family(FamilySpec::Gnp(7, 0.5, crate::graph::RandomSeed(seed)));
            for len in 3..=7 {
                assert_eq!(count_cycles(&g, len).unwrap(), brute_force_cycles(&g, len));
            }
            assert_eq!(triangle_count(&g), brute_force_cycles(&g, 3));
        }
    }

    #[test]
    fn family_cycle_counts() {
        for n in 4..=8 {
            for m in 1..=4 {
                let disjoint = family(FamilySpec::DisjointCycles(m, n));
                assert_eq!(count_cycles(&disjoint, n).unwrap(), m as u64);
                let petal = family(FamilySpec::Petal(m, n));
                assert_eq!(count_cycles(&petal, n).unwrap(), m as u64, "petal({m},{n})");
            }
        }
        for m in 1..=3 {
            let g = family(FamilySpec::OddGirthKillerWin(m));
            for k in 1..=m {
                assert_eq!(count_cycles(&g, 2 * k + 1).unwrap(), 0);
            }
            assert!(count_cycles(&g, 2 * m + 3).unwrap() > 0);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let g = family(FamilySpec::Cycle(5));
        assert!(count_cycles(&g, 2).is_err());
        assert!(count_cycles(&g, 13).is_err());
        assert!(matches!(
            count_cycles(&Graph::empty(65), 3),
            Err(GraphError::TooLarge(_))
        ));
    }
}
