use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Seed for the `Gnp` generator.
///
/// The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`; one
/// `f64` draw (53-bit uniform in `[0, 1)`) is consumed per vertex pair `(u, v)`,
/// `u < v`, in lexicographic order, and the edge is present iff the draw is
/// below `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// A named graph family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    /// `K_{1,leaves}` with the center at vertex 0.
    Star(usize),
    Complete(usize),
    Grid(usize, usize),
    King(usize, usize),
    /// A 5-cycle `0..5` plus vertex 5 joined to cycle vertices 1, 2, 3, 4.
    PentagonPlus,
    /// `k` triangles in a strip: path `0..k+2` plus the chords `(i, i+2)`.
    TriangleChain(usize),
    /// Two layers `A_i = i`, `B_i = N + i` over `N = 2m+3` clusters, with
    /// every vertex of cluster `i` joined to every vertex of cluster `i+1`.
    OddGirthKillerWin(usize),
    /// `CirculantCluster(n, m)`: `u ~ v` iff `u - v ≡ ±1 (mod 2m+3)`.
    CirculantCluster(usize, usize),
    /// `Petal(m, n)`: `m` copies of `C_n` sharing vertex 0, which is also
    /// adjacent to every vertex of every copy.
    Petal(usize, usize),
    /// `m` disjoint copies of `C_n`.
    DisjointCycles(usize, usize),
    Gnp(usize, f64, RandomSeed),
}

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidParams(msg.into())
}

/// Builds the member of a graph family.
pub fn generate(spec: FamilySpec) -> Result<Graph, GraphError> {
    use FamilySpec::*;
    let graph = match spec {
        Path(n) => {
            if n == 0 {
                return Err(invalid("path needs n >= 1"));
            }
            Graph::from_valid_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        Cycle(n) => {
            if n < 3 {
                return Err(invalid(format!("cycle needs n >= 3, got {n}")));
            }
            Graph::from_valid_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Star(leaves) => {
            if leaves == 0 {
                return Err(invalid("star needs at least one leaf"));
            }
            Graph::from_valid_edges(leaves + 1, (1..=leaves).map(|i| (0, i)))
        }
        Complete(n) => {
            if n == 0 {
                return Err(invalid("complete graph needs n >= 1"));
            }
            Graph::from_valid_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        Grid(r, c) => grid(r, c, false)?,
        King(r, c) => grid(r, c, true)?,
        PentagonPlus => Graph::from_valid_edges(
            6,
            (0..5).map(|i| (i, (i + 1) % 5)).chain((1..5).map(|i| (5, i))),
        ),
        TriangleChain(k) => {
            if k == 0 {
                return Err(invalid("triangle chain needs k >= 1"));
            }
            let n = k + 2;
            Graph::from_valid_edges(
                n,
                (1..n).map(|i| (i - 1, i)).chain((2..n).map(|i| (i - 2, i))),
            )
        }
        OddGirthKillerWin(m) => {
            if m == 0 {
                return Err(invalid("odd-girth construction needs m >= 1"));
            }
            let clusters = 2 * m + 3;
            let mut edges = Vec::with_capacity(4 * clusters);
            for i in 0..clusters {
                let j = (i + 1) % clusters;
                let (a_i, b_i, a_j, b_j) = (i, clusters + i, j, clusters + j);
                edges.extend([(a_i, b_j), (a_i, a_j), (b_i, b_j), (b_i, a_j)]);
            }
            Graph::from_valid_edges(2 * clusters, edges)
        }
        CirculantCluster(n, m) => {
            if m == 0 {
                return Err(invalid("circulant cluster needs m >= 1"));
            }
            if n < 4 * m + 6 {
                return Err(invalid(format!(
                    "circulant cluster needs n >= 4m+6 = {}, got {n}",
                    4 * m + 6
                )));
            }
            let modulus = 2 * m + 3;
            let edges = (0..n).flat_map(|u| {
                (u + 1..n).filter_map(move |v| {
                    let r = (v - u) % modulus;
                    (r == 1 || r == modulus - 1).then_some((u, v))
                })
            });
            Graph::from_valid_edges(n, edges)
        }
        Petal(m, n) => {
            if m == 0 || n < 3 {
                return Err(invalid(format!("petal needs m >= 1 and n >= 3, got ({m}, {n})")));
            }
            let per_copy = n - 1;
            let mut edges = Vec::new();
            for copy in 0..m {
                let base = 1 + copy * per_copy;
                for i in 0..per_copy {
                    edges.push((0, base + i));
                    if i > 0 {
                        edges.push((base + i - 1, base + i));
                    }
                }
            }
            Graph::from_valid_edges(1 + m * per_copy, edges)
        }
        DisjointCycles(m, n) => {
            if m == 0 || n < 3 {
                return Err(invalid(format!(
                    "disjoint cycles need m >= 1 and n >= 3, got ({m}, {n})"
                )));
            }
            let edges = (0..m).flat_map(|copy| {
                let base = copy * n;
                (0..n).map(move |i| (base + i, base + (i + 1) % n))
            });
            Graph::from_valid_edges(m * n, edges)
        }
        Gnp(n, p, seed) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("edge probability {p} outside [0, 1]")));
            }
            let mut rng = seed.rng();
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_valid_edges(n, edges)
        }
    };
    Ok(graph)
}

fn grid(rows: usize, cols: usize, king: bool) -> Result<Graph, GraphError> {
    if rows == 0 || cols == 0 {
        return Err(invalid(format!("grid needs positive dimensions, got {rows}x{cols}")));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
                if king {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r + 1, c + 1)));
                    }
                    if c > 0 {
                        edges.push((id(r, c), id(r + 1, c - 1)));
                    }
                }
            }
        }
    }
    Ok(Graph::from_valid_edges(rows * cols, edges))
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Path(n) => write!(f, "path:{n}"),
            Cycle(n) => write!(f, "cycle:{n}"),
            Star(k) => write!(f, "star:{k}"),
            Complete(n) => write!(f, "complete:{n}"),
            Grid(r, c) => write!(f, "grid:{r},{c}"),
            King(r, c) => write!(f, "king:{r},{c}"),
            PentagonPlus => write!(f, "pentagon-plus"),
            TriangleChain(k) => write!(f, "triangle-chain:{k}"),
            OddGirthKillerWin(m) => write!(f, "odd-girth:{m}"),
            CirculantCluster(n, m) => write!(f, "circulant:{n},{m}"),
            Petal(m, n) => write!(f, "petal:{m},{n}"),
            DisjointCycles(m, n) => write!(f, "disjoint-cycles:{m},{n}"),
            Gnp(n, p, seed) => write!(f, "gnp:{n},{p},{}", seed.0),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = GraphError;

    /// Parses `name[:a,b,..]`, e.g. `cycle:4`, `grid:2,3`, `gnp:10,0.4,7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = match s.split_once(':') {
            Some((name, args)) => (name.trim(), args.split(',').map(str::trim).collect()),
            None => (s.trim(), Vec::new()),
        };
        let want = |count: usize| -> Result<(), GraphError> {
            if args.len() == count {
                Ok(())
            } else {
                Err(invalid(format!(
                    "family `{name}` takes {count} argument(s), got {}",
                    args.len()
                )))
            }
        };
        let int = |i: usize| -> Result<usize, GraphError> {
            args[i]
                .parse()
                .map_err(|_| invalid(format!("bad integer `{}` for `{name}`", args[i])))
        };
        use FamilySpec::*;
        let spec = match name.to_ascii_lowercase().as_str() {
            "path" => {
                want(1)?;
                Path(int(0)?)
            }
            "cycle" => {
                want(1)?;
                Cycle(int(0)?)
            }
            "star" => {
                want(1)?;
                Star(int(0)?)
            }
            "complete" => {
                want(1)?;
                Complete(int(0)?)
            }
            "grid" => {
                want(2)?;
                Grid(int(0)?, int(1)?)
            }
            "king" => {
                want(2)?;
                King(int(0)?, int(1)?)
            }
            "pentagon-plus" => {
                want(0)?;
                PentagonPlus
            }
            "triangle-chain" => {
                want(1)?;
                TriangleChain(int(0)?)
            }
            "odd-girth" => {
                want(1)?;
                OddGirthKillerWin(int(0)?)
            }
            "circulant" => {
                want(2)?;
                CirculantCluster(int(0)?, int(1)?)
            }
            "petal" => {
                want(2)?;
                Petal(int(0)?, int(1)?)
            }
            "disjoint-cycles" => {
                want(2)?;
                DisjointCycles(int(0)?, int(1)?)
            }
            "gnp" => {
                want(3)?;
                let p = args[1]
                    .parse()
                    .map_err(|_| invalid(format!("bad probability `{}`", args[1])))?;
                let seed = args[2]
                    .parse()
                    .map_err(|_| invalid(format!("bad seed `{}`", args[2])))?;
                Gnp(int(0)?, p, RandomSeed(seed))
            }
            other => return Err(invalid(format!("unknown family `{other}`"))),
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_cycles, is_bipartite};

    fn edge_set(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    #[test]
    fn cycle_four() {
        let g = generate(FamilySpec::Cycle(4)).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(edge_set(&g), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn pentagon_plus_counts() {
        let g = generate(FamilySpec::PentagonPlus).unwrap();
        assert_eq!((g.order(), g.size()), (6, 9));
        assert_eq!(count_cycles(&g, 3).unwrap(), 3);
        assert!(!g.has_edge(5, 0));
    }

    #[test]
    fn odd_girth_one() {
        let g = generate(FamilySpec::OddGirthKillerWin(1)).unwrap();
        assert_eq!((g.order(), g.size()), (10, 20));
        assert!(!is_bipartite(&g));
        assert_eq!(count_cycles(&g, 3).unwrap(), 0);
    }

    #[test]
    fn petal_single_copy() {
        let g = generate(FamilySpec::Petal(1, 4)).unwrap();
        assert_eq!((g.order(), g.size()), (4, 5));
    }

    #[test]
    fn closed_form_counts() {
        for n in 3..10 {
            let g = generate(FamilySpec::Cycle(n)).unwrap();
            assert_eq!((g.order(), g.size()), (n, n));
            let g = generate(FamilySpec::Path(n)).unwrap();
            assert_eq!((g.order(), g.size()), (n, n - 1));
            let g = generate(FamilySpec::Complete(n)).unwrap();
            assert_eq!(g.size(), n * (n - 1) / 2);
            let g = generate(FamilySpec::Star(n)).unwrap();
            assert_eq!((g.order(), g.size()), (n + 1, n));
            let g = generate(FamilySpec::TriangleChain(n)).unwrap();
            assert_eq!((g.order(), g.size()), (n + 2, 2 * n + 1));
        }
        for r in 1..6 {
            for c in 1..6 {
                let g = generate(FamilySpec::Grid(r, c)).unwrap();
                assert_eq!(g.size(), r * (c - 1) + c * (r - 1));
                let g = generate(FamilySpec::King(r, c)).unwrap();
                assert_eq!(
                    g.size(),
                    r * (c - 1) + c * (r - 1) + 2 * (r - 1) * (c - 1)
                );
            }
        }
        for m in 1..5 {
            let g = generate(FamilySpec::OddGirthKillerWin(m)).unwrap();
            assert_eq!((g.order(), g.size()), (2 * (2 * m + 3), 4 * (2 * m + 3)));
            for n in 3..9 {
                let g = generate(FamilySpec::Petal(m, n)).unwrap();
                assert_eq!((g.order(), g.size()), (1 + m * (n - 1), m * (2 * n - 3)));
                let g = generate(FamilySpec::DisjointCycles(m, n)).unwrap();
                assert_eq!((g.order(), g.size()), (m * n, m * n));
            }
        }
    }

    #[test]
    fn circulant_edge_count_matches_class_products() {
        for m in 1..4 {
            let modulus = 2 * m + 3;
            for n in 4 * m + 6..4 * m + 14 {
                let g = generate(FamilySpec::CirculantCluster(n, m)).unwrap();
                let class_size = |r: usize| (0..n).filter(|v| v % modulus == r).count();
                let expected: usize = (0..modulus)
                    .map(|r| class_size(r) * class_size((r + 1) % modulus))
                    .sum();
                assert_eq!(g.size(), expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn invalid_params() {
        assert!(generate(FamilySpec::Cycle(2)).is_err());
        assert!(generate(FamilySpec::CirculantCluster(9, 1)).is_err());
        assert!(generate(FamilySpec::Gnp(5, 1.5, RandomSeed(0))).is_err());
        assert!(generate(FamilySpec::Grid(0, 3)).is_err());
    }

    #[test]
    fn gnp_is_reproducible() {
        let a = generate(FamilySpec::Gnp(30, 0.3, RandomSeed(11))).unwrap();
        let b = generate(FamilySpec::Gnp(30, 0.3, RandomSeed(11))).unwrap();
        let c = generate(FamilySpec::Gnp(30, 0.3, RandomSeed(12))).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(generate(FamilySpec::Gnp(8, 1.0, RandomSeed(3))).unwrap().size(), 28);
        assert_eq!(generate(FamilySpec::Gnp(8, 0.0, RandomSeed(3))).unwrap().size(), 0);
    }

    #[test]
    fn family_names_round_trip() {
        for text in ["cycle:4", "grid:2,3", "pentagon-plus", "gnp:10,0.4,7", "petal:2,5"] {
            let spec: FamilySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("cycle".parse::<FamilySpec>().is_err());
        assert!("blob:3".parse::<FamilySpec>().is_err());
    }
}
