//! Cop versus gambler: the gambler lands on vertex `v` with probability
//! `p_v` every round, independently of the past, and is caught when it lands
//! on the cop.
//!
//! * expected capture time: `J(v) = 1/p_v`, `H(v,u) = 1 + (1-p_v)(T(u) + n(v,u))`
//! * evasion within `m` rounds: `J(v) = (1-p_v)^m`,
//!   `H(v,u) = (1-p_v) e(m-1-n(v,u), u)`, with `e(m, v) = 1` for `m <= 0`
//! * `k` cops: the same capture-time rule on the joint-position supergraph,
//!   with `p` replaced by the mass of the occupied vertex set.

use serde::Serialize;
use thiserror::Error;

use crate::distribution::{Distribution, DistributionError};
use crate::framework::{scale, solve_priority, Direction, FrameworkError, NeighborOracle, UpdateRule, ValuePolicy};
use crate::graph::Graph;

/// Largest supergraph accepted by [`multicop_capture_time`].
pub const MAX_SUPERGRAPH_STATES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GamblerError {
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("distribution has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the distribution puts no mass anywhere")]
    AllZeroDistribution,
    #[error("expected {expected} distribution layers, got {got}")]
    LayerMismatch { expected: usize, got: usize },
    #[error("({from}, {to}) is not an edge")]
    NotAnEdge { from: usize, to: usize },
    #[error("cannot parse delays: {0}")]
    DelayParse(String),
    #[error("need at least one cop")]
    NoCops,
    #[error("supergraph too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
}

fn check_len(graph: &Graph, dist: &Distribution) -> Result<(), GamblerError> {
    if dist.len() != graph.order() {
        return Err(GamblerError::LengthMismatch {
            expected: graph.order(),
            got: dist.len(),
        });
    }
    Ok(())
}

/// Extra turns `n(v, u)` spent crossing each directed edge; zero by default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDelays {
    /// Aligned with `graph.neighbors(v)`.
    per_vertex: Vec<Vec<u32>>,
    graph: Graph,
}

impl EdgeDelays {
    pub fn zero(graph: &Graph) -> Self {
        Self {
            per_vertex: (0..graph.order()).map(|v| vec![0; graph.degree(v)]).collect(),
            graph: graph.clone(),
        }
    }

    /// Same delay on every directed edge.
    pub fn uniform(graph: &Graph, turns: u32) -> Self {
        let mut delays = Self::zero(graph);
        for row in &mut delays.per_vertex {
            row.fill(turns);
        }
        delays
    }

    pub fn set(&mut self, from: usize, to: usize, turns: u32) -> Result<(), GamblerError> {
        let slot = self.slot(from, to).ok_or(GamblerError::NotAnEdge { from, to })?;
        self.per_vertex[from][slot] = turns;
        Ok(())
    }

    pub fn get(&self, from: usize, to: usize) -> Option<u32> {
        self.slot(from, to).map(|i| self.per_vertex[from][i])
    }

    fn slot(&self, from: usize, to: usize) -> Option<usize> {
        if from >= self.graph.order() {
            return None;
        }
        self.graph.neighbors(from).binary_search(&to).ok()
    }

    /// Parses lines `u v n` setting the delay of the directed edge `u -> v`.
    pub fn parse(graph: &Graph, text: &str) -> Result<Self, GamblerError> {
        let mut delays = Self::zero(graph);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || GamblerError::DelayParse(format!("line {}: `{line}`", i + 1));
            if fields.len() != 3 {
                return Err(bad());
            }
            let u = fields[0].parse().map_err(|_| bad())?;
            let v = fields[1].parse().map_err(|_| bad())?;
            let n = fields[2].parse().map_err(|_| bad())?;
            delays.set(u, v, n)?;
        }
        Ok(delays)
    }

    fn for_graph(&self, graph: &Graph) -> Result<(), GamblerError> {
        if &self.graph != graph {
            return Err(GamblerError::DelayParse("delays belong to a different graph".into()));
        }
        Ok(())
    }
}

/// The base graph with edge delays as payloads.
pub struct DelayedGraph<'a> {
    delays: &'a EdgeDelays,
}

impl NeighborOracle for DelayedGraph<'_> {
    type Payload = u32;

    fn state_count(&self) -> usize {
        self.delays.graph.order()
    }

    fn visit_neighbors(&self, state: usize, visit: &mut dyn FnMut(usize, &u32)) {
        let graph = &self.delays.graph;
        for (&u, n) in graph.neighbors(state).iter().zip(&self.delays.per_vertex[state]) {
            visit(u, n);
        }
    }
}

pub struct CaptureTimeRule<'a> {
    p: &'a [f64],
}

impl UpdateRule<u32> for CaptureTimeRule<'_> {
    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    fn stay_value(&self, v: usize) -> f64 {
        if self.p[v] > 0.0 {
            1.0 / self.p[v]
        } else {
            f64::INFINITY
        }
    }

    fn move_value(&self, v: usize, _u: usize, t: f64, delay: &u32) -> f64 {
        1.0 + scale(1.0 - self.p[v], t + *delay as f64)
    }
}

/// Minimal expected capture time from every start vertex.
///
/// States in a component without gambler mass keep the value `+∞`.
pub fn capture_time(graph: &Graph, dist: &Distribution) -> Result<ValuePolicy, GamblerError> {
    capture_time_delays(graph, dist, &EdgeDelays::zero(graph))
}

pub fn capture_time_delays(
    graph: &Graph,
    dist: &Distribution,
    delays: &EdgeDelays,
) -> Result<ValuePolicy, GamblerError> {
    let (oracle, rule) = capture_time_problem(graph, dist, delays)?;
    Ok(solve_priority(&oracle, &rule)?)
}

/// The validated oracle and update rule behind [`capture_time_delays`], for
/// use with any of the framework solvers.
pub fn capture_time_problem<'a>(
    graph: &Graph,
    dist: &'a Distribution,
    delays: &'a EdgeDelays,
) -> Result<(DelayedGraph<'a>, CaptureTimeRule<'a>), GamblerError> {
    check_len(graph, dist)?;
    delays.for_graph(graph)?;
    if dist.probs().iter().all(|&p| p == 0.0) {
        return Err(GamblerError::AllZeroDistribution);
    }
    Ok((DelayedGraph { delays }, CaptureTimeRule { p: dist.probs() }))
}

/// `values[m][v]`: minimal probability that the gambler survives `m` rounds
/// against a cop starting at `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvasionTable {
    pub values: Vec<Vec<f64>>,
}

impl EvasionTable {
    /// `e(m, v)`, equal to 1 for `m <= 0`.
    pub fn at(&self, m: i64, v: usize) -> f64 {
        if m <= 0 {
            1.0
        } else {
            self.values[m as usize][v]
        }
    }

    pub fn rounds(&self) -> usize {
        self.values.len() - 1
    }
}

/// Evasion probabilities for `0..=m` rounds left.
///
/// Layer `m` only reads layers below `m`, so each layer is a direct pass
/// over the vertices.
pub fn evasion(
    graph: &Graph,
    dist: &Distribution,
    m: usize,
    delays: &EdgeDelays,
) -> Result<EvasionTable, GamblerError> {
    check_len(graph, dist)?;
    delays.for_graph(graph)?;
    let p = dist.probs();
    Ok(evasion_layers(graph, delays, m, |v, rounds| {
        let survive = 1.0 - p[v];
        (survive.powi(rounds as i32), survive)
    }))
}

/// Builds the table given `stay_and_step(v, rounds) = (J(v), 1 - p_{v,rounds})`.
fn evasion_layers<F>(graph: &Graph, delays: &EdgeDelays, m: usize, stay_and_step: F) -> EvasionTable
where
    F: Fn(usize, usize) -> (f64, f64),
{
    let n = graph.order();
    let mut table = EvasionTable {
        values: vec![vec![1.0; n]],
    };
    for rounds in 1..=m {
        let layer: Vec<f64> = (0..n)
            .map(|v| {
                let (stay, survive) = stay_and_step(v, rounds);
                graph
                    .neighbors(v)
                    .iter()
                    .zip(&delays.per_vertex[v])
                    .map(|(&u, &delay)| survive * table.at(rounds as i64 - 1 - delay as i64, u))
                    .fold(stay, f64::min)
            })
            .collect();
        table.values.push(layer);
    }
    table
}

/// Gambler distributions that depend on the rounds left: `layer(i)` is used
/// when the cop has `i` rounds left, `1 <= i <= m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeVaryingDistribution {
    layers: Vec<Distribution>,
}

impl TimeVaryingDistribution {
    /// `layers[0]` is the distribution for 1 round left.
    pub fn new(layers: Vec<Distribution>) -> Self {
        Self { layers }
    }

    pub fn constant(dist: &Distribution, m: usize) -> Self {
        Self::new(vec![dist.clone(); m])
    }

    pub fn layer(&self, rounds_left: usize) -> &Distribution {
        &self.layers[rounds_left - 1]
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

/// Evasion against a time-varying gambler:
/// `J(v) = ∏_{i=1..m} (1 - p_{v,i})`, `H(v,u) = (1 - p_{v,m}) e(m-1-n(v,u), u)`.
pub fn evasion_time_varying(
    graph: &Graph,
    dist: &TimeVaryingDistribution,
    m: usize,
    delays: &EdgeDelays,
) -> Result<EvasionTable, GamblerError> {
    if dist.len() != m {
        return Err(GamblerError::LayerMismatch {
            expected: m,
            got: dist.len(),
        });
    }
    for layer in &dist.layers {
        check_len(graph, layer)?;
    }
    delays.for_graph(graph)?;
    // prefix[i][v] = ∏_{j=1..i} (1 - p_{v,j})
    let n = graph.order();
    let mut prefix = vec![vec![1.0; n]];
    for i in 1..=m {
        let row: Vec<f64> = (0..n).map(|v| prefix[i - 1][v] * (1.0 - dist.layer(i)[v])).collect();
        prefix.push(row);
    }
    Ok(evasion_layers(graph, delays, m, |v, rounds| {
        (prefix[rounds][v], 1.0 - dist.layer(rounds)[v])
    }))
}

/// Joint positions of `k` cops; each cop moves to an adjacent vertex or
/// stays. Tuple `(v_0, .., v_{k-1})` has id `Σ v_i n^(k-1-i)`.
pub struct CopSupergraph<'a> {
    graph: &'a Graph,
    cops: usize,
    states: usize,
}

impl<'a> CopSupergraph<'a> {
    pub fn new(graph: &'a Graph, cops: usize) -> Result<Self, GamblerError> {
        if cops == 0 {
            return Err(GamblerError::NoCops);
        }
        let states = u32::try_from(cops)
            .ok()
            .and_then(|k| graph.order().checked_pow(k))
            .filter(|&s| s <= MAX_SUPERGRAPH_STATES)
            .ok_or_else(|| {
                GamblerError::TooLarge(format!(
                    "{}^{cops} joint positions exceed {MAX_SUPERGRAPH_STATES}",
                    graph.order()
                ))
            })?;
        Ok(Self { graph, cops, states })
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        encode_tuple(tuple, self.graph.order())
    }

    pub fn decode(&self, id: usize) -> Vec<usize> {
        decode_tuple(id, self.graph.order(), self.cops)
    }
}

pub fn encode_tuple(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &v| acc * n + v)
}

pub fn decode_tuple(mut id: usize, n: usize, k: usize) -> Vec<usize> {
    let mut tuple = vec![0; k];
    for slot in tuple.iter_mut().rev() {
        *slot = id % n;
        id /= n;
    }
    tuple
}

impl NeighborOracle for CopSupergraph<'_> {
    type Payload = ();

    fn state_count(&self) -> usize {
        self.states
    }

    /// Neighbors in increasing id order, excluding the all-stay move.
    fn visit_neighbors(&self, state: usize, visit: &mut dyn FnMut(usize, &())) {
        let n = self.graph.order();
        let tuple = self.decode(state);
        let options: Vec<Vec<usize>> = tuple
            .iter()
            .map(|&v| {
                let mut closed = self.graph.neighbors(v).to_vec();
                let pos = closed.binary_search(&v).unwrap_err();
                closed.insert(pos, v);
                closed
            })
            .collect();
        let mut digits = vec![0usize; self.cops];
        loop {
            let id = digits
                .iter()
                .zip(&options)
                .fold(0, |acc, (&d, opts)| acc * n + opts[d]);
            if id != state {
                visit(id, &());
            }
            // odometer, last coordinate fastest
            let mut i = self.cops;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < options[i].len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }
}

struct MultiCopRule {
    /// Gambler mass on the set of occupied vertices, per joint state.
    mass: Vec<f64>,
}

impl UpdateRule<()> for MultiCopRule {
    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    fn stay_value(&self, s: usize) -> f64 {
        if self.mass[s] > 0.0 {
            1.0 / self.mass[s]
        } else {
            f64::INFINITY
        }
    }

    fn move_value(&self, s: usize, _: usize, t: f64, _: &()) -> f64 {
        1.0 + scale(1.0 - self.mass[s], t)
    }
}

/// Capture-time values over joint cop positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiCopPolicy {
    pub cops: usize,
    pub order: usize,
    pub policy: ValuePolicy,
}

impl MultiCopPolicy {
    pub fn value(&self, tuple: &[usize]) -> f64 {
        assert_eq!(tuple.len(), self.cops);
        self.policy.values[encode_tuple(tuple, self.order)]
    }
}

/// Minimal expected capture time for `k` cops from every joint position.
/// A vertex occupied by several cops counts its mass once.
pub fn multicop_capture_time(
    graph: &Graph,
    dist: &Distribution,
    cops: usize,
) -> Result<MultiCopPolicy, GamblerError> {
    check_len(graph, dist)?;
    if dist.probs().iter().all(|&p| p == 0.0) {
        return Err(GamblerError::AllZeroDistribution);
    }
    let supergraph = CopSupergraph::new(graph, cops)?;
    let n = graph.order();
    let mut occupied = vec![false; n];
    let mass = (0..supergraph.states)
        .map(|id| {
            let tuple = supergraph.decode(id);
            occupied.fill(false);
            let mut total = 0.0;
            for v in tuple {
                if !occupied[v] {
                    occupied[v] = true;
                    total += dist[v];
                }
            }
            total
        })
        .collect();
    let rule = MultiCopRule { mass };
    Ok(MultiCopPolicy {
        cops,
        order: n,
        policy: solve_priority(&supergraph, &rule)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::Action;
    use crate::graph::{generate, FamilySpec};

    fn path(n: usize) -> Graph {
        generate(FamilySpec::Path(n)).unwrap()
    }

    fn dist(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn capture_time_examples() {
        let t = capture_time(&path(2), &dist(&[0.5, 0.5])).unwrap();
        assert_eq!(t.values, vec![2.0, 2.0]);
        let t = capture_time(&path(3), &dist(&[0.5, 0.0, 0.5])).unwrap();
        assert_eq!(t.values, vec![2.0, 3.0, 2.0]);
        assert_eq!(t.actions[1], Action::MoveTo(0));
        let t = capture_time(&Graph::empty(1), &dist(&[1.0])).unwrap();
        assert_eq!(t.values, vec![1.0]);
    }

    #[test]
    fn capture_time_errors() {
        assert!(matches!(
            capture_time(&path(3), &dist(&[0.5, 0.5])),
            Err(GamblerError::LengthMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn delays_examples() {
        let g = path(3);
        let d = dist(&[0.5, 0.0, 0.5]);
        let zero = capture_time_delays(&g, &d, &EdgeDelays::zero(&g)).unwrap();
        assert_eq!(zero, capture_time(&g, &d).unwrap());

        let p2 = path(2);
        let slow = EdgeDelays::uniform(&p2, 5);
        let t = capture_time_delays(&p2, &dist(&[0.5, 0.5]), &slow).unwrap();
        assert_eq!(t.values, vec![2.0, 2.0]);

        let mut delays = EdgeDelays::zero(&g);
        delays.set(1, 0, 2).unwrap();
        delays.set(1, 2, 2).unwrap();
        let t = capture_time_delays(&g, &d, &delays).unwrap();
        assert_eq!(t.values[1], 5.0);
        assert_eq!(delays.get(0, 1), Some(0));
        assert_eq!(delays.set(0, 2, 1), Err(GamblerError::NotAnEdge { from: 0, to: 2 }));
    }

    #[test]
    fn delays_file() {
        let g = path(3);
        let delays = EdgeDelays::parse(&g, "1 0 2\n# c\n1 2 3\n").unwrap();
        assert_eq!(delays.get(1, 2), Some(3));
        assert_eq!(delays.get(2, 1), Some(0));
        assert!(EdgeDelays::parse(&g, "0 2 1").is_err());
        assert!(EdgeDelays::parse(&g, "0 1").is_err());
    }

    #[test]
    fn evasion_examples() {
        let g = path(2);
        let d = dist(&[0.5, 0.5]);
        let e = evasion(&g, &d, 4, &EdgeDelays::zero(&g)).unwrap();
        for m in 0..=4 {
            for v in 0..2 {
                assert_eq!(e.at(m, v), 0.5f64.powi(m as i32));
            }
        }
        let e = evasion(&g, &d, 2, &EdgeDelays::uniform(&g, 1)).unwrap();
        assert_eq!(e.at(2, 0), 0.25);
        let e = evasion(&path(3), &dist(&[0.2, 0.3, 0.5]), 0, &EdgeDelays::zero(&path(3))).unwrap();
        assert_eq!(e.values, vec![vec![1.0; 3]]);
    }

    #[test]
    fn time_varying_examples() {
        let g = path(2);
        let zero = EdgeDelays::zero(&g);
        let tv = TimeVaryingDistribution::new(vec![dist(&[0.0, 1.0]), dist(&[1.0, 0.0])]);
        let e = evasion_time_varying(&g, &tv, 2, &zero).unwrap();
        assert_eq!(e.at(2, 0), 0.0);
        let d = dist(&[0.3, 0.7]);
        let tv = TimeVaryingDistribution::constant(&d, 1);
        let e = evasion_time_varying(&g, &tv, 1, &zero).unwrap();
        assert!((e.at(1, 0) - 0.7).abs() < 1e-15 && (e.at(1, 1) - 0.3).abs() < 1e-15);
        assert_eq!(
            evasion_time_varying(&g, &tv, 3, &zero),
            Err(GamblerError::LayerMismatch { expected: 3, got: 1 })
        );
    }

    #[test]
    fn two_cops_on_claw() {
        let star = generate(FamilySpec::Star(3)).unwrap();
        let result = multicop_capture_time(&star, &dist(&[0.25; 4]), 2).unwrap();
        assert!((result.value(&[0, 0]) - 2.5).abs() < 1e-12);
        assert!((result.value(&[0, 1]) - 2.0).abs() < 1e-12);
        assert!((result.value(&[2, 3]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn supergraph_neighbors_and_guard() {
        let g = path(3);
        let sg = CopSupergraph::new(&g, 2).unwrap();
        let mut seen = Vec::new();
        sg.visit_neighbors(sg.encode(&[0, 1]), &mut |u, _| seen.push(sg.decode(u)));
        assert_eq!(
            seen,
            vec![vec![0, 0], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]]
        );
        assert!(matches!(
            CopSupergraph::new(&Graph::empty(101), 3),
            Err(GamblerError::TooLarge(_))
        ));
        assert!(matches!(CopSupergraph::new(&g, 0), Err(GamblerError::NoCops)));
        assert_eq!(decode_tuple(encode_tuple(&[2, 0, 1], 3), 3, 3), vec![2, 0, 1]);
    }

    #[test]
    fn full_mass_tuple_is_one() {
        let g = path(2);
        let result = multicop_capture_time(&g, &dist(&[0.5, 0.5]), 2).unwrap();
        assert_eq!(result.value(&[0, 1]), 1.0);
        assert_eq!(result.value(&[1, 0]), 1.0);
    }
}
