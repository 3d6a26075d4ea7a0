//! Cop against a killer who hops to vertex `v` with known probability `p_v`
//! every round. The killer wins by landing on the cop; the cop wins when the
//! killer lands on a neighbor, by moving onto it.
//!
//! Standing at `v` just before a hop, with `n_v` the mass on `N(v)`:
//! `J(v) = n_v / (p_v + n_v)` for staying put and
//! `H(v,u) = T(u) (1 - p_v - n_v) + n_v` for walking on to `u`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::distribution::{Distribution, DistributionError};
use crate::framework::{
    differs, extract_policy_with, solve_priority, Action, Direction, FrameworkError, UpdateRule, ValuePolicy,
};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RandomKillerError {
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("distribution has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex {vertex} is not in a graph of order {order}")]
    BadVertex { vertex: usize, order: usize },
    #[error("policy revisits vertex {vertex} before reaching a stay")]
    CyclicPolicy { vertex: usize },
    #[error("degree must be at least 1, got {0}")]
    BadDegree(usize),
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
}

/// `p_v` and the open-neighborhood mass `n_v` for every vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborhoodMass {
    pub p: Vec<f64>,
    pub n: Vec<f64>,
}

impl NeighborhoodMass {
    pub fn new(graph: &Graph, dist: &Distribution) -> Result<Self, RandomKillerError> {
        if dist.len() != graph.order() {
            return Err(RandomKillerError::LengthMismatch {
                expected: graph.order(),
                got: dist.len(),
            });
        }
        let p = dist.probs().to_vec();
        let n = (0..graph.order())
            .map(|v| graph.neighbors(v).iter().map(|&u| p[u]).sum())
            .collect();
        Ok(Self { p, n })
    }

    pub fn closed(&self, v: usize) -> f64 {
        self.p[v] + self.n[v]
    }

    /// Win and loss probability of staying at `v` forever.
    fn stay_split(&self, v: usize) -> (f64, f64) {
        let closed = self.closed(v);
        if closed > 0.0 {
            (self.n[v] / closed, self.p[v] / closed)
        } else {
            (0.0, 0.0)
        }
    }
}

impl UpdateRule<()> for NeighborhoodMass {
    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn stay_value(&self, v: usize) -> f64 {
        self.stay_split(v).0
    }

    fn move_value(&self, v: usize, _u: usize, t: f64, _: &()) -> f64 {
        t * (1.0 - self.closed(v)) + self.n[v]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeTriple {
    pub win: f64,
    pub lose: f64,
    pub stalemate: f64,
}

/// Optimal cop values and policy. A Stay at a vertex with no killer mass in
/// its closed neighborhood never ends the game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CopValue {
    pub policy: ValuePolicy,
    pub stalemate_terminal: Vec<bool>,
}

/// Maximal cop win probability from every vertex. Among moves with equal
/// win probability the one with the lower losing probability is taken,
/// then the lower vertex id; staying beats any tied move.
pub fn cop_value(graph: &Graph, dist: &Distribution) -> Result<CopValue, RandomKillerError> {
    let mass = NeighborhoodMass::new(graph, dist)?;
    let mut policy = solve_priority(graph, &mass)?;
    let mut lose: Vec<f64> = (0..graph.order()).map(|v| mass.stay_split(v).1).collect();
    policy.actions = extract_policy_with(graph, &mass, &policy.values, |w, candidates| {
        let mut best = candidates[0];
        for &u in &candidates[1..] {
            if lose[u] < lose[best] && differs(lose[u], lose[best]) {
                best = u;
            }
        }
        lose[w] = mass.p[w] + (1.0 - mass.closed(w)) * lose[best];
        best
    })?;
    let stalemate_terminal = (0..graph.order())
        .map(|v| policy.actions[v] == Action::Stay && mass.closed(v) == 0.0)
        .collect();
    Ok(CopValue {
        policy,
        stalemate_terminal,
    })
}

fn check_vertex(graph: &Graph, vertex: usize) -> Result<(), RandomKillerError> {
    if vertex >= graph.order() {
        return Err(RandomKillerError::BadVertex {
            vertex,
            order: graph.order(),
        });
    }
    Ok(())
}

/// Where the cop standing at `start` goes before the first hop: the vertex
/// of `{start} ∪ N(start)` with the highest value, lowest id on ties.
pub fn best_first_position(graph: &Graph, values: &[f64], start: usize) -> Result<usize, RandomKillerError> {
    check_vertex(graph, start)?;
    let mut best = start;
    for &u in graph.neighbors(start) {
        let better = values[u] > values[best] && differs(values[u], values[best]);
        if better || (!differs(values[u], values[best]) && u < best) {
            best = u;
        }
    }
    Ok(best)
}

/// Game value when the cop starts at `start` and moves once before the
/// killer's first hop.
pub fn game_value_from_start(graph: &Graph, dist: &Distribution, start: usize) -> Result<f64, RandomKillerError> {
    check_vertex(graph, start)?;
    let values = cop_value(graph, dist)?.policy.values;
    let v = best_first_position(graph, &values, start)?;
    Ok(values[v])
}

/// Outcome probabilities of following `actions` from `start`.
pub fn evaluate_policy(
    graph: &Graph,
    dist: &Distribution,
    actions: &[Action],
    start: usize,
) -> Result<OutcomeTriple, RandomKillerError> {
    check_vertex(graph, start)?;
    let mass = NeighborhoodMass::new(graph, dist)?;
    let mut triple = OutcomeTriple {
        win: 0.0,
        lose: 0.0,
        stalemate: 0.0,
    };
    let mut survive = 1.0;
    let mut visited = vec![false; graph.order()];
    let mut v = start;
    loop {
        if visited[v] {
            return Err(RandomKillerError::CyclicPolicy { vertex: v });
        }
        visited[v] = true;
        match actions[v] {
            Action::Stay => {
                if mass.closed(v) > 0.0 {
                    let (win, lose) = mass.stay_split(v);
                    triple.win += survive * win;
                    triple.lose += survive * lose;
                } else {
                    triple.stalemate += survive;
                }
                return Ok(triple);
            }
            Action::MoveTo(u) => {
                triple.win += survive * mass.n[v];
                triple.lose += survive * mass.p[v];
                survive *= 1.0 - mass.closed(v);
                v = u;
            }
        }
    }
}

/// `√d / (1 + √d)`.
pub fn sqrt_bound(d: usize) -> Result<f64, RandomKillerError> {
    if d == 0 {
        return Err(RandomKillerError::BadDegree(d));
    }
    let root = (d as f64).sqrt();
    Ok(root / (1.0 + root))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    /// Restart 0 starts from the uniform distribution, the rest from
    /// flat Dirichlet samples.
    pub restarts: usize,
    /// Sweep cap per step size.
    pub iterations: usize,
    /// Mass-transfer sizes, tried in order.
    pub steps: Vec<f64>,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            iterations: 200,
            steps: vec![0.2, 0.05, 0.01, 2e-3, 5e-4, 1e-4],
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), RandomKillerError> {
        if self.restarts == 0 {
            return Err(RandomKillerError::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(RandomKillerError::InvalidConfig("tolerance must be positive".into()));
        }
        if self.steps.iter().any(|&s| !(s > 0.0 && s <= 1.0)) {
            return Err(RandomKillerError::InvalidConfig("steps must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// The killer's best distribution found against a cop starting at
/// `cop_start`, with the resulting game value. Heuristic: the result is
/// the best local optimum over all restarts, not a certified minimum.
pub fn killer_best_distribution(
    graph: &Graph,
    cop_start: usize,
    config: &OptimizerConfig,
) -> Result<(Distribution, f64), RandomKillerError> {
    config.validate()?;
    check_vertex(graph, cop_start)?;
    let n = graph.order();
    let runs: Vec<(Vec<f64>, f64)> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            let start = if restart == 0 {
                vec![1.0 / n as f64; n]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(restart as u64);
                dirichlet(&mut rng, n)
            };
            local_search(graph, cop_start, config, start)
        })
        .collect();
    let (p, value) = runs
        .into_iter()
        .reduce(|best, run| if run.1 < best.1 { run } else { best })
        .expect("at least one restart");
    Ok((Distribution::new(p)?, value))
}

fn dirichlet(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = x.iter().sum();
    for xi in &mut x {
        *xi /= total;
    }
    x
}

fn evaluate(graph: &Graph, cop_start: usize, p: &[f64]) -> f64 {
    let total: f64 = p.iter().sum();
    let dist = Distribution::new(p.iter().map(|x| x / total).collect()).expect("simplex point");
    game_value_from_start(graph, &dist, cop_start).expect("validated inputs")
}

/// First-improvement search over moves of `step` mass from one vertex to
/// another.
fn local_search(graph: &Graph, cop_start: usize, config: &OptimizerConfig, mut p: Vec<f64>) -> (Vec<f64>, f64) {
    let n = p.len();
    let mut value = evaluate(graph, cop_start, &p);
    for &step in &config.steps {
        for _ in 0..config.iterations {
            let mut improved = false;
            for from in 0..n {
                for to in 0..n {
                    if from == to || p[from] <= 0.0 {
                        continue;
                    }
                    let delta = step.min(p[from]);
                    let mut q = p.clone();
                    q[from] -= delta;
                    q[to] += delta;
                    if q[from] < 1e-15 {
                        q[from] = 0.0;
                    }
                    let candidate = evaluate(graph, cop_start, &q);
                    if candidate < value - config.tolerance {
                        p = q;
                        value = candidate;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    let total: f64 = p.iter().sum();
    (p.into_iter().map(|x| x / total).collect(), value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};

    fn dist(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    fn star(d: usize) -> (Graph, Distribution) {
        let root = (d as f64).sqrt();
        let center = 1.0 / (1.0 + root);
        let mut p = vec![(1.0 - center) / d as f64; d + 1];
        p[0] = center;
        (generate(FamilySpec::Star(d)).unwrap(), dist(&p))
    }

    #[test]
    fn cop_value_examples() {
        let (g, d) = star(4);
        for t in cop_value(&g, &d).unwrap().policy.values {
            assert!((t - 2.0 / 3.0).abs() < 1e-12);
        }
        let p2 = generate(FamilySpec::Path(2)).unwrap();
        assert_eq!(cop_value(&p2, &dist(&[0.5, 0.5])).unwrap().policy.values, vec![0.5, 0.5]);
        let p3 = generate(FamilySpec::Path(3)).unwrap();
        let value = cop_value(&p3, &dist(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(value.policy.values, vec![1.0, 1.0, 0.0]);
        assert_eq!(value.policy.actions[0], Action::MoveTo(1));
        assert_eq!(value.stalemate_terminal, vec![false; 3]);
    }

    #[test]
    fn game_value_examples() {
        let (g, d) = star(4);
        assert!((game_value_from_start(&g, &d, 0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let p3 = generate(FamilySpec::Path(3)).unwrap();
        assert_eq!(game_value_from_start(&p3, &dist(&[0.0, 0.0, 1.0]), 0).unwrap(), 1.0);
        assert_eq!(game_value_from_start(&Graph::empty(1), &dist(&[1.0]), 0).unwrap(), 0.0);
        assert!(matches!(
            game_value_from_start(&p3, &dist(&[0.0, 0.0, 1.0]), 3),
            Err(RandomKillerError::BadVertex { vertex: 3, order: 3 })
        ));
    }

    #[test]
    fn evaluate_policy_examples() {
        let p2 = generate(FamilySpec::Path(2)).unwrap();
        let d = dist(&[0.5, 0.5]);
        let value = cop_value(&p2, &d).unwrap();
        let triple = evaluate_policy(&p2, &d, &value.policy.actions, 0).unwrap();
        assert_eq!(triple, OutcomeTriple { win: 0.5, lose: 0.5, stalemate: 0.0 });

        let (g, d) = star(4);
        let value = cop_value(&g, &d).unwrap();
        let triple = evaluate_policy(&g, &d, &value.policy.actions, 0).unwrap();
        assert!((triple.win - 2.0 / 3.0).abs() < 1e-12);
        assert!((triple.lose - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(triple.stalemate, 0.0);

        let p4 = generate(FamilySpec::Path(4)).unwrap();
        let d = dist(&[0.0, 0.0, 0.0, 1.0]);
        let stay = vec![Action::Stay; 4];
        let triple = evaluate_policy(&p4, &d, &stay, 0).unwrap();
        assert_eq!(triple, OutcomeTriple { win: 0.0, lose: 0.0, stalemate: 1.0 });
        assert_eq!(cop_value(&p4, &d).unwrap().policy.values, vec![1.0, 1.0, 1.0, 0.0]);

        let cyclic = vec![Action::MoveTo(1), Action::MoveTo(0), Action::Stay, Action::Stay];
        assert!(matches!(
            evaluate_policy(&p4, &dist(&[0.0, 0.0, 0.5, 0.5]), &cyclic, 0),
            Err(RandomKillerError::CyclicPolicy { vertex: 0 })
        ));
    }

    #[test]
    fn stalemate_terminal_flag() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let value = cop_value(&g, &dist(&[0.0, 0.0, 0.5, 0.5])).unwrap();
        assert_eq!(value.stalemate_terminal, vec![true, true, false, false]);
        assert_eq!(value.policy.values, vec![0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn sqrt_bound_examples() {
        assert!((sqrt_bound(4).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(sqrt_bound(1).unwrap(), 0.5);
        assert_eq!(sqrt_bound(9).unwrap(), 0.75);
        assert_eq!(sqrt_bound(0), Err(RandomKillerError::BadDegree(0)));
    }

    #[test]
    fn killer_optimizer_examples() {
        let config = OptimizerConfig::default();
        let (g, _) = star(4);
        let (d, value) = killer_best_distribution(&g, 0, &config).unwrap();
        assert!((d[0] - 1.0 / 3.0).abs() < 0.02, "center mass {}", d[0]);
        assert!((value - 2.0 / 3.0).abs() < 0.01);

        let p2 = generate(FamilySpec::Path(2)).unwrap();
        let (d, value) = killer_best_distribution(&p2, 0, &config).unwrap();
        assert!((d[0] - 0.5).abs() < 0.02 && (value - 0.5).abs() < 0.01);

        let (d, value) = killer_best_distribution(&Graph::empty(1), 0, &config).unwrap();
        assert_eq!((d.probs(), value), (&[1.0][..], 0.0));

        let bad = OptimizerConfig { restarts: 0, ..config.clone() };
        assert!(killer_best_distribution(&p2, 0, &bad).is_err());
        let again = killer_best_distribution(&g, 0, &config).unwrap();
        assert_eq!(again, killer_best_distribution(&g, 0, &config).unwrap());
    }
}
