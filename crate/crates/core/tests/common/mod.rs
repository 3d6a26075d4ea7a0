#![allow(dead_code)]

use pursuit_core::distribution::Distribution;
use pursuit_core::graph::{generate, is_connected, FamilySpec, Graph, RandomSeed};
use rand::Rng;
use rand_distr::Exp1;
use rand_chacha::ChaCha8Rng;

/// Connected `G(n, p)` sample, redrawn until connected.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let g = generate(FamilySpec::Gnp(n, p, RandomSeed(rng.gen()))).unwrap();
        if is_connected(&g) {
            return g;
        }
    }
}

/// Random simplex point; each entry is zero with probability `zero_rate`,
/// but never all of them.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize, zero_rate: f64) -> Distribution {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| if rng.gen::<f64>() < zero_rate { 0.0 } else { rng.sample::<f64, _>(Exp1) })
            .collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            return Distribution::new(w.iter().map(|x| x / total).collect()).unwrap();
        }
    }
}

/// Survival probability of the gambler over `m` rounds by explicit search
/// of the cop's choices: the gambler hops, then the cop stays or steps to a
/// neighbor.
pub fn evasion_game_tree(graph: &Graph, p: &[f64], m: usize, v: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut best = evasion_game_tree(graph, p, m - 1, v);
    for &u in graph.neighbors(v) {
        best = best.min(evasion_game_tree(graph, p, m - 1, u));
    }
    (1.0 - p[v]) * best
}

pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(move |mask| Graph::from_pair_mask(n, mask))
}
