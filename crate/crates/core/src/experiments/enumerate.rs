use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{graph6, to_value, Check, ExperimentError, ExperimentReport};
use crate::graph::{dominated_nonadjacent_pair, has_universal_vertex, is_bipartite, is_connected, is_star, Graph};
use crate::pursuit::{verdict, Verdict};

pub const MAX_ENUMERATION_ORDER: usize = 7;
/// Counterexamples listed per law; all are counted.
const LISTED_VIOLATIONS: usize = 20;

/// Which laws to check on every enumerated graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationChecks {
    /// No killer-win graph has exactly one or two triangles.
    pub triangle_law: bool,
    /// A graph that is not stalemate has a universal vertex or a dominated
    /// non-adjacent pair.
    pub certificate: bool,
    /// A connected bipartite graph is cop-win iff it is a star.
    pub bipartite_star: bool,
}

impl Default for EnumerationChecks {
    fn default() -> Self {
        Self {
            triangle_law: true,
            certificate: true,
            bipartite_star: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Law {
    #[serde(rename = "triangle-law")]
    Triangles,
    Certificate,
    BipartiteStar,
}

const LAWS: [Law; 3] = [Law::Triangles, Law::Certificate, Law::BipartiteStar];

#[derive(Debug, Clone, Default)]
struct Tally {
    graphs: u64,
    excluded: u64,
    by_verdict: [u64; 3],
    triangle_free_killer_win: u64,
    triangle_free_example: Option<u64>,
    violation_counts: [u64; 3],
    /// Smallest masks per law.
    violations: Vec<(Law, u64, Verdict, u64)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.graphs += other.graphs;
        self.excluded += other.excluded;
        for i in 0..3 {
            self.by_verdict[i] += other.by_verdict[i];
            self.violation_counts[i] += other.violation_counts[i];
        }
        self.triangle_free_killer_win += other.triangle_free_killer_win;
        self.triangle_free_example = match (self.triangle_free_example, other.triangle_free_example) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.violations.extend(other.violations);
        self.trim();
        self
    }

    fn trim(&mut self) {
        self.violations.sort_unstable_by_key(|&(law, mask, _, _)| (law, mask));
        let mut kept = [0usize; 3];
        self.violations.retain(|&(law, ..)| {
            kept[law as usize] += 1;
            kept[law as usize] <= LISTED_VIOLATIONS
        });
    }
}

fn verdict_slot(v: Verdict) -> usize {
    match v {
        Verdict::KillerWin => 0,
        Verdict::Stalemate => 1,
        Verdict::CopWin => 2,
    }
}

fn triangles(rows: &[u64]) -> u64 {
    let mut count = 0;
    for (u, &row) in rows.iter().enumerate() {
        let mut later = row & !((2u64 << u) - 1);
        while later != 0 {
            let v = later.trailing_zeros() as usize;
            later &= later - 1;
            count += (row & rows[v] & !((2u64 << v) - 1)).count_ones() as u64;
        }
    }
    count
}

fn tally_one(n: usize, mask: u64, checks: EnumerationChecks, tally: &mut Tally) -> Result<(), ExperimentError> {
    let graph = Graph::from_pair_mask(n, mask);
    tally.graphs += 1;
    if (0..n).any(|v| graph.degree(v) == 0) {
        tally.excluded += 1;
        return Ok(());
    }
    let outcome = verdict(&graph)?;
    tally.by_verdict[verdict_slot(outcome)] += 1;
    let triangle_count = triangles(&graph.bit_rows());
    let mut broken = Vec::new();
    if outcome == Verdict::KillerWin {
        if triangle_count == 0 {
            tally.triangle_free_killer_win += 1;
            tally.triangle_free_example = Some(tally.triangle_free_example.map_or(mask, |m| m.min(mask)));
        }
        if checks.triangle_law && (triangle_count == 1 || triangle_count == 2) {
            broken.push(Law::Triangles);
        }
    }
    if checks.certificate
        && outcome != Verdict::Stalemate
        && has_universal_vertex(&graph).is_none()
        && dominated_nonadjacent_pair(&graph).is_none()
    {
        broken.push(Law::Certificate);
    }
    if checks.bipartite_star
        && is_connected(&graph)
        && is_bipartite(&graph)
        && (outcome == Verdict::CopWin) != is_star(&graph)
    {
        broken.push(Law::BipartiteStar);
    }
    for law in broken {
        tally.violation_counts[law as usize] += 1;
        tally.violations.push((law, mask, outcome, triangle_count));
        if tally.violations.len() > 4 * LISTED_VIOLATIONS {
            tally.trim();
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct OrderRow {
    n: usize,
    graphs: u64,
    excluded: u64,
    killer_win: u64,
    stalemate: u64,
    cop_win: u64,
    triangle_free_killer_win: u64,
    triangle_free_killer_win_example: Option<String>,
}

#[derive(Serialize)]
struct Violation {
    law: Law,
    n: usize,
    graph6: Option<String>,
    verdict: Verdict,
    triangles: u64,
}

/// Runs `checks` on every labeled graph with `2..=n_max` vertices.
/// Graphs with an isolated vertex are counted as excluded.
pub fn experiment_enumerate(n_max: usize, checks: EnumerationChecks) -> Result<ExperimentReport, ExperimentError> {
    if !(2..=MAX_ENUMERATION_ORDER).contains(&n_max) {
        return Err(ExperimentError::InvalidParams(format!(
            "n_max must lie in 2..={MAX_ENUMERATION_ORDER}, got {n_max}"
        )));
    }
    let clock = Instant::now();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut totals = [0u64; 3];
    for n in 2..=n_max {
        let pairs = n * (n - 1) / 2;
        let tally = (0..1u64 << pairs)
            .into_par_iter()
            .try_fold(Tally::default, |mut tally, mask| {
                tally_one(n, mask, checks, &mut tally)?;
                Ok::<_, ExperimentError>(tally)
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
        for (total, count) in totals.iter_mut().zip(tally.violation_counts) {
            *total += count;
        }
        for &(law, mask, verdict, triangles) in &tally.violations {
            violations.push(Violation {
                law,
                n,
                graph6: graph6(&Graph::from_pair_mask(n, mask)),
                verdict,
                triangles,
            });
        }
        rows.push(OrderRow {
            n,
            graphs: tally.graphs,
            excluded: tally.excluded,
            killer_win: tally.by_verdict[0],
            stalemate: tally.by_verdict[1],
            cop_win: tally.by_verdict[2],
            triangle_free_killer_win: tally.triangle_free_killer_win,
            triangle_free_killer_win_example: tally
                .triangle_free_example
                .and_then(|m| graph6(&Graph::from_pair_mask(n, m))),
        });
    }

    let mut report = ExperimentReport::new("enumerate", json!({ "n_max": n_max, "checks": checks }), None);
    let enabled = [checks.triangle_law, checks.certificate, checks.bipartite_star];
    for (i, law) in LAWS.iter().enumerate() {
        if enabled[i] {
            let name = to_value(law).as_str().unwrap().to_owned();
            report.checks.push(Check::new(name, totals[i] == 0, format!("{} violations", totals[i])));
        }
    }
    report.aggregate = json!({
        "violations": {
            "triangle-law": totals[0],
            "certificate": totals[1],
            "bipartite-star": totals[2],
        },
        "counterexamples": violations.iter().map(to_value).collect::<Vec<_>>(),
    });
    report.cases = rows.iter().map(to_value).collect();
    report.duration = clock.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, triangle_count, FamilySpec, RandomSeed};

    #[test]
    fn bit_parallel_triangles_agree() {
        for seed in 0..30 {
            let g = generate(FamilySpec::Gnp(12, 0.5, RandomSeed(seed))).unwrap();
            assert_eq!(triangles(&g.bit_rows()), triangle_count(&g));
        }
    }

    #[test]
    fn small_enumeration() {
        let report = experiment_enumerate(4, EnumerationChecks::default()).unwrap();
        assert!(report.passed());
        let four = &report.cases[2];
        assert_eq!(four["graphs"], 64);
        assert!(four["triangle_free_killer_win"].as_u64().unwrap() > 0);
        assert!(experiment_enumerate(8, EnumerationChecks::default()).is_err());
    }
}
