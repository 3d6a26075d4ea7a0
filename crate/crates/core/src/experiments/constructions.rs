use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::{graph6, to_value, Check, ExperimentError, ExperimentReport};
use crate::graph::{count_cycles, generate, is_bipartite, FamilySpec};
use crate::pursuit::{verdict, Verdict};

#[derive(Debug, Clone, Serialize)]
struct Row {
    group: &'static str,
    family: String,
    graph6: Option<String>,
    expected: Verdict,
    verdict: Verdict,
    /// `(length, expected count, actual count)`
    cycles: Option<(usize, u64, u64)>,
    /// Odd girth lower bound, with whether the graph is non-bipartite and
    /// free of shorter odd cycles.
    odd_girth: Option<(usize, bool)>,
    passed: bool,
}

struct Expectation {
    group: &'static str,
    spec: FamilySpec,
    expected: Verdict,
    cycles: Option<(usize, u64)>,
    odd_girth: Option<usize>,
}

fn row(e: Expectation) -> Result<Row, ExperimentError> {
    let graph = generate(e.spec)?;
    let solved = verdict(&graph)?;
    let cycles = match e.cycles {
        Some((len, want)) => Some((len, want, count_cycles(&graph, len)?)),
        None => None,
    };
    let odd_girth = match e.odd_girth {
        Some(girth) => {
            let mut clean = !is_bipartite(&graph);
            for len in (3..girth).step_by(2) {
                clean &= count_cycles(&graph, len)? == 0;
            }
            Some((girth, clean))
        }
        None => None,
    };
    let passed = solved == e.expected
        && cycles.is_none_or(|(_, want, got)| want == got)
        && odd_girth.is_none_or(|(_, clean)| clean);
    Ok(Row {
        group: e.group,
        family: e.spec.to_string(),
        graph6: graph6(&graph),
        expected: e.expected,
        verdict: solved,
        cycles,
        odd_girth,
        passed,
    })
}

fn expectations() -> Vec<Expectation> {
    let plain = |group, spec, expected| Expectation {
        group,
        spec,
        expected,
        cycles: None,
        odd_girth: None,
    };
    let mut list = Vec::new();
    for m in 1..=3usize {
        for n in 4..=6usize {
            if (m, n) == (1, 5) {
                continue;
            }
            list.push(Expectation {
                group: "cycles-cop-win",
                spec: FamilySpec::Petal(m, n),
                expected: Verdict::CopWin,
                cycles: Some((n, m as u64)),
                odd_girth: None,
            });
            let killer = if n == 4 {
                FamilySpec::DisjointCycles(m, 4)
            } else {
                FamilySpec::TriangleChain(m + n - 3)
            };
            list.push(Expectation {
                group: "cycles-killer-win",
                spec: killer,
                expected: Verdict::KillerWin,
                cycles: Some((n, m as u64)),
                odd_girth: None,
            });
        }
    }
    for m in 1..=2 {
        list.push(Expectation {
            group: "odd-girth",
            spec: FamilySpec::OddGirthKillerWin(m),
            expected: Verdict::KillerWin,
            cycles: None,
            odd_girth: Some(2 * m + 3),
        });
    }
    for m in 1..=2 {
        list.push(plain("circulant", FamilySpec::CirculantCluster(4 * m + 6, m), Verdict::KillerWin));
    }
    for k in 3..=6 {
        list.push(plain("triangles", FamilySpec::TriangleChain(k), Verdict::KillerWin));
    }
    list.push(plain("triangles", FamilySpec::PentagonPlus, Verdict::KillerWin));
    list.push(plain("retract", FamilySpec::Cycle(4), Verdict::KillerWin));
    list.push(plain("retract", FamilySpec::Path(3), Verdict::CopWin));
    list.push(plain("retract", FamilySpec::Cycle(6), Verdict::Stalemate));
    list.push(plain("retract", FamilySpec::Path(4), Verdict::KillerWin));
    list
}

/// Solves the fixed table of constructions and compares each against its
/// expected verdict and cycle counts.
pub fn experiment_constructions() -> Result<ExperimentReport, ExperimentError> {
    let clock = Instant::now();
    let rows = expectations().into_iter().map(row).collect::<Result<Vec<_>, _>>()?;
    let mut report = ExperimentReport::new("constructions", json!({}), None);
    let failed: Vec<&str> = rows.iter().filter(|r| !r.passed).map(|r| r.family.as_str()).collect();
    report.aggregate = json!({
        "rows": rows.len(),
        "passed": rows.len() - failed.len(),
        "failed": failed,
    });
    for group in ["cycles-cop-win", "cycles-killer-win", "odd-girth", "circulant", "triangles", "retract"] {
        let members: Vec<&Row> = rows.iter().filter(|r| r.group == group).collect();
        let bad: Vec<&str> = members.iter().filter(|r| !r.passed).map(|r| r.family.as_str()).collect();
        let detail = if bad.is_empty() {
            format!("{} rows", members.len())
        } else {
            format!("failed: {}", bad.join(", "))
        };
        report.checks.push(Check::new(group, bad.is_empty(), detail));
    }
    report.cases = rows.iter().map(to_value).collect();
    report.duration = clock.elapsed();
    Ok(report)
}
