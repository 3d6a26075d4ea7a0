use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{graph6, to_value, Check, ExperimentError, ExperimentReport};
use crate::graph::{dominated_nonadjacent_pair, generate, has_universal_vertex, min_degree, FamilySpec, RandomSeed};
use crate::pursuit::{verdict, Verdict};

/// Stalemate fraction required at desk scale (`n >= 200`).
pub const STALEMATE_FRACTION_BOUND: f64 = 0.9;
const BOUND_MIN_ORDER: usize = 200;

#[derive(Debug, Clone, Serialize)]
struct Sample {
    index: usize,
    p: f64,
    family: String,
    graph6: Option<String>,
    excluded: bool,
    verdict: Option<Verdict>,
    certificate: bool,
    violation: bool,
}

/// Draws `samples` graphs `G(n, p)` with `p` uniform in
/// `[n^-c, 1 - n^-c]` and compares the exact verdict with the stalemate
/// certificate (no universal vertex and no dominated non-adjacent pair).
/// Sample `i` uses stream `i` of the master seed, so results do not depend
/// on scheduling.
pub fn experiment_random_stalemate(
    n: usize,
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<ExperimentReport, ExperimentError> {
    if n < 2 || !(c > 0.0 && c < 1.0) || samples == 0 {
        return Err(ExperimentError::InvalidParams(format!(
            "need n >= 2, 0 < c < 1, samples >= 1; got n={n}, c={c}, samples={samples}"
        )));
    }
    let clock = Instant::now();
    let low = (n as f64).powf(-c);
    let high = 1.0 - low;
    let records = (0..samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let p = if low < high { rng.gen_range(low..=high) } else { 0.5 };
            let spec = FamilySpec::Gnp(n, p, RandomSeed(rng.gen()));
            let graph = generate(spec)?;
            let certificate = has_universal_vertex(&graph).is_none() && dominated_nonadjacent_pair(&graph).is_none();
            let excluded = min_degree(&graph) == 0;
            let verdict = if excluded { None } else { Some(verdict(&graph)?) };
            Ok(Sample {
                index,
                p,
                family: spec.to_string(),
                graph6: graph6(&graph),
                excluded,
                verdict,
                certificate,
                violation: certificate && verdict.is_some_and(|v| v != Verdict::Stalemate),
            })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;

    let solved = records.iter().filter(|r| !r.excluded).count();
    let count = |v: Verdict| records.iter().filter(|r| r.verdict == Some(v)).count();
    let stalemate = count(Verdict::Stalemate);
    let fraction = if solved > 0 { stalemate as f64 / solved as f64 } else { 0.0 };
    let violations = records.iter().filter(|r| r.violation).count();

    let mut report = ExperimentReport::new("random-stalemate", json!({ "n": n, "c": c, "samples": samples }), Some(seed));
    report.aggregate = json!({
        "p_range": [low, high],
        "excluded": samples - solved,
        "solved": solved,
        "stalemate": stalemate,
        "cop_win": count(Verdict::CopWin),
        "killer_win": count(Verdict::KillerWin),
        "stalemate_fraction": fraction,
        "certificate_holds": records.iter().filter(|r| r.certificate).count(),
        "certificate_violations": violations,
    });
    report.checks.push(Check::new(
        "certificate-implies-stalemate",
        violations == 0,
        format!("{violations} violations in {solved} solved samples"),
    ));
    if n >= BOUND_MIN_ORDER {
        report.checks.push(Check::new(
            "stalemate-fraction",
            fraction >= STALEMATE_FRACTION_BOUND,
            format!("{fraction} (bound {STALEMATE_FRACTION_BOUND})"),
        ));
    }
    report.cases = records.iter().map(to_value).collect();
    report.duration = clock.elapsed();
    Ok(report)
}
