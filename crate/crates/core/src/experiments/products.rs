use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{graph6, to_value, Check, ExperimentError, ExperimentReport};
use crate::graph::{
    cartesian_product, generate, has_universal_vertex, is_connected, is_tree, min_degree, strong_product,
    tensor_product, FamilySpec, Graph, GraphError,
};
use crate::pursuit::{verdict, Verdict};

pub const BASE_GRAPHS: [FamilySpec; 8] = [
    FamilySpec::Path(2),
    FamilySpec::Path(3),
    FamilySpec::Path(4),
    FamilySpec::Cycle(3),
    FamilySpec::Cycle(4),
    FamilySpec::Cycle(5),
    FamilySpec::Complete(4),
    FamilySpec::Star(3),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Cartesian,
    Tensor,
    Strong,
}

impl ProductKind {
    pub const ALL: [ProductKind; 3] = [ProductKind::Cartesian, ProductKind::Tensor, ProductKind::Strong];

    pub fn apply(self, g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
        match self {
            ProductKind::Cartesian => cartesian_product(g, h),
            ProductKind::Tensor => tensor_product(g, h),
            ProductKind::Strong => strong_product(g, h),
        }
    }
}

/// Verdict implied by the factors, for connected factors of order at least
/// 2. Cartesian products of two trees have no prediction.
pub fn predicted_verdict(kind: ProductKind, g: &Graph, h: &Graph) -> Result<Option<Verdict>, ExperimentError> {
    Ok(match kind {
        ProductKind::Cartesian if is_tree(g) && is_tree(h) => None,
        ProductKind::Cartesian => Some(Verdict::Stalemate),
        ProductKind::Tensor => {
            if verdict(g)? == Verdict::KillerWin || verdict(h)? == Verdict::KillerWin {
                Some(Verdict::KillerWin)
            } else {
                Some(Verdict::Stalemate)
            }
        }
        ProductKind::Strong => {
            if has_universal_vertex(g).is_some() && has_universal_vertex(h).is_some() {
                Some(Verdict::CopWin)
            } else {
                Some(Verdict::Stalemate)
            }
        }
    })
}

#[derive(Serialize)]
struct ProductCase {
    left: String,
    right: String,
    product: ProductKind,
    order: usize,
    graph6: Option<String>,
    skipped: bool,
    verdict: Option<Verdict>,
    predicted: Option<Verdict>,
    agrees: Option<bool>,
}

/// Solves every product of every ordered pair of `bases` and compares the
/// verdict with [`predicted_verdict`].
pub fn experiment_products(bases: &[FamilySpec]) -> Result<ExperimentReport, ExperimentError> {
    let clock = Instant::now();
    let graphs = bases
        .iter()
        .map(|spec| {
            let g = generate(*spec)?;
            if g.order() < 2 || !is_connected(&g) {
                return Err(ExperimentError::InvalidParams(format!("{spec} must be connected with 2+ vertices")));
            }
            Ok((spec.to_string(), g))
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let jobs: Vec<(usize, usize, ProductKind)> = (0..graphs.len())
        .flat_map(|i| (0..graphs.len()).flat_map(move |j| ProductKind::ALL.map(|k| (i, j, k))))
        .collect();
    let cases = jobs
        .into_par_iter()
        .map(|(i, j, kind)| {
            let (left, g) = &graphs[i];
            let (right, h) = &graphs[j];
            let product = kind.apply(g, h)?;
            let skipped = min_degree(&product) == 0;
            let (solved, predicted) = if skipped {
                (None, None)
            } else {
                (Some(verdict(&product)?), predicted_verdict(kind, g, h)?)
            };
            Ok(ProductCase {
                left: left.clone(),
                right: right.clone(),
                product: kind,
                order: product.order(),
                graph6: graph6(&product),
                skipped,
                verdict: solved,
                predicted,
                agrees: predicted.map(|p| Some(p) == solved),
            })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;

    let compared = cases.iter().filter(|c| c.agrees.is_some()).count();
    let agreements = cases.iter().filter(|c| c.agrees == Some(true)).count();
    let mut report = ExperimentReport::new(
        "products",
        json!({ "bases": graphs.iter().map(|(name, _)| name.clone()).collect::<Vec<_>>() }),
        None,
    );
    report.aggregate = json!({
        "cases": cases.len(),
        "skipped": cases.iter().filter(|c| c.skipped).count(),
        "unpredicted": cases.iter().filter(|c| !c.skipped && c.predicted.is_none()).count(),
        "compared": compared,
        "agreements": agreements,
        "agreement_rate": if compared > 0 { agreements as f64 / compared as f64 } else { 1.0 },
    });
    report.checks.push(Check::new(
        "predictions-agree",
        agreements == compared,
        format!("{agreements}/{compared} agree"),
    ));
    report.cases = cases.iter().map(to_value).collect();
    report.duration = clock.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: FamilySpec) -> Graph {
        generate(spec).unwrap()
    }

    #[test]
    fn prediction_examples() {
        let c3 = g(FamilySpec::Cycle(3));
        let c4 = g(FamilySpec::Cycle(4));
        let p2 = g(FamilySpec::Path(2));
        let star = g(FamilySpec::Star(3));
        let cases = [
            (ProductKind::Cartesian, &c3, &p2, Verdict::Stalemate),
            (ProductKind::Tensor, &c4, &p2, Verdict::KillerWin),
            (ProductKind::Strong, &star, &p2, Verdict::CopWin),
        ];
        for (kind, a, b, expected) in cases {
            assert_eq!(predicted_verdict(kind, a, b).unwrap(), Some(expected));
            assert_eq!(verdict(&kind.apply(a, b).unwrap()).unwrap(), expected);
        }
        assert_eq!(predicted_verdict(ProductKind::Cartesian, &p2, &star).unwrap(), None);
    }
}
