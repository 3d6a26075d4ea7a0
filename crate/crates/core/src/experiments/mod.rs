//! Reproducible experiment runners with structured reports.

mod constructions;
mod enumerate;
mod products;
mod random;

pub use constructions::experiment_constructions;
pub use enumerate::{experiment_enumerate, EnumerationChecks, MAX_ENUMERATION_ORDER};
pub use products::{experiment_products, predicted_verdict, ProductKind, BASE_GRAPHS};
pub use random::experiment_random_stalemate;

use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::graph::{emit_graph6, Graph, GraphError};
use crate::pursuit::SolveError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// A named pass/fail verdict against an expected bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// The wall-clock duration is kept out of the serialized form so reports
/// from identical runs compare byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub experiment: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub cases: Vec<Value>,
    pub aggregate: Value,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub duration: Duration,
}

impl ExperimentReport {
    fn new(experiment: &str, params: Value, seed: Option<u64>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            experiment: experiment.into(),
            params,
            seed,
            cases: Vec::new(),
            aggregate: Value::Null,
            checks: Vec::new(),
            duration: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("records serialize")
}

/// graph6 string when the graph is small enough for the short form.
fn graph6(graph: &Graph) -> Option<String> {
    emit_graph6(graph).ok()
}
