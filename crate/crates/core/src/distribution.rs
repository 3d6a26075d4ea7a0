//! Probability distributions over vertices and their file format.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Allowed deviation of the total mass from 1.
pub const SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("distribution is empty")]
    Empty,
    #[error("probability at vertex {index} is {value}; entries must be finite and non-negative")]
    BadEntry { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    BadSum { sum: f64 },
    #[error("cannot parse distribution: {0}")]
    Parse(String),
}

/// A probability vector over the vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Validates without renormalizing.
    pub fn new(p: Vec<f64>) -> Result<Self, DistributionError> {
        if p.is_empty() {
            return Err(DistributionError::Empty);
        }
        if let Some((index, &value)) = p
            .iter()
            .enumerate()
            .find(|(_, &x)| !x.is_finite() || x < 0.0)
        {
            return Err(DistributionError::BadEntry { index, value });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(DistributionError::BadSum { sum });
        }
        Ok(Self(p))
    }

    pub fn uniform(n: usize) -> Result<Self, DistributionError> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Parses either a JSON document `{"p": [..]}` or one probability per
    /// line (blank lines and `#` comments ignored).
    pub fn parse(text: &str) -> Result<Self, DistributionError> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            #[derive(Deserialize)]
            struct Doc {
                p: Vec<f64>,
            }
            let doc: Doc =
                serde_json::from_str(text).map_err(|e| DistributionError::Parse(e.to_string()))?;
            return Self::new(doc.p);
        }
        let mut p = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let value = line
                .parse::<f64>()
                .map_err(|_| DistributionError::Parse(format!("line {}: `{line}`", i + 1)))?;
            p.push(value);
        }
        Self::new(p)
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, v: usize) -> &f64 {
        &self.0[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Distribution::new(vec![0.5, 0.5]).is_ok());
        assert!(Distribution::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(matches!(Distribution::new(vec![0.5, 0.6]), Err(DistributionError::BadSum { .. })));
        assert!(matches!(
            Distribution::new(vec![1.5, -0.5]),
            Err(DistributionError::BadEntry { index: 1, .. })
        ));
        assert!(Distribution::new(vec![f64::NAN, 1.0]).is_err());
        assert_eq!(Distribution::new(vec![]), Err(DistributionError::Empty));
    }

    #[test]
    fn parsing_both_forms() {
        let a = Distribution::parse("{\"p\": [0.25, 0.75]}").unwrap();
        let b = Distribution::parse("0.25\n\n# comment\n0.75\n").unwrap();
        assert_eq!(a, b);
        assert!(Distribution::parse("0.25\nx\n").is_err());
        assert!(Distribution::parse("{\"q\": [1]}").is_err());
    }
}
