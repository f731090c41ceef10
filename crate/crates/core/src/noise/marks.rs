use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite mark space: `K` marks with strictly positive weights realizing a
/// finite intensity measure, so that integrals over marks are plain sums.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkSpace {
    weights: Vec<f64>,
}

impl MarkSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMarkSpace("no marks given".into()));
        }
        for (k, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::InvalidMarkSpace(format!(
                    "weight of mark {k} is {w}"
                )));
            }
        }
        Ok(MarkSpace { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self, mark: usize) -> f64 {
        self.weights[mark]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}
