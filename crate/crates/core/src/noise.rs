//! Channel likelihood of a perceived sentence given an intended one,
//! modelled as the exponentiated negative word edit distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::EditDistance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    beta: f64,
}

impl NoiseParams {
    pub fn new(beta: f64) -> Result<Self> {
        if beta > 0.0 && beta.is_finite() {
            Ok(Self { beta })
        } else {
            Err(Error::InvalidBeta(beta))
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self { beta: 1.0 }
    }
}

/// Unnormalized log likelihood `-beta * d`.
///
/// No normalizing constant over alternative sentences is applied; any such
/// constant is absorbed by the regression that consumes the posteriors.
pub fn log_likelihood(d: EditDistance, params: &NoiseParams) -> f64 {
    -params.beta * d.value() as f64
}
