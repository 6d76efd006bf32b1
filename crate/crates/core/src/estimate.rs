use serde::{Deserialize, Serialize};

/// How an [`Estimate`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMode {
    /// Full enumeration; no sampling error.
    Exact,
    MonteCarlo,
    /// Deterministic quadrature; `std_error` carries the propagated
    /// quadrature error estimate.
    Quadrature,
}

/// A computed value with its uncertainty and provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub mode: EstimateMode,
}

impl Estimate {
    pub fn exact(value: f64, n_samples: u64) -> Self {
        Estimate {
            value,
            std_error: 0.0,
            n_samples,
            seed: 0,
            mode: EstimateMode::Exact,
        }
    }

    pub fn monte_carlo(value: f64, std_error: f64, n_samples: u64, seed: u64) -> Self {
        Estimate {
            value,
            std_error,
            n_samples,
            seed,
            mode: EstimateMode::MonteCarlo,
        }
    }

    pub fn quadrature(value: f64, error_estimate: f64, n_items: u64) -> Self {
        Estimate {
            value,
            std_error: error_estimate,
            n_samples: n_items,
            seed: 0,
            mode: EstimateMode::Quadrature,
        }
    }

    /// `|self - other|` in units of the combined standard error.
    pub fn z_score(&self, other: f64, other_err: f64) -> f64 {
        let combined = (self.std_error.powi(2) + other_err.powi(2)).sqrt();
        if combined == 0.0 {
            return if self.value == other { 0.0 } else { f64::INFINITY };
        }
        (self.value - other).abs() / combined
    }

    /// Apply a smooth map, propagating the error to first order.
    pub fn map(&self, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Self {
        Estimate {
            value: f(self.value),
            std_error: (df(self.value) * self.std_error).abs(),
            ..self.clone()
        }
    }
}
