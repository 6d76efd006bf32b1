//! Evaluation of `F_p` on the unit circle and of the per-arc functions
//! `G_p(k,t) = F_p(e((k+t)/p)) / F_p(ζ_p)` and `H_p(k,t) = 2πi G_p(k,t)/(e(t)−1)`.

mod arc;
mod bank;
mod chirp;

pub use arc::{alpha, em1, process_coefficient, ArcFunction};
pub use bank::{chebyshev_nodes, ArcBank, Chebyshev};
pub use chirp::ChirpZ;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{gauss_sum, LegendreTable};
use crate::error::{Error, Result};

/// `F_p(z) = Σ_{n=1}^{p-1} (n/p) z^n` by Horner's rule.
///
/// O(p) and independent of every transform; the fast paths are checked
/// against it.
pub fn fekete_horner(table: &LegendreTable, z: Complex64) -> Result<Complex64> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("|z| = {} is not on the unit circle", z.norm())));
    }
    let symbols = table.symbols();
    let mut acc = Complex64::new(0.0, 0.0);
    for &a in symbols[1..].iter().rev() {
        acc = acc * z + a as f64;
    }
    Ok(acc * z)
}

/// Values `F_p(e((k+t)/p))` for every arc `k` at a common offset `t`.
///
/// One length-`p` transform of `n ↦ (n/p) e(nt/p)` per offset. Keep the
/// evaluator around when sweeping many offsets so the plan is reused.
pub struct FeketeEvaluator {
    coeffs: Vec<f64>,
    plan: ChirpZ,
}

impl FeketeEvaluator {
    pub fn new(table: &LegendreTable) -> Self {
        let coeffs = table.symbols().iter().map(|&s| s as f64).collect();
        Self::with_coefficients(coeffs)
    }

    /// Evaluator for `Σ_n c_n z^n` with `n < p`, e.g. the derivative
    /// coefficients `n (n/p)`.
    pub fn with_coefficients(coeffs: Vec<f64>) -> Self {
        let plan = ChirpZ::new(coeffs.len());
        FeketeEvaluator { coeffs, plan }
    }

    pub fn p(&self) -> usize {
        self.coeffs.len()
    }

    pub fn at_offset(&self, t: f64) -> Vec<Complex64> {
        let p = self.coeffs.len() as f64;
        let input: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| Complex64::from_polar(c, std::f64::consts::TAU * n as f64 * t / p))
            .collect();
        self.plan.transform(&input)
    }

    /// `at_offset` for each offset, in parallel.
    pub fn at_offsets(&self, offsets: &[f64]) -> Vec<Vec<Complex64>> {
        offsets.par_iter().map(|&t| self.at_offset(t)).collect()
    }
}

/// Entry `k` is `F_p(e((k+t)/p))`, for `k = 0..p`.
pub fn fekete_grid(table: &LegendreTable, t: f64) -> Vec<Complex64> {
    FeketeEvaluator::new(table).at_offset(t)
}

/// Quadrature offsets shared by every arc of a given prime.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    p: u64,
    offsets: Vec<f64>,
}

impl PhaseGrid {
    pub fn new(p: u64, offsets: Vec<f64>) -> Result<Self> {
        if offsets.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::domain("phase offsets must lie in [0, 1]"));
        }
        if offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("phase offsets must be strictly increasing"));
        }
        Ok(PhaseGrid { p, offsets })
    }

    /// `n` midpoints `(j + 1/2)/n`.
    pub fn uniform(p: u64, n: usize) -> Self {
        let offsets = (0..n).map(|j| (j as f64 + 0.5) / n as f64).collect();
        PhaseGrid { p, offsets }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Normalized values `G_p(k, t_j)`, indexed `[j][k]`.
    pub fn evaluate_normalized(&self, table: &LegendreTable) -> Vec<Vec<Complex64>> {
        let tau_inv = 1.0 / gauss_sum(table);
        FeketeEvaluator::new(table)
            .at_offsets(&self.offsets)
            .into_iter()
            .map(|row| row.into_iter().map(|f| f * tau_inv).collect())
            .collect()
    }
}
