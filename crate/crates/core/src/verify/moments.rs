use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{gauss_sum, LegendreTable};
use crate::error::{Error, Result};
use crate::eval::{process_coefficient, FeketeEvaluator};
use crate::par::pairwise_sum;
use crate::process::{enumeration_mean, process_coefficients, SignPattern};

/// Mixed moment `Π_j G(t_j)^{r_j} conj(G(t_j))^{s_j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec {
    nodes: Vec<f64>,
    r: Vec<u32>,
    s: Vec<u32>,
}

impl MomentSpec {
    pub fn new(nodes: Vec<f64>, r: Vec<u32>, s: Vec<u32>) -> Result<Self> {
        if nodes.len() != r.len() || nodes.len() != s.len() {
            return Err(Error::domain("nodes, r and s must have equal lengths"));
        }
        if nodes.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::domain("moment nodes must lie in [0, 1]"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("moment nodes must be strictly increasing"));
        }
        Ok(MomentSpec { nodes, r, s })
    }

    /// `r = s = (1)` at one node: the second moment.
    pub fn second(t: f64) -> Result<Self> {
        Self::new(vec![t], vec![1], vec![1])
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn degree(&self) -> u32 {
        self.r.iter().sum::<u32>() + self.s.iter().sum::<u32>()
    }

    fn product(&self, values: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            acc *= v.powu(self.r[j]) * v.conj().powu(self.s[j]);
        }
        acc
    }
}

fn complex_mean(xs: &[Complex64]) -> Complex64 {
    let re: Vec<f64> = xs.iter().map(|z| z.re).collect();
    let im: Vec<f64> = xs.iter().map(|z| z.im).collect();
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) / xs.len() as f64
}

/// `(1/p) Σ_k Π_j G_p(k,t_j)^{r_j} conj(G_p(k,t_j))^{s_j}`.
pub fn moment_lhs(table: &LegendreTable, spec: &MomentSpec) -> Complex64 {
    let tau_inv = 1.0 / gauss_sum(table);
    let rows: Vec<Vec<Complex64>> = FeketeEvaluator::new(table)
        .at_offsets(spec.nodes())
        .into_iter()
        .map(|row| row.into_iter().map(|f| f * tau_inv).collect())
        .collect();
    let p = table.p() as usize;
    let terms: Vec<Complex64> = (0..p)
        .map(|k| {
            let values: Vec<Complex64> = rows.iter().map(|row| row[k]).collect();
            spec.product(&values)
        })
        .collect();
    complex_mean(&terms)
}

/// `E Π_j G_X^J(t_j)^{r_j} conj(G_X^J(t_j))^{s_j}` from the pairing rule
/// `E[X(m_1)⋯X(m_d)] = 1` exactly when every index occurs an even number of
/// times. Supports total degree up to 4.
pub fn moment_rhs_exact(j: usize, spec: &MomentSpec) -> Result<Complex64> {
    let degree = spec.degree();
    if degree > 4 {
        return Err(Error::Unsupported(format!(
            "exact process moments stop at total degree 4 (got {degree})"
        )));
    }
    if j == 0 {
        return Err(Error::domain("truncation level J must be at least 1"));
    }
    // One coefficient vector b_i(m) per factor of the product.
    let mut factors: Vec<Vec<Complex64>> = Vec::new();
    for (idx, &t) in spec.nodes().iter().enumerate() {
        let g = process_coefficients(t, j);
        for _ in 0..spec.r()[idx] {
            factors.push(g.clone());
        }
        let gc: Vec<Complex64> = g.iter().map(|z| z.conj()).collect();
        for _ in 0..spec.s()[idx] {
            factors.push(gc.clone());
        }
    }
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        let terms: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        Complex64::new(
            pairwise_sum(&terms.iter().map(|z| z.re).collect::<Vec<_>>()),
            pairwise_sum(&terms.iter().map(|z| z.im).collect::<Vec<_>>()),
        )
    };
    Ok(match factors.as_slice() {
        [] => Complex64::new(1.0, 0.0),
        [b1, b2] => dot(b1, b2),
        [b1, b2, b3, b4] => {
            let diag: Vec<Complex64> = (0..b1.len()).map(|m| b1[m] * b2[m] * b3[m]).collect();
            // The three pairings count the all-equal index three times; keep it once.
            dot(b1, b2) * dot(b3, b4) + dot(b1, b3) * dot(b2, b4) + dot(b1, b4) * dot(b2, b3)
                - 2.0 * dot(&diag, b4)
        }
        _ => Complex64::new(0.0, 0.0),
    })
}

/// Brute-force `moment_rhs_exact` over all `2^{2J+1}` patterns; any degree.
pub fn moment_enumeration(j: usize, spec: &MomentSpec) -> Result<Complex64> {
    let coeffs: Vec<Vec<Complex64>> = spec
        .nodes()
        .iter()
        .map(|&t| {
            let j = j as i64;
            (-j..=j).map(|m| process_coefficient(m, t)).collect()
        })
        .collect();
    enumeration_mean(j, |pattern: &SignPattern| {
        let values: Vec<Complex64> = coeffs
            .iter()
            .map(|g| pattern.iter().zip(g).map(|((_, s), c)| c * s).sum())
            .collect();
        spec.product(&values)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub p: u64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
    /// Fitted `β` in `Δ(p) ≈ C p^{−β} (log p)^{r+s}`; absent when every `Δ` vanishes.
    pub beta: Option<f64>,
    pub pass: bool,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `Δ(p) = |moment_lhs − moment_rhs_exact|` along `primes`, with the decay
/// exponent fitted against `p^{−β} (log p)^{r+s}`. Passes when `β ≥ 0.4`.
pub fn moment_convergence_report(primes: &[u64], j: usize, spec: &MomentSpec) -> Result<MomentReport> {
    if primes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("primes must be increasing"));
    }
    let rhs = moment_rhs_exact(j, spec)?;
    let mut rows = Vec::new();
    for &p in primes {
        let lhs = moment_lhs(&LegendreTable::new(p)?, spec);
        rows.push(MomentRow { p, lhs, rhs, delta: (lhs - rhs).norm() });
    }
    if spec.degree() == 0 || rows.iter().all(|r| r.delta == 0.0) {
        return Ok(MomentReport { rows, beta: None, pass: true });
    }
    let degree = spec.degree() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| (r.p as f64).ln()).collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|r| r.delta.ln() - degree * (r.p as f64).ln().ln())
        .collect();
    let beta = if rows.len() >= 2 { Some(-fit_slope(&xs, &ys)) } else { None };
    let pass = beta.is_some_and(|b| b >= 0.4);
    Ok(MomentReport { rows, beta, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(MomentSpec::new(vec![0.1, 0.2], vec![1], vec![1, 0]).is_err());
        assert!(MomentSpec::new(vec![0.3, 0.2], vec![1, 0], vec![0, 1]).is_err());
        assert!(MomentSpec::new(vec![1.5], vec![1], vec![0]).is_err());
        let big = MomentSpec::new(vec![0.5], vec![3], vec![2]).unwrap();
        assert!(matches!(moment_rhs_exact(5, &big), Err(Error::Unsupported(_))));
    }

    #[test]
    fn empty_product_is_one() {
        let spec = MomentSpec::new(vec![0.4], vec![0], vec![0]).unwrap();
        let t = LegendreTable::new(101).unwrap();
        assert!((moment_lhs(&t, &spec) - 1.0).norm() < 1e-15);
        assert_eq!(moment_rhs_exact(10, &spec).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn second_moment_of_fekete_is_exact() {
        let t = LegendreTable::new(1009).unwrap();
        let m = moment_lhs(&t, &MomentSpec::second(0.37).unwrap());
        assert!((m.re - 1008.0 / 1009.0).abs() < 1e-10 && m.im.abs() < 1e-10);
    }

    #[test]
    fn pairing_rule_matches_enumeration() {
        let specs = [
            MomentSpec::second(0.37).unwrap(),
            MomentSpec::new(vec![0.2], vec![2], vec![0]).unwrap(),
            MomentSpec::new(vec![0.2, 0.7], vec![1, 1], vec![1, 1]).unwrap(),
            MomentSpec::new(vec![0.1, 0.5], vec![2, 0], vec![1, 1]).unwrap(),
            MomentSpec::new(vec![0.6], vec![3], vec![0]).unwrap(),
            MomentSpec::new(vec![0.3], vec![0], vec![4]).unwrap(),
        ];
        for spec in &specs {
            let a = moment_rhs_exact(3, spec).unwrap();
            let b = moment_enumeration(3, spec).unwrap();
            assert!((a - b).norm() < 1e-12, "{spec:?}: {a} vs {b}");
        }
    }

    #[test]
    fn degree_zero_report_is_flat() {
        let spec = MomentSpec::new(vec![0.4], vec![0], vec![0]).unwrap();
        let r = moment_convergence_report(&[101, 1009], 100, &spec).unwrap();
        assert!(r.pass && r.beta.is_none());
        assert!(r.rows.iter().all(|row| row.delta < 1e-15));
    }
}
