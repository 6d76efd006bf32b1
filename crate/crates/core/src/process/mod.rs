//! The limiting process `G_X(t) = Σ_m X(m) g_m(t)` truncated to `|m| ≤ J`,
//! its real companion `H_X(t) = Σ_m X(m)/(m−t)`, exact moments, and the
//! Monte-Carlo estimators of `k₀` and `k_q`.

mod pattern;

pub use pattern::{sample_pattern, PatternStream, SignPattern};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{Estimate, EstimateMode};
use crate::eval::{em1, process_coefficient};
use crate::par::{map_indexed, mean_and_std_error, pairwise_mean, pairwise_sum, try_map_indexed};
use crate::quad::{bracket_zeros_with_derivative, integrate_log_abs, GaussLegendre, LogIntegral, QuadConfig};

/// Indices `|m − 1/2| < NEAR` are summed directly; the rest through a
/// Taylor series in `t − 1/2` whose ratio is at most `1/13` on `[0, 1]`.
const NEAR: i64 = 7;
const TAYLOR_TERMS: usize = 18;

/// `t ↦ Σ_{|m|≤J} X(m)/(m−t)` with exact first and second derivatives.
#[derive(Clone, Debug)]
pub struct TruncatedH {
    near: Vec<(f64, f64)>,
    taylor: [f64; TAYLOR_TERMS],
    pattern: SignPattern,
}

impl TruncatedH {
    pub fn new(pattern: &SignPattern) -> Self {
        let mut near = Vec::new();
        let mut taylor = [0.0; TAYLOR_TERMS];
        for (m, s) in pattern.iter() {
            if (1 - NEAR..=NEAR).contains(&m) {
                near.push((m as f64, s));
                continue;
            }
            let x = 1.0 / (m as f64 - 0.5);
            let mut pw = s * x;
            for c in taylor.iter_mut() {
                *c += pw;
                pw *= x;
                // Terms below this cannot move a double once scaled by |t−1/2|^j ≤ 2^−j.
                if pw.abs() < 1e-22 {
                    break;
                }
            }
        }
        TruncatedH {
            near,
            taylor,
            pattern: pattern.clone(),
        }
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.pattern
    }

    fn check(t: f64) -> Result<()> {
        if t.fract() == 0.0 {
            return Err(Error::Pole { t });
        }
        Ok(())
    }

    /// `H_X^J(t)`.
    pub fn value(&self, t: f64) -> Result<f64> {
        Self::check(t)?;
        Ok(self.eval(t))
    }

    /// `H'` for `order = 1`, `H''` for `order = 2`.
    pub fn deriv(&self, t: f64, order: u32) -> Result<f64> {
        Self::check(t)?;
        match order {
            1 => Ok(self.eval_d1(t)),
            2 => Ok(self.eval_d2(t)),
            _ => Err(Error::domain(format!("derivative order must be 1 or 2 (got {order})"))),
        }
    }

    /// Unchecked value; `t` must not be an integer.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let u = t - 0.5;
        if u.abs() > 0.5 {
            return self.direct(t);
        }
        let mut acc = 0.0;
        for &c in self.taylor.iter().rev() {
            acc = acc * u + c;
        }
        for &(m, s) in &self.near {
            acc += s / (m - t);
        }
        acc
    }

    #[inline]
    pub fn eval_d1(&self, t: f64) -> f64 {
        let u = t - 0.5;
        if u.abs() > 0.5 {
            return self.pattern.iter().map(|(m, s)| s / (m as f64 - t).powi(2)).sum();
        }
        let mut acc = 0.0;
        for j in (1..TAYLOR_TERMS).rev() {
            acc = acc * u + j as f64 * self.taylor[j];
        }
        for &(m, s) in &self.near {
            let d = m - t;
            acc += s / (d * d);
        }
        acc
    }

    pub fn eval_d2(&self, t: f64) -> f64 {
        let u = t - 0.5;
        if u.abs() > 0.5 {
            return self.pattern.iter().map(|(m, s)| 2.0 * s / (m as f64 - t).powi(3)).sum();
        }
        let mut acc = 0.0;
        for j in (2..TAYLOR_TERMS).rev() {
            acc = acc * u + (j * (j - 1)) as f64 * self.taylor[j];
        }
        for &(m, s) in &self.near {
            let d = m - t;
            acc += 2.0 * s / (d * d * d);
        }
        acc
    }

    /// The defining O(J) sum.
    pub fn direct(&self, t: f64) -> f64 {
        self.pattern.iter().map(|(m, s)| s / (m as f64 - t)).sum()
    }

    /// `G_X^J(t) = (e(t) − 1) H_X^J(t) / (2πi)`.
    pub fn g(&self, t: f64) -> Complex64 {
        if t.fract() == 0.0 {
            // Only the m = t term survives: g_t(t) = −1.
            let m = t as i64;
            if m.unsigned_abs() as usize > self.pattern.j() {
                return Complex64::new(0.0, 0.0);
            }
            return Complex64::new(-(self.pattern.sign(m) as f64), 0.0);
        }
        em1(t) * self.eval(t) / Complex64::new(0.0, 2.0 * PI)
    }
}

/// Truncation level for the exact moment formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    Finite(usize),
    Infinite,
}

fn check_open_unit(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("t must lie in (0, 1) (got {t})")));
    }
    Ok(())
}

/// `g_m(t)` for `m = −J..=J`.
pub fn process_coefficients(t: f64, j: usize) -> Vec<Complex64> {
    let j = j as i64;
    (-j..=j).map(|m| process_coefficient(m, t)).collect()
}

/// `E|G_X^J(t)|² = Σ_{|m|≤J} |g_m(t)|²`; exactly 1 for the untruncated process.
pub fn second_moment_exact(t: f64, truncation: Truncation) -> Result<f64> {
    check_open_unit(t)?;
    match truncation {
        Truncation::Infinite => Ok(1.0),
        Truncation::Finite(j) => {
            let terms: Vec<f64> = process_coefficients(t, j).iter().map(|a| a.norm_sqr()).collect();
            Ok(pairwise_sum(&terms))
        }
    }
}

/// `E|G_X^J(t)|⁴ = 2(Σ|a_m|²)² + |Σ a_m²|² − 2 Σ|a_m|⁴` with `a_m = g_m(t)`.
pub fn fourth_moment_exact(t: f64, j: usize) -> Result<f64> {
    check_open_unit(t)?;
    if j == 0 {
        return Err(Error::domain("truncation level J must be at least 1"));
    }
    Ok(fourth_moment_of(&process_coefficients(t, j)))
}

pub(crate) fn fourth_moment_of(a: &[Complex64]) -> f64 {
    let s2: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let q: Complex64 = a.iter().map(|x| x * x).sum();
    let s4: f64 = a.iter().map(|x| x.norm_sqr().powi(2)).sum();
    2.0 * s2 * s2 + q.norm_sqr() - 2.0 * s4
}

/// Largest `J` accepted by the enumerators (`2J + 1 ≤ 21` signs).
pub const MAX_ENUMERATION_J: usize = 10;

/// `E f(X)` over all `2^{2J+1}` patterns, summed in enumeration order.
pub fn enumeration_mean<T, F>(j: usize, f: F) -> Result<T>
where
    T: Send + std::iter::Sum<T> + std::ops::Div<f64, Output = T>,
    F: Fn(&SignPattern) -> T + Sync + Send,
{
    if j == 0 || j > MAX_ENUMERATION_J {
        return Err(Error::domain(format!(
            "enumeration needs 1 ≤ J ≤ {MAX_ENUMERATION_J} (got {j})"
        )));
    }
    let count = 1usize << (2 * j + 1);
    let values = map_indexed(count, |b| f(&SignPattern::from_bits(j, b as u64)));
    Ok(values.into_iter().sum::<T>() / count as f64)
}

/// `∫_0^1 log|H_X^J(t)| dt` for one pattern, through the same zero bracketing
/// and singular quadrature as the Fekete side. `H` has simple poles at both
/// endpoints (from `m = 0` and `m = 1`).
pub fn pattern_log_integral(pattern: &SignPattern, cfg: &QuadConfig) -> Result<LogIntegral> {
    let h = TruncatedH::new(pattern);
    let zeros = bracket_zeros_with_derivative(|t| h.eval(t), |t| h.eval_d1(t), 0.0, 1.0, cfg.scan_points)?;
    integrate_log_abs(|t| h.eval(t), 0.0, 1.0, &zeros, (-1, -1), cfg)
}

/// Output of [`k0_estimate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K0Report {
    pub j: usize,
    /// `A = E ∫_0^1 log|H_X^J(t)| dt`.
    pub a: Estimate,
    /// `k₀ = exp(A − log 2π)`.
    pub k0: Estimate,
    /// Monte-Carlo patterns redrawn after a degenerate zero.
    pub resampled: u64,
}

fn k0_from_a(a: Estimate, j: usize, resampled: u64) -> K0Report {
    let shift = (2.0 * PI).ln();
    let k0 = a.map(|x| (x - shift).exp(), |x| (x - shift).exp());
    K0Report { j, a, k0, resampled }
}

/// Estimate `A` and `k₀` at truncation level `J`.
///
/// Exact mode enumerates the `2^{2J}` patterns with `X(0) = +1`; a global
/// sign flip leaves `|H|` unchanged, so this is the full expectation. A
/// degenerate zero aborts exact mode. In Monte-Carlo mode pattern `i` comes
/// from stream `(seed, i)`, and a degenerate pattern is replaced by the next
/// pattern of the same stream and counted in `resampled`.
pub fn k0_estimate(j: usize, n_samples: u64, mode: EstimateMode, seed: u64, cfg: &QuadConfig) -> Result<K0Report> {
    if j == 0 {
        return Err(Error::domain("truncation level J must be at least 1"));
    }
    match mode {
        EstimateMode::Exact => {
            if j > MAX_ENUMERATION_J {
                return Err(Error::domain(format!(
                    "exact mode needs 2J + 1 ≤ 21 (got J = {j})"
                )));
            }
            let half = 1usize << (2 * j);
            let values = try_map_indexed(half, |b| {
                // Bit J of the enumeration index is X(0); keep it at +1.
                let low = b as u64 & ((1 << j) - 1);
                let high = (b as u64 >> j) << (j + 1);
                pattern_log_integral(&SignPattern::from_bits(j, low | high), cfg).map(|r| r.value)
            })?;
            let a = Estimate::exact(pairwise_mean(&values), 1u64 << (2 * j + 1));
            Ok(k0_from_a(a, j, 0))
        }
        EstimateMode::MonteCarlo => {
            if n_samples < 2 {
                return Err(Error::domain("Monte-Carlo mode needs at least 2 samples"));
            }
            let results = try_map_indexed(n_samples as usize, |i| {
                let mut stream = PatternStream::new(j, seed, i as u64)?;
                let mut redraws = 0u64;
                loop {
                    match pattern_log_integral(&stream.next_pattern(), cfg) {
                        Ok(r) => return Ok((r.value, redraws)),
                        Err(e @ Error::DegenerateZero { .. }) if redraws >= 16 => return Err(e),
                        Err(Error::DegenerateZero { .. }) => redraws += 1,
                        Err(e) => return Err(e),
                    }
                }
            })?;
            let values: Vec<f64> = results.iter().map(|r| r.0).collect();
            let resampled = results.iter().map(|r| r.1).sum();
            let (mean, se) = mean_and_std_error(&values);
            Ok(k0_from_a(Estimate::monte_carlo(mean, se, n_samples, seed), j, resampled))
        }
        EstimateMode::Quadrature => Err(Error::domain("k0_estimate supports exact and monte_carlo modes")),
    }
}

/// Raw estimates along a truncation schedule plus the first-order
/// extrapolation `2A(2J) − A(J)` from the last two levels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K0Schedule {
    pub reports: Vec<K0Report>,
    pub extrapolated_a: Option<Estimate>,
    pub extrapolated_k0: Option<Estimate>,
}

/// [`k0_estimate`] in Monte-Carlo mode at each `J` of `levels`, all with the
/// same seed. Patterns are nested across levels, which correlates the
/// estimates and keeps the extrapolation's noise down.
pub fn k0_schedule(levels: &[usize], n_samples: u64, seed: u64, cfg: &QuadConfig) -> Result<K0Schedule> {
    let reports = levels
        .iter()
        .map(|&j| k0_estimate(j, n_samples, EstimateMode::MonteCarlo, seed, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut extrapolated_a = None;
    if let [.., lo, hi] = reports.as_slice() {
        if hi.j == 2 * lo.j {
            let value = 2.0 * hi.a.value - lo.a.value;
            // Conservative: treats the two levels as independent.
            let se = (4.0 * hi.a.std_error.powi(2) + lo.a.std_error.powi(2)).sqrt();
            extrapolated_a = Some(Estimate::monte_carlo(value, se, n_samples, seed));
        }
    }
    let extrapolated_k0 = extrapolated_a.clone().map(|a| k0_from_a(a, 0, 0).k0);
    Ok(K0Schedule {
        reports,
        extrapolated_a,
        extrapolated_k0,
    })
}

/// Fixed `t`-nodes for the `k_q` estimators: 8 panels of 16-point
/// Gauss-Legendre on `[0, 1]`.
pub fn kq_nodes() -> Vec<(f64, f64)> {
    let rule = GaussLegendre::cached(16);
    (0..8)
        .flat_map(|i| {
            let a = i as f64 / 8.0;
            rule.mapped(a, a + 0.125).collect::<Vec<_>>()
        })
        .collect()
}

/// `∫_0^1 E|G_X^J(t)|² dt` on the [`kq_nodes`].
pub fn second_moment_integral(j: usize) -> Result<f64> {
    kq_nodes()
        .iter()
        .map(|&(t, w)| second_moment_exact(t, Truncation::Finite(j)).map(|v| w * v))
        .sum()
}

/// `∫_0^1 E|G_X^J(t)|⁴ dt` on the [`kq_nodes`].
pub fn fourth_moment_integral(j: usize) -> Result<f64> {
    kq_nodes()
        .iter()
        .map(|&(t, w)| fourth_moment_exact(t, j).map(|v| w * v))
        .sum()
}

/// `(E ∫_0^1 |G_X^J(t)|^q dt)^{1/q}` by Monte Carlo on the [`kq_nodes`], with
/// the standard error carried through the `1/q` power to first order.
pub fn kq_estimate(q: f64, j: usize, n_samples: u64, seed: u64) -> Result<Estimate> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!("q must be positive (got {q})")));
    }
    if j == 0 || n_samples < 2 {
        return Err(Error::domain("kq_estimate needs J ≥ 1 and at least 2 samples"));
    }
    let nodes = kq_nodes();
    let values = try_map_indexed(n_samples as usize, |i| {
        let h = TruncatedH::new(&sample_pattern(j, seed, i as u64)?);
        Ok(nodes.iter().map(|&(t, w)| w * h.g(t).norm().powf(q)).sum::<f64>())
    })?;
    let (mean, se) = mean_and_std_error(&values);
    Ok(Estimate::monte_carlo(mean, se, n_samples, seed).map(|m| m.powf(1.0 / q), |m| m.powf(1.0 / q - 1.0) / q))
}
