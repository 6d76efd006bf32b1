use serde::{Deserialize, Serialize};

use super::moments::fit_slope;
use crate::arith::LegendreTable;
use crate::error::{Error, Result};
use crate::eval::ArcBank;
use crate::par::{pairwise_mean, try_map_indexed};
use crate::process::{PatternStream, TruncatedH};
use crate::quad::{bracket_zeros_with_derivative, integrate_log_abs_of, QuadConfig, ZeroBracket};

/// Whose `H` the truncated log-masses are averaged over.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogTarget {
    /// All `p` arcs `H_p(k,·)`.
    Fekete { p: u64 },
    /// `n_samples` patterns `H_X^J` from streams `(seed, i)`.
    Process { j: usize, n_samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogTruncRow {
    pub eps: f64,
    /// `|avg ∫_0^1 log|H| · 1{|H| ≤ ε}|`.
    pub interior: f64,
    /// `|avg (∫_0^ε + ∫_{1−ε}^1) log|H| · 1{|H| ≥ ε}|`.
    pub boundary: f64,
    /// `boundary / (ε log(1/ε))`.
    pub boundary_constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogTruncReport {
    pub target: LogTarget,
    pub rows: Vec<LogTruncRow>,
    /// Slope of `log interior` against `log ε`.
    pub interior_exponent: f64,
    /// `max / min` of `boundary_constant` over the ε list.
    pub boundary_spread: f64,
    pub pass: bool,
}

/// Interior fits must reach this exponent.
pub const INTERIOR_EXPONENT_MIN: f64 = 6.0 / 25.0 - 0.05;
/// Largest accepted `max C(ε) / min C(ε)`.
pub const BOUNDARY_SPREAD_MAX: f64 = 2.0;

/// One real function on `(0, 1)` with its endpoint orders.
struct Curve<F, D, L> {
    f: F,
    df: D,
    log_f: L,
    orders: (i32, i32),
}

impl<F, D, L> Curve<F, D, L>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
    L: Fn(f64) -> f64,
{
    /// Signed `(interior, boundary)` masses for each ε.
    fn masses(&self, eps_list: &[f64], cfg: &QuadConfig) -> Result<Vec<(f64, f64)>> {
        let zeros = bracket_zeros_with_derivative(&self.f, &self.df, 0.0, 1.0, cfg.scan_points)?;
        eps_list.iter().map(|&eps| self.masses_at(eps, &zeros, cfg)).collect()
    }

    fn masses_at(&self, eps: f64, zeros: &[ZeroBracket], cfg: &QuadConfig) -> Result<(f64, f64)> {
        let mut cuts = vec![0.0, eps, 1.0 - eps, 1.0];
        for level in [eps, -eps] {
            let crossings = bracket_zeros_with_derivative(
                |t| (self.f)(t) - level,
                &self.df,
                0.0,
                1.0,
                cfg.scan_points,
            )?;
            cuts.extend(crossings.iter().map(|z| z.root));
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);

        let (mut interior, mut boundary) = (0.0, 0.0);
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let small = (self.f)(0.5 * (a + b)).abs() <= eps;
            let near_end = b <= eps || a >= 1.0 - eps;
            if !small && !near_end {
                continue;
            }
            let inside: Vec<ZeroBracket> = zeros.iter().filter(|z| z.root > a && z.root < b).copied().collect();
            let orders = (
                if a == 0.0 { self.orders.0 } else { 0 },
                if b == 1.0 { self.orders.1 } else { 0 },
            );
            let v = integrate_log_abs_of(&self.log_f, a, b, &inside, orders, cfg)?.value;
            if small {
                interior += v;
            } else {
                boundary += v;
            }
        }
        Ok((interior, boundary))
    }
}

fn check_eps(eps_list: &[f64]) -> Result<()> {
    if eps_list.len() < 2 {
        return Err(Error::domain("the ε list needs at least two values"));
    }
    if eps_list.iter().any(|&e| !(e > 0.0 && e < 0.5)) {
        return Err(Error::domain("ε values must lie in (0, 1/2)"));
    }
    if eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::domain("ε values must be decreasing"));
    }
    Ok(())
}

fn fekete_masses(p: u64, eps_list: &[f64], cfg: &QuadConfig) -> Result<Vec<Vec<(f64, f64)>>> {
    let bank = ArcBank::build(&LegendreTable::new(p)?, cfg.cheb_nodes);
    try_map_indexed(p as usize, |k| {
        Curve {
            f: |t| bank.h(k, t),
            df: |t| bank.h_deriv(k, t),
            log_f: |t| bank.log_abs_h(k, t),
            orders: bank.endpoint_orders(k),
        }
        .masses(eps_list, cfg)
        .map_err(|e| e.on_arc(k))
    })
}

fn process_masses(j: usize, n: u64, seed: u64, eps_list: &[f64], cfg: &QuadConfig) -> Result<Vec<Vec<(f64, f64)>>> {
    try_map_indexed(n as usize, |i| {
        let mut stream = PatternStream::new(j, seed, i as u64)?;
        let mut redraws = 0;
        loop {
            let h = TruncatedH::new(&stream.next_pattern());
            let curve = Curve {
                f: |t| h.eval(t),
                df: |t| h.eval_d1(t),
                log_f: |t| h.eval(t).abs().ln(),
                orders: (-1, -1),
            };
            match curve.masses(eps_list, cfg) {
                Err(Error::DegenerateZero { .. }) if redraws < 16 => redraws += 1,
                other => return other,
            }
        }
    })
}

/// Truncated log-masses of `H` near its zeros and near the endpoint poles.
///
/// Passes when the interior mass decays at least like `ε^{0.19}` and the
/// boundary constant `C(ε)` moves by at most a factor [`BOUNDARY_SPREAD_MAX`].
pub fn log_truncation_check(target: LogTarget, eps_list: &[f64], cfg: &QuadConfig) -> Result<LogTruncReport> {
    check_eps(eps_list)?;
    let per_item = match target {
        LogTarget::Fekete { p } => fekete_masses(p, eps_list, cfg)?,
        LogTarget::Process { j, n_samples, seed } => {
            if j == 0 || n_samples == 0 {
                return Err(Error::domain("process target needs J ≥ 1 and at least one sample"));
            }
            process_masses(j, n_samples, seed, eps_list, cfg)?
        }
    };
    let rows: Vec<LogTruncRow> = eps_list
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let interior: Vec<f64> = per_item.iter().map(|m| m[i].0).collect();
            let boundary: Vec<f64> = per_item.iter().map(|m| m[i].1).collect();
            let boundary = pairwise_mean(&boundary).abs();
            LogTruncRow {
                eps,
                interior: pairwise_mean(&interior).abs(),
                boundary,
                boundary_constant: boundary / (eps * (1.0 / eps).ln()),
            }
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.eps.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.interior.ln()).collect();
    let interior_exponent = fit_slope(&xs, &ys);
    let cs = rows.iter().map(|r| r.boundary_constant);
    let (lo, hi) = cs.fold((f64::INFINITY, 0.0f64), |(lo, hi), c| (lo.min(c), hi.max(c)));
    let boundary_spread = hi / lo;
    Ok(LogTruncReport {
        target,
        rows,
        interior_exponent,
        boundary_spread,
        pass: interior_exponent >= INTERIOR_EXPONENT_MIN && boundary_spread <= BOUNDARY_SPREAD_MAX,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cotangent_masses_match_closed_forms() {
        // H = −π cot(πt): one zero at 1/2 with slope π², poles at both ends.
        let curve = Curve {
            f: |t: f64| -PI / (PI * t).tan(),
            df: |t: f64| PI * PI / (PI * t).sin().powi(2),
            log_f: |t: f64| (PI / (PI * t).tan()).abs().ln(),
            orders: (-1, -1),
        };
        let eps = 1e-2;
        let (interior, boundary) = curve.masses(&[eps], &QuadConfig::default()).unwrap()[0];
        // |H| ≤ ε on |t − 1/2| ≤ atan(ε/π)/π.
        let half = (eps / PI).atan() / PI;
        // ∫ log(π tan π|u|) over |u| ≤ h, with log(π²u) split off in closed form.
        let (smooth, _, _) = crate::quad::integrate_adaptive(
            |u| ((PI * u).tan() / (PI * u)).ln(),
            &[0.0, half],
            &QuadConfig::default(),
        );
        let int_ref = 2.0 * (half * ((PI * PI * half).ln() - 1.0) + smooth);
        assert!((interior - int_ref).abs() < 1e-8, "{interior} vs {int_ref}");
        // ∫_0^ε log(π cot πt) on both ends.
        let one_end = crate::quad::integrate_log_abs(|t| PI / (PI * t).tan(), 0.0, eps, &[], (-1, 0), &QuadConfig::default())
            .unwrap()
            .value;
        assert!((boundary - 2.0 * one_end).abs() < 1e-10);
    }

    #[test]
    fn eps_validation() {
        let t = LogTarget::Fekete { p: 11 };
        let cfg = QuadConfig::default();
        assert!(log_truncation_check(t, &[0.1], &cfg).is_err());
        assert!(log_truncation_check(t, &[0.01, 0.1], &cfg).is_err());
        assert!(log_truncation_check(t, &[0.6, 0.1], &cfg).is_err());
    }

    #[test]
    fn small_targets_run() {
        let cfg = QuadConfig::default();
        let eps = [0.1, 0.01, 0.001];
        let f = log_truncation_check(LogTarget::Fekete { p: 101 }, &eps, &cfg).unwrap();
        assert!(f.rows.iter().all(|r| r.interior.is_finite() && r.boundary > 0.0));
        let x = LogTarget::Process { j: 50, n_samples: 20, seed: 3 };
        let a = log_truncation_check(x, &eps, &cfg).unwrap();
        assert_eq!(a, log_truncation_check(x, &eps, &cfg).unwrap());
    }
}
