//! Drivers over all `p` arcs of a Fekete polynomial.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{bracket_zeros_with_derivative, integrate_adaptive, integrate_log_abs_of, LogIntegral, QuadConfig, ZeroBracket};
use crate::arith::LegendreTable;
use crate::error::{Error, Result};
use crate::estimate::Estimate;
use crate::eval::ArcBank;
use crate::par::{pairwise_mean, try_map_indexed};

fn arc_zeros(bank: &ArcBank, k: usize, scan_points: usize) -> Result<Vec<ZeroBracket>> {
    bracket_zeros_with_derivative(|t| bank.h(k, t), |t| bank.h_deriv(k, t), 0.0, 1.0, scan_points)
}

/// `∫_0^1 log|H_p(k,t)| dt` on one arc.
///
/// A degenerate zero triggers one retry on a 4× finer scan before the error
/// is returned with the arc index attached.
pub fn arc_log_integral(bank: &ArcBank, k: usize, cfg: &QuadConfig) -> Result<LogIntegral> {
    let once = |scan: usize| {
        let zeros = arc_zeros(bank, k, scan)?;
        integrate_log_abs_of(|t| bank.log_abs_h(k, t), 0.0, 1.0, &zeros, bank.endpoint_orders(k), cfg)
    };
    match once(cfg.scan_points) {
        Err(Error::DegenerateZero { .. }) => once(4 * cfg.scan_points).map_err(|e| e.on_arc(k)),
        other => other.map_err(|e| e.on_arc(k)),
    }
}

/// `M₀(F_p)/√p` from a prebuilt bank.
pub fn mahler_bank(bank: &ArcBank, cfg: &QuadConfig) -> Result<Estimate> {
    let p = bank.p() as usize;
    let arcs = try_map_indexed(p, |k| arc_log_integral(bank, k, cfg))?;
    let values: Vec<f64> = arcs.iter().map(|r| r.value).collect();
    let errors: Vec<f64> = arcs.iter().map(|r| r.error_estimate).collect();
    // Each arc also carries ∫ log|e(t)−1| = 0 and the constant −log 2π.
    let mean = pairwise_mean(&values) - (2.0 * PI).ln();
    let err = pairwise_mean(&errors);
    Ok(Estimate::quadrature(mean, err, p as u64).map(f64::exp, f64::exp))
}

/// `M₀(F_p)/√p = exp((1/p) Σ_k ∫_0^1 log|H_p(k,t)| dt − log 2π)`.
pub fn mahler_fekete(table: &LegendreTable, cfg: &QuadConfig) -> Result<Estimate> {
    mahler_bank(&ArcBank::build(table, cfg.cheb_nodes), cfg)
}

fn is_even_integer(q: f64) -> bool {
    q.fract() == 0.0 && (q as i64) % 2 == 0
}

/// `M_q(F_p)/√p` from a prebuilt bank.
pub fn lq_norm_bank(bank: &ArcBank, q: f64, cfg: &QuadConfig) -> Result<Estimate> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!("q must be positive (got {q})")));
    }
    let p = bank.p() as usize;
    // |G|^q is analytic for even q; otherwise it has cusps at the zeros.
    let smooth = is_even_integer(q);
    let arcs = try_map_indexed(p, |k| {
        let mut points = vec![0.0];
        if !smooth {
            points.extend(arc_zeros(bank, k, cfg.scan_points)?.iter().map(|z| z.root));
        }
        points.push(1.0);
        let (v, e, _) = integrate_adaptive(|t| bank.g(k, t).norm().powf(q), &points, cfg);
        Ok((v, e))
    })?;
    let values: Vec<f64> = arcs.iter().map(|r| r.0).collect();
    let errors: Vec<f64> = arcs.iter().map(|r| r.1).collect();
    let est = Estimate::quadrature(pairwise_mean(&values), pairwise_mean(&errors), p as u64);
    Ok(est.map(|m| m.powf(1.0 / q), |m| m.powf(1.0 / q - 1.0) / q))
}

pub fn lq_norm_fekete(table: &LegendreTable, q: f64, cfg: &QuadConfig) -> Result<Estimate> {
    lq_norm_bank(&ArcBank::build(table, cfg.cheb_nodes), q, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub count: u64,
    pub ratio: f64,
}

/// Circle zeros of `F_p` from a prebuilt bank: sign changes of `H_p(k,·)`
/// inside every arc plus the arc endpoints `e(k/p)` where `|F_p| ≤ 1e-8 √p`.
/// `z = 1` is always a zero and counts once whatever its multiplicity.
pub fn circle_zero_count_bank(bank: &ArcBank, cfg: &QuadConfig) -> Result<ZeroCount> {
    let p = bank.p() as usize;
    let counts = try_map_indexed(p, |k| {
        let inner = arc_zeros(bank, k, cfg.scan_points)?.len() as u64;
        let at_root = k == 0 || bank.g(k, 0.0).norm() <= 1e-8;
        Ok(inner + at_root as u64)
    })?;
    let count: u64 = counts.iter().sum();
    Ok(ZeroCount {
        count,
        ratio: count as f64 / p as f64,
    })
}

pub fn circle_zero_count(table: &LegendreTable, cfg: &QuadConfig) -> Result<ZeroCount> {
    circle_zero_count_bank(&ArcBank::build(table, cfg.cheb_nodes), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(p: u64) -> LegendreTable {
        LegendreTable::new(p).unwrap()
    }

    #[test]
    fn mahler_small_primes() {
        let cfg = QuadConfig::default();
        // M₀(z − z²) = 1 and M₀(z(1−z)²(1+z)) = 1.
        for p in [3u64, 5] {
            let m = mahler_fekete(&table(p), &cfg).unwrap();
            assert!((m.value - 1.0 / (p as f64).sqrt()).abs() < 1e-9, "p={p}: {}", m.value);
        }
    }

    #[test]
    fn mahler_matches_jensen_for_small_primes() {
        // Oracle: midpoint average of log|F_p| on a dense grid.
        let cfg = QuadConfig::default();
        for p in [7u64, 11, 13] {
            let t = table(p);
            let m = mahler_fekete(&t, &cfg).unwrap().value * (p as f64).sqrt();
            let n = 200_000;
            let dense: f64 = (0..n)
                .map(|i| {
                    let z = crate::arith::unit((i as f64 + 0.5) / n as f64);
                    crate::eval::fekete_horner(&t, z).unwrap().norm().ln()
                })
                .sum::<f64>()
                / n as f64;
            assert!((m.ln() - dense).abs() < 1e-4, "p={p}: {} vs {}", m.ln(), dense);
        }
    }

    #[test]
    fn l2_norm_is_parseval() {
        let cfg = QuadConfig::default();
        for p in [5u64, 101] {
            let n = lq_norm_fekete(&table(p), 2.0, &cfg).unwrap();
            assert!((n.value - ((p - 1) as f64 / p as f64).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn l4_norm_of_f5() {
        let n = lq_norm_fekete(&table(5), 4.0, &QuadConfig::default()).unwrap();
        assert!((n.value - 28f64.powf(0.25) / 5f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn small_zero_counts() {
        let cfg = QuadConfig::default();
        assert_eq!(circle_zero_count(&table(3), &cfg).unwrap().count, 1);
        assert_eq!(circle_zero_count(&table(5), &cfg).unwrap().count, 2);
    }

    #[test]
    fn norms_are_ordered() {
        let cfg = QuadConfig::default();
        let t = table(101);
        let bank = ArcBank::build(&t, cfg.cheb_nodes);
        let m0 = mahler_bank(&bank, &cfg).unwrap().value;
        let mut prev = m0;
        for q in [0.5, 1.0, 2.0, 4.0] {
            let v = lq_norm_bank(&bank, q, &cfg).unwrap().value;
            assert!(v >= prev - 1e-12, "q={q}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn reflected_arcs_agree() {
        let cfg = QuadConfig::default();
        let t = table(103);
        let bank = ArcBank::build(&t, cfg.cheb_nodes);
        for k in [1usize, 7, 50] {
            let a = arc_log_integral(&bank, k, &cfg).unwrap().value;
            let b = arc_log_integral(&bank, 103 - 1 - k, &cfg).unwrap().value;
            assert!((a - b).abs() < 1e-9, "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn doubling_order_stays_within_error() {
        let base = QuadConfig::default();
        let fine = QuadConfig { gl_nodes: 64, ..base.clone() };
        let t = table(211);
        let a = mahler_fekete(&t, &base).unwrap();
        let b = mahler_fekete(&t, &fine).unwrap();
        assert!((a.value - b.value).abs() <= 2.0 * a.std_error, "{a:?} {b:?}");
    }
}
