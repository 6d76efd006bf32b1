use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::moments::fit_slope;
use crate::arith::{gauss_sum, LegendreTable};
use crate::error::{Error, Result};
use crate::eval::{alpha, em1, process_coefficient, ArcFunction, FeketeEvaluator};
use crate::par::{map_indexed, pairwise_sum, try_map_indexed};

/// Indices summed explicitly in the tail of the approximation gap.
pub const TAIL_CUTOFF: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub t: f64,
    pub gap: f64,
    pub tail: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub p: u64,
    pub rows: Vec<GapRow>,
    /// `p · max_t gap(t)`.
    pub scaled_max: f64,
    /// `p · max_t tail(t)`.
    pub scaled_tail_max: f64,
}

/// `Σ_{|m|>h} |g_m(t)|²`, summed to [`TAIL_CUTOFF`] plus the integral bound
/// beyond it.
pub fn tail_sum(t: f64, h: i64) -> f64 {
    let c = em1(t).norm_sqr() / (4.0 * PI * PI);
    let terms: Vec<f64> = (h + 1..=TAIL_CUTOFF)
        .map(|m| {
            let m = m as f64;
            1.0 / (m - t).powi(2) + 1.0 / (m + t).powi(2)
        })
        .collect();
    let beyond = 1.0 / (TAIL_CUTOFF as f64 + 0.5 - t) + 1.0 / (TAIL_CUTOFF as f64 + 0.5 + t);
    c * (pairwise_sum(&terms) + beyond)
}

/// `E|G_X(t) − G̃_{X,p}(t)|²` at each `t`, where `G̃` replaces `g_m` by
/// `α_p(m; t)` on `|m| ≤ (p−1)/2` and drops the other indices.
pub fn approximation_gap(p: u64, ts: &[f64]) -> Result<GapReport> {
    crate::arith::check_odd_prime(p)?;
    if ts.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::domain("t values must lie in [0, 1]"));
    }
    let h = (p as i64 - 1) / 2;
    let rows = map_indexed(ts.len(), |i| {
        let t = ts[i];
        let near: Vec<f64> = (-h..=h)
            .map(|m| (process_coefficient(m, t) - alpha(p, m, t)).norm_sqr())
            .collect();
        let tail = tail_sum(t, h);
        GapRow { t, gap: pairwise_sum(&near) + tail, tail }
    });
    let pf = p as f64;
    let scaled_max = rows.iter().map(|r| r.gap).fold(0.0, f64::max) * pf;
    let scaled_tail_max = rows.iter().map(|r| r.tail).fold(0.0, f64::max) * pf;
    Ok(GapReport { p, rows, scaled_max, scaled_tail_max })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub p: u64,
    pub pairs: usize,
    /// `max E_k|G(k,t) − G(k,s)|² / |t−s|^{3/2}`.
    pub max_ratio: f64,
    /// Least-squares fit `E|ΔG|² ≈ C₁|t−s|² + C₂/p` over `|t−s| ≤ 1/4`.
    pub c1: f64,
    pub c2: f64,
}

/// Largest `|t−s|` used in the `C₁, C₂` fit.
pub const TIGHTNESS_FIT_MAX: f64 = 0.25;

/// Random pairs `(s, t)` from stream `(seed, i)`; `E_k|G(k,t) − G(k,s)|²` by
/// averaging over every arc.
pub fn tightness_ratio(table: &LegendreTable, pair_count: usize, seed: u64) -> Result<TightnessReport> {
    if pair_count < 100 {
        return Err(Error::domain("tightness needs at least 100 pairs"));
    }
    let p = table.p();
    let ev = FeketeEvaluator::new(table);
    let tau_inv = 1.0 / gauss_sum(table);
    let rows = map_indexed(pair_count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let s: f64 = rng.random();
        let t: f64 = rng.random();
        let (gs, gt) = (ev.at_offset(s), ev.at_offset(t));
        let sq: Vec<f64> = gs.iter().zip(&gt).map(|(a, b)| ((b - a) * tau_inv).norm_sqr()).collect();
        ((t - s).abs(), pairwise_sum(&sq) / p as f64)
    });
    let max_ratio = rows
        .iter()
        .filter(|(d, _)| *d > 0.0)
        .map(|(d, e)| e / d.powf(1.5))
        .fold(0.0, f64::max);
    // Two-parameter least squares on (|t−s|², 1), short separations only:
    // the mean square saturates near 2 once |t−s| is of order one.
    let short: Vec<&(f64, f64)> = rows.iter().filter(|(d, _)| *d <= TIGHTNESS_FIT_MAX).collect();
    let xs: Vec<f64> = short.iter().map(|(d, _)| d * d).collect();
    let ys: Vec<f64> = short.iter().map(|(_, e)| *e).collect();
    let (c1, intercept) = if xs.len() >= 2 {
        let c1 = fit_slope(&xs, &ys);
        let n = xs.len() as f64;
        (c1, ys.iter().sum::<f64>() / n - c1 * xs.iter().sum::<f64>() / n)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(TightnessReport {
        p,
        pairs: pair_count,
        max_ratio,
        c1,
        c2: intercept * p as f64,
    })
}

/// `E_k|G(k,t) − G(k,s)|² = (1/p) Σ_{n<p} 4 sin²(πn(t−s)/p)`, the closed form
/// that the grid average in [`tightness_ratio`] must reproduce.
pub fn tightness_closed_form(p: u64, s: f64, t: f64) -> f64 {
    let terms: Vec<f64> = (1..p)
        .map(|n| 4.0 * (PI * n as f64 * (t - s) / p as f64).sin().powi(2))
        .collect();
    pairwise_sum(&terms) / p as f64
}

/// Number of `t` samples per arc in [`deriv_gap`].
pub const DERIV_T_SAMPLES: usize = 17;

/// `max |H̃^{(order)} − H^{(order)}| · p^{order}` over up to 64 evenly
/// spaced arcs and 17 interior offsets.
pub fn deriv_gap(table: &LegendreTable, order: u32) -> Result<f64> {
    if order != 1 && order != 2 {
        return Err(Error::domain(format!("order must be 1 or 2 (got {order})")));
    }
    let p = table.p();
    let arcs = p.min(64);
    let gaps = try_map_indexed(arcs as usize, |i| {
        let k = i as u64 * p / arcs;
        let arc = ArcFunction::new(table, k)?;
        let mut worst: f64 = 0.0;
        for j in 0..DERIV_T_SAMPLES {
            let t = (j as f64 + 0.5) / DERIV_T_SAMPLES as f64;
            let gap = (arc.h_truncated_deriv(t, order)? - arc.h_deriv(t, order)?).abs();
            worst = worst.max(gap);
        }
        Ok(worst)
    })?;
    Ok(gaps.into_iter().fold(0.0, f64::max) * (p as f64).powi(order as i32))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupReport {
    pub p: u64,
    pub sup_f: f64,
    pub sup_df: f64,
    /// `sup_f / (√p log p)`.
    pub montgomery_ratio: f64,
    /// `sup_df / (p · sup_f)`; at most 1 by Bernstein, up to grid resolution.
    pub bernstein_ratio: f64,
    /// `sup_f ≥ √p`, witnessed by the Gauss-sum point.
    pub gauss_point_ok: bool,
}

/// Grid suprema of `|F_p|` and `|F_p'|` over `16p` equispaced points.
pub fn sup_norm_report(table: &LegendreTable) -> SupReport {
    let p = table.p();
    let offsets: Vec<f64> = (0..16).map(|j| j as f64 / 16.0).collect();
    let f = FeketeEvaluator::new(table);
    // |F'(z)| = |Σ n a_n z^{n−1}| = |Σ n a_n z^n| on the circle.
    let df = FeketeEvaluator::with_coefficients(
        table.symbols().iter().enumerate().map(|(n, &s)| n as f64 * s as f64).collect(),
    );
    let sup = |ev: &FeketeEvaluator| {
        ev.at_offsets(&offsets)
            .iter()
            .flat_map(|row| row.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    };
    let (sup_f, sup_df) = (sup(&f), sup(&df));
    let pf = p as f64;
    SupReport {
        p,
        sup_f,
        sup_df,
        montgomery_ratio: sup_f / (pf.sqrt() * pf.ln()),
        bernstein_ratio: sup_df / (pf * sup_f),
        gauss_point_ok: sup_f >= pf.sqrt() * (1.0 - 1e-12),
    }
}
