//! Integration of `log|f|` and `|f|^q` for real-analytic `f` with simple zeros
//! and simple endpoint poles or zeros, plus the Fekete-side drivers built on it.
//!
//! `∫ log|f|` is split as
//!
//! ```text
//! log|f(t)| = ν_a log(t−a) + ν_b log(b−t) + Σ_i log|t−z_i| + log|r(t)|
//! ```
//!
//! where `ν_a`, `ν_b` are the endpoint orders and `z_i` the bracketed zeros.
//! The logarithmic pieces integrate in closed form and `r` is smooth and
//! zero-free, so adaptive Gauss-Legendre handles the remainder.

mod fekete;
mod rule;

pub use fekete::{
    arc_log_integral, circle_zero_count, circle_zero_count_bank, lq_norm_bank, lq_norm_fekete,
    mahler_bank, mahler_fekete, ZeroCount,
};
pub use rule::GaussLegendre;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knobs shared by every integral in the crate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Gauss-Legendre order per panel.
    pub gl_nodes: usize,
    /// Uniform scan points used to bracket zeros.
    pub scan_points: usize,
    /// Half-width of the panel placed around each zero.
    pub window: f64,
    /// Absolute tolerance per unit length for adaptive panels.
    pub tol: f64,
    pub max_depth: u32,
    /// Chebyshev nodes per arc for the interpolant bank.
    pub cheb_nodes: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            gl_nodes: 32,
            scan_points: 64,
            window: 1e-3,
            tol: 1e-12,
            max_depth: 40,
            cheb_nodes: 32,
        }
    }
}

/// A refined simple zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroBracket {
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
    pub slope: f64,
}

/// Result of [`integrate_log_abs`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogIntegral {
    pub value: f64,
    pub zeros: Vec<ZeroBracket>,
    pub error_estimate: f64,
    pub nodes_used: usize,
}

const BISECT_WIDTH: f64 = 1e-12;
/// Evaluations allowed per adaptive integral before panels stop splitting.
const EVAL_BUDGET: usize = 200_000;
/// Panels narrower than this are not split further. A bracketed root is only
/// known to ~1e-15, so the subtracted logarithm can leave a tiny kink that no
/// amount of splitting removes; its contribution is below 1e-9.
const MIN_PANEL: f64 = 1e-10;

/// Scan points on the open interval, graded geometrically toward both ends so
/// that zeros close to an endpoint singularity are still seen.
pub fn scan_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let len = b - a;
    let mut xs: Vec<f64> = (1..n - 1)
        .map(|i| a + len * i as f64 / (n - 1) as f64)
        .collect();
    for j in 2..=7 {
        let d = len * 10f64.powi(-j);
        xs.push(a + d);
        xs.push(b - d);
    }
    xs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    xs.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * len);
    xs
}

fn sample<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64> {
    let v = f(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { t, value: v })
    }
}

/// Bisect a sign change of `f` on `[lo, hi]` down to [`BISECT_WIDTH`].
fn refine<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<(f64, f64, f64)> {
    let mut fhi = sample(f, hi)?;
    for _ in 0..200 {
        if hi - lo <= BISECT_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = sample(f, mid)?;
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    let mut root = lo - flo * (hi - lo) / (fhi - flo);
    if !(root >= lo && root <= hi) {
        root = 0.5 * (lo + hi);
    }
    Ok((lo, hi, root))
}

fn central_slope<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, t: f64) -> Result<f64> {
    let h = (1e-6 * (b - a)).min(0.5 * (t - a)).min(0.5 * (b - t));
    Ok((sample(f, t + h)? - sample(f, t - h)?) / (2.0 * h))
}

/// Sign changes of `f` on the scan grid of `[a, b]`, each bisected to width
/// `1e-12`. The slope is a central difference at the root.
pub fn bracket_zeros<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, scan_points: usize) -> Result<Vec<ZeroBracket>> {
    if scan_points < 16 {
        return Err(Error::domain("bracket_zeros needs at least 16 scan points"));
    }
    let grid = scan_grid(a, b, scan_points);
    let values = grid.iter().map(|&t| sample(&f, t)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        if (values[i] < 0.0) != (values[i + 1] < 0.0) {
            let (lo, hi, root) = refine(&f, grid[i], grid[i + 1], values[i])?;
            let slope = central_slope(&f, a, b, root)?;
            out.push(ZeroBracket { lo, hi, root, slope });
        }
    }
    Ok(out)
}

/// [`bracket_zeros`] that also looks between scan points where `f` keeps its
/// sign but `df` changes sign toward zero: if `f` flips at that extremum the
/// interval holds two zeros and both are bracketed.
pub fn bracket_zeros_with_derivative<F, D>(
    f: F,
    df: D,
    a: f64,
    b: f64,
    scan_points: usize,
) -> Result<Vec<ZeroBracket>>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if scan_points < 16 {
        return Err(Error::domain("bracket_zeros needs at least 16 scan points"));
    }
    let grid = scan_grid(a, b, scan_points);
    let values = grid.iter().map(|&t| sample(&f, t)).collect::<Result<Vec<_>>>()?;
    let derivs = grid.iter().map(|&t| sample(&df, t)).collect::<Result<Vec<_>>>()?;
    let mut spans = Vec::new();
    for i in 0..grid.len() - 1 {
        let (x0, x1) = (grid[i], grid[i + 1]);
        let (f0, f1) = (values[i], values[i + 1]);
        if (f0 < 0.0) != (f1 < 0.0) {
            spans.push((x0, x1, f0));
            continue;
        }
        let s = if f0 < 0.0 { -1.0 } else { 1.0 };
        // |f| falls then rises: an extremum of f pointing toward zero.
        if s * derivs[i] < 0.0 && s * derivs[i + 1] > 0.0 {
            let (_, _, c) = refine(&df, x0, x1, derivs[i])?;
            let fc = sample(&f, c)?;
            if (fc < 0.0) != (f0 < 0.0) {
                spans.push((x0, c, f0));
                spans.push((c, x1, fc));
            }
        }
    }
    spans
        .into_iter()
        .map(|(lo, hi, flo)| {
            let (lo, hi, root) = refine(&f, lo, hi, flo)?;
            Ok(ZeroBracket { lo, hi, root, slope: sample(&df, root)? })
        })
        .collect()
}

/// `∫_a^b log|x − z| dx`.
fn log_distance_integral(a: f64, b: f64, z: f64) -> f64 {
    let anti = |x: f64| if x == 0.0 { 0.0 } else { x * x.abs().ln() - x };
    anti(b - z) - anti(a - z)
}

/// Median of `|f|` at 16 interior points.
fn typical_scale<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mut v: Vec<f64> = (0..16)
        .map(|i| f(a + (b - a) * (i as f64 + 0.5) / 16.0).abs())
        .filter(|x| x.is_finite())
        .collect();
    if v.is_empty() {
        return 1.0;
    }
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v[v.len() / 2]
}

/// Adaptive Gauss-Legendre with the whole-versus-halves error test.
struct Adaptive<'r> {
    rule: &'r GaussLegendre,
    tol: f64,
    max_depth: u32,
    value: f64,
    error: f64,
    evals: usize,
}

impl<'r> Adaptive<'r> {
    fn new(rule: &'r GaussLegendre, cfg: &QuadConfig) -> Self {
        Adaptive {
            rule,
            tol: cfg.tol,
            max_depth: cfg.max_depth,
            value: 0.0,
            error: 0.0,
            evals: 0,
        }
    }

    fn panel<G: FnMut(f64) -> f64>(&mut self, g: &mut G, a: f64, b: f64) {
        if b <= a {
            return;
        }
        let whole = self.rule.integrate(a, b, &mut *g);
        self.evals += self.rule.len();
        self.split(g, a, b, whole, self.max_depth);
    }

    fn split<G: FnMut(f64) -> f64>(&mut self, g: &mut G, a: f64, b: f64, whole: f64, depth: u32) {
        let m = 0.5 * (a + b);
        let left = self.rule.integrate(a, m, &mut *g);
        let right = self.rule.integrate(m, b, &mut *g);
        self.evals += 2 * self.rule.len();
        let halves = left + right;
        let diff = (halves - whole).abs();
        let floor = 1e-14 * (left.abs() + right.abs()) + 1e-15 * (b - a);
        let exhausted = depth == 0 || self.evals >= EVAL_BUDGET || b - a < MIN_PANEL;
        if diff <= (self.tol * (b - a)).max(floor) || exhausted {
            self.value += halves;
            self.error += diff.max(floor);
            return;
        }
        self.split(g, a, m, left, depth - 1);
        self.split(g, m, b, right, depth - 1);
    }
}

/// `∫_a^b g` by adaptive Gauss-Legendre with forced breakpoints.
///
/// Returns `(value, error_estimate, evaluations)`.
pub fn integrate_adaptive<G: FnMut(f64) -> f64>(
    mut g: G,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> (f64, f64, usize) {
    let rule = GaussLegendre::cached(cfg.gl_nodes);
    let mut acc = Adaptive::new(&rule, cfg);
    for w in breakpoints.windows(2) {
        acc.panel(&mut g, w[0], w[1]);
    }
    (acc.value, acc.error, acc.evals)
}

/// `∫_a^b log|f| dt` for `f` with the listed simple zeros in `(a, b)`.
///
/// `orders = (ν_a, ν_b)` give the behaviour of `f` at the endpoints:
/// `f(t) ~ c (t−a)^{ν_a}` as `t → a` and `f(t) ~ c (b−t)^{ν_b}` as `t → b`,
/// so −1 is a simple pole, 0 a regular non-zero value and +1 a simple zero.
/// `f` is never evaluated at `a` or `b`.
pub fn integrate_log_abs<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    zeros: &[ZeroBracket],
    orders: (i32, i32),
    cfg: &QuadConfig,
) -> Result<LogIntegral> {
    integrate_log_abs_of(|t| f(t).abs().ln(), a, b, zeros, orders, cfg)
}

/// [`integrate_log_abs`] with `log|f|` supplied directly, for integrands whose
/// logarithm is known more accurately than `f` itself near an endpoint zero.
pub fn integrate_log_abs_of<L: Fn(f64) -> f64>(
    log_f: L,
    a: f64,
    b: f64,
    zeros: &[ZeroBracket],
    orders: (i32, i32),
    cfg: &QuadConfig,
) -> Result<LogIntegral> {
    if !(a < b) {
        return Err(Error::domain(format!("empty interval [{a}, {b}]")));
    }
    let mut zeros: Vec<ZeroBracket> = zeros.to_vec();
    zeros.sort_by(|x, y| x.root.partial_cmp(&y.root).unwrap());
    if zeros.iter().any(|z| !(z.root > a && z.root < b)) {
        return Err(Error::domain("zeros must lie strictly inside the interval"));
    }
    let scale = typical_scale(&|t| log_f(t).exp(), a, b);
    for z in &zeros {
        if !(z.slope.abs() >= 1e-8 * scale) {
            return Err(Error::DegenerateZero {
                t: z.root,
                slope: z.slope,
                scale,
                arc: None,
            });
        }
    }

    let len = b - a;
    let (nu_a, nu_b) = (orders.0 as f64, orders.1 as f64);
    let end = len * len.ln() - len;
    let mut closed = nu_a * end + nu_b * end;
    let mut root_error = 0.0;
    for z in &zeros {
        closed += log_distance_integral(a, b, z.root);
        let w = (z.hi - z.lo).max(f64::EPSILON);
        root_error += w * (1.0 + w.ln().abs());
    }

    let mut points = vec![a, b];
    for (i, z) in zeros.iter().enumerate() {
        let left = if i == 0 { z.root - a } else { z.root - zeros[i - 1].root };
        let right = if i + 1 == zeros.len() { b - z.root } else { zeros[i + 1].root - z.root };
        let w = cfg.window.min(0.25 * left).min(0.25 * right);
        points.extend([z.root - w, z.root, z.root + w]);
    }
    points.sort_by(|x, y| x.partial_cmp(y).unwrap());
    points.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * len);

    let roots: Vec<f64> = zeros.iter().map(|z| z.root).collect();
    let mut bad: Option<(f64, f64)> = None;
    let remainder = |t: f64| {
        let mut v = log_f(t);
        if nu_a != 0.0 {
            v -= nu_a * (t - a).ln();
        }
        if nu_b != 0.0 {
            v -= nu_b * (b - t).ln();
        }
        for &z in &roots {
            v -= (t - z).abs().ln();
        }
        if !v.is_finite() {
            bad.get_or_insert((t, v));
            return 0.0;
        }
        v
    };
    let (smooth, err, evals) = integrate_adaptive(remainder, &points, cfg);
    if let Some((t, value)) = bad {
        return Err(Error::NonFinite { t, value });
    }
    Ok(LogIntegral {
        value: closed + smooth,
        zeros,
        error_estimate: err + root_error,
        nodes_used: evals,
    })
}
