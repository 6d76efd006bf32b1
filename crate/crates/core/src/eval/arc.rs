use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::LegendreTable;
use crate::error::{Error, Result};

/// `e(x) − 1`, accurate for small `x`.
#[inline]
pub fn em1(x: f64) -> Complex64 {
    let s = (PI * x).sin();
    Complex64::new(-2.0 * s * s, (2.0 * PI * x).sin())
}

/// `α_p(m; t) = (e(t) − 1) / (p (e((m−t)/p) − 1))`, continuous at `t = m`.
pub fn alpha(p: u64, m: i64, t: f64) -> Complex64 {
    let d = m as f64 - t;
    if d == 0.0 {
        return Complex64::new(-1.0, 0.0);
    }
    // e(t) = e(t − m) for integer m.
    em1(-d) / (em1(d / p as f64) * p as f64)
}

/// `g_m(t) = (e(t) − 1) / (2πi (m − t))`, continuous at `t = m`.
pub fn process_coefficient(m: i64, t: f64) -> Complex64 {
    let d = m as f64 - t;
    if d == 0.0 {
        return Complex64::new(-1.0, 0.0);
    }
    em1(-d) / Complex64::new(0.0, 2.0 * PI * d)
}

/// The pair `G_p(k,·)`, `H_p(k,·)` on one arc, evaluated by direct O(p) sums.
///
/// With `c_k(m) = −((k+m)/p)` and `|m| ≤ (p−1)/2`:
///
/// ```text
/// G_p(k,t) = Σ c_k(m) α_p(m; t)
/// H_p(k,t) = (π/p) Σ c_k(m) cot(π(m−t)/p)
/// ```
///
/// `H_p(k,·)` has a simple pole at `t = 0` unless `k = 0`, and at `t = 1`
/// unless `k = p − 1`; both exceptional endpoints map to `z = 1`.
#[derive(Clone, Copy, Debug)]
pub struct ArcFunction<'a> {
    table: &'a LegendreTable,
    k: u64,
}

impl<'a> ArcFunction<'a> {
    pub fn new(table: &'a LegendreTable, k: u64) -> Result<Self> {
        if k >= table.p() {
            return Err(Error::domain(format!("arc index {k} outside [0, {})", table.p())));
        }
        Ok(ArcFunction { table, k })
    }

    pub fn p(&self) -> u64 {
        self.table.p()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    fn half(&self) -> i64 {
        ((self.table.p() - 1) / 2) as i64
    }

    /// `c_k(m) = −((k+m)/p)`.
    #[inline]
    pub fn coefficient(&self, m: i64) -> f64 {
        -(self.table.symbol(self.k as i64 + m) as f64)
    }

    fn terms(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let h = self.half();
        (-h..=h).map(move |m| (m, self.coefficient(m)))
    }

    /// Sum of `|coefficients|` times kernel size; the natural rounding scale.
    pub fn scale(&self) -> f64 {
        (self.p() as f64).ln() + 2.0
    }

    /// `G_p(k, t)` for `t ∈ [0, 1]`.
    pub fn g(&self, t: f64) -> Result<Complex64> {
        check_closed(t)?;
        let p = self.p();
        Ok(self.terms().map(|(m, c)| alpha(p, m, t) * c).sum())
    }

    /// `H_p(k, t)` for `t ∈ (0, 1)` by the cotangent sum.
    pub fn h(&self, t: f64) -> Result<f64> {
        check_open(t)?;
        let w = PI / self.p() as f64;
        Ok(w * self
            .terms()
            .map(|(m, c)| c / (w * (m as f64 - t)).tan())
            .sum::<f64>())
    }

    /// `H_p(k, t)` from the complex kernel `2πi / (p (e((m−t)/p) − 1))`.
    ///
    /// Test oracle only: the imaginary part cancels because the coefficients
    /// sum to zero over a full period.
    pub fn h_complex(&self, t: f64) -> Result<Complex64> {
        check_open(t)?;
        let p = self.p() as f64;
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        Ok(self
            .terms()
            .map(|(m, c)| two_pi_i / (em1((m as f64 - t) / p) * p) * c)
            .sum())
    }

    /// First or second derivative of `H_p(k, ·)`.
    pub fn h_deriv(&self, t: f64, order: u32) -> Result<f64> {
        check_open(t)?;
        let w = PI / self.p() as f64;
        match order {
            1 => Ok(w * w
                * self
                    .terms()
                    .map(|(m, c)| {
                        let s = (w * (m as f64 - t)).sin();
                        c / (s * s)
                    })
                    .sum::<f64>()),
            2 => Ok(2.0 * w * w * w
                * self
                    .terms()
                    .map(|(m, c)| {
                        let (s, co) = (w * (m as f64 - t)).sin_cos();
                        c * co / (s * s * s)
                    })
                    .sum::<f64>()),
            _ => Err(Error::domain(format!("derivative order {order} not in {{1, 2}}"))),
        }
    }

    /// `H̃_p(k, t) = Σ c_k(m) / (m − t)`.
    pub fn h_truncated(&self, t: f64) -> Result<f64> {
        check_open(t)?;
        Ok(self.terms().map(|(m, c)| c / (m as f64 - t)).sum())
    }

    /// Derivatives of [`Self::h_truncated`]: `Σ c/(m−t)²` and `2 Σ c/(m−t)³`.
    pub fn h_truncated_deriv(&self, t: f64, order: u32) -> Result<f64> {
        check_open(t)?;
        match order {
            1 => Ok(self.terms().map(|(m, c)| c / (m as f64 - t).powi(2)).sum()),
            2 => Ok(2.0 * self.terms().map(|(m, c)| c / (m as f64 - t).powi(3)).sum::<f64>()),
            _ => Err(Error::domain(format!("derivative order {order} not in {{1, 2}}"))),
        }
    }
}

fn check_closed(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [0, 1]")));
    }
    Ok(())
}

fn check_open(t: f64) -> Result<()> {
    if t == 0.0 || t == 1.0 {
        return Err(Error::Pole { t });
    }
    if !(0.0..1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside (0, 1)")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gauss_sum, unit};
    use crate::eval::fekete_horner;

    fn direct_ratio(table: &LegendreTable, k: u64, t: f64) -> Complex64 {
        let p = table.p() as f64;
        fekete_horner(table, unit((k as f64 + t) / p)).unwrap() / gauss_sum(table)
    }

    #[test]
    fn g_at_gauss_point_is_one() {
        for p in [5u64, 7, 101] {
            let table = LegendreTable::new(p).unwrap();
            let g = ArcFunction::new(&table, 1).unwrap().g(0.0).unwrap();
            assert!((g - 1.0).norm() < 1e-12, "p = {p}: {g}");
        }
    }

    #[test]
    fn g_matches_direct_ratio() {
        let table = LegendreTable::new(101).unwrap();
        for (k, t) in [(7u64, 0.4), (0, 0.5), (100, 0.99), (50, 1e-7), (3, 1.0)] {
            let g = ArcFunction::new(&table, k).unwrap().g(t).unwrap();
            let d = direct_ratio(&table, k, t);
            assert!((g - d).norm() <= 1e-8 * d.norm().max(1e-3), "k={k} t={t}: {g} vs {d}");
        }
    }

    #[test]
    fn g_second_moment_over_arcs() {
        let table = LegendreTable::new(1009).unwrap();
        let mean: f64 = (0..1009)
            .map(|k| ArcFunction::new(&table, k).unwrap().g(0.37).unwrap().norm_sqr())
            .sum::<f64>()
            / 1009.0;
        assert!((mean - 1.0).abs() < 0.15);
        assert!((mean - 1008.0 / 1009.0).abs() < 1e-9);
    }

    #[test]
    fn h_matches_complex_form_and_is_real() {
        let table = LegendreTable::new(101).unwrap();
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..100 {
            let k = next() % 101;
            let t = ((next() >> 11) as f64 / (1u64 << 53) as f64).clamp(1e-3, 1.0 - 1e-3);
            let arc = ArcFunction::new(&table, k).unwrap();
            let h = arc.h(t).unwrap();
            let hc = arc.h_complex(t).unwrap();
            let via_g = Complex64::new(0.0, 2.0 * PI) * arc.g(t).unwrap() / em1(t);
            assert!((h - via_g.re).abs() <= 1e-8, "k={k} t={t}");
            assert!(hc.im.abs() <= 1e-8);
            assert!((h - hc.re).abs() <= 1e-8);
        }
    }

    #[test]
    fn pole_and_domain_errors() {
        let table = LegendreTable::new(11).unwrap();
        let arc = ArcFunction::new(&table, 3).unwrap();
        assert!(matches!(arc.h(0.0), Err(Error::Pole { .. })));
        assert!(matches!(arc.h(1.0), Err(Error::Pole { .. })));
        assert!(matches!(arc.g(1.5), Err(Error::Domain(_))));
        assert!(matches!(arc.h_deriv(0.5, 3), Err(Error::Domain(_))));
        assert!(ArcFunction::new(&table, 11).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let table = LegendreTable::new(101).unwrap();
        for (k, t) in [(3u64, 0.3), (40, 0.55), (99, 0.81)] {
            let arc = ArcFunction::new(&table, k).unwrap();
            let h = 1e-5;
            let fd1 = (arc.h(t + h).unwrap() - arc.h(t - h).unwrap()) / (2.0 * h);
            let d1 = arc.h_deriv(t, 1).unwrap();
            assert!((fd1 - d1).abs() <= 1e-5 * d1.abs().max(1.0), "k={k}");
            let fd2 = (arc.h_deriv(t + h, 1).unwrap() - arc.h_deriv(t - h, 1).unwrap()) / (2.0 * h);
            let d2 = arc.h_deriv(t, 2).unwrap();
            assert!((fd2 - d2).abs() <= 1e-4 * d2.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn truncated_derivatives_match_finite_differences() {
        let table = LegendreTable::new(101).unwrap();
        let arc = ArcFunction::new(&table, 17).unwrap();
        let (t, h) = (0.42, 1e-5);
        let fd1 = (arc.h_truncated(t + h).unwrap() - arc.h_truncated(t - h).unwrap()) / (2.0 * h);
        assert!((fd1 - arc.h_truncated_deriv(t, 1).unwrap()).abs() < 1e-5 * fd1.abs().max(1.0));
        let fd2 = (arc.h_truncated_deriv(t + h, 1).unwrap()
            - arc.h_truncated_deriv(t - h, 1).unwrap())
            / (2.0 * h);
        assert!((fd2 - arc.h_truncated_deriv(t, 2).unwrap()).abs() < 1e-4 * fd2.abs().max(1.0));
    }

    #[test]
    fn endpoint_poles_follow_arc_index() {
        // Residue of H at t = 0 is -c_k(0) = (k/p); it vanishes only for k = 0.
        let table = LegendreTable::new(11).unwrap();
        let eps = 1e-7;
        for k in 0..11u64 {
            let arc = ArcFunction::new(&table, k).unwrap();
            let near0 = arc.h(eps).unwrap() * eps;
            let near1 = arc.h(1.0 - eps).unwrap() * eps;
            assert_eq!(near0.abs() > 0.5, k != 0, "k = {k}");
            assert_eq!(near1.abs() > 0.5, k != 10, "k = {k}");
        }
    }

    #[test]
    fn alpha_and_g_limits() {
        assert!((alpha(101, 0, 0.0) + 1.0).norm() < 1e-15);
        assert!((alpha(101, 1, 1.0) + 1.0).norm() < 1e-15);
        assert!(alpha(101, 5, 0.0).norm() < 1e-15);
        assert!((process_coefficient(0, 1e-9) + 1.0).norm() < 1e-8);
        // alpha_p(m;t) → g_m(t) as p grows
        let a = alpha(100_003, 3, 0.3);
        let g = process_coefficient(3, 0.3);
        assert!((a - g).norm() < 1e-4);
    }
}
