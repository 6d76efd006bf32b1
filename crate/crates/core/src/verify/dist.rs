use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::LegendreTable;
use crate::error::{Error, Result};
use crate::eval::{em1, PhaseGrid};
use crate::par::{map_indexed, try_map_indexed};
use crate::process::PatternStream;

/// Axis-parallel rectangle `[re_lo, re_hi) × [im_lo, im_hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRectangle")]
pub struct Rectangle {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

#[derive(Deserialize)]
struct RawRectangle {
    re_lo: f64,
    re_hi: f64,
    im_lo: f64,
    im_hi: f64,
}

impl TryFrom<RawRectangle> for Rectangle {
    type Error = Error;

    fn try_from(r: RawRectangle) -> Result<Self> {
        Rectangle::new(r.re_lo, r.re_hi, r.im_lo, r.im_hi)
    }
}

impl Rectangle {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Result<Self> {
        if !(re_lo < re_hi && im_lo < im_hi) {
            return Err(Error::domain(format!(
                "degenerate rectangle [{re_lo}, {re_hi}] x [{im_lo}, {im_hi}]"
            )));
        }
        Ok(Rectangle { re_lo, re_hi, im_lo, im_hi })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_lo && z.re < self.re_hi && z.im >= self.im_lo && z.im < self.im_hi
    }

    /// The image under `z ↦ −z`.
    pub fn negated(&self) -> Self {
        Rectangle {
            re_lo: -self.re_hi,
            re_hi: -self.re_lo,
            im_lo: -self.im_hi,
            im_hi: -self.im_lo,
        }
    }
}

const RECTANGLES_V1: &str = include_str!("../../data/rectangles_v1.json");

/// The built-in 12-rectangle family.
pub fn default_rectangles() -> Vec<Rectangle> {
    serde_json::from_str(RECTANGLES_V1).expect("built-in rectangle file is valid")
}

/// A JSON list of `{re_lo, re_hi, im_lo, im_hi}` objects.
pub fn load_rectangles(path: &Path) -> Result<Vec<Rectangle>> {
    let text = std::fs::read_to_string(path)?;
    let rects: Vec<Rectangle> = serde_json::from_str(&text)?;
    if rects.is_empty() || rects.len() > 16 {
        return Err(Error::Format(format!("expected 1 to 16 rectangles, got {}", rects.len())));
    }
    Ok(rects)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistReport {
    pub p: u64,
    pub j: usize,
    pub n_samples: u64,
    pub seed: u64,
    pub rects: Vec<Rectangle>,
    /// Fraction of grid points `(k, t)` with `G_p(k,t)` in each rectangle.
    pub fekete: Vec<f64>,
    /// Fraction of draws `(X, θ)` with `G_X^J(θ)` in each rectangle.
    pub process: Vec<f64>,
    pub gaps: Vec<f64>,
    pub max_gap: f64,
}

fn membership(rects: &[Rectangle], z: Complex64) -> u16 {
    rects
        .iter()
        .enumerate()
        .fold(0, |acc, (i, r)| if r.contains(z) { acc | 1 << i } else { acc })
}

fn fractions(masks: impl Iterator<Item = u16>, n_rects: usize, total: u64) -> Vec<f64> {
    let mut counts = vec![0u64; n_rects];
    for m in masks {
        for (i, c) in counts.iter_mut().enumerate() {
            *c += (m >> i & 1) as u64;
        }
    }
    counts.into_iter().map(|c| c as f64 / total as f64).collect()
}

/// `G_X^J(θ)` for draw `i` of `seed`: the pattern first, then `θ` from the
/// same stream.
pub fn process_draw(j: usize, seed: u64, i: u64) -> Result<Complex64> {
    let mut stream = PatternStream::new(j, seed, i)?;
    let pattern = stream.next_pattern();
    let theta = stream.next_unit();
    if theta == 0.0 {
        return Ok(Complex64::new(-(pattern.sign(0) as f64), 0.0));
    }
    let h: f64 = pattern.iter().map(|(m, s)| s / (m as f64 - theta)).sum();
    Ok(em1(theta) * h / Complex64::new(0.0, 2.0 * PI))
}

/// Rectangle probabilities of `G_p(k, t)` over `grid_per_arc` midpoints on
/// each arc against those of `G_X^J(θ)` with `θ` uniform.
pub fn distribution_compare(
    table: &LegendreTable,
    rects: &[Rectangle],
    j: usize,
    n_samples: u64,
    grid_per_arc: usize,
    seed: u64,
) -> Result<DistReport> {
    if rects.is_empty() || rects.len() > 16 {
        return Err(Error::domain(format!("expected 1 to 16 rectangles, got {}", rects.len())));
    }
    if n_samples < 100_000 {
        return Err(Error::domain(format!("distribution needs at least 1e5 samples (got {n_samples})")));
    }
    if grid_per_arc == 0 || j == 0 {
        return Err(Error::domain("grid_per_arc and J must be positive"));
    }
    let p = table.p();
    let rows = PhaseGrid::uniform(p, grid_per_arc).evaluate_normalized(table);
    let fekete = fractions(
        rows.iter().flat_map(|row| row.iter().map(|&z| membership(rects, z))),
        rects.len(),
        p * grid_per_arc as u64,
    );
    let masks = try_map_indexed(n_samples as usize, |i| {
        process_draw(j, seed, i as u64).map(|z| membership(rects, z))
    })?;
    let process = fractions(masks.into_iter(), rects.len(), n_samples);
    let gaps: Vec<f64> = fekete.iter().zip(&process).map(|(a, b)| (a - b).abs()).collect();
    let max_gap = gaps.iter().copied().fold(0.0, f64::max);
    Ok(DistReport {
        p,
        j,
        n_samples,
        seed,
        rects: rects.to_vec(),
        fekete,
        process,
        gaps,
        max_gap,
    })
}

/// Process-side probabilities of each rectangle and of its negation, from the
/// same draws.
pub fn process_symmetry(rects: &[Rectangle], j: usize, n_samples: u64, seed: u64) -> Result<Vec<(f64, f64)>> {
    let draws = try_map_indexed(n_samples as usize, |i| process_draw(j, seed, i as u64))?;
    Ok(map_indexed(rects.len(), |r| {
        let (rect, neg) = (rects[r], rects[r].negated());
        let a = draws.iter().filter(|&&z| rect.contains(z)).count();
        let b = draws.iter().filter(|&&z| neg.contains(z)).count();
        (a as f64 / n_samples as f64, b as f64 / n_samples as f64)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{sample_pattern, TruncatedH};

    #[test]
    fn rectangle_validation() {
        assert!(Rectangle::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(serde_json::from_str::<Rectangle>(r#"{"re_lo":0,"re_hi":-1,"im_lo":0,"im_hi":1}"#).is_err());
        let r = Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(r.contains(Complex64::new(0.0, 0.5)));
        assert!(!r.contains(Complex64::new(1.0, 0.5)));
    }

    #[test]
    fn built_in_family() {
        let rects = default_rectangles();
        assert_eq!(rects.len(), 12);
        assert_eq!(rects[1], Rectangle::new(-10.0, 10.0, -10.0, 10.0).unwrap());
    }

    #[test]
    fn draw_matches_truncated_h() {
        let j = 40;
        for i in 0..20 {
            let mut s = PatternStream::new(j, 9, i).unwrap();
            let pat = s.next_pattern();
            let theta = s.next_unit();
            assert_eq!(pat, sample_pattern(j, 9, i).unwrap());
            let want = TruncatedH::new(&pat).g(theta);
            assert!((process_draw(j, 9, i).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn full_square_holds_almost_everything() {
        let t = LegendreTable::new(101).unwrap();
        let big = [Rectangle::new(-10.0, 10.0, -10.0, 10.0).unwrap()];
        let r = distribution_compare(&t, &big, 50, 100_000, 4, 1).unwrap();
        assert!(r.fekete[0] > 0.99 && r.process[0] > 0.99);
        assert!(distribution_compare(&t, &big, 50, 99_999, 4, 1).is_err());
    }
}
