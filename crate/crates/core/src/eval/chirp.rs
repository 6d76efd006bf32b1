//! Arbitrary-length DFT by the chirp-Z (Bluestein) factorization.
//!
//! `X_k = Σ_j x_j e(jk/n)` is rewritten with `jk = (j² + k² − (k−j)²)/2` as a
//! convolution against the chirp `e(−d²/2n)`, which is evaluated with a
//! power-of-two FFT of length at least `2n − 1`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// `e(j²/2n)`, with `j² mod 2n` reduced exactly so the phase stays accurate
/// for large `j`.
fn chirp(j: u64, n: u64) -> Complex64 {
    let two_n = 2 * n as u128;
    let r = (j as u128 * j as u128) % two_n;
    Complex64::from_polar(1.0, std::f64::consts::PI * r as f64 / n as f64)
}

/// A planned length-`n` transform `X_k = Σ_j x_j e(jk/n)`.
pub struct ChirpZ {
    n: usize,
    fft_len: usize,
    /// `e(j²/2n)` for `j < n`.
    twiddles: Vec<Complex64>,
    /// FFT of the wrapped chirp `e(−d²/2n)`, pre-scaled by `1/fft_len`.
    kernel: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl ChirpZ {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "transform length must be positive");
        let fft_len = (2 * n - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);

        let twiddles: Vec<Complex64> = (0..n as u64).map(|j| chirp(j, n as u64)).collect();
        let scale = 1.0 / fft_len as f64;
        let mut kernel = vec![Complex64::new(0.0, 0.0); fft_len];
        for d in 0..n {
            let c = twiddles[d].conj() * scale;
            kernel[d] = c;
            if d > 0 {
                kernel[fft_len - d] = c;
            }
        }
        forward.process(&mut kernel);

        ChirpZ {
            n,
            fft_len,
            twiddles,
            kernel,
            forward,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Transform `input` (length `n`), returning `n` outputs.
    pub fn transform(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.n, "input length must match the plan");
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_len];
        for ((b, x), w) in buf.iter_mut().zip(input).zip(&self.twiddles) {
            *b = x * w;
        }
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel) {
            *b *= k;
        }
        self.inverse.process(&mut buf);
        buf.truncate(self.n);
        for (b, w) in buf.iter_mut().zip(&self.twiddles) {
            *b *= w;
        }
        buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::unit;

    fn naive(input: &[Complex64]) -> Vec<Complex64> {
        let n = input.len() as u64;
        (0..n)
            .map(|k| {
                input
                    .iter()
                    .enumerate()
                    .map(|(j, x)| x * unit(((j as u64 * k) % n) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for n in [1usize, 2, 3, 7, 16, 31, 97, 101, 128] {
            let input: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 1.3).cos()))
                .collect();
            let fast = ChirpZ::new(n).transform(&input);
            let slow = naive(&input);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() < 1e-11 * n as f64, "n = {n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn impulse_gives_flat_spectrum() {
        let mut input = vec![Complex64::new(0.0, 0.0); 13];
        input[0] = Complex64::new(1.0, 0.0);
        for x in ChirpZ::new(13).transform(&input) {
            assert!((x - 1.0).norm() < 1e-14);
        }
    }
}
