//! Per-arc Chebyshev interpolants built from shared transform offsets.
//!
//! `G_p(k,·)` is a band-limited function of `t` (all frequencies below one
//! cycle per unit). `H_p(k,·)` divided by its endpoint factor
//! `t^{ν_0} (1−t)^{ν_1}` is analytic and non-zero near both ends, with the
//! nearest singularities at `t = −1` and `t = 2`. A few dozen
//! Chebyshev nodes therefore reproduce both to rounding level, so one
//! transform per node serves every arc and later point evaluations on an arc
//! cost O(nodes) instead of O(p).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::arc::em1;
use super::FeketeEvaluator;
use crate::arith::{gauss_sum, LegendreTable};

/// First-kind Chebyshev nodes mapped to `[0, 1]`, in increasing order.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .rev()
        .map(|j| 0.5 * (1.0 + (PI * (j as f64 + 0.5) / n as f64).cos()))
        .collect()
}

/// A Chebyshev series on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Chebyshev<T> {
    coeffs: Vec<T>,
}

macro_rules! cheb_impl {
    ($t:ty, $zero:expr) => {
        impl Chebyshev<$t> {
            /// Interpolate samples taken at [`chebyshev_nodes`]`(values.len())`.
            pub fn from_values(values: &[$t]) -> Self {
                let n = values.len();
                let coeffs = (0..n)
                    .map(|j| {
                        let scale = if j == 0 { 1.0 } else { 2.0 } / n as f64;
                        let sum: $t = values
                            .iter()
                            .rev()
                            .enumerate()
                            .map(|(i, &v)| {
                                v * (PI * j as f64 * (i as f64 + 0.5) / n as f64).cos()
                            })
                            .sum();
                        sum * scale
                    })
                    .collect();
                Chebyshev { coeffs }
            }

            pub fn eval(&self, t: f64) -> $t {
                let x = 2.0 * t - 1.0;
                let (mut b1, mut b2) = ($zero, $zero);
                for &c in self.coeffs[1..].iter().rev() {
                    let b0 = c + b1 * (2.0 * x) - b2;
                    b2 = b1;
                    b1 = b0;
                }
                self.coeffs[0] + b1 * x - b2
            }

            /// Series of the derivative with respect to `t`.
            pub fn derivative(&self) -> Self {
                let n = self.coeffs.len();
                if n < 2 {
                    return Chebyshev { coeffs: vec![$zero] };
                }
                let mut d = vec![$zero; n];
                for j in (1..n).rev() {
                    let next = if j + 1 < n { d[j + 1] } else { $zero };
                    d[j - 1] = next + self.coeffs[j] * (2.0 * j as f64);
                }
                d[0] *= 0.5;
                d.truncate(n - 1);
                // d/dt = 2 d/dx on [0, 1]
                for c in d.iter_mut() {
                    *c *= 2.0;
                }
                Chebyshev { coeffs: d }
            }

            pub fn coefficients(&self) -> &[$t] {
                &self.coeffs
            }
        }
    };
}

cheb_impl!(f64, 0.0);
cheb_impl!(Complex64, Complex64::new(0.0, 0.0));

/// Interpolants of `G_p(k,·)` and of the desingularized
/// `S_k(t) = H_p(k,t) / (t^{ν_0} (1−t)^{ν_1})` for every arc of one prime,
/// where `(ν_0, ν_1)` are the [`endpoint orders`](ArcBank::endpoint_orders).
pub struct ArcBank {
    p: u64,
    zero_order_at_one: u32,
    g: Vec<Chebyshev<Complex64>>,
    reg: Vec<Chebyshev<f64>>,
    reg_deriv: Vec<Chebyshev<f64>>,
}

fn endpoint_orders(p: u64, zero_order_at_one: u32, k: usize) -> (i32, i32) {
    let at_one = zero_order_at_one as i32 - 1;
    let left = if k == 0 { at_one } else { -1 };
    let right = if k as u64 == p - 1 { at_one } else { -1 };
    (left, right)
}

#[inline]
fn endpoint_factor(t: f64, (a, b): (i32, i32)) -> f64 {
    t.powi(a) * (1.0 - t).powi(b)
}

impl ArcBank {
    pub fn build(table: &LegendreTable, nodes: usize) -> Self {
        let p = table.p();
        let ts = chebyshev_nodes(nodes);
        let tau = gauss_sum(table);
        let rows = FeketeEvaluator::new(table).at_offsets(&ts);
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);

        let arcs = p as usize;
        let zero_order_at_one = table.zero_order_at_one();
        let mut g = Vec::with_capacity(arcs);
        let mut reg = Vec::with_capacity(arcs);
        let mut reg_deriv = Vec::with_capacity(arcs);
        let mut gv = vec![Complex64::new(0.0, 0.0); nodes];
        let mut rv = vec![0.0; nodes];
        for k in 0..arcs {
            let orders = endpoint_orders(p, zero_order_at_one, k);
            for (j, &t) in ts.iter().enumerate() {
                let gk = rows[j][k] / tau;
                gv[j] = gk;
                rv[j] = (two_pi_i * gk / em1(t)).re / endpoint_factor(t, orders);
            }
            let r = Chebyshev::<f64>::from_values(&rv);
            reg_deriv.push(r.derivative());
            reg.push(r);
            g.push(Chebyshev::<Complex64>::from_values(&gv));
        }
        ArcBank {
            p,
            zero_order_at_one,
            g,
            reg,
            reg_deriv,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `G_p(k, t)`.
    pub fn g(&self, k: usize, t: f64) -> Complex64 {
        self.g[k].eval(t)
    }

    /// `S_k(t)`, finite and non-zero at both endpoints.
    pub fn desingularized(&self, k: usize, t: f64) -> f64 {
        self.reg[k].eval(t)
    }

    pub fn desingularized_deriv(&self, k: usize, t: f64) -> f64 {
        self.reg_deriv[k].eval(t)
    }

    /// `log|H_p(k, t)|`, accurate even where `H` is tiny next to a zero endpoint.
    pub fn log_abs_h(&self, k: usize, t: f64) -> f64 {
        let (a, b) = self.endpoint_orders(k);
        self.reg[k].eval(t).abs().ln() + a as f64 * t.ln() + b as f64 * (1.0 - t).ln()
    }

    /// `H_p(k, t)` for `t ∈ (0, 1)`.
    pub fn h(&self, k: usize, t: f64) -> f64 {
        self.reg[k].eval(t) * endpoint_factor(t, self.endpoint_orders(k))
    }

    pub fn h_deriv(&self, k: usize, t: f64) -> f64 {
        let (a, b) = self.endpoint_orders(k);
        let w = endpoint_factor(t, (a, b));
        let dlog = a as f64 / t - b as f64 / (1.0 - t);
        w * (self.reg_deriv[k].eval(t) + self.reg[k].eval(t) * dlog)
    }

    /// Endpoint behaviour of `H_p(k,·)` at `t = 0` and `t = 1` as orders:
    /// −1 for a simple pole, 0 for a finite non-zero value, +1 for a simple
    /// zero (a double zero of `F_p` at `z = 1`).
    pub fn endpoint_orders(&self, k: usize) -> (i32, i32) {
        endpoint_orders(self.p, self.zero_order_at_one, k)
    }
}
