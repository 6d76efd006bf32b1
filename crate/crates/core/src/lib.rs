//! Fekete polynomials `F_p(z) = Σ_{n=1}^{p-1} (n/p) z^n` on the unit circle.
//!
//! The crate evaluates `F_p` through its per-arc decomposition, computes the
//! Mahler measure, `L_q` norms and circle zero counts, simulates the limiting
//! random process `G_X(t) = Σ_m X(m) (e(t)−1)/(2πi(m−t))` with Rademacher
//! signs `X(m)`, and cross-checks the two sides.
//!
//! Modules, bottom-up:
//!
//! - [`arith`]: primality, Legendre tables, Gauss sums, the on-disk table cache.
//! - [`eval`]: Horner and chirp-Z evaluation, arc functions `G_p`, `H_p`.
//! - [`quad`]: zero bracketing, singular log-integrals, the Fekete-side drivers.
//! - [`process`]: sign patterns, exact moments, `k₀` and `k_q` estimates.
//! - [`verify`]: quantitative checks tying both sides together.
//! - [`cli`]: the `fekete` command-line front end.

pub mod arith;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod eval;
pub mod par;
pub mod process;
pub mod quad;
pub mod verify;

pub use error::{Error, Result};
pub use estimate::{Estimate, EstimateMode};
