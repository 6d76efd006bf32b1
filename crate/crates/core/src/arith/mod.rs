//! Exact modular arithmetic: primality, Legendre symbols, the quadratic Gauss
//! sum and the quadratic correlation identity.

mod cache;

pub use cache::{cache_path, load_or_build, read_table, write_table, CACHE_MAGIC, CACHE_VERSION};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin primality test, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::domain(format!("is_prime needs n >= 2, got {n}")));
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n == q {
            return Ok(true);
        }
        if n % q == 0 {
            return Ok(false);
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // These twelve bases are a witness set for all n < 3.3e24.
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reject anything that is not an odd prime, with the message the CLI shows.
pub fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 || !is_prime(p)? {
        return Err(Error::domain(format!("p must be an odd prime (got {p})")));
    }
    Ok(())
}

/// Legendre symbols `(n/p)` for every residue `n` modulo an odd prime `p`.
///
/// Immutable once built; share it freely across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreTable {
    p: u64,
    symbols: Vec<i8>,
}

impl LegendreTable {
    /// Build the table in O(p) by marking the squares `k^2 mod p`.
    pub fn new(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let n = p as usize;
        let mut symbols = vec![-1i8; n];
        symbols[0] = 0;
        // k^2 and (k+1)^2 differ by 2k+1, so the squares need no multiplication.
        let mut sq = 0u64;
        for k in 1..=(p - 1) / 2 {
            sq = (sq + 2 * k - 1) % p;
            symbols[sq as usize] = 1;
        }
        Ok(LegendreTable { p, symbols })
    }

    /// Wrap a precomputed symbol array, rejecting anything that is not the
    /// Legendre table of `p`.
    pub fn from_symbols(p: u64, symbols: Vec<i8>) -> Result<Self> {
        let expected = LegendreTable::new(p)?;
        if symbols.len() as u64 != p {
            return Err(Error::Format(format!(
                "expected {p} symbols, found {}",
                symbols.len()
            )));
        }
        if symbols != expected.symbols {
            return Err(Error::Format(format!("symbols do not match the table for p = {p}")));
        }
        Ok(expected)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(n/p)` for any integer `n`.
    #[inline]
    pub fn symbol(&self, n: i64) -> i8 {
        self.symbols[n.rem_euclid(self.p as i64) as usize]
    }

    /// The symbols indexed by residue `0..p`.
    pub fn symbols(&self) -> &[i8] {
        &self.symbols
    }

    /// Order of vanishing of `F_p` at `z = 1`.
    ///
    /// Equals the index of the first non-zero power sum `Σ n^j (n/p)`; the
    /// sums are exact in 128-bit integers for every supported `p`.
    pub fn zero_order_at_one(&self) -> u32 {
        for j in 0..4u32 {
            let sum: i128 = (1..self.p)
                .map(|n| (n as i128).pow(j) * self.symbols[n as usize] as i128)
                .sum();
            if sum != 0 {
                return j;
            }
        }
        4
    }
}

/// `e(x) = exp(2πix)`.
#[inline]
pub fn unit(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * x)
}

/// `e(n/p)` with the numerator reduced exactly before the division.
#[inline]
pub fn root_of_unity(n: i64, p: u64) -> Complex64 {
    let r = n.rem_euclid(p as i64) as f64 / p as f64;
    unit(r)
}

/// The quadratic Gauss sum `Σ_{n=1}^{p} (n/p) e(n/p)`.
///
/// Equals `√p` when `p ≡ 1 (mod 4)` and `i√p` when `p ≡ 3 (mod 4)`.
pub fn gauss_sum(table: &LegendreTable) -> Complex64 {
    let p = table.p();
    (1..p)
        .map(|n| root_of_unity(n as i64, p) * table.symbols[n as usize] as f64)
        .sum()
}

/// Closed form of [`gauss_sum`].
pub fn gauss_sum_closed_form(p: u64) -> Complex64 {
    let r = (p as f64).sqrt();
    if p % 4 == 1 {
        Complex64::new(r, 0.0)
    } else {
        Complex64::new(0.0, r)
    }
}

/// `Σ_{k=1}^{p} ((k(k+n))/p)`, computed exactly.
pub fn quadratic_correlation(table: &LegendreTable, n: i64) -> i64 {
    let p = table.p();
    let shift = n.rem_euclid(p as i64) as u64;
    (1..=p)
        .map(|k| {
            let prod = (k % p) * ((k + shift) % p) % p;
            table.symbols[prod as usize] as i64
        })
        .sum()
}
