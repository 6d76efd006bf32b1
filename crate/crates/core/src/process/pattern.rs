use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rademacher signs `X(m)` for `|m| ≤ J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern {
    j: usize,
    signs: Vec<i8>,
}

impl SignPattern {
    /// `signs[i]` is `X(i − J)`.
    pub fn new(j: usize, signs: Vec<i8>) -> Result<Self> {
        if j == 0 {
            return Err(Error::domain("truncation level J must be at least 1"));
        }
        if signs.len() != 2 * j + 1 {
            return Err(Error::domain(format!(
                "pattern for J = {j} needs {} signs, got {}",
                2 * j + 1,
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::domain("signs must be +1 or -1"));
        }
        Ok(SignPattern { j, signs })
    }

    pub fn constant(j: usize, sign: i8) -> Result<Self> {
        Self::new(j, vec![sign; 2 * j + 1])
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `X(m)` for `|m| ≤ J`.
    pub fn sign(&self, m: i64) -> i8 {
        self.signs[(m + self.j as i64) as usize]
    }

    /// `(m, X(m))` for `m = −J..=J`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let j = self.j as i64;
        self.signs.iter().enumerate().map(move |(i, &s)| (i as i64 - j, s as f64))
    }

    pub fn negated(&self) -> Self {
        SignPattern {
            j: self.j,
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// Pattern number `bits` in the enumeration order used by the exact
    /// evaluators: bit `i` set means `X(i − J) = −1`.
    pub fn from_bits(j: usize, bits: u64) -> Self {
        let signs = (0..2 * j + 1)
            .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        SignPattern { j, signs }
    }
}

/// Fills signs center-out (`m = 0, 1, −1, 2, −2, …`) so that patterns drawn
/// at different `J` from the same stream agree on their common indices.
fn fill_center_out(rng: &mut ChaCha8Rng, j: usize) -> Vec<i8> {
    let mut signs = vec![0i8; 2 * j + 1];
    let mut word = 0u64;
    let mut left = 0;
    let mut next = || {
        if left == 0 {
            word = rng.next_u64();
            left = 64;
        }
        left -= 1;
        let bit = word & 1;
        word >>= 1;
        if bit == 1 {
            -1
        } else {
            1
        }
    };
    signs[j] = next();
    for i in 1..=j {
        signs[j + i] = next();
        signs[j - i] = next();
    }
    signs
}

/// The random stream owned by sample `index` under `seed`.
///
/// Independent of scheduling: any worker can regenerate it from the pair.
pub struct PatternStream {
    rng: ChaCha8Rng,
    j: usize,
}

impl PatternStream {
    pub fn new(j: usize, seed: u64, index: u64) -> Result<Self> {
        if j == 0 {
            return Err(Error::domain("truncation level J must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Ok(PatternStream { rng, j })
    }

    pub fn next_pattern(&mut self) -> SignPattern {
        SignPattern {
            j: self.j,
            signs: fill_center_out(&mut self.rng, self.j),
        }
    }

    /// A uniform real in `[0, 1)` from the same stream.
    pub fn next_unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// The first pattern of stream `(seed, index)`.
pub fn sample_pattern(j: usize, seed: u64, index: u64) -> Result<SignPattern> {
    Ok(PatternStream::new(j, seed, index)?.next_pattern())
}
