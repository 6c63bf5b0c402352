//! Arithmetic strategy on complete graphs.
//!
//! With `N = lcm(a_1, ..., a_n)` and `c_i = N / a_i`, the weighted sum
//! `S = Σ c_i x_i mod N` moves along an orbit of step `c_i` when sage `i`
//! changes color. Each sage owns a cyclic interval of length `c_i`, which
//! meets every such orbit exactly once, and guesses the color that puts `S`
//! into its interval. The intervals are laid end to end from 0, so they
//! cover `Z_N` exactly when `Σ c_i >= N`, i.e. `Σ 1/a_i >= 1`.

use std::sync::Arc;

use super::{Rule, Strategy, StrategyError};
use crate::game::{Color, Game};

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm_all(values: &[u32]) -> Option<u128> {
    values.iter().try_fold(1u128, |acc, &a| {
        let a = a as u128;
        (acc / gcd(acc, a)).checked_mul(a)
    })
}

/// `Σ 1/a_i` as `(numerator, denominator)` over `lcm(a_i)`; `None` on
/// overflow.
pub fn clique_criterion(hatness: &[u32]) -> Option<(u128, u128)> {
    let n = lcm_all(hatness)?;
    let num = hatness
        .iter()
        .try_fold(0u128, |acc, &a| acc.checked_add(n / a as u128))?;
    Some((num, n))
}

#[derive(Clone, Debug)]
pub struct CliqueArith {
    modulus: u64,
    coefficients: Vec<u64>,
    starts: Vec<u64>,
    hatness: Vec<u32>,
}

impl CliqueArith {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn starts(&self) -> &[u64] {
        &self.starts
    }

    /// The cyclic interval `[start, start + c_i - 1] mod N` owned by sage `i`.
    pub fn interval_contains(&self, i: usize, s: u64) -> bool {
        let offset = (s + self.modulus - self.starts[i]) % self.modulus;
        offset < self.coefficients[i]
    }

    pub(super) fn guess_all(&self, colors: &[Color], out: &mut [Color]) {
        let n = self.modulus as u128;
        let total = self
            .coefficients
            .iter()
            .zip(colors)
            .fold(0u128, |acc, (&c, &x)| (acc + c as u128 * x as u128) % n);
        for (i, slot) in out.iter_mut().enumerate() {
            let c = self.coefficients[i] as u128;
            // partial sum over the other sages
            let partial = (total + n - (c * colors[i] as u128) % n) % n;
            let target = (self.starts[i] as u128 + n - partial) % n;
            let x = target.div_ceil(c) % self.hatness[i] as u128;
            *slot = x as Color;
        }
    }
}

/// The arithmetic winning strategy for a complete graph satisfying
/// `Σ 1/a_i >= 1`.
pub fn clique_strategy(game: Arc<Game>) -> Result<Strategy, StrategyError> {
    if !game.graph().is_complete() {
        return Err(StrategyError::NotComplete);
    }
    let hatness = game.hatness().to_vec();
    let (num, den) = clique_criterion(&hatness).ok_or(StrategyError::Overflow)?;
    if num < den {
        return Err(StrategyError::ConditionViolated {
            numerator: num,
            denominator: den,
        });
    }
    let modulus = u64::try_from(den).map_err(|_| StrategyError::Overflow)?;
    let coefficients: Vec<u64> = hatness.iter().map(|&a| modulus / a as u64).collect();
    let mut starts = Vec::with_capacity(hatness.len());
    let mut next = 0u64;
    for &c in &coefficients {
        starts.push(next);
        next = ((next as u128 + c as u128) % modulus as u128) as u64;
    }
    Ok(Strategy::from_parts(
        game,
        Rule::CliqueArith(CliqueArith {
            modulus,
            coefficients,
            starts,
            hatness,
        }),
    ))
}
