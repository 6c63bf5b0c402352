//! Exhaustive and sampled verification of strategies.
//!
//! The exhaustive sweep splits the index space `[0, Π h)` into contiguous
//! chunks handled by independent workers. Workers share only the lowest
//! failing index found so far; chunks that start above it are skipped, so
//! the reported counterexample is always the lowest-index one regardless of
//! scheduling.
//!
//! Sampling draws assignments from ChaCha8 seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Sample `i` uses stream `i` from word
//! position 0 and draws one color per vertex in vertex order with
//! `random_range(0..h(v))`, so reports do not depend on the worker count.

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::game::{Color, Game};
use crate::strategy::{EvalError, Evaluator, Strategy, StrategyError};

/// Default exhaustive-enumeration limit: `2^64` assignments.
pub const DEFAULT_CAPACITY: u128 = 1 << 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("too large for exhaustive verification: {} assignments", size.map_or("more than 2^128".to_string(), |s| s.to_string()))]
    TooLarge { size: Option<u128> },
    #[error("strategy belongs to a different game")]
    GameMismatch,
    #[error("guess {guess} at `{vertex}` is not a legal color")]
    IllegalGuess { vertex: String, guess: Color },
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("sample count must be positive")]
    NoSamples,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Worker threads; 0 means available parallelism, 1 the sequential path.
    pub jobs: usize,
    pub capacity: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jobs: 0,
            capacity: DEFAULT_CAPACITY,
        }
    }
}

impl VerifyOptions {
    pub fn sequential() -> Self {
        VerifyOptions {
            jobs: 1,
            ..Default::default()
        }
    }

    fn threads(&self) -> usize {
        match self.jobs {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            j => j,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Assignment index (exhaustive) or sample number (sampled).
    pub index: u128,
    pub colors: Vec<Color>,
    pub names: Vec<String>,
}

impl Serialize for Counterexample {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Named<'a>(&'a [String], &'a [Color]);
        impl Serialize for Named<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (n, c) in self.0.iter().zip(self.1) {
                    map.serialize_entry(n, c)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("index", &self.index)?;
        map.serialize_entry("assignment", &Named(&self.names, &self.colors))?;
        map.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub mode: Mode,
    /// Assignments checked; with a counterexample, its index plus one.
    pub checked: u128,
    pub counterexample: Option<Counterexample>,
    pub min_correct: u32,
    pub seconds: f64,
}

impl VerifyReport {
    pub fn wins(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Equal up to wall time.
    pub fn same_outcome(&self, other: &VerifyReport) -> bool {
        self.mode == other.mode
            && self.checked == other.checked
            && self.counterexample == other.counterexample
            && self.min_correct == other.min_correct
    }
}

/// Outcome of sweeping one index range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeOutcome {
    pub first_failure: Option<u128>,
    pub min_correct: u32,
}

fn check_game(game: &Game, strategy: &Strategy) -> Result<(), VerifyError> {
    if strategy.game().as_ref() != game {
        return Err(VerifyError::GameMismatch);
    }
    Ok(())
}

/// Counts correct guesses, rejecting illegal ones.
fn score(
    eval: &mut Evaluator<'_>,
    strategy: &Strategy,
    colors: &[Color],
) -> Result<u32, VerifyError> {
    let hatness = strategy.game().hatness();
    let guesses = eval
        .guesses(colors)
        .map_err(|e: EvalError| VerifyError::Strategy(strategy.describe(e)))?;
    let mut correct = 0;
    for (v, (&g, &c)) in guesses.iter().zip(colors).enumerate() {
        if g >= hatness[v] {
            return Err(VerifyError::IllegalGuess {
                vertex: strategy.game().graph().name(v).to_string(),
                guess: g,
            });
        }
        correct += (g == c) as u32;
    }
    Ok(correct)
}

fn advance(colors: &mut [Color], hatness: &[u32]) {
    for (c, &h) in colors.iter_mut().zip(hatness) {
        *c += 1;
        if *c < h {
            return;
        }
        *c = 0;
    }
}

/// Sweeps `range` in index order, stopping at the first failure or once
/// the index passes `cutoff`.
fn sweep(
    strategy: &Strategy,
    range: Range<u128>,
    cutoff: &AtomicU64,
) -> Result<RangeOutcome, VerifyError> {
    if range.is_empty() {
        return Ok(RangeOutcome {
            first_failure: None,
            min_correct: u32::MAX,
        });
    }
    let game = strategy.game();
    let hatness = game.hatness();
    let mut eval = strategy.evaluator();
    let mut colors = game.assignment_at(range.start).map_err(StrategyError::from)?.colors().to_vec();
    let mut min_correct = u32::MAX;
    let mut index = range.start;
    while index < range.end {
        if index & 0xfff == 0 && index as u64 > cutoff.load(Ordering::Relaxed) {
            break;
        }
        let correct = score(&mut eval, strategy, &colors)?;
        min_correct = min_correct.min(correct);
        if correct == 0 {
            cutoff.fetch_min(index as u64, Ordering::Relaxed);
            return Ok(RangeOutcome {
                first_failure: Some(index),
                min_correct: 0,
            });
        }
        advance(&mut colors, hatness);
        index += 1;
    }
    Ok(RangeOutcome {
        first_failure: None,
        min_correct,
    })
}

/// Verifies one index range on its own; used to check chunk invariance.
pub fn verify_range(strategy: &Strategy, range: Range<u128>) -> Result<RangeOutcome, VerifyError> {
    sweep(strategy, range, &AtomicU64::new(u64::MAX))
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn chunks(total: u128, threads: usize) -> Vec<Range<u128>> {
    let size = (total / (threads as u128 * 256)).max(1 << 16);
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + size).min(total);
        out.push(start..end);
        start = end;
    }
    out
}

fn counterexample(game: &Game, index: u128, colors: Vec<Color>) -> Counterexample {
    Counterexample {
        index,
        colors,
        names: game.graph().names().to_vec(),
    }
}

fn exhaustive_size(game: &Game, opts: &VerifyOptions) -> Result<u128, VerifyError> {
    let size = game.color_space();
    match size {
        Some(s) if s <= opts.capacity.min(DEFAULT_CAPACITY) => Ok(s),
        _ => Err(VerifyError::TooLarge { size }),
    }
}

/// Checks every assignment of `game`.
pub fn verify_exhaustive(
    game: &Game,
    strategy: &Strategy,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    check_game(game, strategy)?;
    let total = exhaustive_size(game, opts)?;
    let started = Instant::now();
    let cutoff = AtomicU64::new(u64::MAX);
    let threads = opts.threads();
    let outcomes: Vec<RangeOutcome> = if threads == 1 {
        vec![sweep(strategy, 0..total, &cutoff)?]
    } else {
        let ranges = chunks(total, threads);
        pool(threads).install(|| {
            ranges
                .into_par_iter()
                .map(|r| {
                    if r.start as u64 > cutoff.load(Ordering::Relaxed) {
                        return Ok(RangeOutcome {
                            first_failure: None,
                            min_correct: u32::MAX,
                        });
                    }
                    sweep(strategy, r, &cutoff)
                })
                .collect::<Result<_, _>>()
        })?
    };
    let first = outcomes.iter().filter_map(|o| o.first_failure).min();
    let min_correct = outcomes.iter().map(|o| o.min_correct).min().unwrap_or(0);
    let (checked, counterexample, min_correct) = match first {
        Some(i) => {
            let colors = game.assignment_at(i).map_err(StrategyError::from)?.colors().to_vec();
            (i + 1, Some(counterexample(game, i, colors)), 0)
        }
        None => (total, None, if total == 0 { 0 } else { min_correct }),
    };
    Ok(VerifyReport {
        mode: Mode::Exhaustive,
        checked,
        counterexample,
        min_correct,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// Colors of sample `index` under `seed`.
pub fn sample_colors(base: &ChaCha8Rng, hatness: &[u32], index: u64, out: &mut [Color]) {
    let mut rng = base.clone();
    rng.set_stream(index);
    rng.set_word_pos(0);
    for (c, &h) in out.iter_mut().zip(hatness) {
        *c = rng.random_range(0..h);
    }
}

fn sample_range(
    strategy: &Strategy,
    base: &ChaCha8Rng,
    range: Range<u64>,
    cutoff: &AtomicU64,
) -> Result<RangeOutcome, VerifyError> {
    let hatness = strategy.game().hatness();
    let mut eval = strategy.evaluator();
    let mut colors = vec![0; hatness.len()];
    let mut min_correct = u32::MAX;
    for i in range {
        if i & 0xff == 0 && i > cutoff.load(Ordering::Relaxed) {
            break;
        }
        sample_colors(base, hatness, i, &mut colors);
        let correct = score(&mut eval, strategy, &colors)?;
        min_correct = min_correct.min(correct);
        if correct == 0 {
            cutoff.fetch_min(i, Ordering::Relaxed);
            return Ok(RangeOutcome {
                first_failure: Some(i as u128),
                min_correct: 0,
            });
        }
    }
    Ok(RangeOutcome {
        first_failure: None,
        min_correct,
    })
}

/// Checks `samples` uniformly drawn assignments. A counterexample refutes
/// the strategy; its absence is only evidence.
pub fn verify_sampled(
    game: &Game,
    strategy: &Strategy,
    samples: u64,
    seed: u64,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    check_game(game, strategy)?;
    if samples == 0 {
        return Err(VerifyError::NoSamples);
    }
    let started = Instant::now();
    let base = ChaCha8Rng::seed_from_u64(seed);
    let cutoff = AtomicU64::new(u64::MAX);
    let threads = opts.threads();
    let outcomes: Vec<RangeOutcome> = if threads == 1 {
        vec![sample_range(strategy, &base, 0..samples, &cutoff)?]
    } else {
        let ranges: Vec<Range<u64>> = chunks(samples as u128, threads)
            .into_iter()
            .map(|r| r.start as u64..r.end as u64)
            .collect();
        pool(threads).install(|| {
            ranges
                .into_par_iter()
                .map(|r| sample_range(strategy, &base, r, &cutoff))
                .collect::<Result<_, _>>()
        })?
    };
    let first = outcomes.iter().filter_map(|o| o.first_failure).min();
    let (checked, counterexample, min_correct) = match first {
        Some(i) => {
            let mut colors = vec![0; game.len()];
            sample_colors(&base, game.hatness(), i as u64, &mut colors);
            (i + 1, Some(counterexample(game, i, colors)), 0)
        }
        None => (
            samples as u128,
            None,
            outcomes.iter().map(|o| o.min_correct).min().unwrap_or(0),
        ),
    };
    Ok(VerifyReport {
        mode: Mode::Sampled,
        checked,
        counterexample,
        min_correct,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// Distribution of the number of correct guesses over all assignments.
/// Buckets with frequency 0 are omitted.
pub fn win_histogram(
    game: &Game,
    strategy: &Strategy,
    opts: &VerifyOptions,
) -> Result<BTreeMap<u32, u128>, VerifyError> {
    check_game(game, strategy)?;
    let total = exhaustive_size(game, opts)?;
    let n = game.len();
    let count_range = |r: Range<u128>| -> Result<Vec<u128>, VerifyError> {
        let mut counts = vec![0u128; n + 1];
        let mut eval = strategy.evaluator();
        let mut colors = game.assignment_at(r.start).map_err(StrategyError::from)?.colors().to_vec();
        for _ in r {
            counts[score(&mut eval, strategy, &colors)? as usize] += 1;
            advance(&mut colors, game.hatness());
        }
        Ok(counts)
    };
    let threads = opts.threads();
    let counts = if threads == 1 || total == 0 {
        if total == 0 {
            vec![0; n + 1]
        } else {
            count_range(0..total)?
        }
    } else {
        let parts: Vec<Vec<u128>> = pool(threads).install(|| {
            chunks(total, threads)
                .into_par_iter()
                .map(count_range)
                .collect::<Result<_, _>>()
        })?;
        parts.into_iter().fold(vec![0; n + 1], |mut acc, p| {
            acc.iter_mut().zip(p).for_each(|(a, b)| *a += b);
            acc
        })
    };
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|&(_, f)| f > 0)
        .map(|(k, f)| (k as u32, f))
        .collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::strategy::{clique_strategy, constant_strategy, k5minus_strategy};

    fn clique(h: &[u32]) -> (Arc<Game>, Strategy) {
        let g = Arc::new(Game::clique(h).unwrap());
        let s = clique_strategy(g.clone()).unwrap();
        (g, s)
    }

    #[test]
    fn k5minus_sweep() {
        let (g, s) = k5minus_strategy();
        let r = verify_exhaustive(&g, &s, &VerifyOptions::sequential()).unwrap();
        assert!(r.wins());
        assert_eq!(r.checked, 16464);
        assert!(r.min_correct >= 1);
        let hist = win_histogram(&g, &s, &VerifyOptions::sequential()).unwrap();
        assert_eq!(hist.get(&0), None);
        assert_eq!(hist.values().sum::<u128>(), 16464);
    }

    #[test]
    fn losing_game_has_counterexample() {
        let (_, s) = clique(&[2, 2]);
        let g = Arc::new(Game::clique(&[2, 3]).unwrap());
        // the [2,2] strategy, lifted to a hatness-3 second sage by majorization
        let lifted = crate::strategy::table_strategy(
            g.clone(),
            (0..2)
                .map(|v| {
                    let other = 1 - v;
                    (0..g.hatness()[other])
                        .map(|c| {
                            let mut colors = vec![0, 0];
                            colors[other] = c.min(1);
                            let a = crate::game::Assignment::new(s.game(), colors).unwrap();
                            s.guess(&a, v).unwrap()
                        })
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        let r = verify_exhaustive(&g, &lifted, &VerifyOptions::sequential()).unwrap();
        assert!(!r.wins());
        let cx = r.counterexample.unwrap();
        assert_eq!(r.checked, cx.index + 1);
        assert_eq!(r.min_correct, 0);
    }

    #[test]
    fn all_zero_guessing_loses_on_all_ones() {
        let g = Arc::new(Game::clique(&[2, 2]).unwrap());
        let s = constant_strategy(g.clone(), 0).unwrap();
        let r = verify_sampled(&g, &s, 100, 7, &VerifyOptions::sequential()).unwrap();
        let cx = r.counterexample.clone().unwrap();
        assert_eq!(cx.colors, vec![1, 1]);
        let again = verify_sampled(&g, &s, 100, 7, &VerifyOptions { jobs: 3, ..Default::default() }).unwrap();
        assert!(r.same_outcome(&again));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["counterexample"]["assignment"]["v0"], 1);
        assert_eq!(json["mode"], "sampled");
    }

    #[test]
    fn histograms() {
        let (g, s) = clique(&[2, 2]);
        let hist = win_histogram(&g, &s, &VerifyOptions::default()).unwrap();
        assert_eq!(hist, BTreeMap::from([(1, 4)]));
        let g1 = Arc::new(Game::clique(&[2]).unwrap());
        let zero = constant_strategy(g1.clone(), 0).unwrap();
        let hist = win_histogram(&g1, &zero, &VerifyOptions::sequential()).unwrap();
        assert_eq!(hist, BTreeMap::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn capacity_is_enforced() {
        let (g, s) = clique(&[3, 3, 3]);
        let opts = VerifyOptions { jobs: 1, capacity: 26 };
        assert_eq!(
            verify_exhaustive(&g, &s, &opts).unwrap_err(),
            VerifyError::TooLarge { size: Some(27) }
        );
        assert!(win_histogram(&g, &s, &opts).is_err());
    }

    #[test]
    fn mismatched_game_rejected() {
        let (_, s) = clique(&[2, 2]);
        let other = Game::clique(&[2, 2, 2]).unwrap();
        assert_eq!(
            verify_exhaustive(&other, &s, &VerifyOptions::sequential()).unwrap_err(),
            VerifyError::GameMismatch
        );
    }

    #[test]
    fn report_json_shape() {
        let (g, s) = clique(&[2, 2]);
        let r = verify_exhaustive(&g, &s, &VerifyOptions::sequential()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["mode"], "exhaustive");
        assert_eq!(json["checked"], 4);
        assert!(json["counterexample"].is_null());
        assert_eq!(json["min_correct"], 1);
        assert!(json["seconds"].is_number());
    }

    #[test]
    fn zero_samples_rejected() {
        let (g, s) = clique(&[2, 2]);
        assert_eq!(
            verify_sampled(&g, &s, 0, 1, &VerifyOptions::sequential()).unwrap_err(),
            VerifyError::NoSamples
        );
    }
}
