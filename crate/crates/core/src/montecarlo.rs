//! Reproducible Monte Carlo estimation.
//!
//! Draws are counter-based: the uniforms of trial `i` are read from a ChaCha8
//! keystream at a word offset fixed by `i`, keyed by the master seed and a
//! stream derived from a label. They depend on nothing but
//! `(master_seed, stream, i)`, so a run can be cut into any number of shards
//! without changing a single draw. Every observable is integer-valued and
//! accumulated in `i64`, so the sums, and hence the estimates, are also
//! identical for every sharding.

use std::ops::Range;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SettingPair;
use crate::hidden::{TrialDraws, DRAWS_PER_TRIAL};
use crate::model::LhvModel;

/// Each f64 draw consumes one u64, i.e. two 32-bit keystream words.
const WORDS_PER_TRIAL: u128 = 2 * DRAWS_PER_TRIAL as u128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StreamId(pub u64);

impl StreamId {
    /// 64-bit FNV-1a of the label.
    pub fn from_label(label: &str) -> Self {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in label.bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        StreamId(hash)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream: StreamId,
}

impl SeedSpec {
    pub fn new(master_seed: u64, label: &str) -> Self {
        SeedSpec {
            master_seed,
            stream: StreamId::from_label(label),
        }
    }

    /// Stream label for one scenario of one model.
    pub fn for_scenario(master_seed: u64, model: &str, pair: &SettingPair) -> Self {
        SeedSpec::new(master_seed, &format!("{model}/scenario-{}", pair.scenario))
    }
}

fn generator_at(seed: &SeedSpec, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.master_seed);
    rng.set_stream(seed.stream.0);
    rng.set_word_pos(u128::from(trial_index) * WORDS_PER_TRIAL);
    rng
}

fn next_draws(rng: &mut ChaCha8Rng) -> TrialDraws {
    TrialDraws(std::array::from_fn(|_| rng.random::<f64>()))
}

/// The uniforms of trial `trial_index`, a pure function of its arguments.
pub fn derive_trial_draws(seed: &SeedSpec, trial_index: u64) -> TrialDraws {
    next_draws(&mut generator_at(seed, trial_index))
}

/// Draws for a contiguous range of trials; element `k` equals
/// `derive_trial_draws(seed, range.start + k)`.
pub fn trial_draws(seed: &SeedSpec, range: Range<u64>) -> impl Iterator<Item = TrialDraws> {
    let mut rng = generator_at(seed, range.start);
    range.map(move |_| next_draws(&mut rng))
}

/// Sample mean of an integer observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    /// `sqrt(Var/n)` with the plug-in variance `E[v²] − mean²`.
    pub stderr: f64,
    pub n: u64,
}

impl MeanEstimate {
    fn from_sums(sum: i64, sum_sq: i64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum as f64 / nf;
        let variance = (sum_sq as f64 / nf - mean * mean).max(0.0);
        MeanEstimate {
            mean,
            stderr: (variance / nf).sqrt(),
            n,
        }
    }
}

/// Estimate of E = ∫ A B ρ dλ from the mean of ±1 products.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub mean: f64,
    /// `sqrt((1 − mean²)/n)`.
    pub stderr: f64,
    pub n: u64,
    pub exact: Option<f64>,
}

impl CorrelationEstimate {
    /// From the sum of `n` products, each ±1.
    pub fn from_product_sum(sum: i64, n: u64, exact: Option<f64>) -> Self {
        let nf = n as f64;
        let mean = sum as f64 / nf;
        CorrelationEstimate {
            mean,
            stderr: ((1.0 - mean * mean).max(0.0) / nf).sqrt(),
            n,
            exact,
        }
    }

    /// Standard error if the true correlation were `exact`. Unlike the
    /// plug-in value it does not collapse to zero when every sampled product
    /// happens to agree.
    pub fn null_stderr(&self) -> Option<f64> {
        self.exact
            .map(|e| ((1.0 - e * e).max(0.0) / self.n as f64).sqrt())
    }

    pub fn deviation(&self) -> Option<f64> {
        self.exact.map(|e| self.mean - e)
    }

    /// Whether `|mean − exact| ≤ sigmas · stderr`; `None` without an exact
    /// value.
    pub fn agrees_within(&self, sigmas: f64) -> Option<bool> {
        self.deviation().map(|d| d.abs() <= sigmas * self.stderr)
    }
}

/// The correlation together with both single-detector marginals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairStatistics {
    pub correlation: CorrelationEstimate,
    pub alice: MeanEstimate,
    pub bob: MeanEstimate,
}

/// Runs trials `0..n` cut into `shards` contiguous shards and adds up the
/// per-trial integer vectors.
fn sharded_sums<const K: usize, F>(n: u64, seed: &SeedSpec, shards: usize, per_trial: F) -> Result<[i64; K]>
where
    F: Fn(&TrialDraws) -> Result<[i64; K]> + Sync,
{
    if n == 0 {
        return Err(Error::NoTrials);
    }
    let shards = (shards.max(1) as u64).min(n);
    let bound = |k: u64| ((u128::from(n) * u128::from(k)) / u128::from(shards)) as u64;
    let partials: Vec<Result<[i64; K]>> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut acc = [0i64; K];
            for draws in trial_draws(seed, bound(k)..bound(k + 1)) {
                let values = per_trial(&draws)?;
                for (a, v) in acc.iter_mut().zip(values) {
                    *a += v;
                }
            }
            Ok(acc)
        })
        .collect();

    let mut total = [0i64; K];
    for partial in partials {
        for (t, v) in total.iter_mut().zip(partial?) {
            *t += v;
        }
    }
    Ok(total)
}

pub fn estimate_pair_statistics<M: LhvModel + ?Sized>(
    model: &M,
    pair: &SettingPair,
    n: u64,
    seed: &SeedSpec,
    shards: usize,
) -> Result<PairStatistics> {
    let [sum_ab, sum_a, sum_b] = sharded_sums(n, seed, shards, |draws| {
        let lambda = model.sample_lambda(pair, draws)?;
        let out = model.evaluate(&lambda, pair)?;
        Ok([out.product(), out.alice.value(), out.bob.value()])
    })?;
    let n_i = n as i64;
    Ok(PairStatistics {
        correlation: CorrelationEstimate::from_product_sum(sum_ab, n, model.exact_correlation(pair)),
        alice: MeanEstimate::from_sums(sum_a, n_i, n),
        bob: MeanEstimate::from_sums(sum_b, n_i, n),
    })
}

/// Mean of `a_result · b_result` over `n` trials, split over `shards`. The
/// result does not depend on `shards`.
pub fn estimate_correlation_sharded<M: LhvModel + ?Sized>(
    model: &M,
    pair: &SettingPair,
    n: u64,
    seed: &SeedSpec,
    shards: usize,
) -> Result<CorrelationEstimate> {
    estimate_pair_statistics(model, pair, n, seed, shards).map(|s| s.correlation)
}

pub fn estimate_correlation<M: LhvModel + ?Sized>(
    model: &M,
    pair: &SettingPair,
    n: u64,
    seed: &SeedSpec,
) -> Result<CorrelationEstimate> {
    estimate_correlation_sharded(model, pair, n, seed, 1)
}

/// Mean of an arbitrary integer observable of the trial draws.
pub fn estimate_mean<F>(n: u64, seed: &SeedSpec, shards: usize, observable: F) -> Result<MeanEstimate>
where
    F: Fn(&TrialDraws) -> Result<i64> + Sync,
{
    let [sum, sum_sq] = sharded_sums(n, seed, shards, |draws| {
        let v = observable(draws)?;
        Ok([v, v * v])
    })?;
    Ok(MeanEstimate::from_sums(sum, sum_sq, n))
}
