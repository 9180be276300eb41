//! Seeded input generation and timing for the scaling benchmark.
//!
//! Inputs are drawn from ChaCha8 seeded with the user seed, on stream `n`,
//! so every size gets its own reproducible sequence. Permutations come from
//! a Fisher-Yates shuffle of `0..n`, quantifiers from independent fair bits.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::decider::{implies_with_stats, DecideStats};
use crate::prefix::{generated_names, Prefix, Quantifier};

/// How the right-hand prefix is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Workload {
    /// Both prefixes uniform. Most such pairs reject within a few steps, so
    /// the setup passes dominate.
    Uniform,
    /// Uniform left-hand prefix; uniform order but all-existential
    /// quantifiers on the right. Always accepts, so every loop iteration and
    /// every pointer rescan runs.
    FullPass,
}

pub fn rng_for(seed: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    rng
}

pub fn random_prefix<R: Rng>(rng: &mut R, names: &Arc<[String]>) -> Prefix {
    let n = names.len();
    let mut sigma: Vec<u32> = (0..n as u32).collect();
    sigma.shuffle(rng);
    let quants = (0..n).map(|_| Quantifier::from_bit(rng.gen())).collect();
    Prefix::new(sigma, quants, names.clone()).expect("shuffled identity is a permutation")
}

/// The benchmark input pair for size `n`.
pub fn generate_pair(n: usize, seed: u64, workload: Workload) -> (Prefix, Prefix) {
    let names = generated_names(n);
    let mut rng = rng_for(seed, n);
    let lhs = random_prefix(&mut rng, &names);
    let mut rhs = random_prefix(&mut rng, &names);
    if workload == Workload::FullPass {
        let sigma = rhs.sigma().to_vec();
        rhs = Prefix::new(sigma, vec![Quantifier::Exists; n], names).expect("valid prefix");
    }
    (lhs, rhs)
}

/// SHA-256 over the encoded pair, hex.
pub fn fingerprint(lhs: &Prefix, rhs: &Prefix) -> String {
    let mut hasher = Sha256::new();
    for p in [lhs, rhs] {
        hasher.update((p.len() as u64).to_le_bytes());
        for (var, q) in p.iter() {
            hasher.update(var.to_le_bytes());
            hasher.update([q as u8]);
        }
    }
    hex::encode(hasher.finalize())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub repetitions: usize,
    pub workload: Workload,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.sizes.is_empty() {
            return Err("at least one size is required".into());
        }
        if self.sizes[0] == 0 {
            return Err("sizes must be at least 1".into());
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err("sizes must be strictly increasing".into());
        }
        if self.repetitions == 0 {
            return Err("repetitions must be at least 1".into());
        }
        Ok(())
    }
}

/// One row of the benchmark: deterministic input facts plus timing.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub input_sha256: String,
    pub accepted: bool,
    pub stats: DecideStats,
    /// `(iterations + rescan_steps) / n`.
    pub ops_per_element: f64,
    pub timing: Timing,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub median_ns: u128,
    pub min_ns: u128,
    pub repetitions: usize,
}

/// Times [`implies_with_stats`] on a pair, `reps` times.
pub fn time_pair(lhs: &Prefix, rhs: &Prefix, reps: usize) -> (bool, DecideStats, Timing) {
    let mut samples: Vec<Duration> = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let result = implies_with_stats(lhs, rhs).expect("generated pair shares variables");
        samples.push(start.elapsed());
        last = Some(result);
    }
    samples.sort_unstable();
    let (verdict, stats) = last.expect("at least one repetition");
    let timing = Timing {
        median_ns: samples[samples.len() / 2].as_nanos(),
        min_ns: samples[0].as_nanos(),
        repetitions: samples.len(),
    };
    (verdict.is_accepted(), stats, timing)
}

pub fn run(cfg: &BenchConfig) -> Vec<BenchRow> {
    cfg.sizes
        .iter()
        .map(|&n| {
            let (lhs, rhs) = generate_pair(n, cfg.seed, cfg.workload);
            let (accepted, stats, timing) = time_pair(&lhs, &rhs, cfg.repetitions);
            BenchRow {
                n,
                input_sha256: fingerprint(&lhs, &rhs),
                accepted,
                stats,
                ops_per_element: (stats.iterations + stats.rescan_steps) as f64 / n as f64,
                timing,
            }
        })
        .collect()
}
