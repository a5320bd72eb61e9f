//! Shared Monte Carlo plumbing: estimates with standard errors and
//! per-task seed derivation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Sample mean with its standard error `std/√n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Mean and standard error of independent samples.
    pub fn from_samples(samples: &[f64], seed: u64) -> Self {
        let n = samples.len();
        let mean = pairwise_sum(samples) / n as f64;
        let var = if n > 1 {
            let dev: Vec<f64> = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
            pairwise_sum(&dev) / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            stderr: (var / n as f64).sqrt(),
            n: n as u64,
            seed,
        }
    }

    /// Like [`McEstimate::from_samples`] for antithetic pairs: the standard
    /// error is computed from pair averages, `n` counts individual draws.
    pub fn from_pairs(pairs: &[(f64, f64)], seed: u64) -> Self {
        let avg: Vec<f64> = pairs.iter().map(|(x, y)| 0.5 * (x + y)).collect();
        let mut est = Self::from_samples(&avg, seed);
        est.n = 2 * pairs.len() as u64;
        est
    }

    /// `|mean − target| ≤ k · stderr` (with a floor of `1e-15` on the error).
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr.max(1e-15)
    }
}

/// Recursive pairwise summation; deterministic for a fixed input order.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 16 {
        return x.iter().sum();
    }
    let (l, r) = x.split_at(x.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// SplitMix64 output for `master` advanced `index + 1` times.
pub fn sub_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for task `index` of a run seeded with `master`.
pub fn task_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sub_seed(master, index))
}
