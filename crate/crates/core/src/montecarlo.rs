//! Direct simulation of the walk.
//!
//! Path `i` under seed `s` draws from ChaCha8 keyed by `s` on stream `i`, so
//! every path is reproducible on its own and the parallel reduction (integer
//! sums) gives the same estimate regardless of scheduling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, WalkError};
use crate::jump_model::JumpDistribution;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub paths: u64,
    pub seed: u64,
}

/// Inverse-CDF table: `thresholds[k] = ceil(2^64 (p_0 + ... + p_k))`.
///
/// A uniform 64-bit draw `u` selects the first `k` with `u < thresholds[k]`,
/// so each site is hit with probability within `2^-64` of `p_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpSampler {
    thresholds: Vec<u128>,
}

impl JumpSampler {
    pub fn new(d: &JumpDistribution) -> Self {
        let scale = BigInt::from(1u128 << 64);
        let mut cum = BigRational::zero();
        let thresholds = d
            .probs()
            .iter()
            .map(|p| {
                cum += p;
                let scaled = &cum * BigRational::from_integer(scale.clone());
                let (q, r) = scaled.numer().div_rem(scaled.denom());
                let ceil = if r.is_zero() { q } else { q + 1 };
                ceil.to_u128().expect("cumulative probability is at most 1")
            })
            .collect();
        JumpSampler { thresholds }
    }

    pub fn sample(&self, u: u64) -> usize {
        let u = u as u128;
        self.thresholds.partition_point(|&t| t <= u)
    }
}

/// Final position after `n` steps from `j`. Away from the origin the walk
/// consumes one random bit per step, several steps at a time when it cannot
/// reach the origin before the batch ends.
pub fn simulate_path<R: RngCore>(d: &JumpDistribution, j: usize, n: usize, rng: &mut R) -> usize {
    simulate_with(&JumpSampler::new(d), j, n, rng)
}

fn simulate_with<R: RngCore>(sampler: &JumpSampler, j: usize, n: usize, rng: &mut R) -> usize {
    let mut x = j;
    let mut left = n;
    let mut bits = 0u64;
    let mut avail = 0usize;
    while left > 0 {
        if x == 0 {
            x = sampler.sample(rng.next_u64());
            left -= 1;
            continue;
        }
        if avail == 0 {
            bits = rng.next_u64();
            avail = 64;
        }
        let k = x.min(left).min(avail);
        let chunk = if k == 64 { bits } else { bits & ((1u64 << k) - 1) };
        bits = if k == 64 { 0 } else { bits >> k };
        avail -= k;
        let ups = chunk.count_ones() as usize;
        x = x + 2 * ups - k;
        left -= k;
    }
    x
}

/// Stream for path `index` under `seed`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn estimate_expectation(d: &JumpDistribution, j: usize, n: usize, paths: u64, seed: u64) -> Result<MCEstimate> {
    if paths < 2 {
        return Err(WalkError::TooFewPaths { paths });
    }
    let sampler = JumpSampler::new(d);
    let (sum, sum_sq) = (0..paths)
        .into_par_iter()
        .map(|i| {
            let x = simulate_with(&sampler, j, n, &mut path_rng(seed, i)) as u128;
            (x, x * x)
        })
        .reduce(|| (0u128, 0u128), |a, b| (a.0 + b.0, a.1 + b.1));

    // variance = (P sum_sq - sum^2) / (P (P - 1)), numerator exact
    let p = paths as u128;
    let mean = sum as f64 / paths as f64;
    let spread = BigInt::from(p) * BigInt::from(sum_sq) - BigInt::from(sum) * BigInt::from(sum);
    let variance = spread.to_f64().unwrap_or(f64::NAN) / (paths as f64 * (paths - 1) as f64);
    Ok(MCEstimate {
        mean,
        stderr: (variance / paths as f64).sqrt(),
        paths,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_law() -> JumpDistribution {
        JumpDistribution::from_ratios(&[(3, 10), (1, 10), (1, 10), (1, 2)]).unwrap()
    }

    #[test]
    fn sampler_boundaries() {
        let s = JumpSampler::new(&reference_law());
        assert_eq!(s.thresholds.last(), Some(&(1u128 << 64)));
        assert_eq!(s.sample(0), 0);
        assert_eq!(s.sample(u64::MAX), 3);
        let half = JumpSampler::new(&JumpDistribution::from_ratios(&[(1, 2), (1, 2)]).unwrap());
        assert_eq!(half.sample((1u64 << 63) - 1), 0);
        assert_eq!(half.sample(1u64 << 63), 1);
    }

    #[test]
    fn zero_mass_sites_are_never_drawn() {
        let d = JumpDistribution::from_ratios(&[(0, 1), (1, 2), (0, 1), (1, 2)]).unwrap();
        let s = JumpSampler::new(&d);
        let mut rng = path_rng(9, 0);
        for _ in 0..10_000 {
            let k = s.sample(rng.next_u64());
            assert!(k == 1 || k == 3);
        }
    }

    #[test]
    fn trivial_paths() {
        let stuck = JumpDistribution::from_ratios(&[(1, 1)]).unwrap();
        let mut rng = path_rng(1, 0);
        assert_eq!(simulate_path(&stuck, 0, 500, &mut rng), 0);
        assert_eq!(simulate_path(&reference_law(), 7, 0, &mut rng), 7);
    }

    #[test]
    fn parity_of_interior_moves() {
        let d = JumpDistribution::from_ratios(&[(0, 1), (1, 1)]).unwrap();
        for i in 0..200 {
            let x = simulate_path(&d, 0, 37, &mut path_rng(4, i));
            // each step changes the parity when all jumps go to odd sites
            assert_eq!(x % 2, 1);
        }
    }

    #[test]
    fn same_stream_same_path() {
        let a = simulate_path(&reference_law(), 5, 300, &mut path_rng(11, 3));
        let b = simulate_path(&reference_law(), 5, 300, &mut path_rng(11, 3));
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_paths() {
        assert_eq!(
            estimate_expectation(&reference_law(), 0, 3, 1, 0),
            Err(WalkError::TooFewPaths { paths: 1 })
        );
    }

    #[test]
    fn pinned_walk_has_zero_spread() {
        let stuck = JumpDistribution::from_ratios(&[(1, 1)]).unwrap();
        let est = estimate_expectation(&stuck, 0, 40, 1000, 5).unwrap();
        assert_eq!((est.mean, est.stderr), (0.0, 0.0));
    }

    #[test]
    fn small_run_is_consistent_and_repeatable() {
        let d = reference_law();
        let a = estimate_expectation(&d, 0, 2, 20_000, 77).unwrap();
        let b = estimate_expectation(&d, 0, 2, 20_000, 77).unwrap();
        assert_eq!(a, b);
        assert!((a.mean - 2.34).abs() <= 4.0 * a.stderr, "{a:?}");
    }
}
