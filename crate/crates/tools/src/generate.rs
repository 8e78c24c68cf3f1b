//! Seeded data generators.
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`; a
//! sweep derives one stream per replicate with `set_stream`, so replicates
//! can run in any order (or in parallel) and still see the same numbers.

use maxconv_core::Pmf;
use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::io::PmfRecord;
use crate::{Result, ToolError};

/// Upper end of the additive per-bin noise on priors and on the sum
/// likelihood.
pub const NOISE_CEILING: f64 = 0.0001;

/// Smallest Gaussian standard deviation used when discretizing, in bins.
pub const MIN_SIGMA: f64 = 0.5;

/// Generator for stream `stream` under `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for replicate `replicate` of a sweep point with length `k`.
pub fn replicate_stream(k: usize, replicate: usize) -> u64 {
    ((k as u64) << 32) | replicate as u64
}

/// Two length-`k` vectors of i.i.d. uniform(0, 1) values (open interval).
pub fn uniform_pair_from(rng: &mut impl Rng, k: usize) -> (Pmf, Pmf) {
    let mut draw = || -> Pmf {
        let values: Vec<f64> = Open01.sample_iter(&mut *rng).take(k).collect();
        Pmf::from_values(values).expect("uniform values are valid")
    };
    let left = draw();
    let right = draw();
    (left, right)
}

pub fn generate_uniform_pair(k: usize, seed: u64) -> (Pmf, Pmf) {
    assert!(k >= 1);
    uniform_pair_from(&mut rng_for(seed, 0), k)
}

/// Gaussian density evaluated at the integer bins `0..len`, normalized to
/// sum to one.
pub fn discretized_gaussian(len: usize, mean: f64, sigma: f64) -> Vec<f64> {
    let two_var = 2.0 * sigma * sigma;
    let mut values: Vec<f64> = (0..len)
        .map(|x| {
            let d = x as f64 - mean;
            (-d * d / two_var).exp()
        })
        .collect();
    let total: f64 = values.iter().sum();
    if total > 0.0 {
        values.iter_mut().for_each(|v| *v /= total);
    }
    values
}

/// A probabilistic subset-sum problem: each of `n` people buys one of two
/// items with fuzzily known prices, and we observe a fuzzy total.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSumInstance {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Prior on each person's spend, length `k`, offset 0.
    pub priors: Vec<Pmf>,
    /// Likelihood of the total, over `0..=n(k-1)`.
    pub sum_likelihood: Pmf,
    /// Price of the item each person actually bought.
    pub true_means: Vec<f64>,
    pub false_means: Vec<f64>,
}

#[derive(Serialize)]
struct InstanceRecord<'a> {
    n: usize,
    k: usize,
    seed: u64,
    true_means: &'a [f64],
    false_means: &'a [f64],
    priors: Vec<PmfRecord>,
    sum_likelihood: PmfRecord,
}

impl SubsetSumInstance {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&InstanceRecord {
            n: self.n,
            k: self.k,
            seed: self.seed,
            true_means: &self.true_means,
            false_means: &self.false_means,
            priors: self.priors.iter().map(PmfRecord::from).collect(),
            sum_likelihood: PmfRecord::from(&self.sum_likelihood),
        })?)
    }
}

/// Draws an instance.
///
/// For each person, in order: `mu_true, mu_false ~ U(0, k-1)`, then
/// `sigma_true, sigma_false ~ U(0, k/10)` floored at [`MIN_SIGMA`], then `k`
/// noise values `~ U(0, 1e-4)`. The prior is the sum of the two discretized
/// Gaussians plus the noise, normalized. Last, the sum likelihood is a
/// discretized Gaussian at `sum(mu_true)` with variance
/// `0.005 * (n k - (n - 1))` plus per-bin noise, normalized.
pub fn generate_subset_sum_instance(n: usize, k: usize, seed: u64) -> Result<SubsetSumInstance> {
    if n < 2 || k < 4 {
        return Err(ToolError::Invalid(format!(
            "subset-sum instance needs n >= 2 and k >= 4 (got n={n}, k={k})"
        )));
    }
    let mut rng = rng_for(seed, 0);
    let top = (k - 1) as f64;
    let sigma_ceiling = k as f64 / 10.0;

    let mut priors = Vec::with_capacity(n);
    let mut true_means = Vec::with_capacity(n);
    let mut false_means = Vec::with_capacity(n);
    for _ in 0..n {
        let mu_true = rng.random_range(0.0..top);
        let mu_false = rng.random_range(0.0..top);
        let sigma_true = rng.random_range(0.0..sigma_ceiling).max(MIN_SIGMA);
        let sigma_false = rng.random_range(0.0..sigma_ceiling).max(MIN_SIGMA);
        let a = discretized_gaussian(k, mu_true, sigma_true);
        let b = discretized_gaussian(k, mu_false, sigma_false);
        let values = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x + y + rng.random_range(0.0..NOISE_CEILING))
            .collect();
        priors.push(Pmf::from_values(values)?.normalize_sum()?);
        true_means.push(mu_true);
        false_means.push(mu_false);
    }

    let sum_len = n * (k - 1) + 1;
    let variance = 0.005 * (n * k - (n - 1)) as f64;
    let total: f64 = true_means.iter().sum();
    let values = discretized_gaussian(sum_len, total, variance.sqrt())
        .into_iter()
        .map(|g| g + rng.random_range(0.0..NOISE_CEILING))
        .collect();
    let sum_likelihood = Pmf::from_values(values)?.normalize_sum()?;

    Ok(SubsetSumInstance {
        n,
        k,
        seed,
        priors,
        sum_likelihood,
        true_means,
        false_means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_pair_is_deterministic() {
        assert_eq!(generate_uniform_pair(16, 7), generate_uniform_pair(16, 7));
        assert_ne!(generate_uniform_pair(16, 7), generate_uniform_pair(16, 8));
    }

    #[test]
    fn uniform_values_in_open_interval() {
        let (l, r) = generate_uniform_pair(32, 3);
        assert_eq!(l.len(), 32);
        assert_eq!(r.len(), 32);
        assert!(l.values().iter().chain(r.values()).all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn uniform_mean_near_half() {
        let (l, r) = generate_uniform_pair(8192, 11);
        for p in [l, r] {
            let mean = p.sum() / p.len() as f64;
            assert!((mean - 0.5).abs() < 0.02, "{mean}");
        }
    }

    #[test]
    fn gaussian_is_normalized_and_peaked() {
        let g = discretized_gaussian(20, 7.2, 1.5);
        assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let peak = g.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(peak, 7);
    }

    #[test]
    fn instance_shape() {
        let inst = generate_subset_sum_instance(32, 256, 5).unwrap();
        assert_eq!(inst.priors.len(), 32);
        assert_eq!(inst.sum_likelihood.len(), 8161);
        assert_eq!(inst.sum_likelihood.offset(), 0);
        for p in &inst.priors {
            assert_eq!(p.len(), 256);
            assert_eq!(p.offset(), 0);
            assert!(p.values().iter().all(|&v| v > 0.0));
            assert!((p.sum() - 1.0).abs() < 1e-12);
        }
        assert!(inst.true_means.iter().all(|&m| (0.0..255.0).contains(&m)));
        assert_eq!(inst, generate_subset_sum_instance(32, 256, 5).unwrap());
    }

    #[test]
    fn instance_rejects_tiny_sizes() {
        assert!(generate_subset_sum_instance(1, 16, 0).is_err());
        assert!(generate_subset_sum_instance(4, 3, 0).is_err());
    }
}
