//! Probabilistic convolution tree.
//!
//! Given priors on `X_1 .. X_n` and a likelihood on `M = X_1 + ... + X_n`,
//! the tree computes, for every `j`, the likelihood of `X_j` implied by the
//! evidence on `M` and the priors of the other variables. The forward pass
//! adds siblings pairwise up to the root (the prior of `M`); the reverse pass
//! pushes the evidence down, subtracting a sibling by adding its negation.
//!
//! Any pairwise operator works: standard convolution gives sum-product
//! inference and max-convolution gives max-product inference.

use alloc::vec;
use alloc::vec::Vec;

use crate::fast_conv::auto_convolve;
use crate::numeric::{max_convolve_auto, max_convolve_piecewise, p_norm_convolve, PStar, PiecewiseConfig};
use crate::pmf::{naive_max_convolve, Pmf};
use crate::{Error, Result};

/// How intermediate and final tree messages are rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Values sum to one.
    BySum,
    /// Largest value is one.
    ByMax,
}

impl Normalization {
    pub fn apply(self, pmf: &Pmf) -> Result<Pmf> {
        match self {
            Normalization::BySum => pmf.normalize_sum(),
            Normalization::ByMax => pmf.normalize_max(),
        }
    }
}

/// Pairwise "addition" of two independent variables used by the tree.
///
/// Implementations must return `k_L + k_R - 1` values at offset
/// `L.offset + R.offset` and be commutative up to round-off.
pub trait ConvolutionOperator {
    fn convolve(&self, left: &Pmf, right: &Pmf) -> Result<Pmf>;

    fn normalization(&self) -> Normalization;
}

/// The built-in operators.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    /// Standard convolution (sum-product); quadratic or FFT by size.
    Sum,
    /// Exact quadratic max-convolution.
    NaiveMax,
    /// Piecewise numerical max-convolution.
    NumericMax(PiecewiseConfig),
    /// Exact max-convolution for small pairs, numerical otherwise.
    AutoMax(PiecewiseConfig),
    /// Raw p-norm convolution with a single fixed exponent.
    PNorm(PStar),
}

impl ConvolutionOperator for Operator {
    fn convolve(&self, left: &Pmf, right: &Pmf) -> Result<Pmf> {
        match self {
            Operator::Sum => Ok(auto_convolve(left, right)),
            Operator::NaiveMax => Ok(naive_max_convolve(left, right)),
            Operator::NumericMax(cfg) => max_convolve_piecewise(left, right, cfg),
            Operator::AutoMax(cfg) => max_convolve_auto(left, right, cfg),
            Operator::PNorm(p) => Ok(p_norm_convolve(left, right, *p)),
        }
    }

    fn normalization(&self) -> Normalization {
        match self {
            Operator::Sum => Normalization::BySum,
            _ => Normalization::ByMax,
        }
    }
}

impl<T: ConvolutionOperator + ?Sized> ConvolutionOperator for &T {
    fn convolve(&self, left: &Pmf, right: &Pmf) -> Result<Pmf> {
        (**self).convolve(left, right)
    }

    fn normalization(&self) -> Normalization {
        (**self).normalization()
    }
}

/// Output of [`convolution_tree`].
#[derive(Debug, Clone, PartialEq)]
pub struct TreeResult {
    /// One likelihood per input prior, on that prior's outcomes.
    pub likelihoods: Vec<Pmf>,
    /// Distribution of the sum of all priors (the forward root).
    pub sum_prior: Pmf,
}

/// Restricts `wide` to the outcomes of `target`, zero-filling outcomes that
/// `wide` does not cover, then normalizes.
///
/// Fails with [`Error::InconsistentEvidence`] when the ranges do not overlap
/// or the restricted values are all zero.
pub fn narrow_to_support(wide: &Pmf, target: &Pmf, mode: Normalization) -> Result<Pmf> {
    if wide.last_outcome() < target.first_outcome() || wide.first_outcome() > target.last_outcome() {
        return Err(Error::InconsistentEvidence);
    }
    let values = (target.first_outcome()..=target.last_outcome())
        .map(|outcome| wide.get(outcome))
        .collect();
    let narrowed = Pmf::new(target.offset(), values)?;
    mode.apply(&narrowed).map_err(|_| Error::InconsistentEvidence)
}

/// Runs the forward and reverse passes.
///
/// The number of leaves is padded to a power of two with delta-at-zero
/// priors, which leave the sum unchanged; their outputs are dropped.
pub fn convolution_tree<O>(priors: &[Pmf], sum_likelihood: &Pmf, op: &O) -> Result<TreeResult>
where
    O: ConvolutionOperator + ?Sized,
{
    if priors.is_empty() {
        return Err(Error::NoPriors);
    }
    let mode = op.normalization();
    let n = priors.len();
    let width = n.next_power_of_two();

    let mut leaves = Vec::with_capacity(width);
    for prior in priors {
        leaves.push(mode.apply(prior)?);
    }
    leaves.resize(width, Pmf::delta(0, 1.0)?);

    // forward[0] holds the leaves, forward.last() the root.
    let mut forward = vec![leaves];
    while forward.last().map_or(0, Vec::len) > 1 {
        let layer = forward.last().expect("nonempty");
        let next = layer
            .chunks_exact(2)
            .map(|pair| mode.apply(&op.convolve(&pair[0], &pair[1])?))
            .collect::<Result<Vec<_>>>()?;
        forward.push(next);
    }
    let root = &forward.last().expect("nonempty")[0];

    // Node `j` of layer `u` covers leaves `j * 2^u ..`; nodes covering only
    // padding are skipped.
    let real_nodes = |depth: usize| (n + (1 << depth) - 1) >> depth;

    let mut messages: Vec<Pmf> = vec![narrow_to_support(sum_likelihood, root, mode)?];
    for depth in (0..forward.len() - 1).rev() {
        let children = &forward[depth];
        let live = real_nodes(depth);
        let mut next = Vec::with_capacity(live);
        for (j, message) in messages.iter().enumerate() {
            let lhs = &children[2 * j];
            let rhs = &children[2 * j + 1];
            next.push(narrow_to_support(&op.convolve(message, &rhs.negate())?, lhs, mode)?);
            if 2 * j + 1 < live {
                next.push(narrow_to_support(&op.convolve(message, &lhs.negate())?, rhs, mode)?);
            }
        }
        messages = next;
    }
    messages.truncate(n);

    Ok(TreeResult {
        likelihoods: messages,
        sum_prior: root.clone(),
    })
}

/// Cost model for a tree with fast pairwise convolution:
/// `sum_{u=1}^{log2 n} (n / 2^u) * (k 2^u) * log2(k 2^u)`, with `n` rounded
/// up to a power of two.
pub fn tree_cost_estimate(n: usize, k: usize) -> f64 {
    assert!(n >= 1 && k >= 1);
    let n = n.next_power_of_two();
    let levels = n.trailing_zeros();
    (1..=levels)
        .map(|u| {
            let width = (k as f64) * libm::exp2(u as f64);
            (n as f64 / libm::exp2(u as f64)) * width * libm::log2(width)
        })
        .sum()
}
