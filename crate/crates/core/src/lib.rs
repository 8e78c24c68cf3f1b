//! Fast numerical max-convolution and probabilistic convolution trees.
//!
//! The max-convolution `out[m] = max_l L[l] * R[m - l]` has no inverse-based
//! fast transform, but on nonnegative vectors the maximum is the limit of a
//! p-norm, and a p-norm of shifted products is a standard convolution of the
//! elementwise `p`-th powers. [`numeric`] evaluates that convolution with an
//! FFT for a finite exponent, guards against underflow by max-normalizing,
//! and stitches several exponents together per output index.
//!
//! [`tree`] uses any pairwise operator (standard, exact max, numeric max) to
//! turn evidence on a sum `X_1 + ... + X_n` into per-variable likelihoods.
//!
//! The crate is `no_std` and only needs `alloc`. The default `std` feature
//! swaps the built-in radix-2 FFT for `rustfft`.

#![no_std]

extern crate alloc;

mod error;
pub mod fast_conv;
mod fft;
mod math;
pub mod numeric;
pub mod pmf;
pub mod tree;

pub use error::{Error, Result};
pub use fast_conv::{auto_convolve, choose_naive_or_fast, fast_convolve, ConvMethod, ConvPlan};
pub use numeric::{
    max_convolve_auto, max_convolve_auto_with, max_convolve_normalized, max_convolve_piecewise, p_norm_convolve,
    PStar, PiecewiseConfig,
};
pub use pmf::{naive_convolve, naive_max_convolve, relative_absolute_error, ErrorReport, Pmf};
pub use tree::{
    convolution_tree, narrow_to_support, tree_cost_estimate, ConvolutionOperator, Normalization,
    Operator, TreeResult,
};
