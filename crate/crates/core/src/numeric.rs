//! Numerical max-convolution.
//!
//! For nonnegative `u`, `max_i u_i = lim_{p -> inf} ||u||_p`. Applied to the
//! shifted products `u_l = L[l] R[m - l]`, a finite `p` gives
//!
//! ```text
//! out[m] ~ (sum_l L[l]^p R[m - l]^p)^(1/p)
//! ```
//!
//! which is a standard convolution of the elementwise `p`-th powers and can
//! be evaluated with an FFT in `O(k log k)`. Larger `p` gets closer to the
//! true maximum but loses small values to underflow and FFT round-off, so the
//! estimators here max-normalize their inputs and can pick `p` per index.

use alloc::vec::Vec;

use crate::fast_conv::{ConvMethod, ConvPlan, Engine};
use crate::math;
use crate::pmf::{naive_max_convolve, Pmf};
use crate::{Error, Result};

/// Norm exponent `p*`, at least 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PStar(f64);

impl PStar {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidExponent(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PStar {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// Exponent ladder and threshold for per-index selection of `p*`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConfig {
    ladder: Vec<PStar>,
    tau: f64,
}

impl PiecewiseConfig {
    pub const DEFAULT_LADDER: [f64; 3] = [4.0, 32.0, 64.0];
    pub const DEFAULT_TAU: f64 = 0.6;

    /// `ladder` must be strictly ascending with at least two rungs and
    /// `0 < tau <= 1`.
    pub fn new(ladder: Vec<PStar>, tau: f64) -> Result<Self> {
        if ladder.len() < 2 {
            return Err(Error::InvalidConfig("ladder needs at least two exponents"));
        }
        if ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("ladder must be strictly ascending"));
        }
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidConfig("tau must lie in (0, 1]"));
        }
        Ok(Self { ladder, tau })
    }

    /// Convenience constructor from raw exponents.
    pub fn from_exponents(exponents: &[f64], tau: f64) -> Result<Self> {
        let ladder = exponents
            .iter()
            .map(|&p| PStar::new(p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ladder, tau)
    }

    pub fn ladder(&self) -> &[PStar] {
        &self.ladder
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl Default for PiecewiseConfig {
    fn default() -> Self {
        Self::from_exponents(&Self::DEFAULT_LADDER, Self::DEFAULT_TAU).expect("valid default")
    }
}

/// Raw p-norm estimate: `(sum_l L[l]^p R[m-l]^p)^(1/p)` via one standard
/// convolution of the powered vectors (FFT unless the pair is small enough
/// for the quadratic sum). No normalization is applied, so small inputs
/// raised to a large `p` underflow.
pub fn p_norm_convolve(left: &Pmf, right: &Pmf, p: PStar) -> Pmf {
    let p = p.value();
    let mut vl = left.values().to_vec();
    let mut vr = right.values().to_vec();
    math::raise(&mut vl, p);
    math::raise(&mut vr, p);
    let mut out = Engine::for_lengths(vl.len(), vr.len()).convolve(&vl, &vr);
    math::root(&mut out, p);
    Pmf::from_raw(left.offset() + right.offset(), out)
}

/// Inputs divided by their maxima, ready to be raised to each rung.
struct Normalized {
    left: Vec<f64>,
    right: Vec<f64>,
    scale: f64,
    offset: i64,
    engine: Engine,
}

impl Normalized {
    fn new(left: &Pmf, right: &Pmf) -> Result<Self> {
        let left_max = left.max_value();
        let right_max = right.max_value();
        if !(left_max > 0.0 && right_max > 0.0) {
            return Err(Error::Degenerate);
        }
        Ok(Self {
            left: left.values().iter().map(|v| v / left_max).collect(),
            right: right.values().iter().map(|v| v / right_max).collect(),
            scale: left_max * right_max,
            offset: left.offset() + right.offset(),
            engine: Engine::for_lengths(left.len(), right.len()),
        })
    }

    /// Estimate for one exponent, scaled so its peak is 1 (before undoing the
    /// input normalization).
    fn rung(&self, p: f64) -> Vec<f64> {
        let mut vl = self.left.clone();
        let mut vr = self.right.clone();
        math::raise(&mut vl, p);
        math::raise(&mut vr, p);
        let mut vm = self.engine.convolve(&vl, &vr);
        // Both inputs contain a 1, so the peak is at least 1 up to round-off.
        let peak = vm.iter().copied().fold(0.0, f64::max);
        for v in vm.iter_mut() {
            *v /= peak;
        }
        math::root(&mut vm, p);
        vm
    }

    fn finish(&self, mut values: Vec<f64>) -> Pmf {
        for v in values.iter_mut() {
            *v *= self.scale;
        }
        Pmf::from_raw(self.offset, values)
    }
}

/// Underflow-resistant estimate: both inputs are divided by their maxima
/// before exponentiation, the convolution is divided by its own maximum
/// before the root, and the result is rescaled by `max(L) * max(R)`.
pub fn max_convolve_normalized(left: &Pmf, right: &Pmf, p: PStar) -> Result<Pmf> {
    let norm = Normalized::new(left, right)?;
    let values = norm.rung(p.value());
    Ok(norm.finish(values))
}

/// Per-index exponent selection over `cfg`'s ladder.
///
/// Every rung is evaluated with [`max_convolve_normalized`]; index `m` takes
/// the value from the largest exponent whose peak-normalized value there is
/// at least `tau`, and falls back to the smallest exponent when none clears
/// it. With the ladder `[4, 32]` and `tau = 0.6` this is the classic two-way
/// split.
pub fn max_convolve_piecewise(left: &Pmf, right: &Pmf, cfg: &PiecewiseConfig) -> Result<Pmf> {
    let norm = Normalized::new(left, right)?;
    let mut rungs = cfg.ladder().iter().rev().map(|p| norm.rung(p.value()));

    let mut selected = rungs.next().expect("ladder has at least two rungs");
    let mut settled: Vec<bool> = selected.iter().map(|&v| v >= cfg.tau()).collect();
    let remaining = cfg.ladder().len() - 1;
    for (i, rung) in rungs.enumerate() {
        let is_last = i + 1 == remaining;
        for ((out, done), v) in selected.iter_mut().zip(settled.iter_mut()).zip(rung) {
            if !*done && (is_last || v >= cfg.tau()) {
                *out = v;
                *done = true;
            }
        }
    }
    Ok(norm.finish(selected))
}

/// Exact quadratic max-convolution when the inputs are small enough for it
/// to be cheaper, otherwise [`max_convolve_piecewise`].
pub fn max_convolve_auto(left: &Pmf, right: &Pmf, cfg: &PiecewiseConfig) -> Result<Pmf> {
    max_convolve_auto_with(left, right, cfg, ConvPlan::DEFAULT_CROSSOVER)
}

/// [`max_convolve_auto`] with an explicit crossover constant.
pub fn max_convolve_auto_with(
    left: &Pmf,
    right: &Pmf,
    cfg: &PiecewiseConfig,
    crossover: f64,
) -> Result<Pmf> {
    if !(left.max_value() > 0.0 && right.max_value() > 0.0) {
        return Err(Error::Degenerate);
    }
    match ConvPlan::new(left.len(), right.len())
        .with_crossover(crossover)
        .method()
    {
        ConvMethod::Naive => Ok(naive_max_convolve(left, right)),
        ConvMethod::Fast => max_convolve_piecewise(left, right, cfg),
    }
}
