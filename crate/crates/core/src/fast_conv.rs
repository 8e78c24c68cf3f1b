//! FFT-based standard convolution of nonnegative vectors.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::FftPlan;
use crate::pmf::{naive_convolve, Pmf};

/// Which convolution routine a pair of input lengths should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvMethod {
    Naive,
    Fast,
}

/// Sizing for one linear convolution: the power-of-two transform length and
/// the quadratic-vs-FFT crossover rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvPlan {
    left_len: usize,
    right_len: usize,
    padded_len: usize,
    crossover: f64,
}

impl ConvPlan {
    pub const DEFAULT_CROSSOVER: f64 = 1.0;

    pub fn new(left_len: usize, right_len: usize) -> Self {
        assert!(left_len >= 1 && right_len >= 1, "convolution inputs must be nonempty");
        Self {
            left_len,
            right_len,
            padded_len: (left_len + right_len - 1).next_power_of_two(),
            crossover: Self::DEFAULT_CROSSOVER,
        }
    }

    /// Scales the `k' log2 k'` side of the naive/fast comparison.
    pub fn with_crossover(mut self, crossover: f64) -> Self {
        self.crossover = crossover;
        self
    }

    pub fn padded_len(&self) -> usize {
        self.padded_len
    }

    pub fn output_len(&self) -> usize {
        self.left_len + self.right_len - 1
    }

    /// Naive when `k_L * k_R <= c * k' * log2(k')`, or when either side is a
    /// scalar.
    pub fn method(&self) -> ConvMethod {
        if self.left_len == 1 || self.right_len == 1 {
            return ConvMethod::Naive;
        }
        let padded = self.padded_len as f64;
        let quadratic = self.left_len as f64 * self.right_len as f64;
        if quadratic <= self.crossover * padded * libm::log2(padded) {
            ConvMethod::Naive
        } else {
            ConvMethod::Fast
        }
    }
}

/// Crossover decision with the default constant.
pub fn choose_naive_or_fast(left_len: usize, right_len: usize) -> ConvMethod {
    ConvPlan::new(left_len, right_len).method()
}

/// Standard convolution through a real-input FFT of the next power-of-two
/// length. Negative round-off in the output is clamped to zero.
pub fn fast_convolve(left: &Pmf, right: &Pmf) -> Pmf {
    let plan = FftPlan::new((left.len() + right.len() - 1).next_power_of_two());
    let out = convolve_with(&plan, left.values(), right.values());
    Pmf::from_raw(left.offset() + right.offset(), out)
}

/// Standard convolution routed through [`ConvPlan::method`].
pub fn auto_convolve(left: &Pmf, right: &Pmf) -> Pmf {
    match choose_naive_or_fast(left.len(), right.len()) {
        ConvMethod::Naive => naive_convolve(left, right),
        ConvMethod::Fast => fast_convolve(left, right),
    }
}

/// Standard convolution engine behind the numeric estimators: quadratic for
/// pairs the crossover rule calls small, FFT otherwise.
pub(crate) enum Engine {
    Naive,
    Fft(FftPlan),
}

impl Engine {
    pub(crate) fn for_lengths(left_len: usize, right_len: usize) -> Self {
        let plan = ConvPlan::new(left_len, right_len);
        match plan.method() {
            ConvMethod::Naive => Engine::Naive,
            ConvMethod::Fast => Engine::Fft(FftPlan::new(plan.padded_len())),
        }
    }

    pub(crate) fn convolve(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        match self {
            Engine::Naive => naive_slices(a, b),
            Engine::Fft(plan) => convolve_with(plan, a, b),
        }
    }
}

pub(crate) fn naive_slices(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

/// Linear convolution of two real slices using `plan`, whose length must be
/// at least `a.len() + b.len() - 1`. Output is clamped at zero.
///
/// Both inputs ride in one complex transform (`a` real, `b` imaginary) and
/// are separated with the conjugate-symmetry identities
/// `A[k] = (Z[k] + conj Z[n-k]) / 2`, `B[k] = (Z[k] - conj Z[n-k]) / 2i`.
pub(crate) fn convolve_with(plan: &FftPlan, a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_len = a.len() + b.len() - 1;
    let n = plan.len();
    debug_assert!(n >= out_len);
    if out_len == 1 {
        return vec![(a[0] * b[0]).max(0.0)];
    }

    let mut z: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(a.get(i).copied().unwrap_or(0.0), b.get(i).copied().unwrap_or(0.0)))
        .collect();
    plan.forward(&mut z);

    let spectrum_product = |zk: Complex64, zc: Complex64| (zk + zc) * (zk - zc) * Complex64::new(0.0, -0.25);
    z[0] = spectrum_product(z[0], z[0].conj());
    z[n / 2] = spectrum_product(z[n / 2], z[n / 2].conj());
    for k in 1..n / 2 {
        let (lo, hi) = (z[k], z[n - k]);
        z[k] = spectrum_product(lo, hi.conj());
        z[n - k] = spectrum_product(hi, lo.conj());
    }
    plan.inverse(&mut z);

    let scale = 1.0 / n as f64;
    z[..out_len]
        .iter()
        .map(|c| {
            let v = c.re * scale;
            if v > 0.0 {
                v
            } else {
                0.0
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pmf(values: &[f64]) -> Pmf {
        Pmf::from_values(values.to_vec()).unwrap()
    }

    #[test]
    fn binomial_example() {
        let c = fast_convolve(&pmf(&[1.0, 1.0]), &pmf(&[1.0, 1.0]));
        for (a, e) in c.values().iter().zip(&[1.0, 2.0, 1.0]) {
            assert!((a - e).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_is_identity() {
        let x = Pmf::new(-4, vec![0.1, 0.0, 0.6, 0.3]).unwrap();
        let c = fast_convolve(&Pmf::delta(0, 1.0).unwrap(), &x);
        assert_eq!(c.offset(), -4);
        for (a, e) in c.values().iter().zip(x.values()) {
            assert!((a - e).abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_times_scalar() {
        let c = fast_convolve(&Pmf::delta(2, 0.5).unwrap(), &Pmf::delta(3, 0.25).unwrap());
        assert_eq!(c.offset(), 5);
        assert_eq!(c.values(), &[0.125]);
    }

    #[test]
    fn crossover_examples() {
        assert_eq!(choose_naive_or_fast(8, 8), ConvMethod::Naive);
        assert_eq!(choose_naive_or_fast(4096, 4096), ConvMethod::Fast);
        for k in [1, 2, 100, 10_000] {
            assert_eq!(choose_naive_or_fast(1, k), ConvMethod::Naive);
            assert_eq!(choose_naive_or_fast(k, 1), ConvMethod::Naive);
        }
        // 256*256 > 512*9
        assert_eq!(choose_naive_or_fast(256, 256), ConvMethod::Fast);
        assert_eq!(ConvPlan::new(256, 256).with_crossover(100.0).method(), ConvMethod::Naive);
    }

    #[test]
    fn padded_len_is_power_of_two() {
        for (l, r) in [(1, 1), (3, 5), (257, 257), (1024, 1)] {
            let p = ConvPlan::new(l, r);
            assert!(p.padded_len().is_power_of_two());
            assert!(p.padded_len() >= l + r - 1);
            assert!(p.padded_len() / 2 < l + r - 1 || l + r - 1 == 1);
        }
    }
}
