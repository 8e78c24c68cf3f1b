//! Discrete distributions over integer outcomes and the exact quadratic
//! convolution routines every numerical method is checked against.

use alloc::vec;
use alloc::vec::Vec;

use crate::fast_conv::naive_slices;
use crate::{Error, Result};

/// A nonnegative vector over a contiguous run of integer outcomes.
///
/// Outcome `i` is stored at `values[i - offset]`. The values need not sum to
/// one: the same type carries probability mass functions and unnormalized
/// likelihoods.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    offset: i64,
    values: Vec<f64>,
}

impl Pmf {
    /// Builds a distribution, rejecting empty, negative or non-finite input.
    pub fn new(offset: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidMass { index, value });
        }
        Ok(Self { offset, values })
    }

    /// Distribution with outcomes starting at zero.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(0, values)
    }

    /// Kronecker delta carrying `mass` at `outcome`.
    pub fn delta(outcome: i64, mass: f64) -> Result<Self> {
        Self::new(outcome, vec![mass])
    }

    /// Wraps values produced internally. Negative round-off is clamped to 0
    /// and NaN is treated as 0.
    pub(crate) fn from_raw(offset: i64, mut values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        for v in values.iter_mut() {
            if v.is_nan() || *v < 0.0 {
                *v = 0.0;
            }
        }
        Self { offset, values }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest stored outcome.
    pub fn first_outcome(&self) -> i64 {
        self.offset
    }

    /// Largest stored outcome.
    pub fn last_outcome(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    /// Mass at `outcome`, zero outside the stored range.
    pub fn get(&self, outcome: i64) -> f64 {
        let idx = outcome - self.offset;
        if idx < 0 {
            return 0.0;
        }
        self.values.get(idx as usize).copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Outcome holding the largest value; ties go to the lowest outcome.
    pub fn argmax(&self) -> i64 {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        self.offset + best as i64
    }

    /// Multiplies every value by `c`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.offset, self.values.iter().map(|v| v * c).collect())
    }

    /// Rescales so the values sum to one.
    pub fn normalize_sum(&self) -> Result<Self> {
        let total = self.sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::Degenerate);
        }
        Ok(Self {
            offset: self.offset,
            values: self.values.iter().map(|v| v / total).collect(),
        })
    }

    /// Rescales so the largest value is exactly one.
    pub fn normalize_max(&self) -> Result<Self> {
        let peak = self.max_value();
        if peak.is_nan() || peak <= 0.0 {
            return Err(Error::Degenerate);
        }
        Ok(Self {
            offset: self.offset,
            values: self.values.iter().map(|v| v / peak).collect(),
        })
    }

    /// Distribution of `-X`: the vector reversed, so outcome `i` maps to `-i`.
    pub fn negate(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self {
            offset: -self.last_outcome(),
            values,
        }
    }
}

/// Exact standard convolution, `out[m] = sum_l L[l] R[m - l]`, in `O(k_L k_R)`.
pub fn naive_convolve(left: &Pmf, right: &Pmf) -> Pmf {
    Pmf::from_raw(left.offset + right.offset, naive_slices(&left.values, &right.values))
}

/// Exact max-convolution, `out[m] = max_l L[l] R[m - l]`, in `O(k_L k_R)`.
pub fn naive_max_convolve(left: &Pmf, right: &Pmf) -> Pmf {
    let mut out = vec![0.0; left.len() + right.len() - 1];
    for (i, &a) in left.values.iter().enumerate() {
        for (o, &b) in out[i..].iter_mut().zip(&right.values) {
            let prod = a * b;
            if prod > *o {
                *o = prod;
            }
        }
    }
    Pmf::from_raw(left.offset + right.offset, out)
}

/// Per-index relative absolute error of a numerical estimate.
///
/// `exact_values` is the oracle result divided by its maximum. Indices whose
/// exact value is zero have no defined relative error and are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub per_index: Vec<Option<f64>>,
    pub exact_values: Vec<f64>,
}

impl ErrorReport {
    /// Number of indices left undefined because the exact value was zero.
    pub fn undefined_count(&self) -> usize {
        self.per_index.iter().filter(|e| e.is_none()).count()
    }

    pub fn defined(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_index.iter().filter_map(|e| *e)
    }

    pub fn max(&self) -> Option<f64> {
        self.defined().fold(None, |acc, e| Some(acc.map_or(e, |a: f64| a.max(e))))
    }

    pub fn mean(&self) -> Option<f64> {
        let (sum, count) = self.defined().fold((0.0, 0usize), |(s, c), e| (s + e, c + 1));
        (count > 0).then(|| sum / count as f64)
    }
}

/// `|numerical[m] - exact[m]| / exact[m]` for every index.
pub fn relative_absolute_error(numerical: &Pmf, exact: &Pmf) -> Result<ErrorReport> {
    if numerical.offset != exact.offset || numerical.len() != exact.len() {
        return Err(Error::ShapeMismatch {
            left_offset: numerical.offset,
            left_len: numerical.len(),
            right_offset: exact.offset,
            right_len: exact.len(),
        });
    }
    let peak = exact.max_value();
    let per_index = numerical
        .values
        .iter()
        .zip(&exact.values)
        .map(|(&num, &ex)| (ex > 0.0).then(|| libm::fabs((num - ex) / ex)))
        .collect();
    let exact_values = if peak > 0.0 {
        exact.values.iter().map(|v| v / peak).collect()
    } else {
        exact.values.clone()
    };
    Ok(ErrorReport {
        per_index,
        exact_values,
    })
}
