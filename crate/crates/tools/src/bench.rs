//! Speed and accuracy sweeps of numerical max-convolution against the exact
//! quadratic routine.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use maxconv_core::{
    max_convolve_normalized, max_convolve_piecewise, naive_max_convolve, relative_absolute_error,
    PStar, PiecewiseConfig,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::generate::{replicate_stream, rng_for, uniform_pair_from};
use crate::Result;

pub const DEFAULT_SPEED_KS: [usize; 9] = [32, 64, 128, 256, 512, 1024, 2048, 4096, 8192];
pub const DEFAULT_ACCURACY_KS: [usize; 4] = [128, 256, 512, 1024];
pub const DEFAULT_ACCURACY_PS: [f64; 6] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
pub const DEFAULT_ACCURACY_REPLICATES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMethod {
    Naive,
    Numeric,
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchMethod::Naive => "naive",
            BenchMethod::Numeric => "numeric",
        })
    }
}

/// One timed max-convolution. Serializes to `k,method,replicate,wall_seconds`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub k: usize,
    pub method: BenchMethod,
    pub replicate: usize,
    pub wall_seconds: f64,
}

fn time<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    // Keep the documented `wall_seconds > 0` even below timer resolution.
    (out, start.elapsed().as_secs_f64().max(1e-9))
}

/// Times exact and piecewise-numeric max-convolution on fresh uniform pairs.
/// Runs serially.
pub fn run_speed_bench(ks: &[usize], replicates: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    let cfg = PiecewiseConfig::default();
    let mut records = Vec::with_capacity(ks.len() * replicates * 2);
    for &k in ks {
        for replicate in 0..replicates {
            let (left, right) = uniform_pair_from(&mut rng_for(seed, replicate_stream(k, replicate)), k);
            let (exact, naive_secs) = time(|| naive_max_convolve(&left, &right));
            let (numeric, numeric_secs) = time(|| max_convolve_piecewise(&left, &right, &cfg));
            numeric?;
            std::hint::black_box(exact);
            records.push(BenchRecord {
                k,
                method: BenchMethod::Naive,
                replicate,
                wall_seconds: naive_secs,
            });
            records.push(BenchRecord {
                k,
                method: BenchMethod::Numeric,
                replicate,
                wall_seconds: numeric_secs,
            });
        }
    }
    Ok(records)
}

/// One output index of one replicate. Serializes to
/// `k,p,index,exact_value,rel_abs_error`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyRow {
    pub k: usize,
    pub p: f64,
    pub index: usize,
    /// Exact max-convolution value divided by the replicate's maximum.
    pub exact_value: f64,
    pub rel_abs_error: f64,
}

/// Relative error of the max-normalized numerical estimate for every
/// `(k, p, replicate)`. Replicates run in parallel; row order is
/// `k`, then replicate, then `p`, then index, independent of scheduling.
/// Indices where the exact value is zero are omitted.
pub fn run_accuracy_sweep(
    ks: &[usize],
    ps: &[PStar],
    replicates: usize,
    seed: u64,
) -> Result<Vec<AccuracyRow>> {
    let jobs: Vec<(usize, usize)> = ks
        .iter()
        .flat_map(|&k| (0..replicates).map(move |r| (k, r)))
        .collect();
    let chunks = jobs
        .par_iter()
        .map(|&(k, replicate)| -> Result<Vec<AccuracyRow>> {
            let (left, right) = uniform_pair_from(&mut rng_for(seed, replicate_stream(k, replicate)), k);
            let exact = naive_max_convolve(&left, &right);
            let mut rows = Vec::with_capacity(ps.len() * exact.len());
            for &p in ps {
                let numeric = max_convolve_normalized(&left, &right, p)?;
                let report = relative_absolute_error(&numeric, &exact)?;
                for (index, (err, &exact_value)) in
                    report.per_index.iter().zip(&report.exact_values).enumerate()
                {
                    if let Some(rel_abs_error) = *err {
                        rows.push(AccuracyRow {
                            k,
                            p: p.value(),
                            index,
                            exact_value,
                            rel_abs_error,
                        });
                    }
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Writes serializable records as CSV with a header row.
pub fn write_csv<T: Serialize>(writer: impl Write, rows: &[T]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()?;
    Ok(())
}

/// Mean relative error over rows passing `filter`, grouped by `p` in the
/// order of `ps`.
pub fn mean_error_by_p(rows: &[AccuracyRow], ps: &[f64], filter: impl Fn(&AccuracyRow) -> bool) -> Vec<Option<f64>> {
    ps.iter()
        .map(|&p| {
            let (sum, count) = rows
                .iter()
                .filter(|r| r.p == p && filter(r))
                .fold((0.0, 0usize), |(s, c), r| (s + r.rel_abs_error, c + 1));
            (count > 0).then(|| sum / count as f64)
        })
        .collect()
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len().is_multiple_of(2) {
        (values[mid - 1] + values[mid]) / 2.0
    } else {
        values[mid]
    })
}
