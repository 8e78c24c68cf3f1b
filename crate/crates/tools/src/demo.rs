//! Probabilistic subset-sum demo: one instance, one convolution tree per
//! inference mode, and how well each recovers the true prices.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use maxconv_core::{convolution_tree, Operator, PiecewiseConfig, Pmf};
use serde::Serialize;

use crate::generate::{generate_subset_sum_instance, SubsetSumInstance};
use crate::io::write_ndjson;
use crate::{Result, ToolError};

/// Bins within which an argmax counts as recovering the true price.
pub const RECOVERY_RADIUS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DemoMode {
    #[serde(rename = "naive-max")]
    NaiveMax,
    #[serde(rename = "numeric-max")]
    NumericMax,
    #[serde(rename = "sum-product")]
    SumProduct,
}

impl DemoMode {
    pub const ALL: [DemoMode; 3] = [DemoMode::NaiveMax, DemoMode::NumericMax, DemoMode::SumProduct];

    pub fn operator(self) -> Operator {
        match self {
            DemoMode::NaiveMax => Operator::NaiveMax,
            DemoMode::NumericMax => Operator::NumericMax(PiecewiseConfig::default()),
            DemoMode::SumProduct => Operator::Sum,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DemoMode::NaiveMax => "naive-max",
            DemoMode::NumericMax => "numeric-max",
            DemoMode::SumProduct => "sum-product",
        }
    }
}

impl fmt::Display for DemoMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DemoMode {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self> {
        DemoMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ToolError::Invalid(format!("unknown demo mode {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeReport {
    pub mode: DemoMode,
    /// Tree computation only; instance generation is not timed.
    pub wall_seconds: f64,
    pub argmax: Vec<i64>,
    /// `|argmax_j - mu_true_j|` per variable.
    pub distance_to_true: Vec<f64>,
    /// Fraction of variables whose argmax is within [`RECOVERY_RADIUS`].
    pub recovered_fraction: f64,
    #[serde(skip)]
    pub likelihoods: Vec<Pmf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub true_means: Vec<f64>,
    pub modes: Vec<ModeReport>,
    /// Fraction of variables where numeric-max and naive-max argmaxes agree,
    /// when both modes ran.
    pub numeric_naive_agreement: Option<f64>,
}

impl DemoReport {
    pub fn mode(&self, mode: DemoMode) -> Option<&ModeReport> {
        self.modes.iter().find(|m| m.mode == mode)
    }

    /// `numeric wall time / naive wall time`, when both modes ran.
    pub fn speed_ratio(&self) -> Option<f64> {
        Some(self.mode(DemoMode::NumericMax)?.wall_seconds / self.mode(DemoMode::NaiveMax)?.wall_seconds)
    }
}

pub fn run_on_instance(instance: &SubsetSumInstance, modes: &[DemoMode]) -> Result<DemoReport> {
    let mut reports = Vec::with_capacity(modes.len());
    for &mode in modes {
        let op = mode.operator();
        let start = Instant::now();
        let result = convolution_tree(&instance.priors, &instance.sum_likelihood, &op)?;
        let wall_seconds = start.elapsed().as_secs_f64();

        let argmax: Vec<i64> = result.likelihoods.iter().map(Pmf::argmax).collect();
        let distance_to_true: Vec<f64> = argmax
            .iter()
            .zip(&instance.true_means)
            .map(|(&a, &mu)| (a as f64 - mu).abs())
            .collect();
        let recovered = distance_to_true.iter().filter(|&&d| d <= RECOVERY_RADIUS).count();
        reports.push(ModeReport {
            mode,
            wall_seconds,
            recovered_fraction: recovered as f64 / instance.n as f64,
            argmax,
            distance_to_true,
            likelihoods: result.likelihoods,
        });
    }

    let find = |m: DemoMode| reports.iter().find(|r| r.mode == m);
    let numeric_naive_agreement = match (find(DemoMode::NumericMax), find(DemoMode::NaiveMax)) {
        (Some(a), Some(b)) => {
            let same = a.argmax.iter().zip(&b.argmax).filter(|(x, y)| x == y).count();
            Some(same as f64 / instance.n as f64)
        }
        _ => None,
    };

    Ok(DemoReport {
        n: instance.n,
        k: instance.k,
        seed: instance.seed,
        true_means: instance.true_means.clone(),
        modes: reports,
        numeric_naive_agreement,
    })
}

pub fn run_subset_sum_demo(n: usize, k: usize, seed: u64, modes: &[DemoMode]) -> Result<(SubsetSumInstance, DemoReport)> {
    let instance = generate_subset_sum_instance(n, k, seed)?;
    let report = run_on_instance(&instance, modes)?;
    Ok((instance, report))
}

/// Writes `instance.json`, `report.json` and one `likelihoods-<mode>.ndjson`
/// per mode into `dir`, creating it if needed.
pub fn write_demo_outputs(dir: impl AsRef<Path>, instance: &SubsetSumInstance, report: &DemoReport) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    fs::write(dir.join("instance.json"), instance.to_json()? + "\n")?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)? + "\n")?;
    for mode in &report.modes {
        write_ndjson(dir.join(format!("likelihoods-{}.ndjson", mode.mode)), &mode.likelihoods)?;
    }
    Ok(())
}
