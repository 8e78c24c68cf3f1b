//! File formats, data generators and experiment drivers around
//! [`maxconv_core`].
//!
//! - [`io`]: `Pmf` JSON and newline-delimited JSON collections.
//! - [`generate`]: seeded uniform vector pairs and subset-sum instances.
//! - [`bench`]: speed and accuracy sweeps that emit plot-ready CSV.
//! - [`demo`]: sum-product vs max-product inference on a subset-sum instance.

pub mod bench;
pub mod demo;
pub mod generate;
pub mod io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ToolError {
    #[error(transparent)]
    Core(#[from] maxconv_core::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ToolError>;
