//! `Pmf` on disk: `{"offset": int, "values": [float, ...]}`, one object per
//! file or one per line for collections.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use maxconv_core::{Pmf, TreeResult};
use serde::{Deserialize, Serialize};

use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfRecord {
    pub offset: i64,
    pub values: Vec<f64>,
}

impl From<&Pmf> for PmfRecord {
    fn from(pmf: &Pmf) -> Self {
        Self {
            offset: pmf.offset(),
            values: pmf.values().to_vec(),
        }
    }
}

impl TryFrom<PmfRecord> for Pmf {
    type Error = maxconv_core::Error;

    fn try_from(record: PmfRecord) -> std::result::Result<Self, Self::Error> {
        Pmf::new(record.offset, record.values)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeRecord {
    pub likelihoods: Vec<PmfRecord>,
    pub sum_prior: PmfRecord,
}

impl From<&TreeResult> for TreeRecord {
    fn from(result: &TreeResult) -> Self {
        Self {
            likelihoods: result.likelihoods.iter().map(PmfRecord::from).collect(),
            sum_prior: PmfRecord::from(&result.sum_prior),
        }
    }
}

pub fn pmf_to_json(pmf: &Pmf) -> Result<String> {
    Ok(serde_json::to_string(&PmfRecord::from(pmf))?)
}

pub fn pmf_from_json(text: &str) -> Result<Pmf> {
    let record: PmfRecord = serde_json::from_str(text)?;
    Ok(Pmf::try_from(record)?)
}

pub fn read_pmf(path: impl AsRef<Path>) -> Result<Pmf> {
    pmf_from_json(&fs::read_to_string(path)?)
}

pub fn write_pmf(path: impl AsRef<Path>, pmf: &Pmf) -> Result<()> {
    let mut text = pmf_to_json(pmf)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Parses one `Pmf` per nonblank line.
pub fn pmfs_from_ndjson(reader: impl BufRead) -> Result<Vec<Pmf>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(pmf_from_json(&line)?);
    }
    Ok(out)
}

pub fn pmfs_to_ndjson(mut writer: impl Write, pmfs: &[Pmf]) -> Result<()> {
    for pmf in pmfs {
        serde_json::to_writer(&mut writer, &PmfRecord::from(pmf))?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_ndjson(path: impl AsRef<Path>) -> Result<Vec<Pmf>> {
    pmfs_from_ndjson(BufReader::new(fs::File::open(path)?))
}

pub fn write_ndjson(path: impl AsRef<Path>, pmfs: &[Pmf]) -> Result<()> {
    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    pmfs_to_ndjson(&mut file, pmfs)?;
    file.flush()?;
    Ok(())
}

pub fn write_tree_result(path: impl AsRef<Path>, result: &TreeResult) -> Result<()> {
    let mut text = serde_json::to_string(&TreeRecord::from(result))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
