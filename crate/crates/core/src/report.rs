// Copyright 2026 The hsmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! CSV/JSON tables and the run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::adaptive::MonitorRow;
use crate::error::{Error, Result};
use crate::estimator::ScalingSeries;

pub const SCALING_COLUMNS: &str = "N,rmse,bias,crb,fi_exact,fi_asymptotic";
pub const FISHER_COLUMNS: &str = "N,fi_exact,fi_asymptotic,ratio,crb";
pub const MONITOR_COLUMNS: &str = "phi,offset,one_minus_p,ell_equiv,fi_exact,fi_ratio,rho_ratio";

fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn csv<R>(header: &str, rows: &[R], cells: impl Fn(&R) -> Vec<f64>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        let line: Vec<String> = cells(r).into_iter().map(num).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

pub fn scaling_csv(series: &ScalingSeries) -> String {
    csv(SCALING_COLUMNS, &series.records, |r| {
        vec![
            r.photons,
            r.rmse,
            r.mean_bias,
            r.crb,
            r.fi_exact,
            r.fi_asymptotic,
        ]
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherRow {
    #[serde(rename = "N")]
    pub photons: f64,
    pub fi_exact: f64,
    pub fi_asymptotic: f64,
    pub ratio: f64,
    pub crb: f64,
}

pub fn fisher_csv(rows: &[FisherRow]) -> String {
    csv(FISHER_COLUMNS, rows, |r| {
        vec![r.photons, r.fi_exact, r.fi_asymptotic, r.ratio, r.crb]
    })
}

pub fn monitor_csv(rows: &[MonitorRow]) -> String {
    csv(MONITOR_COLUMNS, rows, |r| {
        vec![
            r.phi,
            r.offset,
            r.one_minus_p,
            r.ell_equiv,
            r.fi_exact,
            r.fi_ratio,
            r.rho_ratio,
        ]
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

pub fn digest_file(path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut hex = String::with_capacity(64);
    for b in Sha256::digest(&bytes).iter() {
        let _ = write!(hex, "{b:02x}");
    }
    Ok(InputDigest {
        path: path.to_path_buf(),
        sha256: hex,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub tool_version: String,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<PathBuf>,
    pub elapsed_seconds: f64,
}

impl RunManifest {
    pub fn new<C: Serialize>(command: &str, config: &C, seed: u64) -> Result<Self> {
        Ok(RunManifest {
            command: command.to_string(),
            config: serde_json::to_value(config).map_err(|e| Error::Io(e.to_string()))?,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            elapsed_seconds: 0.0,
        })
    }

    pub fn add_inputs(&mut self, paths: &[PathBuf]) -> Result<()> {
        for p in paths {
            self.inputs.push(digest_file(p)?);
        }
        Ok(())
    }
}
