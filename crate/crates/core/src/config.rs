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

//! Flat `key = value` experiment configuration files.
//!
//! ```text
//! net = example.net          # required, relative to the config file
//! vin = example_vin.net      # or `auto` (balanced DFT), default auto
//! n_grid = 100, 1000, 10000  # required
//! samples = 200              # required
//! trials = 200               # required
//! phi = 1.0
//! k = 0.25
//! c = 1.0
//! seed = 0
//! baseline = none            # or coherent
//! side = output              # or input
//! lo = track                 # or fixed
//! window = 5                 # search half-width in units of c/sqrt(N)
//! out = results/scaling      # output prefix
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::adaptive::{LocalOscillator, Side};
use crate::error::{Error, Result};
use crate::estimator::{Baseline, ExperimentConfig};
use crate::netdsl::{parse, NetworkSpec};
use crate::unitary::UnitaryMatrix;

const KEYS: [&str; 14] = [
    "net", "vin", "n_grid", "samples", "trials", "phi", "k", "c", "seed", "baseline", "side", "lo",
    "window", "out",
];

/// Where the fixed stage comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageSource {
    Auto,
    File(PathBuf),
}

/// Parsed configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingConfig {
    pub net: PathBuf,
    pub vin: StageSource,
    pub n_grid: Vec<f64>,
    pub samples: usize,
    pub trials: usize,
    pub phi: f64,
    pub k: f64,
    pub c: f64,
    pub seed: u64,
    pub baseline: Baseline,
    pub side: Side,
    pub lo: LocalOscillator,
    pub window: f64,
    pub out: Option<PathBuf>,
    /// Keys that were absent and took their default.
    pub defaulted: Vec<String>,
}

/// Reads `key = value` pairs; `#` starts a comment.
fn read_pairs(text: &str, problems: &mut Vec<String>) -> BTreeMap<String, (usize, String)> {
    let mut pairs = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            problems.push(format!("line {line}: expected `key = value`"));
            continue;
        };
        let key = key.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            problems.push(format!("line {line}: unknown key `{key}`"));
            continue;
        }
        if pairs.contains_key(&key) {
            problems.push(format!("line {line}: duplicate key `{key}`"));
            continue;
        }
        pairs.insert(key, (line, value.trim().to_string()));
    }
    pairs
}

struct Fields<'a> {
    pairs: &'a BTreeMap<String, (usize, String)>,
    problems: Vec<String>,
    defaulted: Vec<String>,
}

impl Fields<'_> {
    fn get<T>(
        &mut self,
        key: &str,
        default: Option<T>,
        conv: impl Fn(&str) -> Option<T>,
    ) -> Option<T> {
        match self.pairs.get(key) {
            Some((line, v)) => {
                let parsed = conv(v);
                if parsed.is_none() {
                    self.problems
                        .push(format!("line {line}: invalid value `{v}` for `{key}`"));
                }
                parsed
            }
            None => {
                if default.is_some() {
                    self.defaulted.push(key.to_string());
                } else {
                    self.problems.push(format!("missing required key `{key}`"));
                }
                default
            }
        }
    }
}

fn finite(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

impl ScalingConfig {
    /// Parses config text; relative paths resolve against `base_dir`.
    /// Every problem found is reported at once.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut problems = Vec::new();
        let pairs = read_pairs(text, &mut problems);
        let mut f = Fields {
            pairs: &pairs,
            problems,
            defaulted: Vec::new(),
        };
        let resolve = |s: &str| (!s.is_empty()).then(|| base_dir.join(s));

        let net = f.get("net", None, resolve);
        let vin = f.get("vin", Some(StageSource::Auto), |s| match s {
            "auto" => Some(StageSource::Auto),
            "" => None,
            path => Some(StageSource::File(base_dir.join(path))),
        });
        let n_grid = f.get("n_grid", None, |s| {
            s.split(',')
                .map(|t| finite(t.trim()))
                .collect::<Option<Vec<f64>>>()
        });
        let samples = f.get("samples", None, |s| s.parse::<usize>().ok());
        let trials = f.get("trials", None, |s| s.parse::<usize>().ok());
        let phi = f.get("phi", Some(1.0), finite);
        let k = f.get("k", Some(0.25), finite);
        let c = f.get("c", Some(1.0), finite);
        let seed = f.get("seed", Some(0u64), |s| s.parse::<u64>().ok());
        let baseline = f.get("baseline", Some(Baseline::None), |s| match s {
            "none" => Some(Baseline::None),
            "coherent" => Some(Baseline::Coherent),
            _ => None,
        });
        let side = f.get("side", Some(Side::AdaptOutput), |s| match s {
            "output" => Some(Side::AdaptOutput),
            "input" => Some(Side::AdaptInput),
            _ => None,
        });
        let lo = f.get("lo", Some(LocalOscillator::Track), |s| match s {
            "track" => Some(LocalOscillator::Track),
            "fixed" => Some(LocalOscillator::Fixed),
            _ => None,
        });
        let window = f.get("window", Some(5.0), finite);
        let out = f.get("out", Some(None), |s| Some(resolve(s)));

        let mut problems = f.problems;
        if let Some(g) = &n_grid {
            if g.len() < 2 {
                problems.push("`n_grid` needs at least two photon numbers".into());
            }
            if g.iter().any(|n| *n < 1.0) {
                problems.push("`n_grid` entries must be >= 1".into());
            }
            if g.windows(2).any(|w| !(w[1] > w[0])) {
                problems.push("`n_grid` must be strictly increasing".into());
            }
        }
        if samples == Some(0) {
            problems.push("`samples` must be >= 1".into());
        }
        if trials == Some(0) {
            problems.push("`trials` must be >= 1".into());
        }
        if k == Some(0.0) {
            problems.push("`k` must be nonzero".into());
        }
        if c.is_some_and(|c| c <= 0.0) {
            problems.push("`c` must be positive".into());
        }
        if window.is_some_and(|w| w <= 0.0) {
            problems.push("`window` must be positive".into());
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        Ok(ScalingConfig {
            net: net.unwrap(),
            vin: vin.unwrap(),
            n_grid: n_grid.unwrap(),
            samples: samples.unwrap(),
            trials: trials.unwrap(),
            phi: phi.unwrap(),
            k: k.unwrap(),
            c: c.unwrap(),
            seed: seed.unwrap(),
            baseline: baseline.unwrap(),
            side: side.unwrap(),
            lo: lo.unwrap(),
            window: window.unwrap(),
            out: out.unwrap(),
            defaulted: f.defaulted,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Files this configuration reads.
    pub fn inputs(&self) -> Vec<PathBuf> {
        let mut v = vec![self.net.clone()];
        if let StageSource::File(p) = &self.vin {
            v.push(p.clone());
        }
        v
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let network = load_network(&self.net)?;
        let fixed_stage = load_stage(&self.vin, network.modes)?;
        Ok(ExperimentConfig {
            network,
            fixed_stage,
            true_phi: self.phi,
            k: self.k,
            c: self.c,
            n_grid: self.n_grid.clone(),
            samples: self.samples,
            trials: self.trials,
            seed: self.seed,
            baseline: self.baseline,
            side: self.side,
            local_oscillator: self.lo,
            window_factor: self.window,
        })
    }
}

pub fn load_network(path: &Path) -> Result<NetworkSpec> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Fixed stage from a phi-independent network file, or the balanced DFT.
pub fn load_stage(source: &StageSource, modes: usize) -> Result<UnitaryMatrix> {
    let stage = match source {
        StageSource::Auto => UnitaryMatrix::dft(modes)?,
        StageSource::File(p) => load_network(p)?.evaluate_fixed()?,
    };
    if stage.dim() != modes {
        return Err(Error::Dimension {
            expected: modes,
            found: stage.dim(),
        });
    }
    Ok(stage)
}
