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

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 check failed or runtime error, 2 usage, parse or
//! configuration error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::adaptive::{misadapted_estimate, monitor_scan, AdaptationPlan, LocalOscillator, Side};
use crate::config::{load_network, load_stage, ScalingConfig, StageSource};
use crate::error::{Error, Result};
use crate::estimator::run_scaling;
use crate::gaussian::{oracle_variance, reduced_model, ProbeSpec};
use crate::metrology::{check_k, fisher_report, TuningParams};
use crate::report::{self, FisherRow, RunManifest};
use crate::rng::stream_rng;
use crate::unitary::UnitaryMatrix;

/// Largest closed-form vs covariance-propagation deviation accepted.
pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "hsmetro",
    version,
    about = "Squeezed-probe homodyne estimation on passive networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the closed-form homodyne variance with full covariance
    /// propagation on random stages around the network.
    OracleCheck {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the manifest next to this path instead of stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact vs asymptotic Fisher information per photon number.
    ///
    /// CSV columns: N,fi_exact,fi_asymptotic,ratio,crb
    Fisher {
        #[arg(long)]
        net: PathBuf,
        /// Fixed input stage (phi-independent network file) or `auto`.
        #[arg(long, default_value = "auto")]
        vin: String,
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
        k: f64,
        /// Photons leaked into unmeasured modes, realized by mis-adapting the
        /// output stage.
        #[arg(long, default_value_t = 0.0)]
        ell: f64,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        photons: Vec<f64>,
        /// Outcomes used for the bound column.
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Monte Carlo RMSE versus photon number from a config file.
    ///
    /// CSV columns: N,rmse,bias,crb,fi_exact,fi_asymptotic
    Scaling {
        #[arg(long)]
        config: PathBuf,
        /// Output prefix; overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the true value over phi_cl ± c/sqrt(N) with the stage adapted once.
    ///
    /// CSV columns: phi,offset,one_minus_p,ell_equiv,fi_exact,fi_ratio,rho_ratio
    Monitor {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value = "auto")]
        vin: String,
        #[arg(long = "phi-cl", allow_negative_numbers = true)]
        phi_cl: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long = "N")]
        photons: f64,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
        k: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::ModeOutOfRange { .. }
        | Error::MissingModes
        | Error::Config(_)
        | Error::InvalidArgument(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn stage_source(s: &str) -> StageSource {
    if s == "auto" {
        StageSource::Auto
    } else {
        StageSource::File(PathBuf::from(s))
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Table to `--out` or stdout, manifest beside it or to stderr.
fn emit(
    text: &str,
    out: Option<&Path>,
    mut manifest: RunManifest,
    started: Instant,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    manifest.elapsed_seconds = started.elapsed().as_secs_f64();
    match out {
        Some(p) => {
            write_file(p, text)?;
            manifest.outputs.push(p.to_path_buf());
            write_file(&manifest_path(p), &report::to_json(&manifest)?)
        }
        None => {
            stdout.write_all(text.as_bytes())?;
            stderr.write_all(report::to_json(&manifest)?.as_bytes())?;
            Ok(())
        }
    }
}

fn stage_inputs(net: &Path, vin: &StageSource) -> Vec<PathBuf> {
    let mut v = vec![net.to_path_buf()];
    if let StageSource::File(p) = vin {
        v.push(p.clone());
    }
    v
}

#[derive(Serialize)]
struct OracleConfig<'a> {
    net: &'a Path,
    trials: u64,
    seed: u64,
    tolerance: f64,
}

/// Largest `|closed form - oracle|` over random stages, probe strengths,
/// parameter values and local-oscillator phases.
pub fn oracle_deviation(net: &crate::netdsl::NetworkSpec, trials: u64, seed: u64) -> Result<f64> {
    use rand::Rng;
    let m = net.modes;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let mut rng = stream_rng(seed, t);
        let phi = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let r = rng.random_range(0.0..3.0);
        let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let v_in = UnitaryMatrix::random(m, &mut rng)?;
        let v_out = UnitaryMatrix::random(m, &mut rng)?;
        let u = net.evaluate(phi)?;
        let probe = ProbeSpec::new(r)?;
        let closed = reduced_model(&v_in, &u, &v_out, probe)?.quadrature_variance(theta);
        let brute = oracle_variance(&v_in, &u, &v_out, probe, theta)?;
        worst = worst.max((closed - brute).abs());
    }
    Ok(worst)
}

/// Fisher table rows; `ell > 0` is realized by adapting the output stage at
/// a deliberately shifted estimate.
pub fn fisher_rows(
    net: &crate::netdsl::NetworkSpec,
    v_in: &UnitaryMatrix,
    phi: f64,
    k: f64,
    ell: f64,
    photons: &[f64],
    samples: usize,
) -> Result<Vec<FisherRow>> {
    check_k(k)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    photons
        .iter()
        .map(|&n| {
            let phi_cl = misadapted_estimate(net, v_in, phi, ell, n)?;
            let plan = AdaptationPlan::build(net, v_in, phi_cl, k, n, Side::AdaptOutput)?;
            let theta = plan.theta_at(net, phi, LocalOscillator::Track)?;
            let tuning = TuningParams::new(k, ell, theta)?;
            let rep = fisher_report(&plan.pipeline(net)?, phi, n, tuning, samples)?;
            Ok(FisherRow {
                photons: n,
                fi_exact: rep.exact_fi_per_sample,
                fi_asymptotic: rep.asymptotic_fi,
                ratio: rep.exact_fi_per_sample / rep.asymptotic_fi,
                crb: rep.crb,
            })
        })
        .collect()
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    match cli.command {
        Command::OracleCheck {
            net,
            trials,
            seed,
            out,
        } => {
            let spec = load_network(&net)?;
            let worst = oracle_deviation(&spec, trials, seed)?;
            let cfg = OracleConfig {
                net: &net,
                trials,
                seed,
                tolerance: ORACLE_TOL,
            };
            let mut manifest = RunManifest::new("oracle-check", &cfg, seed)?;
            manifest.add_inputs(std::slice::from_ref(&net))?;
            let pass = worst <= ORACLE_TOL;
            let text = format!(
                "max deviation {worst:.3e} over {trials} trials (tolerance {ORACLE_TOL:.0e}): {}\n",
                if pass { "ok" } else { "FAILED" }
            );
            emit(&text, out.as_deref(), manifest, started, stdout, stderr)?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Fisher {
            net,
            vin,
            phi,
            k,
            ell,
            photons,
            samples,
            seed,
            out,
            format,
        } => {
            check_k(k)?;
            let spec = load_network(&net)?;
            let source = stage_source(&vin);
            let v_in = load_stage(&source, spec.modes)?;
            let rows = fisher_rows(&spec, &v_in, phi, k, ell, &photons, samples)?;
            #[derive(Serialize)]
            struct Cfg<'a> {
                net: &'a Path,
                vin: &'a StageSource,
                phi: f64,
                k: f64,
                ell: f64,
                n: &'a [f64],
                samples: usize,
            }
            let cfg = Cfg {
                net: &net,
                vin: &source,
                phi,
                k,
                ell,
                n: &photons,
                samples,
            };
            let mut manifest = RunManifest::new("fisher", &cfg, seed)?;
            manifest.add_inputs(&stage_inputs(&net, &source))?;
            let text = match format {
                Format::Csv => report::fisher_csv(&rows),
                Format::Json => report::to_json(&rows)?,
            };
            emit(&text, out.as_deref(), manifest, started, stdout, stderr)?;
            Ok(0)
        }
        Command::Scaling { config, out } => {
            let cfg = ScalingConfig::load(&config)?;
            let experiment = cfg.experiment()?;
            let result = run_scaling(&experiment)?;
            let prefix = out
                .or_else(|| cfg.out.clone())
                .unwrap_or_else(|| PathBuf::from("scaling"));
            let with_ext = |ext: &str| {
                let mut s = prefix.as_os_str().to_owned();
                s.push(ext);
                PathBuf::from(s)
            };
            let mut manifest = RunManifest::new("scaling", &cfg, cfg.seed)?;
            let mut inputs = vec![config.clone()];
            inputs.extend(cfg.inputs());
            manifest.add_inputs(&inputs)?;

            let csv_path = with_ext(".csv");
            write_file(&csv_path, &report::scaling_csv(&result.protocol))?;
            manifest.outputs.push(csv_path.clone());
            if let Some(b) = &result.baseline {
                let p = with_ext(".baseline.csv");
                write_file(&p, &report::scaling_csv(b))?;
                manifest.outputs.push(p);
            }
            let json_path = with_ext(".json");
            write_file(&json_path, &report::to_json(&result)?)?;
            manifest.outputs.push(json_path);
            manifest.elapsed_seconds = started.elapsed().as_secs_f64();
            write_file(&with_ext(".manifest.json"), &report::to_json(&manifest)?)?;

            let se = |s: Option<f64>| s.map_or("n/a".to_string(), |v| format!("{v:.3}"));
            writeln!(
                stdout,
                "squeezed slope {:.4} (se {})",
                result.protocol.slope,
                se(result.protocol.slope_stderr)
            )?;
            if let Some(b) = &result.baseline {
                writeln!(
                    stdout,
                    "coherent slope {:.4} (se {})",
                    b.slope,
                    se(b.slope_stderr)
                )?;
            }
            Ok(0)
        }
        Command::Monitor {
            net,
            vin,
            phi_cl,
            c,
            photons,
            points,
            k,
            seed,
            out,
            format,
        } => {
            check_k(k)?;
            let spec = load_network(&net)?;
            let source = stage_source(&vin);
            let v_in = load_stage(&source, spec.modes)?;
            let rows = monitor_scan(&spec, &v_in, phi_cl, c, photons, points, k)?;
            #[derive(Serialize)]
            struct Cfg<'a> {
                net: &'a Path,
                vin: &'a StageSource,
                phi_cl: f64,
                c: f64,
                n: f64,
                points: usize,
                k: f64,
            }
            let cfg = Cfg {
                net: &net,
                vin: &source,
                phi_cl,
                c,
                n: photons,
                points,
                k,
            };
            let mut manifest = RunManifest::new("monitor", &cfg, seed)?;
            manifest.add_inputs(&stage_inputs(&net, &source))?;
            let text = match format {
                Format::Csv => report::monitor_csv(&rows),
                Format::Json => report::to_json(&rows)?,
            };
            emit(&text, out.as_deref(), manifest, started, stdout, stderr)?;
            Ok(0)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
