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

//! Maximum-likelihood estimation from homodyne records and the
//! RMSE-versus-photon-number experiment.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adaptive::{classical_preestimate_with, AdaptationPlan, LocalOscillator, Side};
use crate::error::{Error, Result};
use crate::gaussian::{variance_from_parts, ProbeSpec};
use crate::metrology::{asymptotic_fisher, cramer_rao, wrap_angle, Pipeline};
use crate::netdsl::{derivative_step, NetworkSpec};
use crate::rng::{normal, stream_rng};
use crate::unitary::UnitaryMatrix;

/// Grid points scanned before golden-section refinement.
pub const SCAN_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    /// Single-mode squeezed vacuum; outcomes `N(0, sigma²(phi))`.
    Squeezed,
    /// Coherent state; outcomes `N(mu(phi), 1/2)`.
    Coherent,
}

/// Sufficient statistics of a homodyne record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub count: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl SampleStats {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("no samples".into()));
        }
        Ok(SampleStats {
            count: samples.len(),
            sum: samples.iter().sum(),
            sum_sq: samples.iter().map(|x| x * x).sum(),
        })
    }
}

/// Outcome distribution as a function of the parameter for one measurement
/// setting (fixed stages, local-oscillator phase and probe).
#[derive(Debug, Clone, Copy)]
pub struct OutcomeModel<'a> {
    pub pipe: Pipeline<'a>,
    pub kind: ProbeKind,
    pub photons: f64,
    pub theta: f64,
    /// Known sign of `theta - gamma(phi) - π/2` at the true value. The
    /// squeezed-probe likelihood is symmetric about the variance minimum, so
    /// without it the estimate can land on the mirror root.
    pub branch: Option<f64>,
}

impl<'a> OutcomeModel<'a> {
    /// `theta - gamma(phi) - π/2` reduced to `(-π/2, π/2]`.
    pub fn quadrature_offset(&self, phi: f64) -> Result<f64> {
        let gamma = self.pipe.amplitude(phi)?.arg();
        Ok(wrap_angle(2.0 * (self.theta - gamma - FRAC_PI_2)) / 2.0)
    }

    fn admissible(&self, phi: f64) -> Result<bool> {
        match self.branch {
            Some(sign) => Ok(sign * self.quadrature_offset(phi)? >= 0.0),
            None => Ok(true),
        }
    }

    /// Log-likelihood restricted to the admissible branch.
    fn score(&self, stats: &SampleStats, phi: f64) -> Result<f64> {
        if self.admissible(phi)? {
            self.log_likelihood(stats, phi)
        } else {
            Ok(f64::NEG_INFINITY)
        }
    }

    /// `(mean, variance)` of a single outcome at `phi`.
    pub fn moments(&self, phi: f64) -> Result<(f64, f64)> {
        let t = self.pipe.amplitude(phi)?;
        match self.kind {
            ProbeKind::Squeezed => {
                let r = self.photons.sqrt().asinh();
                Ok((
                    0.0,
                    variance_from_parts(t.norm_sqr().min(1.0), t.arg(), r, self.theta),
                ))
            }
            ProbeKind::Coherent => {
                let rotated = t * num_complex::Complex64::from_polar(1.0, -self.theta);
                Ok(((2.0 * self.photons).sqrt() * rotated.re, 0.5))
            }
        }
    }

    pub fn log_likelihood(&self, stats: &SampleStats, phi: f64) -> Result<f64> {
        let (mu, var) = self.moments(phi)?;
        if !(var > 0.0) {
            return Err(Error::ZeroVariance);
        }
        let m = stats.count as f64;
        let centred = stats.sum_sq - 2.0 * mu * stats.sum + m * mu * mu;
        Ok(-0.5 * m * var.ln() - centred / (2.0 * var))
    }

    pub fn sample<R: Rng + ?Sized>(&self, phi: f64, count: usize, rng: &mut R) -> Result<Vec<f64>> {
        let (mu, var) = self.moments(phi)?;
        let sd = var.sqrt();
        Ok((0..count).map(|_| normal(rng, mu, sd)).collect())
    }

    /// Per-outcome Fisher information at `phi`.
    pub fn fisher(&self, phi: f64) -> Result<f64> {
        let h = derivative_step(phi);
        let (mp, vp) = self.moments(phi + h)?;
        let (mm, vm) = self.moments(phi - h)?;
        let (_, var) = self.moments(phi)?;
        let dmu = (mp - mm) / (2.0 * h);
        match self.kind {
            ProbeKind::Coherent => Ok(dmu * dmu / var),
            ProbeKind::Squeezed => {
                let dvar = (vp - vm) / (2.0 * h);
                Ok(dvar * dvar / (2.0 * var * var))
            }
        }
    }
}

/// Maximises the log-likelihood over `[center - window, center + window]`:
/// a 64-point scan, then golden-section refinement around the best point.
/// Equal likelihoods resolve toward `center`.
pub fn mle_estimate(
    samples: &[f64],
    model: &OutcomeModel<'_>,
    center: f64,
    window: f64,
) -> Result<f64> {
    let stats = SampleStats::from_samples(samples)?;
    mle_from_stats(&stats, model, center, window)
}

pub fn mle_from_stats(
    stats: &SampleStats,
    model: &OutcomeModel<'_>,
    center: f64,
    window: f64,
) -> Result<f64> {
    if !(window > 0.0) || !window.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "window must be positive, got {window}"
        )));
    }
    let lo = center - window;
    let step = 2.0 * window / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + step * i as f64).collect();

    let better = |(x, lx): (f64, f64), (y, ly): (f64, f64)| -> bool {
        lx > ly || (lx == ly && (x - center).abs() < (y - center).abs())
    };

    let mut best = (grid[0], model.score(stats, grid[0])?);
    let mut best_idx = 0;
    for (i, &x) in grid.iter().enumerate().skip(1) {
        let cand = (x, model.score(stats, x)?);
        if better(cand, best) {
            best = cand;
            best_idx = i;
        }
    }

    let mut a = grid[best_idx.saturating_sub(1)];
    let mut b = grid[(best_idx + 1).min(SCAN_POINTS - 1)];
    let tol = 1e-10 * window;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = model.score(stats, c)?;
    let mut fd = model.score(stats, d)?;
    while b - a > tol {
        if better((c, fc), (d, fd)) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = model.score(stats, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = model.score(stats, d)?;
        }
        if !(c > a && d < b) {
            break;
        }
    }
    let refined = if better((c, fc), (d, fd)) {
        (c, fc)
    } else {
        (d, fd)
    };
    Ok(if better(refined, best) {
        refined.0
    } else {
        best.0
    })
}

/// Per-outcome Fisher information of a coherent probe of mean photon number
/// `photons`: `(d mu / d phi)² / sigma²` with `mu = √(2N) Re(T_11 e^{-i theta})`
/// and `sigma² = 1/2`.
pub fn coherent_baseline_fisher(
    spec: &NetworkSpec,
    v_in: &UnitaryMatrix,
    v_out: &UnitaryMatrix,
    phi: f64,
    photons: f64,
    theta: f64,
) -> Result<f64> {
    if !(photons > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "N must be positive, got {photons}"
        )));
    }
    let model = OutcomeModel {
        pipe: Pipeline::new(spec, v_in, v_out)?,
        kind: ProbeKind::Coherent,
        photons,
        theta,
        branch: None,
    };
    model.fisher(phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    None,
    Coherent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub network: NetworkSpec,
    /// The stage that is not adapted (`V_in` when adapting the output).
    pub fixed_stage: UnitaryMatrix,
    pub true_phi: f64,
    pub k: f64,
    pub c: f64,
    pub n_grid: Vec<f64>,
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub baseline: Baseline,
    pub side: Side,
    pub local_oscillator: LocalOscillator,
    /// Search half-width in units of `c / √N`.
    pub window_factor: f64,
}

impl ExperimentConfig {
    /// Defaults for everything except the network and fixed stage.
    pub fn new(network: NetworkSpec, fixed_stage: UnitaryMatrix, n_grid: Vec<f64>) -> Self {
        ExperimentConfig {
            network,
            fixed_stage,
            true_phi: 1.0,
            k: 0.25,
            c: 1.0,
            n_grid,
            samples: 200,
            trials: 200,
            seed: 0,
            baseline: Baseline::None,
            side: Side::AdaptOutput,
            local_oscillator: LocalOscillator::Track,
            window_factor: 5.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n_grid.len() < 2 {
            problems.push("n_grid needs at least two photon numbers".to_string());
        }
        if self.n_grid.iter().any(|n| !(*n >= 1.0) || !n.is_finite()) {
            problems.push("n_grid entries must be finite and >= 1".to_string());
        }
        if self.n_grid.windows(2).any(|w| !(w[1] > w[0])) {
            problems.push("n_grid must be strictly increasing".to_string());
        }
        if self.samples == 0 {
            problems.push("samples must be >= 1".to_string());
        }
        if self.trials == 0 {
            problems.push("trials must be >= 1".to_string());
        }
        if self.k == 0.0 || !self.k.is_finite() {
            problems.push("k must be finite and nonzero".to_string());
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            problems.push("c must be positive".to_string());
        }
        if !(self.window_factor > 0.0) {
            problems.push("window must be positive".to_string());
        }
        if !self.true_phi.is_finite() {
            problems.push("phi must be finite".to_string());
        }
        if self.fixed_stage.dim() != self.network.modes {
            problems.push(format!(
                "fixed stage has {} modes, network has {}",
                self.fixed_stage.dim(),
                self.network.modes
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRecord {
    pub photons: f64,
    pub rmse: f64,
    pub mean_bias: f64,
    /// Bound for `samples` outcomes at the ideally adapted operating point.
    pub crb: f64,
    /// Per-outcome information at the ideally adapted operating point.
    pub fi_exact: f64,
    pub fi_asymptotic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSeries {
    pub probe: ProbeKind,
    pub records: Vec<ScalingRecord>,
    pub slope: f64,
    pub slope_stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingResult {
    pub protocol: ScalingSeries,
    pub baseline: Option<ScalingSeries>,
    pub samples_per_trial: usize,
    pub trials: usize,
    /// How Fisher numbers are reported.
    pub fi_convention: &'static str,
}

/// Least-squares fit of `ln y = a + slope ln x`; returns the slope and its
/// standard error (none with fewer than three points).
pub fn fit_log_log(xs: &[f64], ys: &[f64]) -> Result<(f64, Option<f64>)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two matching points".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "log-log fit needs positive finite values".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let stderr = (lx.len() > 2).then(|| {
        let icpt = my - slope * mx;
        let ssr: f64 = lx
            .iter()
            .zip(&ly)
            .map(|(x, y)| (y - icpt - slope * x).powi(2))
            .sum();
        (ssr / (n - 2.0) / sxx).sqrt()
    });
    Ok((slope, stderr))
}

fn trial_stream(grid_index: usize, trial: usize, kind: ProbeKind) -> u64 {
    let tag = match kind {
        ProbeKind::Squeezed => 0u64,
        ProbeKind::Coherent => 1u64 << 63,
    };
    tag | ((grid_index as u64) << 32) | trial as u64
}

/// One trial: pre-estimate, adapt, measure, estimate. Returns the error.
fn run_trial(
    cfg: &ExperimentConfig,
    grid_index: usize,
    trial: usize,
    kind: ProbeKind,
) -> Result<f64> {
    let photons = cfg.n_grid[grid_index];
    let mut rng = stream_rng(cfg.seed, trial_stream(grid_index, trial, kind));
    let phi_cl = classical_preestimate_with(cfg.true_phi, photons, cfg.c, &mut rng)?;
    let plan = AdaptationPlan::build(
        &cfg.network,
        &cfg.fixed_stage,
        phi_cl,
        cfg.k,
        photons,
        cfg.side,
    )?;
    let theta = plan.theta_at(&cfg.network, cfg.true_phi, cfg.local_oscillator)?;
    let branch = (kind == ProbeKind::Squeezed && cfg.local_oscillator == LocalOscillator::Track)
        .then(|| cfg.k.signum());
    let model = OutcomeModel {
        pipe: plan.pipeline(&cfg.network)?,
        kind,
        photons,
        theta,
        branch,
    };
    let samples = model.sample(cfg.true_phi, cfg.samples, &mut rng)?;
    let window = cfg.window_factor * cfg.c / photons.sqrt();
    Ok(mle_estimate(&samples, &model, phi_cl, window)? - cfg.true_phi)
}

fn ideal_record_parts(cfg: &ExperimentConfig, photons: f64, kind: ProbeKind) -> Result<(f64, f64)> {
    let plan = AdaptationPlan::build(
        &cfg.network,
        &cfg.fixed_stage,
        cfg.true_phi,
        cfg.k,
        photons,
        cfg.side,
    )?;
    let pipe = plan.pipeline(&cfg.network)?;
    let theta = plan.theta_at(&cfg.network, cfg.true_phi, LocalOscillator::Track)?;
    let (_, dg) = pipe.slopes(cfg.true_phi)?;
    match kind {
        ProbeKind::Squeezed => {
            let probe = ProbeSpec::from_photons(photons)?;
            Ok((
                pipe.exact_fisher(cfg.true_phi, probe, theta)?,
                asymptotic_fisher(cfg.k, 0.0, dg, photons)?,
            ))
        }
        ProbeKind::Coherent => {
            let model = OutcomeModel {
                pipe,
                kind,
                photons,
                theta,
                branch: None,
            };
            Ok((model.fisher(cfg.true_phi)?, 4.0 * photons * dg * dg))
        }
    }
}

fn run_series(cfg: &ExperimentConfig, kind: ProbeKind) -> Result<ScalingSeries> {
    let mut records = Vec::with_capacity(cfg.n_grid.len());
    for (gi, &photons) in cfg.n_grid.iter().enumerate() {
        let errors: Vec<f64> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                run_trial(cfg, gi, t, kind).map_err(|e| Error::Trial {
                    photons,
                    trial: t,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let n = errors.len() as f64;
        let rmse = (errors.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
        let mean_bias = errors.iter().sum::<f64>() / n;
        let (fi_exact, fi_asymptotic) = ideal_record_parts(cfg, photons, kind)?;
        records.push(ScalingRecord {
            photons,
            rmse,
            mean_bias,
            crb: cramer_rao(cfg.samples as f64 * fi_exact)?,
            fi_exact,
            fi_asymptotic,
        });
    }
    let xs: Vec<f64> = records.iter().map(|r| r.photons).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.rmse).collect();
    let (slope, slope_stderr) = fit_log_log(&xs, &ys)?;
    Ok(ScalingSeries {
        probe: kind,
        records,
        slope,
        slope_stderr,
    })
}

/// RMSE of the adapted squeezed-probe protocol over the photon-number grid,
/// plus the coherent baseline when requested.
pub fn run_scaling(cfg: &ExperimentConfig) -> Result<ScalingResult> {
    cfg.validate()?;
    let protocol = run_series(cfg, ProbeKind::Squeezed)?;
    let baseline = match cfg.baseline {
        Baseline::None => None,
        Baseline::Coherent => Some(run_series(cfg, ProbeKind::Coherent)?),
    };
    Ok(ScalingResult {
        protocol,
        baseline,
        samples_per_trial: cfg.samples,
        trials: cfg.trials,
        fi_convention: "fi_exact and fi_asymptotic are per homodyne outcome; crb uses samples_per_trial outcomes",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example;

    #[test]
    fn log_log_fit_recovers_power_law() {
        let xs = [1.0, 10.0, 100.0, 1000.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.75)).collect();
        let (slope, se) = fit_log_log(&xs, &ys).unwrap();
        assert!((slope + 0.75).abs() < 1e-12);
        assert!(se.unwrap() < 1e-12);
        let (_, se) = fit_log_log(&xs[..2], &ys[..2]).unwrap();
        assert!(se.is_none());
        assert!(fit_log_log(&[1.0], &[1.0]).is_err());
        assert!(fit_log_log(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    fn plan_model<'a>(
        plan: &'a AdaptationPlan,
        spec: &'a NetworkSpec,
        branch: Option<f64>,
    ) -> OutcomeModel<'a> {
        OutcomeModel {
            pipe: plan.pipeline(spec).unwrap(),
            kind: ProbeKind::Squeezed,
            photons: plan.photons,
            theta: plan.theta,
            branch,
        }
    }

    fn exact_stats(model: &OutcomeModel<'_>, phi: f64, count: usize) -> SampleStats {
        let (_, var) = model.moments(phi).unwrap();
        SampleStats {
            count,
            sum: 0.0,
            sum_sq: count as f64 * var,
        }
    }

    #[test]
    fn exact_second_moment_recovers_the_parameter() {
        let spec = example::network();
        let plan =
            AdaptationPlan::build(&spec, &example::v_in(), 1.0, 0.25, 1e3, Side::AdaptOutput)
                .unwrap();
        let model = plan_model(&plan, &spec, Some(1.0));
        let window = 5.0 / 1e3f64.sqrt();
        for target in [1.0 + 1e-4, 1.0 - 2e-3, 1.0 - 0.1] {
            let est =
                mle_from_stats(&exact_stats(&model, target, 500), &model, 1.0, window).unwrap();
            assert!((est - target).abs() < 1e-8, "{target}: {est}");
        }
    }

    #[test]
    fn branch_excludes_the_mirror_root() {
        let spec = example::network();
        let plan =
            AdaptationPlan::build(&spec, &example::v_in(), 1.0, 0.25, 1e3, Side::AdaptOutput)
                .unwrap();
        let window = 5.0 / 1e3f64.sqrt();
        let mirror = 1.0 + 2.0 * 0.25 / (1e3 * example::gamma_slope());
        let fenced = plan_model(&plan, &spec, Some(1.0));
        let stats = exact_stats(&fenced, 1.0, 500);
        let est = mle_from_stats(&stats, &fenced, 1.0, window).unwrap();
        assert!((est - 1.0).abs() < 1e-8, "{est}");
        let open = plan_model(&plan, &spec, None);
        assert!(
            open.log_likelihood(&stats, mirror).unwrap()
                > open.log_likelihood(&stats, 1.0).unwrap() - 1e-6
        );
        let flipped = plan_model(&plan, &spec, Some(-1.0));
        let est = mle_from_stats(&stats, &flipped, 1.0, window).unwrap();
        assert!((est - mirror).abs() < 1e-6, "{est} vs {mirror}");
    }

    #[test]
    fn flat_likelihood_resolves_to_the_center() {
        let spec = parse_static();
        let v = UnitaryMatrix::identity(1).unwrap();
        let model = OutcomeModel {
            pipe: Pipeline::new(&spec, &v, &v).unwrap(),
            kind: ProbeKind::Squeezed,
            photons: 10.0,
            theta: 0.3,
            branch: None,
        };
        let stats = SampleStats::from_samples(&[0.2, -0.4, 1.0]).unwrap();
        let est = mle_from_stats(&stats, &model, 0.7, 0.5).unwrap();
        assert!((est - 0.7).abs() <= 1e-10 * 0.5, "{est}");
    }

    fn parse_static() -> NetworkSpec {
        crate::netdsl::parse("modes 1\nps 1 0.4\n").unwrap()
    }

    #[test]
    fn mle_rejects_bad_inputs() {
        let spec = example::network();
        let v_in = example::v_in();
        let plan =
            AdaptationPlan::build(&spec, &v_in, 1.0, 0.25, 100.0, Side::AdaptOutput).unwrap();
        let model = OutcomeModel {
            pipe: plan.pipeline(&spec).unwrap(),
            kind: ProbeKind::Squeezed,
            photons: 100.0,
            theta: plan.theta,
            branch: None,
        };
        assert!(mle_estimate(&[], &model, 1.0, 0.1).is_err());
        assert!(mle_estimate(&[0.1], &model, 1.0, 0.0).is_err());
        assert!(mle_estimate(&[0.1], &model, 1.0, -1.0).is_err());
    }

    #[test]
    fn coherent_information_is_linear_in_n() {
        let spec = example::network();
        let v_in = example::v_in();
        let plan =
            AdaptationPlan::build(&spec, &v_in, 1.0, 0.25, 100.0, Side::AdaptOutput).unwrap();
        let theta = plan.theta_at(&spec, 1.0, LocalOscillator::Track).unwrap();
        let f1 = coherent_baseline_fisher(&spec, &v_in, &plan.v_out, 1.0, 100.0, theta).unwrap();
        let f4 = coherent_baseline_fisher(&spec, &v_in, &plan.v_out, 1.0, 400.0, theta).unwrap();
        assert!((f4 / f1 - 4.0).abs() < 1e-8);
    }

    #[test]
    fn static_network_carries_no_coherent_information() {
        let spec = crate::netdsl::parse("modes 2\nbs 1 2 0.3\nps 1 0.5").unwrap();
        let id = UnitaryMatrix::identity(2).unwrap();
        let f = coherent_baseline_fisher(&spec, &id, &id, 0.2, 100.0, 0.4).unwrap();
        assert_eq!(f, 0.0);
    }

    #[test]
    fn config_validation_lists_every_problem() {
        let mut cfg = ExperimentConfig::new(example::network(), example::v_in(), vec![10.0]);
        cfg.samples = 0;
        cfg.trials = 0;
        cfg.k = 0.0;
        match cfg.validate() {
            Err(Error::Config(p)) => assert_eq!(p.len(), 4),
            other => panic!("{other:?}"),
        }
    }
}
