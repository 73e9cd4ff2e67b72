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

//! Fisher information and precision bounds for the homodyne scheme.

use std::f64::consts::{PI, TAU};

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{first_amplitude, variance_from_parts, ProbeSpec, ReducedModeModel};
use crate::netdsl::{derivative_step, NetworkSpec};
use crate::unitary::UnitaryMatrix;

/// Below this `|d gamma / d phi|` the phase carries no information.
pub const GAMMA_SLOPE_FLOOR: f64 = 1e-9;

/// Below this `|T_11|` the output phase is rounding noise.
pub const AMPLITUDE_FLOOR: f64 = 1e-12;

/// Homodyne offset `k`, leaked photons `ell` and the local-oscillator phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuningParams {
    pub k: f64,
    pub ell: f64,
    pub theta: f64,
}

impl TuningParams {
    pub fn new(k: f64, ell: f64, theta: f64) -> Result<Self> {
        check_k(k)?;
        check_ell(ell)?;
        Ok(TuningParams { k, ell, theta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherReport {
    pub exact_fi_per_sample: f64,
    pub asymptotic_fi: f64,
    pub dgamma: f64,
    /// `1 / sqrt(samples * exact_fi_per_sample)`.
    pub crb: f64,
}

pub(crate) fn check_k(k: f64) -> Result<()> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "k must be finite and nonzero (requirement k != 0: the Fisher information \
             vanishes when the local oscillator sits exactly on the minimum-variance \
             quadrature), got {k}"
        )));
    }
    Ok(())
}

fn check_ell(ell: f64) -> Result<()> {
    if !(ell >= 0.0) || !ell.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "ell must be finite and >= 0, got {ell}"
        )));
    }
    Ok(())
}

/// `[8k / (16k² + 4 ell + 1)]²`.
pub fn rho_prefactor(k: f64, ell: f64) -> Result<f64> {
    check_ell(ell)?;
    let q = 8.0 * k / (16.0 * k * k + 4.0 * ell + 1.0);
    Ok(q * q)
}

/// Offset `|k|` maximising the prefactor at fixed `ell`.
pub fn optimal_k(ell: f64) -> Result<f64> {
    check_ell(ell)?;
    Ok((4.0 * ell + 1.0).sqrt() / 4.0)
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Removes `2π` jumps between neighbouring samples.
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(phases.len());
    for &p in phases {
        match out.last() {
            None => out.push(p),
            Some(&prev) => out.push(prev + wrap_angle(p - prev)),
        }
    }
    out
}

/// The fixed stages around a parametrized network.
#[derive(Debug, Clone, Copy)]
pub struct Pipeline<'a> {
    pub network: &'a NetworkSpec,
    pub v_in: &'a UnitaryMatrix,
    pub v_out: &'a UnitaryMatrix,
}

impl<'a> Pipeline<'a> {
    pub fn new(
        network: &'a NetworkSpec,
        v_in: &'a UnitaryMatrix,
        v_out: &'a UnitaryMatrix,
    ) -> Result<Self> {
        for d in [v_in.dim(), v_out.dim()] {
            if d != network.modes {
                return Err(Error::Dimension {
                    expected: network.modes,
                    found: d,
                });
            }
        }
        Ok(Pipeline {
            network,
            v_in,
            v_out,
        })
    }

    pub fn amplitude(&self, phi: f64) -> Result<num_complex::Complex64> {
        first_amplitude(self.v_in, &self.network.evaluate(phi)?, self.v_out)
    }

    /// `(P, gamma)` at `phi`, with `gamma` in `(-π, π]`.
    pub fn p_gamma(&self, phi: f64) -> Result<(f64, f64)> {
        let t = self.amplitude(phi)?;
        Ok((t.norm_sqr().min(1.0), t.arg()))
    }

    pub fn model(&self, phi: f64, probe: ProbeSpec) -> Result<ReducedModeModel> {
        let (p, gamma) = self.p_gamma(phi)?;
        Ok(ReducedModeModel {
            p,
            gamma,
            r: probe.r(),
        })
    }

    fn defined_phase(&self, phi: f64) -> Result<(f64, f64)> {
        let (p, g) = self.p_gamma(phi)?;
        if p.sqrt() < AMPLITUDE_FLOOR {
            return Err(Error::UndefinedPhase { phi });
        }
        Ok((p, g))
    }

    /// `(dP/dphi, dgamma/dphi)` by central differences.
    pub fn slopes(&self, phi: f64) -> Result<(f64, f64)> {
        let h = derivative_step(phi);
        let (p_plus, g_plus) = self.defined_phase(phi + h)?;
        let (p_minus, g_minus) = self.defined_phase(phi - h)?;
        Ok((
            (p_plus - p_minus) / (2.0 * h),
            wrap_angle(g_plus - g_minus) / (2.0 * h),
        ))
    }

    /// `d sigma² / d phi` at fixed `theta`, through the chain rule on
    /// `(P, gamma)`.
    pub fn variance_slope(&self, phi: f64, probe: ProbeSpec, theta: f64) -> Result<f64> {
        let (p, gamma) = self.defined_phase(phi)?;
        let (dp, dg) = self.slopes(phi)?;
        let r = probe.r();
        let w = theta - gamma - PI / 2.0;
        let (s, c) = w.sin_cos();
        let d_dp = 0.5 * (-1.0 + (-2.0 * r).exp() * c * c + (2.0 * r).exp() * s * s);
        let d_dgamma = -p * (2.0 * r).sinh() * (2.0 * w).sin();
        Ok(d_dp * dp + d_dgamma * dg)
    }

    /// Per-sample Fisher information of a homodyne outcome at `phi`.
    pub fn exact_fisher(&self, phi: f64, probe: ProbeSpec, theta: f64) -> Result<f64> {
        let model = self.model(phi, probe)?;
        exact_fisher_per_sample(&model, theta, self.variance_slope(phi, probe, theta)?)
    }
}

/// `(P, gamma)` over an increasing grid, `gamma` unwrapped.
pub fn gamma_curve(
    spec: &NetworkSpec,
    v_in: &UnitaryMatrix,
    v_out: &UnitaryMatrix,
    phis: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if phis.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "phi grid must be strictly increasing".into(),
        ));
    }
    let pipe = Pipeline::new(spec, v_in, v_out)?;
    let raw = phis
        .iter()
        .map(|&phi| pipe.defined_phase(phi))
        .collect::<Result<Vec<_>>>()?;
    let gammas: Vec<f64> = raw.iter().map(|(_, g)| *g).collect();
    Ok(raw
        .iter()
        .map(|(p, _)| *p)
        .zip(unwrap_phases(&gammas))
        .collect())
}

pub fn slope_assumption_violated(dgamma: f64) -> bool {
    dgamma.abs() < GAMMA_SLOPE_FLOOR
}

/// `d gamma / d phi` at `phi`; logs a warning when it (nearly) vanishes.
pub fn dgamma(
    spec: &NetworkSpec,
    v_in: &UnitaryMatrix,
    v_out: &UnitaryMatrix,
    phi: f64,
) -> Result<f64> {
    let (_, dg) = Pipeline::new(spec, v_in, v_out)?.slopes(phi)?;
    if slope_assumption_violated(dg) {
        warn!("|d gamma/d phi| = {dg:.3e} at phi = {phi}: the output phase does not track phi");
    }
    Ok(dg)
}

/// Fisher information of one outcome of `N(0, sigma²(phi))`:
/// `(d sigma²)² / (2 sigma⁴)`.
pub fn exact_fisher_per_sample(
    model: &ReducedModeModel,
    theta: f64,
    dsigma2_dphi: f64,
) -> Result<f64> {
    let var = variance_from_parts(model.p, model.gamma, model.r, theta);
    if !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(dsigma2_dphi * dsigma2_dphi / (2.0 * var * var))
}

/// Large-`N` Fisher information `8 rho(k, ell) (d gamma)² N²`.
pub fn asymptotic_fisher(k: f64, ell: f64, dgamma: f64, n: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "N must be positive, got {n}"
        )));
    }
    Ok(8.0 * rho_prefactor(k, ell)? * dgamma * dgamma * n * n)
}

/// Cramér-Rao bound `1 / sqrt(F)`.
pub fn cramer_rao(total_fisher: f64) -> Result<f64> {
    if !(total_fisher > 0.0) || !total_fisher.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Fisher information must be positive and finite, got {total_fisher}"
        )));
    }
    Ok(1.0 / total_fisher.sqrt())
}

/// Exact and asymptotic information at `phi` for a given tuning, with the
/// bound for `samples` i.i.d. outcomes.
pub fn fisher_report(
    pipe: &Pipeline<'_>,
    phi: f64,
    photons: f64,
    tuning: TuningParams,
    samples: usize,
) -> Result<FisherReport> {
    let probe = ProbeSpec::from_photons(photons)?;
    let exact = pipe.exact_fisher(phi, probe, tuning.theta)?;
    let (_, dg) = pipe.slopes(phi)?;
    let asymptotic = asymptotic_fisher(tuning.k, tuning.ell, dg, photons)?;
    Ok(FisherReport {
        exact_fi_per_sample: exact,
        asymptotic_fi: asymptotic,
        dgamma: dg,
        crb: cramer_rao(samples as f64 * exact)?,
    })
}
