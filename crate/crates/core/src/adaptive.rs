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

//! Adapting one passive stage to a coarse estimate of the parameter.
//!
//! The measured amplitude `(V_out U V_in)_11` is the overlap of
//! `v_in = U V_in e_1` with `v_out = V_out† e_1`. Choosing `V_out = W†` with
//! `W e_1 = U(phi_cl) V_in e_1` makes the overlap exactly 1 at `phi_cl`; at the
//! true value the leakage `1 - P` is quadratic in `phi - phi_cl`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::ProbeSpec;
use crate::metrology::{asymptotic_fisher, check_k, rho_prefactor, wrap_angle, Pipeline};
use crate::netdsl::NetworkSpec;
use crate::rng::{normal, stream_rng};
use crate::unitary::{complete_unitary, UnitaryMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    AdaptOutput,
    AdaptInput,
}

/// How the local-oscillator phase is chosen when measuring at the true value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalOscillator {
    /// Phase-locked to the output phase at the operating point, offset by
    /// the `k/N` resolution.
    Track,
    /// The phase computed from `phi_cl` when the plan was built.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptationPlan {
    pub v_in: UnitaryMatrix,
    pub v_out: UnitaryMatrix,
    pub theta: f64,
    pub phi_cl: f64,
    pub k: f64,
    pub photons: f64,
    pub side: Side,
}

/// `phi + eps` with `eps ~ Normal(0, (c/√N)²)`.
pub fn classical_preestimate(true_phi: f64, photons: f64, c: f64, seed: u64) -> Result<f64> {
    classical_preestimate_with(true_phi, photons, c, &mut stream_rng(seed, 0))
}

pub fn classical_preestimate_with<R: Rng + ?Sized>(
    true_phi: f64,
    photons: f64,
    c: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(photons >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "photon budget must be >= 1, got {photons}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "c must be positive, got {c}"
        )));
    }
    Ok(normal(rng, true_phi, c / photons.sqrt()))
}

/// `V_out` with `V_out† e_1 = U(phi_cl) V_in e_1`.
pub fn build_refocusing_output(
    spec: &NetworkSpec,
    v_in: &UnitaryMatrix,
    phi_cl: f64,
) -> Result<UnitaryMatrix> {
    let v = spec.evaluate(phi_cl)?.apply(&v_in.column(0))?;
    Ok(complete_unitary(&renormalize(v))?.adjoint())
}

/// `V_in` with `V_in e_1 = U(phi_cl)† V_out† e_1`.
pub fn build_refocusing_input(
    spec: &NetworkSpec,
    v_out: &UnitaryMatrix,
    phi_cl: f64,
) -> Result<UnitaryMatrix> {
    let target = v_out.adjoint().column(0);
    let v = spec.evaluate(phi_cl)?.adjoint().apply(&target)?;
    complete_unitary(&renormalize(v))
}

fn renormalize(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// `gamma + sign π/2 + k/N`, reduced to `(-π, π]`.
pub fn tuned_theta(gamma: f64, k: f64, photons: f64, sign: i8) -> Result<f64> {
    check_k(k)?;
    if !(photons > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "N must be positive, got {photons}"
        )));
    }
    let s = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "sign must be +1 or -1, got {sign}"
            )))
        }
    };
    Ok(wrap_angle(gamma + s * FRAC_PI_2 + k / photons))
}

impl AdaptationPlan {
    /// Adapts one stage at `phi_cl`; `fixed` is the stage left untouched
    /// (`V_in` for [`Side::AdaptOutput`], `V_out` for [`Side::AdaptInput`]).
    pub fn build(
        spec: &NetworkSpec,
        fixed: &UnitaryMatrix,
        phi_cl: f64,
        k: f64,
        photons: f64,
        side: Side,
    ) -> Result<Self> {
        check_k(k)?;
        let (v_in, v_out) = match side {
            Side::AdaptOutput => (fixed.clone(), build_refocusing_output(spec, fixed, phi_cl)?),
            Side::AdaptInput => (build_refocusing_input(spec, fixed, phi_cl)?, fixed.clone()),
        };
        let (_, gamma) = Pipeline::new(spec, &v_in, &v_out)?.p_gamma(phi_cl)?;
        let theta = tuned_theta(gamma, k, photons, 1)?;
        Ok(AdaptationPlan {
            v_in,
            v_out,
            theta,
            phi_cl,
            k,
            photons,
            side,
        })
    }

    pub fn pipeline<'a>(&'a self, spec: &'a NetworkSpec) -> Result<Pipeline<'a>> {
        Pipeline::new(spec, &self.v_in, &self.v_out)
    }

    /// Local-oscillator phase used when the true value is `phi`.
    pub fn theta_at(&self, spec: &NetworkSpec, phi: f64, lo: LocalOscillator) -> Result<f64> {
        match lo {
            LocalOscillator::Fixed => Ok(self.theta),
            LocalOscillator::Track => {
                let (_, gamma) = self.pipeline(spec)?.p_gamma(phi)?;
                tuned_theta(gamma, self.k, self.photons, 1)
            }
        }
    }

    /// `1 - P` at `phi`, summed over the unmeasured output modes.
    pub fn leakage(&self, spec: &NetworkSpec, phi: f64) -> Result<f64> {
        leakage(spec, &self.v_in, &self.v_out, phi)
    }
}

/// `1 - |T_11|²` computed as `sum_{j>1} |T_j1|²`.
pub fn leakage(
    spec: &NetworkSpec,
    v_in: &UnitaryMatrix,
    v_out: &UnitaryMatrix,
    phi: f64,
) -> Result<f64> {
    let col = v_out.apply(&spec.evaluate(phi)?.apply(&v_in.column(0))?)?;
    Ok(col[1..].iter().map(|z| z.norm_sqr()).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Robustness {
    pub one_minus_p: f64,
    pub ell_equiv: f64,
}

/// Leakage at `true_phi` of an output stage adapted at `phi_cl`.
pub fn robustness_check(
    spec: &NetworkSpec,
    v_in: &UnitaryMatrix,
    true_phi: f64,
    phi_cl: f64,
    photons: f64,
) -> Result<Robustness> {
    let v_out = build_refocusing_output(spec, v_in, phi_cl)?;
    let one_minus_p = leakage(spec, v_in, &v_out, true_phi)?;
    Ok(Robustness {
        one_minus_p,
        ell_equiv: one_minus_p * photons,
    })
}

/// A coarse estimate `phi_cl > phi` whose adapted output stage leaks exactly
/// `ell / N` at `phi`. Fails when the network never leaks that much.
pub fn misadapted_estimate(
    spec: &NetworkSpec,
    v_in: &UnitaryMatrix,
    phi: f64,
    ell: f64,
    photons: f64,
) -> Result<f64> {
    if !(ell >= 0.0) || !(photons > 0.0) {
        return Err(Error::InvalidArgument("need ell >= 0 and N > 0".into()));
    }
    if ell == 0.0 {
        return Ok(phi);
    }
    let excess = |d: f64| -> Result<f64> {
        Ok(robustness_check(spec, v_in, phi, phi + d, photons)?.ell_equiv - ell)
    };
    let mut hi = 1.0 / photons.sqrt();
    let mut tries = 0;
    while excess(hi)? < 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::InvalidArgument(format!(
                "network never leaks ell = {ell} photons near phi = {phi}"
            )));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(phi + 0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonitorRow {
    pub phi: f64,
    pub offset: f64,
    pub one_minus_p: f64,
    pub ell_equiv: f64,
    pub fi_exact: f64,
    /// `fi_exact / (8 rho(k, 0) (d gamma)² N²)`.
    pub fi_ratio: f64,
    /// `rho(k, ell_equiv) / rho(k, 0)`.
    pub rho_ratio: f64,
}

/// Scans the true value over `phi_cl ± c/√N` with the stage adapted once at
/// `phi_cl`.
pub fn monitor_scan(
    spec: &NetworkSpec,
    v_in: &UnitaryMatrix,
    phi_cl: f64,
    c: f64,
    photons: f64,
    points: usize,
    k: f64,
) -> Result<Vec<MonitorRow>> {
    if points < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 scan points, got {points}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "c must be positive, got {c}"
        )));
    }
    let plan = AdaptationPlan::build(spec, v_in, phi_cl, k, photons, Side::AdaptOutput)?;
    let pipe = plan.pipeline(spec)?;
    let probe = ProbeSpec::from_photons(photons)?;
    let half = c / photons.sqrt();
    let rho0 = rho_prefactor(k, 0.0)?;
    (0..points)
        .map(|i| {
            let offset = if 2 * i + 1 == points {
                0.0
            } else {
                -half + 2.0 * half * i as f64 / (points - 1) as f64
            };
            let phi = phi_cl + offset;
            let one_minus_p = plan.leakage(spec, phi)?;
            let ell_equiv = one_minus_p * photons;
            let theta = plan.theta_at(spec, phi, LocalOscillator::Track)?;
            let fi_exact = pipe.exact_fisher(phi, probe, theta)?;
            let (_, dg) = pipe.slopes(phi)?;
            let reference = asymptotic_fisher(k, 0.0, dg, photons)?;
            Ok(MonitorRow {
                phi,
                offset,
                one_minus_p,
                ell_equiv,
                fi_exact,
                fi_ratio: fi_exact / reference,
                rho_ratio: rho_prefactor(k, ell_equiv)? / rho0,
            })
        })
        .collect()
}
