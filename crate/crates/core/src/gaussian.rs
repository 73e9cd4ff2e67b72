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

//! Gaussian statistics of the measured output mode.
//!
//! A squeezed vacuum enters mode 1, passes `V_in`, the network `U` and
//! `V_out`, and the quadrature `x_theta = (a e^{-i theta} + a† e^{i theta})/√2`
//! of output mode 1 is measured (vacuum variance 1/2). With
//! `T = V_out U V_in` and `T_11 = √P e^{i gamma}` the outcome is a centred
//! normal whose variance depends only on `(P, gamma, r)`:
//!
//! ```text
//! sigma²(theta) = ½ [ (1 - P) + P (e^{-2r} cos² w + e^{2r} sin² w) ],   w = theta - gamma - π/2
//! ```
//!
//! The probe is squeezed along `p` (symplectic `diag(e^r, e^-r)` on `(x, p)`),
//! which places the minimum-variance quadrature at `theta = gamma ± π/2`.
//! [`oracle_variance`] recomputes the same number by propagating the full
//! `2M x 2M` covariance matrix.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{standard_normal, stream_rng};
use crate::unitary::UnitaryMatrix;

/// Single-mode squeezed-vacuum probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSpec {
    r: f64,
}

impl ProbeSpec {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "squeezing parameter must be finite and non-negative, got {r}"
            )));
        }
        Ok(ProbeSpec { r })
    }

    /// Probe with mean photon number `n = sinh² r`.
    pub fn from_photons(n: f64) -> Result<Self> {
        if !n.is_finite() || n < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "mean photon number must be finite and non-negative, got {n}"
            )));
        }
        Self::new(n.sqrt().asinh())
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn photons(&self) -> f64 {
        self.r.sinh().powi(2)
    }
}

/// `(P, gamma, r)` for the measured mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedModeModel {
    pub p: f64,
    pub gamma: f64,
    pub r: f64,
}

pub fn reduced_model(
    v_in: &UnitaryMatrix,
    u_phi: &UnitaryMatrix,
    v_out: &UnitaryMatrix,
    probe: ProbeSpec,
) -> Result<ReducedModeModel> {
    let t11 = first_amplitude(v_in, u_phi, v_out)?;
    Ok(ReducedModeModel {
        p: t11.norm_sqr().min(1.0),
        gamma: t11.arg(),
        r: probe.r,
    })
}

/// `(V_out U V_in)_11` using only the first row of `V_out` and the first
/// column of `V_in`.
pub fn first_amplitude(
    v_in: &UnitaryMatrix,
    u_phi: &UnitaryMatrix,
    v_out: &UnitaryMatrix,
) -> Result<num_complex::Complex64> {
    let m = u_phi.dim();
    for d in [v_in.dim(), v_out.dim()] {
        if d != m {
            return Err(Error::Dimension {
                expected: m,
                found: d,
            });
        }
    }
    let col = u_phi.apply(&v_in.column(0))?;
    Ok((0..m).map(|j| v_out.entry(0, j) * col[j]).sum())
}

/// Closed-form homodyne variance for raw `(P, gamma, r)`.
pub fn variance_from_parts(p: f64, gamma: f64, r: f64, theta: f64) -> f64 {
    let w = theta - gamma - FRAC_PI_2;
    let (s, c) = w.sin_cos();
    0.5 * ((1.0 - p) + p * ((-2.0 * r).exp() * c * c + (2.0 * r).exp() * s * s))
}

impl ReducedModeModel {
    pub fn quadrature_variance(&self, theta: f64) -> f64 {
        variance_from_parts(self.p, self.gamma, self.r, theta)
    }

    /// Smallest variance over all local-oscillator phases.
    pub fn min_variance(&self) -> f64 {
        0.5 * ((1.0 - self.p) + self.p * (-2.0 * self.r).exp())
    }
}

pub fn quadrature_variance(model: &ReducedModeModel, theta: f64) -> f64 {
    model.quadrature_variance(theta)
}

/// Zero-mean Gaussian state as a covariance matrix in the ordering
/// `(x_1, p_1, ..., x_M, p_M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    cov: DMatrix<f64>,
}

/// Real `2M x 2M` symplectic matrix of a passive unitary acting as
/// `a -> U a`: block `(j, k)` is `[[Re U, -Im U], [Im U, Re U]]`.
pub fn passive_symplectic(u: &UnitaryMatrix) -> DMatrix<f64> {
    let m = u.dim();
    let mut s = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        for k in 0..m {
            let z = u.entry(j, k);
            s[(2 * j, 2 * k)] = z.re;
            s[(2 * j, 2 * k + 1)] = -z.im;
            s[(2 * j + 1, 2 * k)] = z.im;
            s[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    s
}

/// Squeezer on `mode`: `x -> e^r x`, `p -> e^-r p`.
pub fn squeezer_symplectic(modes: usize, mode: usize, r: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    s[(2 * mode, 2 * mode)] = r.exp();
    s[(2 * mode + 1, 2 * mode + 1)] = (-r).exp();
    s
}

/// Local-oscillator rotation on `mode`: new `x` is `x_theta`.
pub fn rotation_symplectic(modes: usize, mode: usize, theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    let mut m = DMatrix::identity(2 * modes, 2 * modes);
    m[(2 * mode, 2 * mode)] = c;
    m[(2 * mode, 2 * mode + 1)] = s;
    m[(2 * mode + 1, 2 * mode)] = -s;
    m[(2 * mode + 1, 2 * mode + 1)] = c;
    m
}

fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        o[(2 * j, 2 * j + 1)] = 1.0;
        o[(2 * j + 1, 2 * j)] = -1.0;
    }
    o
}

impl CovarianceState {
    pub fn vacuum(modes: usize) -> Self {
        CovarianceState {
            cov: DMatrix::identity(2 * modes, 2 * modes) * 0.5,
        }
    }

    pub fn modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `V -> S V S^T`.
    pub fn transform(&self, s: &DMatrix<f64>) -> Result<Self> {
        if s.nrows() != self.cov.nrows() || s.ncols() != self.cov.ncols() {
            return Err(Error::Dimension {
                expected: self.cov.nrows(),
                found: s.nrows(),
            });
        }
        let cov = s * &self.cov * s.transpose();
        // re-symmetrize rounding noise
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(CovarianceState { cov })
    }

    pub fn apply_unitary(&self, u: &UnitaryMatrix) -> Result<Self> {
        if u.dim() != self.modes() {
            return Err(Error::Dimension {
                expected: self.modes(),
                found: u.dim(),
            });
        }
        self.transform(&passive_symplectic(u))
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.cov - self.cov.transpose()).amax()
    }

    /// Williamson symplectic eigenvalues, ascending.
    ///
    /// `nu²` are the eigenvalues of `V^{1/2} Ω^T V Ω V^{1/2}`, which is
    /// symmetric and similar to `-(Ω V)²`.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let n = self.modes();
        let eig = SymmetricEigen::new(self.cov.clone());
        let sqrt_v = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()))
            * eig.eigenvectors.transpose();
        let omega = symplectic_form(n);
        let inner = &sqrt_v * omega.transpose() * &self.cov * &omega * &sqrt_v;
        let inner = (&inner + inner.transpose()) * 0.5;
        let mut nus: Vec<f64> = SymmetricEigen::new(inner)
            .eigenvalues
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .collect();
        nus.sort_by(|a, b| a.total_cmp(b));
        // eigenvalues come in pairs
        nus.into_iter().step_by(2).collect()
    }

    /// Variance of `x_theta` on `mode` after a local-oscillator rotation.
    pub fn homodyne_variance(&self, mode: usize, theta: f64) -> Result<f64> {
        if mode >= self.modes() {
            return Err(Error::InvalidArgument(format!(
                "mode {mode} outside 0..{}",
                self.modes()
            )));
        }
        let rotated = self.transform(&rotation_symplectic(self.modes(), mode, theta))?;
        Ok(rotated.cov[(2 * mode, 2 * mode)])
    }
}

/// Full covariance matrix after squeezer, `V_in`, `U` and `V_out`.
pub fn oracle_state(
    v_in: &UnitaryMatrix,
    u_phi: &UnitaryMatrix,
    v_out: &UnitaryMatrix,
    probe: ProbeSpec,
) -> Result<CovarianceState> {
    let m = u_phi.dim();
    for d in [v_in.dim(), v_out.dim()] {
        if d != m {
            return Err(Error::Dimension {
                expected: m,
                found: d,
            });
        }
    }
    CovarianceState::vacuum(m)
        .transform(&squeezer_symplectic(m, 0, probe.r))?
        .apply_unitary(v_in)?
        .apply_unitary(u_phi)?
        .apply_unitary(v_out)
}

/// Brute-force homodyne variance from covariance propagation.
pub fn oracle_variance(
    v_in: &UnitaryMatrix,
    u_phi: &UnitaryMatrix,
    v_out: &UnitaryMatrix,
    probe: ProbeSpec,
    theta: f64,
) -> Result<f64> {
    oracle_state(v_in, u_phi, v_out, probe)?.homodyne_variance(0, theta)
}

/// `count` i.i.d. homodyne outcomes, reproducible from `seed`.
pub fn sample_homodyne(
    model: &ReducedModeModel,
    theta: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let mut rng = stream_rng(seed, 0);
    Ok(sample_homodyne_with(model, theta, count, &mut rng))
}

pub fn sample_homodyne_with<R: Rng + ?Sized>(
    model: &ReducedModeModel,
    theta: f64,
    count: usize,
    rng: &mut R,
) -> Vec<f64> {
    let sd = model.quadrature_variance(theta).sqrt();
    (0..count).map(|_| sd * standard_normal(rng)).collect()
}
