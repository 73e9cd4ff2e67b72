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

//! The two-mode example network shipped with the crate.
//!
//! `U(phi) = U_PS(lambda, lambda') U_BS(eta)` with `lambda = 0.3 phi`,
//! `lambda' = 0.1 phi`, `eta = 0.7 phi`; fixed input stage
//! `V_in = U_PS(π/4, -π/4) U_BS(π/4)`; the hand-built output stage is
//! `V_out(alpha) = U_BS(π/4) U_PS(-alpha, alpha)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::Result;
use crate::netdsl::{parse, NetworkSpec};
use crate::unitary::{compose, UnitaryMatrix};

pub const NETWORK_SOURCE: &str = include_str!("../networks/example.net");
pub const V_IN_SOURCE: &str = include_str!("../networks/example_vin.net");

pub const LAMBDA_SLOPE: f64 = 0.3;
pub const LAMBDA_PRIME_SLOPE: f64 = 0.1;
pub const ETA_SLOPE: f64 = 0.7;

pub fn network() -> NetworkSpec {
    parse(NETWORK_SOURCE).expect("bundled example network parses")
}

pub fn v_in() -> UnitaryMatrix {
    parse(V_IN_SOURCE)
        .and_then(|s| s.evaluate_fixed())
        .expect("bundled input stage parses")
}

pub fn phase_shifts(lambda: f64, lambda_prime: f64) -> Result<UnitaryMatrix> {
    UnitaryMatrix::phase_shifter(2, 0, lambda)?.multiply(&UnitaryMatrix::phase_shifter(
        2,
        1,
        lambda_prime,
    )?)
}

pub fn splitter(eta: f64) -> Result<UnitaryMatrix> {
    UnitaryMatrix::beam_splitter(2, 0, 1, eta)
}

/// `U_PS(lambda, lambda') U_BS(eta)` from raw element angles.
pub fn network_matrix(lambda: f64, lambda_prime: f64, eta: f64) -> Result<UnitaryMatrix> {
    compose(&[&phase_shifts(lambda, lambda_prime)?, &splitter(eta)?])
}

/// `U_PS(π/4, -π/4) U_BS(π/4)`.
pub fn input_stage() -> Result<UnitaryMatrix> {
    compose(&[&phase_shifts(FRAC_PI_4, -FRAC_PI_4)?, &splitter(FRAC_PI_4)?])
}

/// `U_BS(π/4) U_PS(-alpha, alpha)`.
pub fn output_stage(alpha: f64) -> Result<UnitaryMatrix> {
    compose(&[&splitter(FRAC_PI_4)?, &phase_shifts(-alpha, alpha)?])
}

pub fn lambda(phi: f64) -> f64 {
    LAMBDA_SLOPE * phi
}

pub fn lambda_prime(phi: f64) -> f64 {
    LAMBDA_PRIME_SLOPE * phi
}

pub fn eta(phi: f64) -> f64 {
    ETA_SLOPE * phi
}

/// Output phase shift that refocuses all light at `phi`.
pub fn adapted_alpha(phi: f64) -> f64 {
    (lambda(phi) - lambda_prime(phi)) / 2.0 - FRAC_PI_4
}

/// `P = (1 + sin(lambda - lambda' - 2 alpha)) / 2`.
pub fn closed_form_p(lambda: f64, lambda_prime: f64, alpha: f64) -> f64 {
    0.5 * (1.0 + (lambda - lambda_prime - 2.0 * alpha).sin())
}

/// `(lambda + lambda')/2 + eta + π/2`; the measured amplitude is this phase
/// times the real factor `cos((lambda - lambda' - 2 alpha)/2 - π/4)`.
pub fn closed_form_gamma(lambda: f64, lambda_prime: f64, eta: f64) -> f64 {
    (lambda + lambda_prime) / 2.0 + eta + FRAC_PI_2
}

/// `d(lambda - lambda')/d phi`.
pub fn arm_phase_slope() -> f64 {
    LAMBDA_SLOPE - LAMBDA_PRIME_SLOPE
}

/// `d gamma / d phi`.
pub fn gamma_slope() -> f64 {
    (LAMBDA_SLOPE + LAMBDA_PRIME_SLOPE) / 2.0 + ETA_SLOPE
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &UnitaryMatrix, b: &UnitaryMatrix) -> f64 {
        (a.as_matrix() - b.as_matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn bundled_files_match_closed_forms() {
        let phi = 0.83;
        let u = network().evaluate(phi).unwrap();
        let direct = network_matrix(lambda(phi), lambda_prime(phi), eta(phi)).unwrap();
        assert!(max_diff(&u, &direct) < 1e-14);
        assert!(max_diff(&v_in(), &input_stage().unwrap()) < 1e-14);
    }
}
