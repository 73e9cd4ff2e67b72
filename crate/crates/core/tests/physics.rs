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

mod common;

use hsmetro::adaptive::{
    build_refocusing_input, build_refocusing_output, leakage, robustness_check, AdaptationPlan,
    Side,
};
use hsmetro::cli::oracle_deviation;
use hsmetro::config::load_network;
use hsmetro::example;
use hsmetro::gaussian::{oracle_variance, reduced_model, ProbeSpec};
use hsmetro::metrology::Pipeline;
use hsmetro::rng::stream_rng;
use hsmetro::unitary::{compose, UnitaryMatrix};
use proptest::prelude::*;

use common::{networks_dir, random_network};

fn max_diff(a: &UnitaryMatrix, b: &UnitaryMatrix) -> f64 {
    a.to_row_major()
        .iter()
        .zip(b.to_row_major())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_covariance_oracle(seed in any::<u64>(), modes in 1usize..=6) {
        let net = random_network(&mut stream_rng(seed, 1), modes);
        prop_assert!(oracle_deviation(&net, 3, seed).unwrap() <= 1e-10);
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>(), dim in 1usize..=8) {
        let mut rng = stream_rng(seed, 0);
        let a = UnitaryMatrix::random(dim, &mut rng).unwrap();
        let b = UnitaryMatrix::random(dim, &mut rng).unwrap();
        let c = UnitaryMatrix::random(dim, &mut rng).unwrap();
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert!(max_diff(&left, &right) < 1e-12);
        prop_assert!(max_diff(&compose(&[&a, &b, &c]).unwrap(), &left) < 1e-12);
    }

    #[test]
    fn refocusing_concentrates_all_light(seed in any::<u64>(), modes in 1usize..=6, phi in -3.0f64..3.0) {
        let mut rng = stream_rng(seed, 2);
        let net = random_network(&mut rng, modes);
        let fixed = UnitaryMatrix::random(modes, &mut rng).unwrap();
        let v_out = build_refocusing_output(&net, &fixed, phi).unwrap();
        prop_assert!(v_out.unitarity_defect() < 1e-10);
        prop_assert!(leakage(&net, &fixed, &v_out, phi).unwrap() < 1e-12);
        let v_in = build_refocusing_input(&net, &fixed, phi).unwrap();
        prop_assert!(leakage(&net, &v_in, &fixed, phi).unwrap() < 1e-12);
    }
}

#[test]
fn example_reduced_state_matches_oracle_across_angles() {
    let net = example::network();
    let v_in = example::v_in();
    let plan = AdaptationPlan::build(&net, &v_in, 1.0, 0.25, 1e3, Side::AdaptOutput).unwrap();
    let probe = ProbeSpec::from_photons(1e3).unwrap();
    let u = net.evaluate(1.02).unwrap();
    let model = reduced_model(&plan.v_in, &u, &plan.v_out, probe).unwrap();
    for i in 0..32 {
        let theta = -3.0 + 0.2 * i as f64;
        let brute = oracle_variance(&plan.v_in, &u, &plan.v_out, probe, theta).unwrap();
        assert!((model.quadrature_variance(theta) - brute).abs() < 1e-9 * brute.max(1.0));
    }
}

/// `leak(d) / d²` at three step sizes, Richardson-extrapolated to `d -> 0`.
fn quadratic_coefficient(
    net: &hsmetro::netdsl::NetworkSpec,
    v_in: &UnitaryMatrix,
    phi: f64,
) -> (f64, f64) {
    let f = |d: f64| {
        robustness_check(net, v_in, phi, phi + d, 1.0)
            .unwrap()
            .one_minus_p
            / (d * d)
    };
    let (f1, f2, f3) = (f(1e-2), f(5e-3), f(2.5e-3));
    (2.0 * f2 - f1, 2.0 * f3 - f2)
}

#[test]
fn leakage_is_quadratic_in_the_estimate_error() {
    let (a, b) = quadratic_coefficient(&example::network(), &example::v_in(), 1.0);
    let expected = 0.25 * example::arm_phase_slope().powi(2);
    assert!((a - expected).abs() < 1e-6 * expected, "{a}");
    assert!((b - expected).abs() < 1e-6 * expected, "{b}");

    let mesh = load_network(&networks_dir().join("mesh4.net")).unwrap();
    let v_in = UnitaryMatrix::dft(4).unwrap();
    let (a, b) = quadratic_coefficient(&mesh, &v_in, 0.4);
    assert!(a > 0.0 && (a - b).abs() < 1e-3 * a, "{a} vs {b}");
}

#[test]
fn equivalent_leakage_is_stable_under_four_times_the_photons() {
    let mesh = load_network(&networks_dir().join("mesh4.net")).unwrap();
    let v_in = UnitaryMatrix::dft(4).unwrap();
    for (net, v) in [(example::network(), example::v_in()), (mesh, v_in)] {
        let ell = |n: f64| {
            robustness_check(&net, &v, 0.4, 0.4 + 1.0 / n.sqrt(), n)
                .unwrap()
                .ell_equiv
        };
        let (a, b) = (ell(1e3), ell(4e3));
        assert!((a - b).abs() < 0.2 * a.min(b), "{a} vs {b}");
    }
}

#[test]
fn adapted_stage_has_no_leakage_and_the_design_phase_slope() {
    let net = example::network();
    let v_in = example::v_in();
    let plan = AdaptationPlan::build(&net, &v_in, 0.7, 0.25, 1e4, Side::AdaptOutput).unwrap();
    let pipe = Pipeline::new(&net, &plan.v_in, &plan.v_out).unwrap();
    let (p, _) = pipe.p_gamma(0.7).unwrap();
    assert!(1.0 - p < 1e-12);
    let (_, dg) = pipe.slopes(0.7).unwrap();
    assert!((dg - example::gamma_slope()).abs() < 1e-6);
}
