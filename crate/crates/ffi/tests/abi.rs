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

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hsmetro_ffi::*;

const EXAMPLE: &str = "modes 2\nbs 1 2 0.7*phi\nps 1 0.3*phi\nps 2 0.1*phi\n";

fn last_error() -> String {
    let mut buf = [0 as c_char; 512];
    let n = unsafe { hm_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn parse(src: &str) -> (HmStatus, *mut HmNetwork) {
    let c = CString::new(src).unwrap();
    let mut net = ptr::null_mut();
    let s = unsafe { hm_network_parse(c.as_ptr(), &mut net) };
    (s, net)
}

#[test]
fn parse_evaluate_and_read_entries() {
    let (s, net) = parse(EXAMPLE);
    assert_eq!(s, HmStatus::Ok);
    unsafe {
        let mut modes = 0;
        assert_eq!(hm_network_modes(net, &mut modes), HmStatus::Ok);
        assert_eq!(modes, 2);
        let mut u = ptr::null_mut();
        assert_eq!(hm_network_evaluate(net, 0.0, &mut u), HmStatus::Ok);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(hm_unitary_entry(u, 0, 0, &mut re, &mut im), HmStatus::Ok);
        assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
        assert_eq!(
            hm_unitary_entry(u, 2, 0, &mut re, &mut im),
            HmStatus::InvalidArgument
        );
        hm_unitary_free(u);
        hm_network_free(net);
    }
}

#[test]
fn parse_errors_carry_a_message() {
    let (s, net) = parse("modes 2\nps 1 0.3*(phi\n");
    assert_eq!(s, HmStatus::Parse);
    assert!(net.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());
    let needed = unsafe { hm_last_error_message(ptr::null_mut(), 0) };
    assert_eq!(needed, last_error().len() + 1);

    let mut tiny = [1 as c_char; 4];
    unsafe { hm_last_error_message(tiny.as_mut_ptr(), tiny.len()) };
    assert_eq!(tiny[3], 0);

    let (s, _) = parse("ps 1 phi\n");
    assert_eq!(s, HmStatus::Parse);
}

#[test]
fn success_clears_the_error() {
    let _ = parse("not a network");
    let (s, net) = parse(EXAMPLE);
    assert_eq!(s, HmStatus::Ok);
    assert_eq!(unsafe { hm_last_error_message(ptr::null_mut(), 0) }, 0);
    unsafe { hm_network_free(net) };
}

#[test]
fn null_pointers_are_rejected() {
    unsafe {
        let mut net = ptr::null_mut();
        assert_eq!(
            hm_network_parse(ptr::null(), &mut net),
            HmStatus::NullPointer
        );
        let mut modes = 0;
        assert_eq!(
            hm_network_modes(ptr::null(), &mut modes),
            HmStatus::NullPointer
        );
        assert_eq!(
            hm_rho_prefactor(0.25, 0.0, ptr::null_mut()),
            HmStatus::NullPointer
        );
        hm_network_free(ptr::null_mut());
        hm_unitary_free(ptr::null_mut());
        hm_plan_free(ptr::null_mut());
    }
}

#[test]
fn non_unitary_entries_are_rejected() {
    let re = [1.0, 0.1, 0.0, 1.0];
    let im = [0.0; 4];
    let mut u = ptr::null_mut();
    let s = unsafe { hm_unitary_from_entries(2, re.as_ptr(), im.as_ptr(), &mut u) };
    assert_eq!(s, HmStatus::NotUnitary);
    assert!(u.is_null());

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re = [h, h, h, -h];
    let s = unsafe { hm_unitary_from_entries(2, re.as_ptr(), im.as_ptr(), &mut u) };
    assert_eq!(s, HmStatus::Ok);
    let mut dim = 0;
    unsafe {
        hm_unitary_dim(u, &mut dim);
        hm_unitary_free(u);
    }
    assert_eq!(dim, 2);
}

#[test]
fn closed_form_agrees_with_oracle_through_the_abi() {
    let (_, net) = parse(EXAMPLE);
    unsafe {
        let (mut v, mut u) = (ptr::null_mut(), ptr::null_mut());
        hm_unitary_dft(2, &mut v);
        hm_network_evaluate(net, 0.8, &mut u);
        let (mut p, mut gamma) = (0.0, 0.0);
        assert_eq!(hm_reduced_model(v, u, v, &mut p, &mut gamma), HmStatus::Ok);
        for theta in [-1.0, 0.0, 0.4, 2.5] {
            let mut brute = 0.0;
            assert_eq!(
                hm_oracle_variance(v, u, v, 1.3, theta, &mut brute),
                HmStatus::Ok
            );
            assert!((hm_quadrature_variance(p, gamma, 1.3, theta) - brute).abs() < 1e-10);
        }
        hm_unitary_free(u);
        hm_unitary_free(v);
        hm_network_free(net);
    }
}

#[test]
fn plan_reaches_the_asymptotic_information() {
    let (_, net) = parse(EXAMPLE);
    unsafe {
        let mut fixed = ptr::null_mut();
        hm_unitary_dft(2, &mut fixed);
        let mut plan = ptr::null_mut();
        let n = 1e5;
        assert_eq!(
            hm_plan_build(
                net,
                fixed,
                1.0,
                0.25,
                n,
                HmSide::AdaptOutput as i32,
                &mut plan
            ),
            HmStatus::Ok
        );
        let (mut v_in, mut v_out) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(hm_plan_stages(plan, &mut v_in, &mut v_out), HmStatus::Ok);

        let h = 1e-6;
        let gamma_at = |phi: f64| {
            let mut u = ptr::null_mut();
            hm_network_evaluate(net, phi, &mut u);
            let (mut p, mut g) = (0.0, 0.0);
            hm_reduced_model(v_in, u, v_out, &mut p, &mut g);
            hm_unitary_free(u);
            (p, g)
        };
        let (p, _) = gamma_at(1.0);
        assert!(1.0 - p < 1e-12);
        let dg = (gamma_at(1.0 + h).1 - gamma_at(1.0 - h).1) / (2.0 * h);

        let (mut fi, mut asym) = (0.0, 0.0);
        assert_eq!(hm_plan_exact_fisher(plan, net, 1.0, &mut fi), HmStatus::Ok);
        assert_eq!(
            hm_asymptotic_fisher(0.25, 0.0, dg, n, &mut asym),
            HmStatus::Ok
        );
        assert!((fi / asym - 1.0).abs() < 1e-3, "{fi} vs {asym}");

        let mut bad = ptr::null_mut();
        assert_eq!(
            hm_plan_build(net, fixed, 1.0, 0.0, n, 0, &mut bad),
            HmStatus::InvalidArgument
        );
        assert_eq!(
            hm_plan_build(net, fixed, 1.0, 0.25, n, 7, &mut bad),
            HmStatus::InvalidArgument
        );

        hm_unitary_free(v_in);
        hm_unitary_free(v_out);
        hm_plan_free(plan);
        hm_unitary_free(fixed);
        hm_network_free(net);
    }
}

#[test]
fn sampling_is_reproducible_and_has_the_model_variance() {
    let n = 200_000;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    unsafe {
        assert_eq!(
            hm_sample_homodyne(0.9, 0.3, 0.8, 1.1, n, 5, a.as_mut_ptr()),
            HmStatus::Ok
        );
        assert_eq!(
            hm_sample_homodyne(0.9, 0.3, 0.8, 1.1, n, 5, b.as_mut_ptr()),
            HmStatus::Ok
        );
        assert_eq!(
            hm_sample_homodyne(0.9, 0.3, 0.8, 1.1, 0, 5, b.as_mut_ptr()),
            HmStatus::InvalidArgument
        );
        assert_eq!(
            hm_sample_homodyne(1.5, 0.3, 0.8, 1.1, 1, 5, b.as_mut_ptr()),
            HmStatus::InvalidArgument
        );
    }
    assert_eq!(a, b);
    let var = a.iter().map(|x| x * x).sum::<f64>() / n as f64;
    let expected = hm_quadrature_variance(0.9, 0.3, 0.8, 1.1);
    assert!((var / expected - 1.0).abs() < 0.02, "{var} vs {expected}");
}

#[test]
fn scalar_helpers_match_known_values() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(hm_rho_prefactor(0.25, 0.0, &mut v), HmStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(
            hm_rho_prefactor(0.25, -1.0, &mut v),
            HmStatus::InvalidArgument
        );
        assert_eq!(hm_cramer_rao(4.0, &mut v), HmStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(hm_cramer_rao(0.0, &mut v), HmStatus::InvalidArgument);
    }
    let version = unsafe { CStr::from_ptr(hm_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hsmetro.h")).unwrap();
    let source =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    for ty in [
        "HmNetwork",
        "HmUnitary",
        "HmPlan",
        "HM_STATUS_OK",
        "HM_SIDE_ADAPT_INPUT",
    ] {
        assert!(header.contains(ty), "{ty}");
    }
}
