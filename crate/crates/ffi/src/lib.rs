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

//! C ABI over `hsmetro`.
//!
//! Every fallible function returns an [`HmStatus`]; on failure the message is
//! kept per thread and read back with [`hm_last_error_message`]. Objects are
//! opaque handles created by `*_new`/`*_parse`/`*_build` style calls and
//! released with the matching `*_free`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hsmetro::adaptive::{AdaptationPlan, LocalOscillator, Side};
use hsmetro::gaussian::{
    oracle_variance, reduced_model, sample_homodyne, variance_from_parts, ProbeSpec,
    ReducedModeModel,
};
use hsmetro::metrology::{asymptotic_fisher, cramer_rao, rho_prefactor};
use hsmetro::netdsl::{self, NetworkSpec};
use hsmetro::unitary::UnitaryMatrix;
use hsmetro::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotUnitary = 4,
    Dimension = 5,
    Domain = 6,
    UndefinedPhase = 7,
    Internal = 8,
}

/// Values accepted for the `side` argument of [`hm_plan_build`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmSide {
    AdaptOutput = 0,
    AdaptInput = 1,
}

/// Parsed network description.
pub struct HmNetwork(NetworkSpec);

/// Validated unitary matrix.
pub struct HmUnitary(UnitaryMatrix);

/// Adapted stages and local-oscillator phase.
pub struct HmPlan(AdaptationPlan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(HmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Syntax { .. } | Error::ModeOutOfRange { .. } | Error::MissingModes => {
                HmStatus::Parse
            }
            Error::NotUnitary { .. } => HmStatus::NotUnitary,
            Error::Dimension { .. } => HmStatus::Dimension,
            Error::Domain(_) | Error::ZeroVariance => HmStatus::Domain,
            Error::UndefinedPhase { .. } => HmStatus::UndefinedPhase,
            Error::InvalidArgument(_) | Error::Config(_) => HmStatus::InvalidArgument,
            _ => HmStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HmStatus::NullPointer, format!("null pointer: {what}"))
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> HmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            HmStatus::Internal
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Copies the calling thread's last error message (NUL-terminated) into
/// `buf` and returns the buffer size it needs, including the terminator.
/// Returns 0 when no error is recorded. Passing a null `buf` only queries the
/// size.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hm_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses network-description text.
///
/// # Safety
/// `source` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_network_parse(
    source: *const c_char,
    out: *mut *mut HmNetwork,
) -> HmStatus {
    guard(|| {
        if source.is_null() {
            return Err(null("source"));
        }
        let text = CStr::from_ptr(source)
            .to_str()
            .map_err(|_| Failure(HmStatus::Parse, "source is not valid UTF-8".into()))?;
        let spec = netdsl::parse(text)?;
        put(out, boxed(HmNetwork(spec)), "out")
    })
}

/// # Safety
/// `net` must be null or a handle from [`hm_network_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hm_network_free(net: *mut HmNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// # Safety
/// `net` must be a live handle; `modes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_network_modes(net: *const HmNetwork, modes: *mut usize) -> HmStatus {
    guard(|| put(modes, get(net, "net")?.0.modes, "modes"))
}

/// `U(phi)` of the network.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_network_evaluate(
    net: *const HmNetwork,
    phi: f64,
    out: *mut *mut HmUnitary,
) -> HmStatus {
    guard(|| {
        let u = get(net, "net")?.0.evaluate(phi)?;
        put(out, boxed(HmUnitary(u)), "out")
    })
}

/// Balanced `dim`-mode Fourier interferometer.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_unitary_dft(dim: usize, out: *mut *mut HmUnitary) -> HmStatus {
    guard(|| put(out, boxed(HmUnitary(UnitaryMatrix::dft(dim)?)), "out"))
}

/// Builds a unitary from row-major real and imaginary parts; fails with
/// [`HmStatus::NotUnitary`] when `U†U` deviates from the identity.
///
/// # Safety
/// `re` and `im` must each point to `dim * dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn hm_unitary_from_entries(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut HmUnitary,
) -> HmStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("entries"));
        }
        let n = dim
            .checked_mul(dim)
            .ok_or_else(|| Failure(HmStatus::InvalidArgument, "dimension overflow".into()))?;
        let re = std::slice::from_raw_parts(re, n);
        let im = std::slice::from_raw_parts(im, n);
        let entries: Vec<Complex64> = re
            .iter()
            .zip(im)
            .map(|(a, b)| Complex64::new(*a, *b))
            .collect();
        put(
            out,
            boxed(HmUnitary(UnitaryMatrix::from_row_major(dim, &entries)?)),
            "out",
        )
    })
}

/// # Safety
/// `u` must be null or a live unitary handle.
#[no_mangle]
pub unsafe extern "C" fn hm_unitary_free(u: *mut HmUnitary) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// # Safety
/// `u` must be a live handle; `dim` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_unitary_dim(u: *const HmUnitary, dim: *mut usize) -> HmStatus {
    guard(|| put(dim, get(u, "u")?.0.dim(), "dim"))
}

/// Entry at 0-based `(row, col)`.
///
/// # Safety
/// `u` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_unitary_entry(
    u: *const HmUnitary,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> HmStatus {
    guard(|| {
        let u = &get(u, "u")?.0;
        if row >= u.dim() || col >= u.dim() {
            return Err(Failure(
                HmStatus::InvalidArgument,
                format!("entry ({row}, {col}) outside a {0}x{0} matrix", u.dim()),
            ));
        }
        let z = u.entry(row, col);
        put(re, z.re, "re")?;
        put(im, z.im, "im")
    })
}

/// `P` and `gamma` of `(V_out U V_in)_11`.
///
/// # Safety
/// All handles must be live; `p` and `gamma` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_reduced_model(
    v_in: *const HmUnitary,
    u: *const HmUnitary,
    v_out: *const HmUnitary,
    p: *mut f64,
    gamma: *mut f64,
) -> HmStatus {
    guard(|| {
        let probe = ProbeSpec::new(0.0)?;
        let m = reduced_model(
            &get(v_in, "v_in")?.0,
            &get(u, "u")?.0,
            &get(v_out, "v_out")?.0,
            probe,
        )?;
        put(p, m.p, "p")?;
        put(gamma, m.gamma, "gamma")
    })
}

/// Closed-form homodyne variance of the measured mode.
#[no_mangle]
pub extern "C" fn hm_quadrature_variance(p: f64, gamma: f64, r: f64, theta: f64) -> f64 {
    variance_from_parts(p, gamma, r, theta)
}

/// Homodyne variance from full covariance propagation.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_oracle_variance(
    v_in: *const HmUnitary,
    u: *const HmUnitary,
    v_out: *const HmUnitary,
    r: f64,
    theta: f64,
    out: *mut f64,
) -> HmStatus {
    guard(|| {
        let probe = ProbeSpec::new(r)?;
        let v = oracle_variance(
            &get(v_in, "v_in")?.0,
            &get(u, "u")?.0,
            &get(v_out, "v_out")?.0,
            probe,
            theta,
        )?;
        put(out, v, "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_rho_prefactor(k: f64, ell: f64, out: *mut f64) -> HmStatus {
    guard(|| put(out, rho_prefactor(k, ell)?, "out"))
}

/// `8 rho(k, ell) (d gamma)² N²`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_asymptotic_fisher(
    k: f64,
    ell: f64,
    dgamma: f64,
    n: f64,
    out: *mut f64,
) -> HmStatus {
    guard(|| put(out, asymptotic_fisher(k, ell, dgamma, n)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_cramer_rao(total_fisher: f64, out: *mut f64) -> HmStatus {
    guard(|| put(out, cramer_rao(total_fisher)?, "out"))
}

/// Adapts one stage at `phi_cl`; `fixed` is the stage left untouched and
/// `side` is one of the [`HmSide`] values.
///
/// # Safety
/// `net` and `fixed` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_plan_build(
    net: *const HmNetwork,
    fixed: *const HmUnitary,
    phi_cl: f64,
    k: f64,
    photons: f64,
    side: i32,
    out: *mut *mut HmPlan,
) -> HmStatus {
    guard(|| {
        let side = match side {
            s if s == HmSide::AdaptOutput as i32 => Side::AdaptOutput,
            s if s == HmSide::AdaptInput as i32 => Side::AdaptInput,
            s => {
                return Err(Failure(
                    HmStatus::InvalidArgument,
                    format!("unknown side {s}"),
                ))
            }
        };
        let plan = AdaptationPlan::build(
            &get(net, "net")?.0,
            &get(fixed, "fixed")?.0,
            phi_cl,
            k,
            photons,
            side,
        )?;
        put(out, boxed(HmPlan(plan)), "out")
    })
}

/// # Safety
/// `plan` must be null or a live plan handle.
#[no_mangle]
pub unsafe extern "C" fn hm_plan_free(plan: *mut HmPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Local-oscillator phase chosen at build time.
///
/// # Safety
/// `plan` must be a live handle; `theta` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_plan_theta(plan: *const HmPlan, theta: *mut f64) -> HmStatus {
    guard(|| put(theta, get(plan, "plan")?.0.theta, "theta"))
}

/// New handles holding copies of the plan's input and output stages.
///
/// # Safety
/// `plan` must be a live handle; `v_in` and `v_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_plan_stages(
    plan: *const HmPlan,
    v_in: *mut *mut HmUnitary,
    v_out: *mut *mut HmUnitary,
) -> HmStatus {
    guard(|| {
        let plan = &get(plan, "plan")?.0;
        if v_in.is_null() || v_out.is_null() {
            return Err(null("stage output"));
        }
        put(v_in, boxed(HmUnitary(plan.v_in.clone())), "v_in")?;
        put(v_out, boxed(HmUnitary(plan.v_out.clone())), "v_out")
    })
}

/// Per-outcome Fisher information at `phi` with the local oscillator
/// locked to the minimum-variance quadrature plus `k/N`.
///
/// # Safety
/// `plan` and `net` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_plan_exact_fisher(
    plan: *const HmPlan,
    net: *const HmNetwork,
    phi: f64,
    out: *mut f64,
) -> HmStatus {
    guard(|| {
        let plan = &get(plan, "plan")?.0;
        let spec = &get(net, "net")?.0;
        let theta = plan.theta_at(spec, phi, LocalOscillator::Track)?;
        let probe = ProbeSpec::from_photons(plan.photons)?;
        put(
            out,
            plan.pipeline(spec)?.exact_fisher(phi, probe, theta)?,
            "out",
        )
    })
}

/// Writes `count` homodyne outcomes for the reduced state `(p, gamma, r)`
/// into `out`; the stream is fixed by `seed`.
///
/// # Safety
/// `out` must point to `count` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hm_sample_homodyne(
    p: f64,
    gamma: f64,
    r: f64,
    theta: f64,
    count: usize,
    seed: u64,
    out: *mut f64,
) -> HmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if !(0.0..=1.0).contains(&p) || !(r >= 0.0) || !gamma.is_finite() || !theta.is_finite() {
            return Err(Failure(
                HmStatus::InvalidArgument,
                "need 0 <= p <= 1, r >= 0, finite angles".into(),
            ));
        }
        let samples = sample_homodyne(&ReducedModeModel { p, gamma, r }, theta, count, seed)?;
        ptr::copy_nonoverlapping(samples.as_ptr(), out, count);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_status_codes() {
        let cases = [
            (Error::MissingModes, HmStatus::Parse),
            (Error::NotUnitary { defect: 1.0 }, HmStatus::NotUnitary),
            (
                Error::Dimension {
                    expected: 2,
                    found: 3,
                },
                HmStatus::Dimension,
            ),
            (Error::ZeroVariance, HmStatus::Domain),
            (Error::UndefinedPhase { phi: 0.0 }, HmStatus::UndefinedPhase),
            (
                Error::InvalidArgument("x".into()),
                HmStatus::InvalidArgument,
            ),
            (Error::Io("x".into()), HmStatus::Internal),
        ];
        for (e, status) in cases {
            assert_eq!(Failure::from(e).0, status);
        }
    }

    #[test]
    fn panics_do_not_cross_the_boundary() {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let s = guard(|| panic!("boom"));
        std::panic::set_hook(prev);
        assert_eq!(s, HmStatus::Internal);
        let mut buf = [0 as c_char; 64];
        unsafe { hm_last_error_message(buf.as_mut_ptr(), buf.len()) };
        assert_eq!(
            unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(),
            "internal panic"
        );
    }
}
