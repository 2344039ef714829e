// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over the gedoublet simulator.
//!
//! Handles are opaque and owned by the caller: every `*_new` / `gd_compute`
//! result must be released with the matching `*_free`. Functions return a
//! [`GdStatus`]; on failure the message is kept per thread and can be read
//! with [`gd_last_error`]. Panics are caught at the boundary and reported as
//! [`GdStatus::Panic`].

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gedoublet::config::RunConfig;
use gedoublet::{
    channel, entanglement, sweep, units, ChannelAmplitudes, EnergyGrid, EnvelopeKind, EnvelopeSpec, Error,
    SimulationParams,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    GridTooCoarse = 4,
    Degenerate = 5,
    Config = 6,
    Io = 7,
    /// Entanglement is undefined because nothing was ionized.
    Undefined = 8,
    Panic = 9,
}

/// Pulse and atom parameters.
pub struct GdParams {
    params: SimulationParams,
}

/// Channel amplitudes on an energy grid plus derived quantities.
pub struct GdResult {
    amps: ChannelAmplitudes,
}

/// Final ionic populations.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GdPopulations {
    pub p_a: f64,
    pub p_b: f64,
    pub p_ion: f64,
    pub survival2: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut v = msg.as_bytes().to_vec();
        v.retain(|b| *b != 0);
        *e.borrow_mut() = v;
    });
}

fn status_of(e: &Error) -> GdStatus {
    match e {
        Error::Domain(_) | Error::AsymmetricGrid(_) | Error::UndeclaredSymmetry => GdStatus::Domain,
        Error::GridTooCoarse { .. } => GdStatus::GridTooCoarse,
        Error::Degenerate(_) => GdStatus::Degenerate,
        Error::Config(_) => GdStatus::Config,
        Error::Io { .. } => GdStatus::Io,
        Error::Cell { source, .. } => status_of(source),
    }
}

struct Fail(GdStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GdStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside gedoublet");
            GdStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(GdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(GdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn params_mut<'a>(p: *mut GdParams) -> Result<&'a mut GdParams, Fail> {
    p.as_mut().ok_or_else(|| null("params"))
}

unsafe fn result_ref<'a>(r: *const GdResult) -> Result<&'a GdResult, Fail> {
    r.as_ref().ok_or_else(|| null("result"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn gd_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Helium parameters for envelope `kind` (e.g. `"zero_gaussian"`) with
/// absolute pulse area `area_pi * pi` at the reference intensity, resonant,
/// depletion on.
///
/// # Safety
/// `kind` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gd_params_new(kind: *const c_char, area_pi: f64, out: *mut *mut GdParams) -> GdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = str_arg(kind, "kind")?;
        let kind = EnvelopeKind::parse(name)
            .ok_or_else(|| Fail(GdStatus::InvalidArgument, format!("unknown envelope kind {name:?}")))?;
        if !(area_pi.is_finite() && area_pi >= 0.0) {
            return Err(Fail(
                GdStatus::InvalidArgument,
                format!("area_pi must be finite and >= 0, got {area_pi}"),
            ));
        }
        let base = SimulationParams::helium(EnvelopeSpec::new(kind, 1.0)?);
        let params = sweep::cell_params(&base, area_pi * PI, 0.0)?
            .ok_or_else(|| Fail(GdStatus::Degenerate, "degenerate pulse: zero pulse area".into()))?;
        *out = Box::into_raw(Box::new(GdParams { params }));
        Ok(())
    })
}

/// Parameters from the text of a TOML run configuration.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gd_params_from_config(toml: *const c_char, out: *mut *mut GdParams) -> GdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = RunConfig::parse(str_arg(toml, "toml")?)?.simulation_params()?;
        *out = Box::into_raw(Box::new(GdParams { params }));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gd_params_free(p: *mut GdParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gd_params_set_detuning_ev(p: *mut GdParams, detuning_ev: f64) -> GdStatus {
    guard(|| {
        let p = params_mut(p)?;
        if !detuning_ev.is_finite() {
            return Err(Fail(GdStatus::InvalidArgument, "detuning must be finite".into()));
        }
        p.params.detuning = units::ev_to_au(detuning_ev);
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gd_params_set_depletion(p: *mut GdParams, enabled: bool) -> GdStatus {
    guard(|| {
        params_mut(p)?.params.depletion_enabled = enabled;
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gd_params_set_cep(p: *mut GdParams, cep_rad: f64) -> GdStatus {
    guard(|| {
        if !cep_rad.is_finite() {
            return Err(Fail(GdStatus::InvalidArgument, "cep must be finite".into()));
        }
        params_mut(p)?.params.cep = cep_rad;
        Ok(())
    })
}

/// Pulse duration parameter in fs.
///
/// # Safety
/// `p` must be a live handle and `tau_fs` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gd_params_tau_fs(p: *const GdParams, tau_fs: *mut f64) -> GdStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("params"))?;
        let out = tau_fs.as_mut().ok_or_else(|| null("tau_fs"))?;
        *out = units::au_to_fs(p.params.env.tau());
        Ok(())
    })
}

/// Runs the full pipeline on a symmetric energy grid of `points` (odd) nodes
/// spanning `[-span_ev, span_ev]`.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gd_compute(
    p: *const GdParams,
    span_ev: f64,
    points: usize,
    out: *mut *mut GdResult,
) -> GdStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let grid = EnergyGrid::symmetric(units::ev_to_au(span_ev), points)?;
        let amps = channel::final_amplitudes(&p.params, &grid)?;
        *out = Box::into_raw(Box::new(GdResult { amps }));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from [`gd_compute`] that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gd_result_free(r: *mut GdResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of energy nodes; 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gd_result_len(r: *const GdResult) -> usize {
    r.as_ref().map_or(0, |r| r.amps.grid.len())
}

unsafe fn fill(r: *const GdResult, buf: *mut f64, len: usize, f: impl Fn(&GdResult, usize) -> f64) -> GdStatus {
    guard(|| {
        let r = result_ref(r)?;
        let n = r.amps.grid.len();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < n {
            return Err(Fail(
                GdStatus::InvalidArgument,
                format!("buffer holds {len} values, need {n}"),
            ));
        }
        let out = std::slice::from_raw_parts_mut(buf, n);
        for (i, v) in out.iter_mut().enumerate() {
            *v = f(r, i);
        }
        Ok(())
    })
}

/// Energy nodes in eV.
///
/// # Safety
/// `r` must be a live handle and `buf` hold `len >= gd_result_len(r)` doubles.
#[no_mangle]
pub unsafe extern "C" fn gd_result_epsilon_ev(r: *const GdResult, buf: *mut f64, len: usize) -> GdStatus {
    fill(r, buf, len, |r, i| units::au_to_ev(r.amps.grid.value(i)))
}

/// Ground-channel density `|alpha|^2` (a.u.).
///
/// # Safety
/// As for [`gd_result_epsilon_ev`].
#[no_mangle]
pub unsafe extern "C" fn gd_result_alpha_abs2(r: *const GdResult, buf: *mut f64, len: usize) -> GdStatus {
    fill(r, buf, len, |r, i| r.amps.alpha[i].norm_sqr())
}

/// Excited-channel density `|beta|^2` (a.u.).
///
/// # Safety
/// As for [`gd_result_epsilon_ev`].
#[no_mangle]
pub unsafe extern "C" fn gd_result_beta_abs2(r: *const GdResult, buf: *mut f64, len: usize) -> GdStatus {
    fill(r, buf, len, |r, i| r.amps.beta[i].norm_sqr())
}

/// # Safety
/// `r` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gd_result_populations(r: *const GdResult, out: *mut GdPopulations) -> GdStatus {
    guard(|| {
        let r = result_ref(r)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let pops = channel::ion_populations(&r.amps);
        *out = GdPopulations {
            p_a: pops.p_a,
            p_b: pops.p_b,
            p_ion: pops.p_ion,
            survival2: r.amps.survival.powi(2),
        };
        Ok(())
    })
}

/// Electron-ion entanglement entropy in bits.
///
/// # Safety
/// `r` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gd_result_entropy(r: *const GdResult, out: *mut f64) -> GdStatus {
    guard(|| {
        let r = result_ref(r)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = entanglement::entanglement_entropy(&r.amps).map_err(|e| Fail(GdStatus::Undefined, e.to_string()))?;
        Ok(())
    })
}
