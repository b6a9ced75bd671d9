//! C ABI over `mcmulticast`.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `*_free`. Every fallible call returns an [`McmStatus`]; the
//! message for the last failure on the calling thread is available from
//! [`mcm_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mcmulticast::channel::{self, ChannelParams};
use mcmulticast::cli::{self, ExperimentSpec, Preset, RADIUS_SWEEP, USERS_SWEEP};
use mcmulticast::coverage::{
    solve_cga, solve_dga, solve_exact_with_cap, solve_mbsfn, solve_sc, CoverageInstance,
    CoverageResult, DgaCounting, DEFAULT_EXACT_CAP,
};
use mcmulticast::engine::{self, SweepAxis};
use mcmulticast::Error;
use serde_json::json;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McmStatus {
    Ok = 0,
    InvalidInput = 1,
    NullPointer = 2,
    CapExceeded = 3,
    Parse = 4,
    Config = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McmPolicy {
    Cga = 0,
    Dga = 1,
    Sc = 2,
    Mbsfn = 3,
    Exact = 4,
}

/// Opaque allocation problem.
pub struct McmInstance(CoverageInstance);

/// Opaque solver output.
pub struct McmResult(CoverageResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> McmStatus {
    match err {
        Error::InvalidInput(_) => McmStatus::InvalidInput,
        Error::CapExceeded { .. } => McmStatus::CapExceeded,
        Error::Trace { .. } | Error::Format { .. } | Error::Json(_) => McmStatus::Parse,
        Error::Config(_) | Error::Io { .. } => McmStatus::Config,
    }
}

struct Fail(McmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(McmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and converts panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> McmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => McmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            McmStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(McmStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn mcm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mcm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Empty instance with every `U_jc` empty.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mcm_instance_new(
    num_users: usize,
    num_cells: usize,
    num_prbs: usize,
    out: *mut *mut McmInstance,
) -> McmStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let inst = CoverageInstance::new(num_users, num_cells, num_prbs)?;
        *out = Box::into_raw(Box::new(McmInstance(inst)));
        Ok(())
    })
}

/// Parses the `instance M C N` / `c j : users` text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcm_instance_parse(
    text: *const c_char,
    out: *mut *mut McmInstance,
) -> McmStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let inst: CoverageInstance = read_str(text, "text")?.parse()?;
        *out = Box::into_raw(Box::new(McmInstance(inst)));
        Ok(())
    })
}

/// Adds `user` to the set of `prb` in `cell`.
///
/// # Safety
/// `inst` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mcm_instance_insert(
    inst: *mut McmInstance,
    cell: usize,
    prb: usize,
    user: usize,
) -> McmStatus {
    guard(|| {
        let inst = out_ptr(inst, "instance")?;
        inst.0.insert(cell, prb, user)?;
        Ok(())
    })
}

/// # Safety
/// `inst` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn mcm_instance_free(inst: *mut McmInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Solves with `policy`. For `EXACT`, `exact_cap` bounds the number of
/// candidate allocations; 0 selects the default cap. `SC` expects users to
/// be eligible only at their primary cell.
///
/// # Safety
/// `inst` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcm_solve(
    inst: *const McmInstance,
    policy: McmPolicy,
    exact_cap: u64,
    out: *mut *mut McmResult,
) -> McmStatus {
    guard(|| {
        let inst = &inst.as_ref().ok_or_else(|| null("instance"))?.0;
        let out = out_ptr(out, "out")?;
        let cap = if exact_cap == 0 {
            DEFAULT_EXACT_CAP
        } else {
            exact_cap
        };
        let res = match policy {
            McmPolicy::Cga => solve_cga(inst),
            McmPolicy::Dga => solve_dga(inst, DgaCounting::Connected),
            McmPolicy::Sc => solve_sc(inst),
            McmPolicy::Mbsfn => solve_mbsfn(inst),
            McmPolicy::Exact => solve_exact_with_cap(inst, cap)?,
        };
        *out = Box::into_raw(Box::new(McmResult(res)));
        Ok(())
    })
}

/// Number of served users; 0 for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcm_result_served_count(res: *const McmResult) -> usize {
    res.as_ref().map_or(0, |r| r.0.served_count)
}

/// Number of cells in the allocation; 0 for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcm_result_num_cells(res: *const McmResult) -> usize {
    res.as_ref().map_or(0, |r| r.0.allocation.chosen().len())
}

/// PRB chosen in `cell`.
///
/// # Safety
/// `res` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcm_result_chosen_prb(
    res: *const McmResult,
    cell: usize,
    out: *mut usize,
) -> McmStatus {
    guard(|| {
        let res = &res.as_ref().ok_or_else(|| null("result"))?.0;
        let out = out_ptr(out, "out")?;
        *out = *res.allocation.chosen().get(cell).ok_or_else(|| {
            Fail(
                McmStatus::InvalidInput,
                format!(
                    "cell {cell} out of range ({} cells)",
                    res.allocation.chosen().len()
                ),
            )
        })?;
        Ok(())
    })
}

/// Whether `user` is served; false for a null handle or out-of-range user.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcm_result_is_served(res: *const McmResult, user: usize) -> bool {
    res.as_ref().is_some_and(|r| r.0.served.contains(user))
}

/// # Safety
/// `res` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn mcm_result_free(res: *mut McmResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Urban-macro path loss in dB at `distance_km`, with the default
/// minimum-distance clamp.
#[no_mangle]
pub extern "C" fn mcm_path_loss_db(distance_km: f64) -> f64 {
    channel::path_loss(distance_km)
}

/// Per-PRB SNR in dB under the default link budget.
#[no_mangle]
pub extern "C" fn mcm_snr_db(distance_km: f64, shadow_db: f64, fast_fade_db: f64) -> f64 {
    channel::snr(
        &ChannelParams::default(),
        distance_km,
        shadow_db,
        fast_fade_db,
    )
}

fn run_config_json(text: &str) -> Result<String, Fail> {
    let (preset, overrides) = cli::parse_config(text)?;
    let preset = preset.unwrap_or(Preset::Custom);
    let spec = ExperimentSpec::new(preset, overrides);
    let config = spec.sim_config()?;
    let policies = preset.policies(config.policy);
    let value = if matches!(preset, Preset::Fig5PacketsSweep | Preset::Fig6UnservedSweep) {
        let mut points = Vec::new();
        for (axis, values) in [
            (SweepAxis::UsersPerCell, &USERS_SWEEP[..]),
            (SweepAxis::Radius, &RADIUS_SWEEP[..]),
        ] {
            for p in engine::sweep_policies(&config, axis, values, &policies)? {
                points.push(json!({ "axis": p.axis, "value": p.value, "metrics": p.metrics }));
            }
        }
        json!({ "preset": preset, "seed": config.seed, "points": points })
    } else {
        let outs = engine::compare_policies(&config, &policies)?;
        let paired = (outs.len() == 2)
            .then(|| engine::paired_subframes(&outs[0].metrics, &outs[1].metrics))
            .flatten();
        let metrics: Vec<_> = outs.into_iter().map(|o| o.metrics).collect();
        json!({ "preset": preset, "seed": config.seed, "metrics": metrics, "paired": paired })
    };
    serde_json::to_string(&value).map_err(|e| Fail(McmStatus::Parse, e.to_string()))
}

/// Runs the experiment described by a flat `key=value` config (same keys
/// as the command-line flags) without writing files, and returns its
/// metrics as JSON. Free the string with [`mcm_string_free`].
///
/// # Safety
/// `config` must be a nul-terminated string and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn mcm_run_config(
    config: *const c_char,
    out_json: *mut *mut c_char,
) -> McmStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        let text = read_str(config, "config")?;
        let json = run_config_json(text)?;
        *out = CString::new(json)
            .expect("JSON has no nul bytes")
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mcm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
