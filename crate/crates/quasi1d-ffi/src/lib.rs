//! C ABI for the quasi1d library.
//!
//! Conventions:
//! * every object is an opaque handle created by a `q1d_*_from_*` call and
//!   released with the matching `q1d_*_free`;
//! * every fallible call returns a `q1d_status`; on failure
//!   `q1d_last_error_message()` returns a thread-local, NUL-terminated
//!   description valid until the next failing call on the same thread;
//! * strings are UTF-8, NUL-terminated; output parameters are written only
//!   on `Q1D_STATUS_OK`.
//!
//! The matching C header lives at `include/quasi1d.h` and is regenerated by
//! the build script.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use quasi1d::scenario::{compute_spectrum, expand_preset, run_scenario, ScenarioConfig};
use quasi1d::spectra::SpectrumTable;
use quasi1d::Error;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum q1d_status {
    Q1D_STATUS_OK = 0,
    /// A required pointer argument was NULL.
    Q1D_STATUS_NULL_ARGUMENT = 1,
    /// A string argument was not valid UTF-8.
    Q1D_STATUS_INVALID_UTF8 = 2,
    /// Configuration parsing or validation failed.
    Q1D_STATUS_CONFIG = 3,
    /// A computation failed (pole, defective matrix, overflow, ...).
    Q1D_STATUS_COMPUTE = 4,
    /// File output failed.
    Q1D_STATUS_IO = 5,
    /// An index or preset name was out of range.
    Q1D_STATUS_OUT_OF_RANGE = 6,
    /// An internal panic was caught at the FFI boundary.
    Q1D_STATUS_PANIC = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<Vec<u8>>) {
    let fallback = CString::new("error message contained NUL").unwrap();
    let message = CString::new(message).unwrap_or(fallback);
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn status_of(error: &Error) -> q1d_status {
    match error {
        Error::Config { .. } | Error::UnknownPreset(_) | Error::Json(_) => {
            q1d_status::Q1D_STATUS_CONFIG
        }
        Error::Io { .. } => q1d_status::Q1D_STATUS_IO,
        _ => q1d_status::Q1D_STATUS_COMPUTE,
    }
}

fn fail(error: Error) -> q1d_status {
    let status = status_of(&error);
    set_error(error.to_string());
    status
}

/// Last error message for this thread (empty string if none). The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn q1d_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, q1d_status> {
    if ptr.is_null() {
        set_error("NULL string argument");
        return Err(q1d_status::Q1D_STATUS_NULL_ARGUMENT);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        q1d_status::Q1D_STATUS_INVALID_UTF8
    })
}

fn guard(body: impl FnOnce() -> q1d_status) -> q1d_status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            q1d_status::Q1D_STATUS_PANIC
        }
    }
}

/// Opaque scenario handle: a validated configuration plus its label.
pub struct Q1dScenario {
    label: String,
    config: ScenarioConfig,
}

/// Opaque spectrum handle.
pub struct Q1dSpectrum {
    table: SpectrumTable,
}

/// Parse and validate a scenario configuration from a JSON document.
///
/// # Safety
/// `json` and `label` must be NUL-terminated strings; `out` must point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn q1d_scenario_from_json(
    json: *const c_char,
    label: *const c_char,
    out: *mut *mut Q1dScenario,
) -> q1d_status {
    guard(|| {
        if out.is_null() {
            set_error("NULL output argument");
            return q1d_status::Q1D_STATUS_NULL_ARGUMENT;
        }
        let json = match utf8_arg(json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let label = match utf8_arg(label) {
            Ok(s) => s.to_string(),
            Err(status) => return status,
        };
        match ScenarioConfig::load(json, &[]) {
            Ok(config) => {
                *out = Box::into_raw(Box::new(Q1dScenario { label, config }));
                q1d_status::Q1D_STATUS_OK
            }
            Err(e) => fail(e),
        }
    })
}

fn guard_count(body: impl FnOnce() -> Option<usize>) -> usize {
    catch_unwind(AssertUnwindSafe(body))
        .ok()
        .flatten()
        .unwrap_or(0)
}

/// Number of runs a preset expands to (0 for unknown names).
///
/// # Safety
/// `name` must be a NUL-terminated string or NULL.
#[no_mangle]
pub unsafe extern "C" fn q1d_preset_run_count(name: *const c_char) -> usize {
    guard_count(|| {
        let name = utf8_arg(name).ok()?;
        expand_preset(name).ok().map(|runs| runs.len())
    })
}

/// Instantiate one run of a named preset (index < q1d_preset_run_count).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must point to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn q1d_scenario_from_preset(
    name: *const c_char,
    index: usize,
    out: *mut *mut Q1dScenario,
) -> q1d_status {
    guard(|| {
        if out.is_null() {
            set_error("NULL output argument");
            return q1d_status::Q1D_STATUS_NULL_ARGUMENT;
        }
        let name = match utf8_arg(name) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let mut runs = match expand_preset(name) {
            Ok(runs) => runs,
            Err(e) => return fail(e),
        };
        if index >= runs.len() {
            set_error(format!(
                "preset `{name}` has {} runs, index {index} out of range",
                runs.len()
            ));
            return q1d_status::Q1D_STATUS_OUT_OF_RANGE;
        }
        let (label, config) = runs.swap_remove(index);
        *out = Box::into_raw(Box::new(Q1dScenario { label, config }));
        q1d_status::Q1D_STATUS_OK
    })
}

/// The scenario's label (borrowed bytes, not NUL-terminated; valid while the
/// scenario lives).
///
/// # Safety
/// All pointers must be non-NULL; `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn q1d_scenario_label(
    scenario: *const Q1dScenario,
    out: *mut *const c_char,
    out_len: *mut usize,
) -> q1d_status {
    guard(|| {
        if scenario.is_null() || out.is_null() || out_len.is_null() {
            set_error("NULL argument");
            return q1d_status::Q1D_STATUS_NULL_ARGUMENT;
        }
        let scenario = &*scenario;
        *out = scenario.label.as_ptr() as *const c_char;
        *out_len = scenario.label.len();
        q1d_status::Q1D_STATUS_OK
    })
}

/// Execute every analysis of the scenario, writing CSV and metadata files
/// into `out_dir` (created if missing).
///
/// # Safety
/// `scenario` must be a live handle; `out_dir` a NUL-terminated path.
#[no_mangle]
pub unsafe extern "C" fn q1d_scenario_run(
    scenario: *const Q1dScenario,
    out_dir: *const c_char,
) -> q1d_status {
    guard(|| {
        if scenario.is_null() {
            set_error("NULL scenario");
            return q1d_status::Q1D_STATUS_NULL_ARGUMENT;
        }
        let out_dir = match utf8_arg(out_dir) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let scenario = &*scenario;
        match run_scenario(&scenario.config, Path::new(out_dir), &scenario.label) {
            Ok(_) => q1d_status::Q1D_STATUS_OK,
            Err(e) => fail(e),
        }
    })
}

/// Compute the scenario's transmission/reflection spectrum in memory.
///
/// # Safety
/// `scenario` must be a live handle; `out` must point to writable storage
/// for one pointer.
#[no_mangle]
pub unsafe extern "C" fn q1d_scenario_spectrum(
    scenario: *const Q1dScenario,
    out: *mut *mut Q1dSpectrum,
) -> q1d_status {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            set_error("NULL argument");
            return q1d_status::Q1D_STATUS_NULL_ARGUMENT;
        }
        let scenario = &*scenario;
        match compute_spectrum(&scenario.config) {
            Ok(table) => {
                *out = Box::into_raw(Box::new(Q1dSpectrum { table }));
                q1d_status::Q1D_STATUS_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of grid points in a spectrum (0 for NULL).
///
/// # Safety
/// `spectrum` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn q1d_spectrum_len(spectrum: *const Q1dSpectrum) -> usize {
    if spectrum.is_null() {
        return 0;
    }
    (*spectrum).table.delta.len()
}

/// Whether the spectrum carries reflection data.
///
/// # Safety
/// `spectrum` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn q1d_spectrum_has_reflection(spectrum: *const Q1dSpectrum) -> bool {
    !spectrum.is_null() && (*spectrum).table.reflection.is_some()
}

/// One spectrum row: detuning, complex t/t₀, and complex r (0 when absent).
/// NULL output pointers are skipped.
///
/// # Safety
/// `spectrum` must be a live handle; non-NULL output pointers must point to
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn q1d_spectrum_row(
    spectrum: *const Q1dSpectrum,
    index: usize,
    delta_a: *mut f64,
    t_re: *mut f64,
    t_im: *mut f64,
    r_re: *mut f64,
    r_im: *mut f64,
) -> q1d_status {
    guard(|| {
        if spectrum.is_null() {
            set_error("NULL spectrum");
            return q1d_status::Q1D_STATUS_NULL_ARGUMENT;
        }
        let table = &(*spectrum).table;
        if index >= table.delta.len() {
            set_error(format!(
                "row {index} out of range for {} grid points",
                table.delta.len()
            ));
            return q1d_status::Q1D_STATUS_OUT_OF_RANGE;
        }
        let write = |ptr: *mut f64, value: f64| {
            if !ptr.is_null() {
                *ptr = value;
            }
        };
        write(delta_a, table.delta[index]);
        write(t_re, table.t_over_t0[index].re);
        write(t_im, table.t_over_t0[index].im);
        let r = table
            .reflection
            .as_ref()
            .map(|r| r[index])
            .unwrap_or_default();
        write(r_re, r.re);
        write(r_im, r.im);
        q1d_status::Q1D_STATUS_OK
    })
}

/// Release a spectrum handle (NULL is a no-op).
///
/// # Safety
/// `spectrum` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn q1d_spectrum_free(spectrum: *mut Q1dSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Release a scenario handle (NULL is a no-op).
///
/// # Safety
/// `scenario` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn q1d_scenario_free(scenario: *mut Q1dScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    const DOC: &str = r#"{
        "model": {"kind": "waveguide", "gamma_1d": 1.0},
        "chain": {"gamma_prime": 1.0,
                  "geometry": {"kind": "regular", "n": 2, "spacing": 0.5}},
        "analyses": {"spectrum": {"grid": {"half_width": 5.0, "points": 11}}}
    }"#;

    #[test]
    fn json_scenario_spectrum_round_trip() {
        unsafe {
            let mut scenario: *mut Q1dScenario = ptr::null_mut();
            let status = q1d_scenario_from_json(
                cstr(DOC).as_ptr(),
                cstr("smoke").as_ptr(),
                &mut scenario,
            );
            assert_eq!(status, q1d_status::Q1D_STATUS_OK);

            let mut spectrum: *mut Q1dSpectrum = ptr::null_mut();
            assert_eq!(
                q1d_scenario_spectrum(scenario, &mut spectrum),
                q1d_status::Q1D_STATUS_OK
            );
            assert_eq!(q1d_spectrum_len(spectrum), 11);
            assert!(q1d_spectrum_has_reflection(spectrum));

            let (mut d, mut tre, mut tim) = (1.0, 0.0, 0.0);
            let status = q1d_spectrum_row(
                spectrum,
                5,
                &mut d,
                &mut tre,
                &mut tim,
                ptr::null_mut(),
                ptr::null_mut(),
            );
            assert_eq!(status, q1d_status::Q1D_STATUS_OK);
            assert_eq!(d, 0.0);
            // mirror-spaced pair at resonance: t/t₀ = Γ'/(Γ' + NΓ_1D) = 1/3
            assert!((tre - 1.0 / 3.0).abs() < 1e-12);
            assert!(tim.abs() < 1e-12);

            assert_eq!(
                q1d_spectrum_row(
                    spectrum,
                    99,
                    &mut d,
                    &mut tre,
                    &mut tim,
                    ptr::null_mut(),
                    ptr::null_mut()
                ),
                q1d_status::Q1D_STATUS_OUT_OF_RANGE
            );

            q1d_spectrum_free(spectrum);
            q1d_scenario_free(scenario);
        }
    }

    #[test]
    fn invalid_json_reports_config_error() {
        unsafe {
            let mut scenario: *mut Q1dScenario = ptr::null_mut();
            let status = q1d_scenario_from_json(
                cstr("{\"not\": \"a config\"}").as_ptr(),
                cstr("bad").as_ptr(),
                &mut scenario,
            );
            assert_eq!(status, q1d_status::Q1D_STATUS_CONFIG);
            let message = CStr::from_ptr(q1d_last_error_message());
            assert!(!message.to_bytes().is_empty());
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut scenario: *mut Q1dScenario = ptr::null_mut();
            assert_eq!(
                q1d_scenario_from_json(ptr::null(), cstr("x").as_ptr(), &mut scenario),
                q1d_status::Q1D_STATUS_NULL_ARGUMENT
            );
            assert_eq!(
                q1d_scenario_from_json(cstr(DOC).as_ptr(), cstr("x").as_ptr(), ptr::null_mut()),
                q1d_status::Q1D_STATUS_NULL_ARGUMENT
            );
            assert_eq!(q1d_spectrum_len(ptr::null()), 0);
            q1d_scenario_free(ptr::null_mut());
            q1d_spectrum_free(ptr::null_mut());
        }
    }

    #[test]
    fn preset_expansion_and_run_to_directory() {
        unsafe {
            assert_eq!(q1d_preset_run_count(cstr("fig3").as_ptr()), 11);
            assert_eq!(q1d_preset_run_count(cstr("nope").as_ptr()), 0);

            let mut scenario: *mut Q1dScenario = ptr::null_mut();
            assert_eq!(
                q1d_scenario_from_preset(cstr("fig4b").as_ptr(), 0, &mut scenario),
                q1d_status::Q1D_STATUS_OK
            );
            let (mut label_ptr, mut label_len) = (ptr::null(), 0usize);
            assert_eq!(
                q1d_scenario_label(scenario, &mut label_ptr, &mut label_len),
                q1d_status::Q1D_STATUS_OK
            );
            let label = std::str::from_utf8(std::slice::from_raw_parts(
                label_ptr as *const u8,
                label_len,
            ))
            .unwrap();
            assert_eq!(label, "fig4b");

            let dir = std::env::temp_dir().join(format!(
                "quasi1d_ffi_test_{}",
                std::process::id()
            ));
            let _ = std::fs::remove_dir_all(&dir);
            let cdir = cstr(dir.to_str().unwrap());
            assert_eq!(
                q1d_scenario_run(scenario, cdir.as_ptr()),
                q1d_status::Q1D_STATUS_OK
            );
            assert!(dir.join("fig4b_dynamics.csv").exists());
            let _ = std::fs::remove_dir_all(&dir);

            assert_eq!(
                q1d_scenario_from_preset(cstr("fig4b").as_ptr(), 5, &mut scenario),
                q1d_status::Q1D_STATUS_OUT_OF_RANGE
            );
            q1d_scenario_free(scenario);
        }
    }
}
