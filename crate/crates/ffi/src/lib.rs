//! C ABI over `sgn-core`.
//!
//! Every function returns an [`SgnStatus`]. On failure the cause is kept per
//! thread and can be read with [`sgn_last_error_message`]. Simulations are
//! opaque handles created by [`sgn_simulation_new`] and released with
//! [`sgn_simulation_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use sgn_core::error::Error;
use sgn_core::scenarios::{builtin_scenario, RunOverrides, Scenario, Simulation, BUILTIN_NAMES};
use sgn_core::soliton::SolitonParams;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownScenario = 3,
    SolverFailure = 4,
    Io = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Overrides applied to a built-in scenario. Zero (or a negative value for
/// `degree`) keeps the scenario's own setting.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SgnOptions {
    pub cells_x: u32,
    pub cells_y: u32,
    pub degree: i32,
    pub c: f64,
    pub cfl: f64,
}

/// Opaque simulation handle.
pub struct SgnSimulation {
    scenario: Scenario,
    sim: Simulation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SgnStatus {
    match e {
        Error::UnknownScenario { .. } => SgnStatus::UnknownScenario,
        Error::Io { .. } | Error::Csv { .. } => SgnStatus::Io,
        Error::InvalidParams(_)
        | Error::InvalidScenario(_)
        | Error::Config(_)
        | Error::UnsupportedDegree(_)
        | Error::OutsideDomain { .. }
        | Error::Relaxation(_)
        | Error::Incompatible(_) => SgnStatus::InvalidArgument,
        _ => SgnStatus::SolverFailure,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (SgnStatus, String)>) -> SgnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SgnStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SgnStatus::Panic
        }
    }
}

fn core<T>(r: sgn_core::Result<T>) -> Result<T, (SgnStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SgnStatus, String) {
    (SgnStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (SgnStatus, String) {
    (SgnStatus::InvalidArgument, msg.into())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SgnStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn sim_ref<'a>(p: *const SgnSimulation) -> Result<&'a SgnSimulation, (SgnStatus, String)> {
    p.as_ref().ok_or_else(|| null("simulation handle"))
}

unsafe fn sim_mut<'a>(p: *mut SgnSimulation) -> Result<&'a mut SgnSimulation, (SgnStatus, String)> {
    p.as_mut().ok_or_else(|| null("simulation handle"))
}

unsafe fn out<T>(p: *mut T, v: T, what: &str) -> Result<(), (SgnStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// Message describing the last failure on this thread, or null. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn sgn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sgn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn sgn_scenario_count() -> u32 {
    BUILTIN_NAMES.len() as u32
}

/// Name of built-in scenario `index` as a static string, or null when out of
/// range.
#[no_mangle]
pub extern "C" fn sgn_scenario_name(index: u32) -> *const c_char {
    const NAMES: [&str; 4] = ["soliton-flat\0", "soliton-step\0", "submerged-bar\0", "gaussian-2d\0"];
    NAMES.get(index as usize).map_or(std::ptr::null(), |s| s.as_ptr().cast())
}

#[no_mangle]
pub extern "C" fn sgn_options_default() -> SgnOptions {
    SgnOptions { degree: -1, ..SgnOptions::default() }
}

/// Builds the initial state of a built-in scenario. `options` may be null.
///
/// # Safety
/// `name` must be a NUL-terminated string, `options` null or valid, and
/// `out_sim` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sgn_simulation_new(
    name: *const c_char,
    options: *const SgnOptions,
    out_sim: *mut *mut SgnSimulation,
) -> SgnStatus {
    guard(|| {
        if out_sim.is_null() {
            return Err(null("out_sim"));
        }
        out_sim.write(std::ptr::null_mut());
        let name = str_arg(name, "name")?;
        let o = options.as_ref().copied().unwrap_or_else(|| sgn_options_default());
        let pos = |v: f64| (v != 0.0).then_some(v);
        let overrides = RunOverrides {
            cells_x: (o.cells_x > 0).then_some(o.cells_x as usize),
            cells_y: (o.cells_y > 0).then_some(o.cells_y as usize),
            degree: (o.degree >= 0).then_some(o.degree as usize),
            c: pos(o.c),
            cfl: pos(o.cfl),
            ..Default::default()
        };
        let scenario = core(builtin_scenario(name).and_then(|s| s.with_overrides(&overrides)))?;
        let sim = core(Simulation::build(&scenario))?;
        out_sim.write(Box::into_raw(Box::new(SgnSimulation { scenario, sim })));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sim` must come from [`sgn_simulation_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sgn_simulation_free(sim: *mut SgnSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances by one step of at most `dt_max` (the stable step when
/// `dt_max <= 0`), then applies relaxation zones. The step taken is written to
/// `out_dt` when it is not null.
///
/// # Safety
/// `sim` must be a live handle; `out_dt` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sgn_simulation_step(sim: *mut SgnSimulation, dt_max: f64, out_dt: *mut f64) -> SgnStatus {
    guard(|| {
        let s = sim_mut(sim)?;
        if dt_max.is_nan() {
            return Err(invalid("dt_max is NaN"));
        }
        let stable = core(s.sim.stable_dt())?;
        let dt = if dt_max > 0.0 { stable.min(dt_max) } else { stable };
        step_once(s, dt)?;
        if !out_dt.is_null() {
            out_dt.write(dt);
        }
        Ok(())
    })
}

fn step_once(s: &mut SgnSimulation, dt: f64) -> Result<(), (SgnStatus, String)> {
    core(s.sim.step(dt))?;
    let zones: Vec<_> = s.scenario.relaxation_zones().collect();
    let t = s.sim.time();
    core(s.sim.apply_zones(&zones, t, dt))?;
    Ok(())
}

/// Advances with stable steps until `t_target`, landing on it exactly.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sgn_simulation_advance_to(sim: *mut SgnSimulation, t_target: f64) -> SgnStatus {
    guard(|| {
        let s = sim_mut(sim)?;
        if !t_target.is_finite() || t_target < s.sim.time() {
            return Err(invalid(format!("target time {t_target} precedes the current time {}", s.sim.time())));
        }
        let eps = 1e-12 * t_target.abs().max(1.0);
        while t_target - s.sim.time() > eps {
            let remaining = t_target - s.sim.time();
            let stable = core(s.sim.stable_dt())?;
            let dt = if stable >= remaining - eps { remaining } else { stable };
            step_once(s, dt)?;
        }
        Ok(())
    })
}

/// Time, step count, mass and energy of the current state. Any output pointer
/// may be null.
///
/// # Safety
/// `sim` must be a live handle; outputs null or valid.
#[no_mangle]
pub unsafe extern "C" fn sgn_simulation_stats(
    sim: *const SgnSimulation,
    out_time: *mut f64,
    out_steps: *mut u64,
    out_mass: *mut f64,
    out_energy: *mut f64,
) -> SgnStatus {
    guard(|| {
        let s = &sim_ref(sim)?.sim;
        if !out_time.is_null() {
            out_time.write(s.time());
        }
        if !out_steps.is_null() {
            out_steps.write(s.steps() as u64);
        }
        if !out_mass.is_null() {
            out_mass.write(s.total_mass());
        }
        if !out_energy.is_null() {
            out_energy.write(s.total_energy());
        }
        Ok(())
    })
}

/// Depth and free surface at `(x, y)`; `y` is ignored in 1D.
///
/// # Safety
/// `sim` must be a live handle; both outputs valid.
#[no_mangle]
pub unsafe extern "C" fn sgn_simulation_sample(
    sim: *const SgnSimulation,
    x: f64,
    y: f64,
    out_h: *mut f64,
    out_eta: *mut f64,
) -> SgnStatus {
    guard(|| {
        let (h, eta) = core(sim_ref(sim)?.sim.sample_depth(x, y))?;
        out(out_h, h, "out_h")?;
        out(out_eta, eta, "out_eta")
    })
}

/// Free-surface profile as interleaved `(x, eta)` pairs along the line `y`
/// (ignored in 1D). `out_len` receives the number of pairs. With a null
/// `buffer` only the length is reported; a buffer shorter than
/// `2 * out_len` values gives [`SgnStatus::BufferTooSmall`].
///
/// # Safety
/// `sim` must be a live handle, `buffer` null or valid for `capacity`
/// doubles, `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn sgn_simulation_profile(
    sim: *const SgnSimulation,
    y: f64,
    buffer: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> SgnStatus {
    guard(|| {
        let prof = core(sim_ref(sim)?.sim.profile(y))?;
        out(out_len, prof.len(), "out_len")?;
        if buffer.is_null() {
            return Ok(());
        }
        if capacity < 2 * prof.len() {
            return Err((SgnStatus::BufferTooSmall, format!("need {} values, got {capacity}", 2 * prof.len())));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, 2 * prof.len());
        for (d, p) in dst.chunks_exact_mut(2).zip(&prof) {
            d.copy_from_slice(p);
        }
        Ok(())
    })
}

/// Integrates the solitary-wave profile and writes it to `path` as CSV.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sgn_export_soliton(h0: f64, amplitude: f64, g: f64, c: f64, path: *const c_char) -> SgnStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let params = SolitonParams::new(h0, amplitude, g, c);
        core(params.validate())?;
        core(sgn_core::io::write_soliton_profile(&params, Path::new(path)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let p = sgn_last_error_message();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn lifecycle() {
        let mut sim = std::ptr::null_mut();
        let opts = SgnOptions { cells_x: 20, degree: 1, ..sgn_options_default() };
        let st = unsafe { sgn_simulation_new(c"soliton-flat".as_ptr(), &opts, &mut sim) };
        assert_eq!(st, SgnStatus::Ok);
        let (mut t, mut steps, mut m0, mut m1, mut e) = (0.0, 0u64, 0.0, 0.0, 0.0);
        unsafe {
            assert_eq!(sgn_simulation_stats(sim, &mut t, &mut steps, &mut m0, &mut e), SgnStatus::Ok);
            let mut dt = 0.0;
            assert_eq!(sgn_simulation_step(sim, 1e-3, &mut dt), SgnStatus::Ok);
            assert!(dt > 0.0 && dt <= 1e-3);
            assert_eq!(sgn_simulation_advance_to(sim, 0.1), SgnStatus::Ok);
            assert_eq!(sgn_simulation_stats(sim, &mut t, &mut steps, &mut m1, std::ptr::null_mut()), SgnStatus::Ok);
            assert_eq!(t, 0.1);
            assert!(steps > 1);
            assert!(((m1 - m0) / m0).abs() < 1e-12);
            let (mut h, mut eta) = (0.0, 0.0);
            assert_eq!(sgn_simulation_sample(sim, 0.0, 0.0, &mut h, &mut eta), SgnStatus::Ok);
            assert!(h > 1.1 && eta == h);
            let mut n = 0;
            assert_eq!(sgn_simulation_profile(sim, 0.0, std::ptr::null_mut(), 0, &mut n), SgnStatus::Ok);
            let mut buf = vec![0.0; 2 * n];
            assert_eq!(sgn_simulation_profile(sim, 0.0, buf.as_mut_ptr(), 3, &mut n), SgnStatus::BufferTooSmall);
            assert_eq!(sgn_simulation_profile(sim, 0.0, buf.as_mut_ptr(), buf.len(), &mut n), SgnStatus::Ok);
            assert!(buf[0] < buf[2]);
            assert_eq!(sgn_simulation_advance_to(sim, 0.05), SgnStatus::InvalidArgument);
            sgn_simulation_free(sim);
        }
    }

    #[test]
    fn errors_are_reported() {
        let mut sim = std::ptr::null_mut();
        let st = unsafe { sgn_simulation_new(c"soliton-flt".as_ptr(), std::ptr::null(), &mut sim) };
        assert_eq!(st, SgnStatus::UnknownScenario);
        assert!(sim.is_null());
        assert!(last_error().contains("soliton-flat"));
        let opts = SgnOptions { degree: 12, ..sgn_options_default() };
        let st = unsafe { sgn_simulation_new(c"soliton-flat".as_ptr(), &opts, &mut sim) };
        assert_eq!(st, SgnStatus::InvalidArgument);
        assert_eq!(unsafe { sgn_simulation_step(std::ptr::null_mut(), 0.0, std::ptr::null_mut()) }, SgnStatus::NullPointer);
        assert!(last_error().contains("null"));
        assert_eq!(unsafe { sgn_simulation_new(std::ptr::null(), std::ptr::null(), &mut sim) }, SgnStatus::NullPointer);
        unsafe { sgn_simulation_free(std::ptr::null_mut()) };
    }

    #[test]
    fn scenario_names_match_core() {
        assert_eq!(sgn_scenario_count() as usize, BUILTIN_NAMES.len());
        for (i, n) in BUILTIN_NAMES.iter().enumerate() {
            let p = sgn_scenario_name(i as u32);
            assert_eq!(unsafe { CStr::from_ptr(p) }.to_str().unwrap(), *n);
        }
        assert!(sgn_scenario_name(99).is_null());
        assert!(!sgn_version().is_null());
    }

    #[test]
    fn soliton_export() {
        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("s.csv").display().to_string()).unwrap();
        assert_eq!(unsafe { sgn_export_soliton(1.0, 0.2, 9.81, 20.0, path.as_ptr()) }, SgnStatus::Ok);
        assert!(dir.path().join("s.csv").exists());
        assert_eq!(unsafe { sgn_export_soliton(1.0, -0.2, 9.81, 20.0, path.as_ptr()) }, SgnStatus::InvalidArgument);
    }
}
