//! C ABI over `pa_spectra`.
//!
//! Objects are opaque handles created by `pa_config_default`/`_parse`/`_load`
//! and `pa_levels_solve`, and released with the matching `pa_*_free`. Every fallible call returns a
//! [`PaStatus`]; on failure the message is kept per thread and can be copied
//! out with [`pa_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pa_spectra::commands::{run, Command};
use pa_spectra::config::{load_config, parse_config, RunConfig};
use pa_spectra::coupling::fc_bound_bound;
use pa_spectra::longrange::{solve_labels, VibLevel};
use pa_spectra::trap::{trap_levels, trap_roots};
use pa_spectra::{units, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    Convergence = 4,
    Grid = 5,
    Config = 6,
    Io = 7,
    Panic = 8,
}

/// Validated run configuration.
pub struct PaConfig {
    inner: RunConfig,
}

/// Solved molecular levels together with the configuration that produced them.
pub struct PaLevels {
    cfg: RunConfig,
    levels: Vec<VibLevel>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> PaStatus {
    match err.category() {
        "domain" => PaStatus::Domain,
        "convergence" => PaStatus::Convergence,
        "grid" => PaStatus::Grid,
        "config" => PaStatus::Config,
        "io" => PaStatus::Io,
        _ => PaStatus::InvalidInput,
    }
}

fn fail(status: PaStatus, msg: impl Into<String>) -> PaStatus {
    set_error(msg.into());
    status
}

// runs `f`, converting errors and panics into status codes
fn guard(f: impl FnOnce() -> Result<(), PaStatus>) -> PaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PaStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(PaStatus::Panic, "internal panic"),
    }
}

fn lib(err: Error) -> PaStatus {
    fail(status_of(&err), format!("error[{}]: {err}", err.category()))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, PaStatus> {
    if p.is_null() {
        return Err(fail(PaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(PaStatus::InvalidInput, format!("{what} is not valid UTF-8")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, PaStatus> {
    p.as_mut()
        .ok_or_else(|| fail(PaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, PaStatus> {
    p.as_ref()
        .ok_or_else(|| fail(PaStatus::NullPointer, format!("{what} is null")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pa_last_error_message(buf: *mut c_char, len: usize) -> usize {
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

/// Sodium defaults.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn pa_config_default(out: *mut *mut PaConfig) -> PaStatus {
    guard(|| {
        let slot = out_ptr(out, "out")?;
        *slot = Box::into_raw(Box::new(PaConfig {
            inner: RunConfig::sodium(),
        }));
        Ok(())
    })
}

/// Parses configuration text in the `key = value` format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn pa_config_parse(text: *const c_char, out: *mut *mut PaConfig) -> PaStatus {
    guard(|| {
        let text = c_str(text, "text")?;
        let slot = out_ptr(out, "out")?;
        let inner = parse_config(text, "<string>").map_err(lib)?;
        *slot = Box::into_raw(Box::new(PaConfig { inner }));
        Ok(())
    })
}

/// Loads a configuration file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn pa_config_load(path: *const c_char, out: *mut *mut PaConfig) -> PaStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let slot = out_ptr(out, "out")?;
        let inner = load_config(Path::new(path)).map_err(lib)?;
        *slot = Box::into_raw(Box::new(PaConfig { inner }));
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from a `pa_config_*` constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_config_free(cfg: *mut PaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Dimensionless trap energies x_n = ε_n/ħω for n = 0..len-1 at trap frequency
/// `omega_khz` (ordinary frequency, kHz).
///
/// # Safety
/// `cfg` must be a live handle and `out_x` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pa_trap_energies(
    cfg: *const PaConfig,
    omega_khz: f64,
    out_x: *mut f64,
    len: usize,
) -> PaStatus {
    guard(|| {
        let cfg = handle(cfg, "cfg")?;
        if out_x.is_null() {
            return Err(fail(PaStatus::NullPointer, "out_x is null"));
        }
        if len == 0 {
            return Ok(());
        }
        let spec = cfg.inner.trap_spec(omega_khz).map_err(lib)?;
        spec.check_regime().map_err(lib)?;
        let roots = trap_roots(&spec, (len - 1) as u32).map_err(lib)?;
        std::slice::from_raw_parts_mut(out_x, len).copy_from_slice(&roots);
        Ok(())
    })
}

/// Calibrates the molecular boundary per `cfg` and solves levels v_min..=v_max.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn pa_levels_solve(
    cfg: *const PaConfig,
    v_min: i32,
    v_max: i32,
    out: *mut *mut PaLevels,
) -> PaStatus {
    guard(|| {
        let cfg = handle(cfg, "cfg")?;
        let slot = out_ptr(out, "out")?;
        if v_min > v_max {
            return Err(fail(PaStatus::InvalidInput, "v_min exceeds v_max"));
        }
        let model = cfg.inner.molecule().map_err(lib)?;
        let levels = solve_labels(&model, v_min..=v_max, &cfg.inner.grid).map_err(lib)?;
        *slot = Box::into_raw(Box::new(PaLevels {
            cfg: cfg.inner.clone(),
            levels,
        }));
        Ok(())
    })
}

/// Number of levels held by `levels` (0 for null).
///
/// # Safety
/// `levels` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_levels_len(levels: *const PaLevels) -> usize {
    levels.as_ref().map_or(0, |l| l.levels.len())
}

/// Level `index`: label, binding energy ε/h (kHz), outer turning point and
/// probability maximum (nm). Null output pointers are skipped.
///
/// # Safety
/// `levels` must be a live handle; each output pointer must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pa_levels_get(
    levels: *const PaLevels,
    index: usize,
    v: *mut i32,
    binding_khz: *mut f64,
    r_t_nm: *mut f64,
    r_max_nm: *mut f64,
) -> PaStatus {
    guard(|| {
        let l = handle(levels, "levels")?;
        let lv = l.levels.get(index).ok_or_else(|| {
            fail(
                PaStatus::InvalidInput,
                format!("index {index} out of range (have {})", l.levels.len()),
            )
        })?;
        if let Some(p) = v.as_mut() {
            *p = lv.v_label;
        }
        if let Some(p) = binding_khz.as_mut() {
            *p = units::hartree_to_khz(lv.binding_energy);
        }
        if let Some(p) = r_t_nm.as_mut() {
            *p = units::bohr_to_nm(lv.r_t);
        }
        if let Some(p) = r_max_nm.as_mut() {
            *p = units::bohr_to_nm(lv.r_max);
        }
        Ok(())
    })
}

/// |η|² between level `index` and trap state `n_t` at `omega_khz`, using the
/// photon factor of the configuration the levels were solved with.
///
/// # Safety
/// `levels` must be a live handle and `eta_sq` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_fc_factor(
    levels: *const PaLevels,
    index: usize,
    omega_khz: f64,
    n_t: u32,
    eta_sq: *mut f64,
) -> PaStatus {
    guard(|| {
        let l = handle(levels, "levels")?;
        let out = out_ptr(eta_sq, "eta_sq")?;
        let lv = l
            .levels
            .get(index)
            .ok_or_else(|| fail(PaStatus::InvalidInput, format!("index {index} out of range")))?;
        let spec = l.cfg.trap_spec(omega_khz).map_err(lib)?;
        spec.check_regime().map_err(lib)?;
        let t = trap_levels(&spec, n_t).map_err(lib)?.pop().expect("n_t + 1 levels");
        let eta = fc_bound_bound(&lv.wave, &t.wave, &l.cfg.laser).map_err(lib)?;
        *out = eta * eta;
        Ok(())
    })
}

/// # Safety
/// `levels` must be null or a handle from [`pa_levels_solve`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_levels_free(levels: *mut PaLevels) {
    if !levels.is_null() {
        drop(Box::from_raw(levels));
    }
}

/// Runs a CLI command (`trap-levels`, `molecular-levels`, `fc`, `linewidths`,
/// `scan`) and writes its files into `out_dir`.
///
/// # Safety
/// `cfg` must be a live handle; `command` and `out_dir` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn pa_run_command(
    cfg: *const PaConfig,
    command: *const c_char,
    out_dir: *const c_char,
) -> PaStatus {
    guard(|| {
        let cfg = handle(cfg, "cfg")?;
        let cmd: Command = c_str(command, "command")?.parse().map_err(lib)?;
        let dir = c_str(out_dir, "out_dir")?;
        let report = run(cmd, &cfg.inner).map_err(lib)?;
        report.write(Path::new(dir), &cfg.inner).map_err(lib)?;
        Ok(())
    })
}
