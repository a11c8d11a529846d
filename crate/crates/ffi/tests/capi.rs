use std::ffi::{c_char, CStr, CString};
use std::ptr;

use pa_spectra_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    let n = unsafe { pa_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned();
    assert_eq!(s.len(), n.min(511));
    s
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(pa_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn trap_energies_from_defaults() {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { pa_config_default(&mut cfg) }, PaStatus::Ok);
    let mut x = [0.0; 3];
    assert_eq!(unsafe { pa_trap_energies(cfg, 100.0, x.as_mut_ptr(), 3) }, PaStatus::Ok);
    assert!((x[0] - 1.5338).abs() < 1e-3, "{x:?}");
    assert!(x.windows(2).all(|w| (w[1] - w[0] - 2.0).abs() < 0.05));
    assert_eq!(unsafe { pa_trap_energies(cfg, -1.0, x.as_mut_ptr(), 3) }, PaStatus::InvalidInput);
    assert!(last_error().contains("positive"));
    unsafe { pa_config_free(cfg) };
}

#[test]
fn config_errors_carry_codes() {
    let mut cfg = ptr::null_mut();
    let text = CString::new("species.name = Na\ntrap.omega_khz = -5\n").unwrap();
    assert_eq!(unsafe { pa_config_parse(text.as_ptr(), &mut cfg) }, PaStatus::Config);
    assert!(cfg.is_null());
    let msg = last_error();
    assert!(msg.starts_with("error[config]: ") && msg.contains(":2:"), "{msg}");

    let path = CString::new("/nonexistent/run.cfg").unwrap();
    assert_eq!(unsafe { pa_config_load(path.as_ptr(), &mut cfg) }, PaStatus::Io);

    let xi = CString::new("species.name = Na\ntrap.xi = 0.7\n").unwrap();
    assert_eq!(unsafe { pa_config_parse(xi.as_ptr(), &mut cfg) }, PaStatus::Ok);
    let mut x = [0.0; 2];
    assert_eq!(unsafe { pa_trap_energies(cfg, 100.0, x.as_mut_ptr(), 2) }, PaStatus::Domain);
    unsafe { pa_config_free(cfg) };
}

#[test]
fn null_arguments() {
    assert_eq!(unsafe { pa_config_default(ptr::null_mut()) }, PaStatus::NullPointer);
    assert_eq!(unsafe { pa_config_parse(ptr::null(), &mut ptr::null_mut()) }, PaStatus::NullPointer);
    assert!(last_error().contains("text"));
    let mut x = [0.0; 1];
    assert_eq!(
        unsafe { pa_trap_energies(ptr::null(), 100.0, x.as_mut_ptr(), 1) },
        PaStatus::NullPointer
    );
    assert_eq!(unsafe { pa_levels_len(ptr::null()) }, 0);
    unsafe {
        pa_config_free(ptr::null_mut());
        pa_levels_free(ptr::null_mut());
    }
    // success clears the message
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { pa_config_default(&mut cfg) }, PaStatus::Ok);
    assert_eq!(unsafe { pa_last_error_message(ptr::null_mut(), 0) }, 0);
    unsafe { pa_config_free(cfg) };
}

#[test]
fn levels_and_fc() {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { pa_config_default(&mut cfg) }, PaStatus::Ok);
    let mut levels = ptr::null_mut();
    assert_eq!(unsafe { pa_levels_solve(cfg, 33, 35, &mut levels) }, PaStatus::Ok);
    assert_eq!(unsafe { pa_levels_len(levels) }, 3);
    let (mut v, mut e, mut rt, mut rm) = (0, 0.0, 0.0, 0.0);
    assert_eq!(unsafe { pa_levels_get(levels, 0, &mut v, &mut e, &mut rt, &mut rm) }, PaStatus::Ok);
    assert_eq!(v, 33);
    assert!((e / 1460.0 - 1.0).abs() < 1e-6);
    assert!(rm < rt && (rt / 162.3 - 1.0).abs() < 0.01);
    assert_eq!(
        unsafe { pa_levels_get(levels, 9, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) },
        PaStatus::InvalidInput
    );
    let mut eta_sq = 0.0;
    assert_eq!(unsafe { pa_fc_factor(levels, 0, 100.0, 0, &mut eta_sq) }, PaStatus::Ok);
    assert!((eta_sq - 0.187).abs() < 0.01, "{eta_sq}");
    unsafe {
        pa_levels_free(levels);
        pa_config_free(cfg);
    }
}

#[test]
fn run_command_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { pa_config_default(&mut cfg) }, PaStatus::Ok);
    let out = CString::new(dir.path().to_str().unwrap()).unwrap();
    let cmd = CString::new("trap-levels").unwrap();
    assert_eq!(unsafe { pa_run_command(cfg, cmd.as_ptr(), out.as_ptr()) }, PaStatus::Ok);
    assert!(dir.path().join("trap_levels.csv").exists());
    let bad = CString::new("table9").unwrap();
    assert_eq!(unsafe { pa_run_command(cfg, bad.as_ptr(), out.as_ptr()) }, PaStatus::InvalidInput);
    unsafe { pa_config_free(cfg) };
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/pa_spectra.h")).unwrap();
    for name in [
        "pa_version",
        "pa_last_error_message",
        "pa_config_default",
        "pa_config_parse",
        "pa_config_load",
        "pa_config_free",
        "pa_trap_energies",
        "pa_levels_solve",
        "pa_levels_len",
        "pa_levels_get",
        "pa_fc_factor",
        "pa_levels_free",
        "pa_run_command",
        "typedef struct PaConfig PaConfig;",
        "PA_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
