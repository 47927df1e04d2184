use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use meissner_lab::{LogBase, OscillatorParams, VacuumEvolution};
use meissner_lab_ffi::*;

fn model(w: f64, e: f64, j: f64) -> *mut MlModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ml_model_new(w, e, j, &mut m) }, MlStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    let p = ml_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn construction_errors_map_to_codes() {
    let mut m: *mut MlModel = ptr::NonNull::dangling().as_ptr();
    assert_eq!(unsafe { ml_model_new(1.0, 1.2, 0.0, &mut m) }, MlStatus::Unbounded);
    assert!(m.is_null());
    assert!(last_error().contains("unbounded"));
    assert_eq!(unsafe { ml_model_new(f64::NAN, 0.0, 0.0, &mut m) }, MlStatus::InvalidArgument);
    assert_eq!(unsafe { ml_model_new(1.0, 0.0, 0.0, ptr::null_mut()) }, MlStatus::NullPointer);
    assert!(last_error().contains("out"));
}

#[test]
fn null_handles_are_rejected() {
    let mut s = MlStability::default();
    let mut o = MlObservables::default();
    let mut d = MlDilatation::default();
    unsafe {
        assert_eq!(ml_model_stability(ptr::null(), &mut s), MlStatus::NullPointer);
        assert_eq!(ml_model_observables(ptr::null(), 0.0, MlLogBase::Natural, &mut o), MlStatus::NullPointer);
        assert_eq!(
            ml_model_dilatation(ptr::null(), MlDilatationKind::Normal, 1, 0.0, &mut d),
            MlStatus::NullPointer
        );
        let m = model(1.01, 0.0, 0.0);
        assert_eq!(ml_model_stability(m, ptr::null_mut()), MlStatus::NullPointer);
        assert_eq!(
            ml_model_observables_series(m, ptr::null(), 3, MlLogBase::Natural, &mut o),
            MlStatus::NullPointer
        );
        assert_eq!(ml_model_observables_series(m, ptr::null(), 0, MlLogBase::Natural, ptr::null_mut()), MlStatus::Ok);
        ml_model_free(m);
        ml_model_free(ptr::null_mut());
    }
}

#[test]
fn argument_checks() {
    let m = model(1.01, 0.1, 0.3);
    let mut o = MlObservables::default();
    let mut d = MlDilatation::default();
    unsafe {
        assert_eq!(ml_model_observables(m, -1.0, MlLogBase::Natural, &mut o), MlStatus::Domain);
        assert_eq!(ml_model_observables(m, f64::INFINITY, MlLogBase::Natural, &mut o), MlStatus::Domain);
        assert_eq!(ml_model_dilatation(m, MlDilatationKind::Bare, 3, 0.0, &mut d), MlStatus::InvalidArgument);
        assert!(last_error().contains("mode"));
        ml_model_free(m);
    }
}

#[test]
fn values_match_core() {
    let p = OscillatorParams::new(1.01, 0.1, 0.3).unwrap();
    let ev = VacuumEvolution::new(&p).unwrap();
    let m = model(1.01, 0.1, 0.3);
    unsafe {
        let mut s = MlStability::default();
        assert_eq!(ml_model_stability(m, &mut s), MlStatus::Ok);
        let core = ev.stability();
        assert_eq!((s.lambda, s.s, s.growth_rate, s.stable), (core.lambda, core.s, core.growth_rate, core.is_stable()));

        let times = [0.0, 1.0, 2.5, 7.0];
        let mut out = [MlObservables::default(); 4];
        assert_eq!(ml_model_observables_series(m, times.as_ptr(), 4, MlLogBase::Two, out.as_mut_ptr()), MlStatus::Ok);
        for (o, &t) in out.iter().zip(&times) {
            let r = ev.record(t, LogBase::Two).unwrap();
            assert_eq!(
                [o.t, o.h1, o.h2, o.nu1, o.nu2, o.n1, o.n2, o.m12, o.mu, o.lambda_min, o.e_n],
                [r.t, r.h1, r.h2, r.nu1, r.nu2, r.n1, r.n2, r.m12, r.mu, r.lambda_min, r.e_n]
            );
            let mut single = MlObservables::default();
            assert_eq!(ml_model_observables(m, t, MlLogBase::Two, &mut single), MlStatus::Ok);
            assert_eq!(single, *o);
        }

        let mut d = MlDilatation::default();
        assert_eq!(ml_model_dilatation(m, MlDilatationKind::Bare, 2, 2.5, &mut d), MlStatus::Ok);
        let nu = ev.dilatations().nu(meissner_lab::Mode::Two, 2.5).unwrap();
        assert_eq!((d.h, d.h_dot), (nu.h, nu.h_dot));
        assert_eq!(ml_model_dilatation(m, MlDilatationKind::Normal, 1, 2.5, &mut d), MlStatus::Ok);
        assert_eq!(d.h, out[2].h1);
        ml_model_free(m);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ml_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/meissner_lab.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for sym in [
        "ml_model_new",
        "ml_model_free",
        "ml_model_stability",
        "ml_model_observables",
        "ml_model_observables_series",
        "ml_model_dilatation",
        "ml_last_error_message",
        "ml_version",
        "typedef struct MlModel MlModel;",
        "ML_STATUS_NULL_POINTER = 6",
        "ML_LOG_BASE_TWO = 1",
    ] {
        assert!(h.contains(sym), "header lacks {sym}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "meissner_lab.h"

int main(void) {
    MlModel *m = NULL;
    if (ml_model_new(1.2, 0.0, 0.3, &m) != ML_STATUS_OK) return 10;
    MlObservables o;
    if (ml_model_observables(m, 0.0, ML_LOG_BASE_NATURAL, &o) != ML_STATUS_OK) return 11;
    if (!(o.e_n > 0.0)) return 12;
    MlStability s;
    if (ml_model_stability(m, &s) != ML_STATUS_OK || !s.stable) return 13;
    ml_model_free(m);
    if (ml_model_new(1.0, 2.0, 0.0, &m) != ML_STATUS_UNBOUNDED || m != NULL) return 14;
    if (ml_last_error_message() == NULL) return 15;
    printf("%s %.6f\n", ml_version(), o.e_n);
    return 0;
}
"#;

/// Library directory of the current build (`target/<profile>`).
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_client_compiles_links_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = header().parent().unwrap().to_path_buf();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());

    let syntax = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .expect("a C compiler is needed for this test");
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    let exe = dir.path().join("client");
    let lib = lib_dir();
    let link = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&src)
        .arg("-o")
        .arg(&exe)
        .arg(format!("-L{}", lib.display()))
        .arg(format!("-Wl,-rpath,{}", lib.display()))
        .arg("-lmeissner_lab_ffi")
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let out = String::from_utf8(run.stdout).unwrap();
    assert!(out.starts_with(env!("CARGO_PKG_VERSION")), "{out}");
}
