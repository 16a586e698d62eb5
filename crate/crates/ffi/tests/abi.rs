use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use twinreg_ffi::*;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn c_path(name: &str) -> CString {
    CString::new(fixture(name).to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = twinreg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn fit_through_handles() {
    unsafe {
        let mut frame = ptr::null_mut();
        assert_eq!(
            twinreg_frame_from_csv(c_path("loan_loss_quarterly.csv").as_ptr(), &mut frame),
            TwinregStatus::Ok
        );
        assert!(twinreg_last_error().is_null());
        assert_eq!(twinreg_frame_rows(frame), 37);

        let mut ols = ptr::null_mut();
        assert_eq!(twinreg_ols_fit(frame, &mut ols), TwinregStatus::Ok);
        assert_eq!(twinreg_ols_term_count(ols), 8);
        assert_eq!(
            CStr::from_ptr(twinreg_ols_term_name(ols, 7)).to_str().unwrap(),
            "ExpClaims"
        );
        let mut c = TwinregCoef::default();
        assert_eq!(twinreg_ols_term(ols, 7, &mut c), TwinregStatus::Ok);
        assert!((c.estimate - 0.0551).abs() < 1e-6);
        assert!(c.p_value < 1e-12);
        assert!((twinreg_ols_adj_r2(ols) - 0.971).abs() < 1e-4);

        assert_eq!(twinreg_ols_term(ols, 8, &mut c), TwinregStatus::OutOfRange);
        assert!(last_error().contains("out of range"));
        assert!(twinreg_ols_term_name(ols, 8).is_null());

        twinreg_ols_free(ols);
        twinreg_frame_free(frame);
    }
}

#[test]
fn report_json_round_trip() {
    unsafe {
        let mut frame = ptr::null_mut();
        assert_eq!(
            twinreg_frame_from_csv(c_path("loan_loss_quarterly.csv").as_ptr(), &mut frame),
            TwinregStatus::Ok
        );
        let mut s = ptr::null_mut();
        assert_eq!(twinreg_report_json(frame, 42, 10_000, &mut s), TwinregStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        twinreg_string_free(s);
        assert!(text.contains("\"significant\""));
        assert!(text.contains("\"APLIR\""));

        assert_eq!(twinreg_report_json(frame, 42, 10, &mut s), TwinregStatus::Domain);
        assert!(last_error().contains("draws"));
        twinreg_frame_free(frame);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut frame = ptr::null_mut();
        assert_eq!(
            twinreg_frame_from_csv(ptr::null(), &mut frame),
            TwinregStatus::NullArgument
        );
        let missing = CString::new("/nonexistent.csv").unwrap();
        assert_eq!(twinreg_frame_from_csv(missing.as_ptr(), &mut frame), TwinregStatus::Io);
        assert!(frame.is_null());

        let bad = b"date,loss\n2011-04-01,1\n";
        assert_eq!(
            twinreg_frame_from_buffer(bad.as_ptr(), bad.len(), &mut frame),
            TwinregStatus::Parse
        );

        assert_eq!(
            twinreg_frame_from_csv(c_path("tiny_singular.csv").as_ptr(), &mut frame),
            TwinregStatus::Ok
        );
        let mut ols = ptr::null_mut();
        assert_eq!(twinreg_ols_fit(frame, &mut ols), TwinregStatus::SingularDesign);
        assert!(last_error().starts_with("singular design"));
        assert!(ols.is_null());
        twinreg_frame_free(frame);

        let mut p = 0.0;
        assert_eq!(twinreg_student_t_sf2(1.0, 1.0, &mut p), TwinregStatus::Ok);
        assert!((p - 0.5).abs() < 1e-14);
        assert_eq!(twinreg_student_t_sf2(1.0, -1.0, &mut p), TwinregStatus::Domain);

        // null handles are tolerated by accessors and destructors
        assert_eq!(twinreg_frame_rows(ptr::null()), 0);
        assert!(twinreg_ols_adj_r2(ptr::null()).is_nan());
        twinreg_frame_free(ptr::null_mut());
        twinreg_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(twinreg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/twinreg.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert_eq!(exports.len(), 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

/// Compiles the C example against the static library when a C compiler is present.
#[test]
fn c_consumer_links_and_runs() {
    let Ok(exe) = std::env::current_exe() else { return };
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libtwinreg_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let dir = tempfile_dir();
    let bin = dir.join("smoke");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let status = Command::new("cc")
        .arg(manifest.join("examples/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin)
        .arg(fixture("loan_loss_quarterly.csv"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("(Intercept) -499.99"), "{text}");
    assert!(text.ends_with("adj_r2 0.9710 rows 37\n"), "{text}");
    let bad = Command::new(&bin).arg(fixture("tiny_singular.csv")).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(dir);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twinreg-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
