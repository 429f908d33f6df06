use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use tubenull::cover::{count_freq_words, TubeCover, VerifyReport};
use tubenull::fourier::R0Certificate;
use tubenull::io::Document;
use tubenull::projection::WscReport;
use tubenull_ffi::*;

const SIERPINSKI: &str = include_str!("../../../specs/sierpinski.json");
const THREE_MAPS: &str = include_str!("../../../specs/three_maps.json");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a library string.
unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    tn_string_free(p);
    s
}

fn last_error() -> Option<String> {
    let p = tn_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn ifs(json: &str) -> *mut TnIfs {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { tn_ifs_from_json(c(json).as_ptr(), &mut f) }, TnStatus::Ok);
    f
}

#[test]
fn handles_round_trip() {
    unsafe {
        let mut carpet = ptr::null_mut();
        assert_eq!(tn_carpet_from_json(c(SIERPINSKI).as_ptr(), &mut carpet), TnStatus::Ok);
        let mut f = ptr::null_mut();
        assert_eq!(tn_carpet_to_ifs(carpet, &mut f), TnStatus::Ok);
        assert_eq!(tn_ifs_len(f), 8);
        let g = ifs(SIERPINSKI);
        assert_eq!(tn_ifs_len(g), 8);
        assert_eq!(tn_ifs_len(ptr::null()), 0);
        tn_ifs_free(g);
        tn_ifs_free(f);
        tn_carpet_free(carpet);
        tn_carpet_free(ptr::null_mut());
        tn_ifs_free(ptr::null_mut());
        tn_string_free(ptr::null_mut());
    }
}

#[test]
fn reports_match_the_library() {
    unsafe {
        let f = ifs(SIERPINSKI);
        let mut out = ptr::null_mut();
        let v = [1i64, 1];
        assert_eq!(tn_wsc_check(f, v.as_ptr(), 2, 4, 0, &mut out), TnStatus::Ok);
        let rep = WscReport::from_json(&take(out)).unwrap();
        assert!(rep.integral && rep.checked_depth == 4);

        let mut carpet = ptr::null_mut();
        assert_eq!(tn_carpet_from_json(c(SIERPINSKI).as_ptr(), &mut carpet), TnStatus::Ok);
        assert_eq!(tn_r0_certificate(carpet, &mut out), TnStatus::Ok);
        let cert = R0Certificate::from_json(&take(out)).unwrap();
        assert!(cert.r0 <= 648 && cert.tail_sum_bound < 1.0);
        tn_carpet_free(carpet);

        assert_eq!(tn_count_freq_words(3, 10, 5, &mut out), TnStatus::Ok);
        assert_eq!(take(out), count_freq_words(3, 10, 5).unwrap().to_json());

        let depths = [2usize, 3, 4];
        assert_eq!(tn_box_count(f, depths.as_ptr(), depths.len(), 0, &mut out), TnStatus::Ok);
        assert!(take(out).contains("boxcount.v1"));
        tn_ifs_free(f);
    }
}

#[test]
fn cover_generate_and_verify() {
    unsafe {
        let f = ifs(THREE_MAPS);
        let mut out = ptr::null_mut();
        assert_eq!(tn_cover_generate(f, 5, 0.95, 0, &mut out), TnStatus::Ok);
        let text = take(out);
        assert_eq!(tn_cover_verify(f, c(&text).as_ptr(), 0, 0, &mut out), TnStatus::Ok);
        assert!(VerifyReport::from_json(&take(out)).unwrap().passed);

        let mut cover = TubeCover::from_json(&text).unwrap();
        for g in &mut cover.groups {
            g.slabs.truncate(1);
        }
        let bad = c(&cover.to_json());
        assert_eq!(tn_cover_verify(f, bad.as_ptr(), 0, 0, &mut out), TnStatus::VerifyFailed);
        let rep = VerifyReport::from_json(&take(out)).unwrap();
        assert!(!rep.passed && rep.witness.is_some());
        tn_ifs_free(f);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(tn_ifs_from_json(c("{\"schema\": \"ifs.v1\"}").as_ptr(), &mut f), TnStatus::InvalidInput);
        assert!(f.is_null());
        assert!(last_error().is_some());

        assert_eq!(tn_ifs_from_json(ptr::null(), &mut f), TnStatus::NullPointer);
        assert!(last_error().unwrap().contains("json"));
        assert_eq!(tn_ifs_from_json(c(THREE_MAPS).as_ptr(), ptr::null_mut()), TnStatus::NullPointer);

        let f = ifs(THREE_MAPS);
        assert!(last_error().is_none(), "success clears the last error");
        let mut out = ptr::null_mut();
        assert_eq!(tn_cover_generate(f, 8, 0.95, 10, &mut out), TnStatus::BudgetExceeded);
        assert!(out.is_null());
        assert!(last_error().unwrap().contains("budget"));
        assert_eq!(tn_cover_generate(f, 4, 1.5, 0, &mut out), TnStatus::InvalidInput);
        assert_eq!(tn_cover_generate(ptr::null(), 4, 0.9, 0, &mut out), TnStatus::NullPointer);
        assert_eq!(tn_wsc_check(f, ptr::null(), 2, 3, 0, &mut out), TnStatus::NullPointer);
        let zero = [0i64, 0];
        assert_eq!(tn_wsc_check(f, zero.as_ptr(), 2, 3, 0, &mut out), TnStatus::InvalidInput);
        assert_eq!(tn_count_freq_words(0, 3, 1, &mut out), TnStatus::InvalidInput);
        tn_ifs_free(f);
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(tn_ifs_from_json(c("not json").as_ptr(), &mut f), TnStatus::InvalidInput);
    }
    std::thread::spawn(|| assert!(last_error().is_none())).join().unwrap();
    assert!(last_error().is_some());
}

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/capi-<hash>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/tubenull.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct TnIfs TnIfs;"));
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libtubenull_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "maps=3 verify=0 passed=1\nerror=set\n");
}
