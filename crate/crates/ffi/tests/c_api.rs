use std::ffi::{CStr, CString};
use std::ptr;

use committee_power_ffi::*;

fn new_committee(weights: &[i64], s: (i64, i64)) -> *mut CpCommittee {
    let dens = vec![1i64; weights.len()];
    let mut out = ptr::null_mut();
    let st = unsafe {
        cp_committee_new(
            weights.as_ptr(),
            dens.as_ptr(),
            weights.len(),
            s.0,
            s.1,
            &mut out,
        )
    };
    assert_eq!(st, CpStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    let p = cp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn power_through_handle() {
    let c = new_committee(&[6, 5, 3], (1, 2));
    let mut swings = [0u64; 3];
    let mut den = 0u64;
    let st = unsafe { cp_power(c, swings.as_mut_ptr(), 3, &mut den) };
    assert_eq!(st, CpStatus::Ok);
    assert_eq!(swings, [588, 516, 312]);
    assert_eq!(den, 864);
    assert!(cp_last_error().is_null());
    unsafe { cp_committee_free(c) };
}

#[test]
fn winner_through_handle() {
    let c = new_committee(&[5, 4, 3, 1], (1, 1));
    // B>C>A, A>C>B, A>B>C, B>C>A
    let rankings: [u32; 12] = [1, 2, 0, 0, 2, 1, 0, 1, 2, 1, 2, 0];
    let mut w = usize::MAX;
    let st = unsafe { cp_winner(c, rankings.as_ptr(), rankings.len(), &mut w) };
    assert_eq!(st, CpStatus::Ok);
    assert_eq!(w, 2);
    assert_eq!(unsafe { cp_committee_players(c) }, 4);
    assert_eq!(unsafe { cp_committee_alternatives(c) }, 3);
    unsafe { cp_committee_free(c) };
}

#[test]
fn errors_set_status_and_message() {
    let nums = [1i64, 1];
    let dens = [1i64, 0];
    let mut out = ptr::null_mut();
    let st = unsafe { cp_committee_new(nums.as_ptr(), dens.as_ptr(), 2, 0, 1, &mut out) };
    assert_eq!(st, CpStatus::Invalid);
    assert!(last_error().contains("denominator"));
    assert!(out.is_null());

    let st = unsafe { cp_committee_new(ptr::null(), ptr::null(), 3, 0, 1, &mut out) };
    assert_eq!(st, CpStatus::NullPointer);

    let c = new_committee(&[1, 1, 1], (0, 1));
    let mut swings = [0u64; 2];
    let mut den = 0;
    let st = unsafe { cp_power(c, swings.as_mut_ptr(), 2, &mut den) };
    assert_eq!(st, CpStatus::BufferTooSmall);

    let bad: [u32; 9] = [0, 0, 1, 0, 1, 2, 0, 1, 2];
    let mut w = 0;
    let st = unsafe { cp_winner(c, bad.as_ptr(), 9, &mut w) };
    assert_eq!(st, CpStatus::Invalid);
    let st = unsafe { cp_winner(c, bad.as_ptr(), 6, &mut w) };
    assert_eq!(st, CpStatus::Shape);
    unsafe { cp_committee_free(c) };
    unsafe { cp_committee_free(ptr::null_mut()) };
}

#[test]
fn custom_scores() {
    let w = [1i64, 1, 1];
    let d = [1i64; 3];
    let sn = [2i64, 1, 0];
    let mut out = ptr::null_mut();
    let st = unsafe {
        cp_committee_new_scores(
            w.as_ptr(),
            d.as_ptr(),
            3,
            sn.as_ptr(),
            d.as_ptr(),
            3,
            &mut out,
        )
    };
    assert_eq!(st, CpStatus::Ok);
    let mut swings = [0u64; 3];
    let mut den = 0;
    assert_eq!(
        unsafe { cp_power(out, swings.as_mut_ptr(), 3, &mut den) },
        CpStatus::Ok
    );
    assert!(swings[0] == swings[1] && swings[1] == swings[2]);
    unsafe { cp_committee_free(out) };
}

#[test]
fn class_count_and_render() {
    let mut n = 0;
    assert_eq!(unsafe { cp_class_count(0, 1, 60, &mut n) }, CpStatus::Ok);
    assert_eq!(n, 6);

    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("map.png").to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { cp_render(1, 2, 60, 64, 0, path.as_ptr()) },
        CpStatus::Ok
    );
    let bytes = std::fs::read(dir.path().join("map.png")).unwrap();
    assert_eq!(&bytes[1..4], b"PNG");

    assert_eq!(
        unsafe { cp_render(1, 2, 60, 10, 0, path.as_ptr()) },
        CpStatus::Invalid
    );
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/committee_power.h");
    for name in [
        "cp_committee_new",
        "cp_committee_new_scores",
        "cp_committee_free",
        "cp_winner",
        "cp_power",
        "cp_class_count",
        "cp_render",
        "cp_last_error",
        "CP_STATUS_OK",
        "typedef struct CpCommittee CpCommittee",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let v = unsafe { CStr::from_ptr(cp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"committee_power.h\"\nint main(void) { CpCommittee *c = 0; size_t n = cp_committee_players(c); return (int)n + (cp_last_error() != 0); }\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let status = std::process::Command::new(cc)
        .args([
            "-std=c99",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            "-I",
            include,
        ])
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| {
            std::process::Command::new(c)
                .arg("--version")
                .output()
                .is_ok()
        })
        .ok_or(())
}
