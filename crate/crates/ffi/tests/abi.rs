use std::ffi::{c_char, CStr, CString};
use std::ptr;

use causalkit_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ck_last_error()).to_string_lossy().into_owned()
}

unsafe fn take(s: *mut c_char) -> String {
    let v = CStr::from_ptr(s).to_string_lossy().into_owned();
    ck_string_free(s);
    v
}

#[test]
fn process_handles() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(ck_process_preset(cstr("majority").as_ptr(), &mut p), CkStatus::CkOk);
        let mut ok = false;
        assert_eq!(ck_process_is_consistent(p, 1 << 24, &mut ok), CkStatus::CkOk);
        assert!(ok);
        let mut causal = true;
        assert_eq!(ck_process_classify(p, 1 << 24, &mut causal), CkStatus::CkOk);
        assert!(!causal);
        ck_process_free(p);

        let text = cstr("party R 2 2\n0 | 1 : 1\n1 | 0 : 1\n");
        assert_eq!(ck_process_from_text(text.as_ptr(), &mut p), CkStatus::CkOk);
        assert_eq!(ck_process_is_consistent(p, 1 << 24, &mut ok), CkStatus::CkOk);
        ck_process_free(p);

        let bad = cstr("party R 2 2\n0 | 9 : 1\n");
        assert_eq!(ck_process_from_text(bad.as_ptr(), &mut p), CkStatus::CkParse);
        assert!(last_error().contains("line 2"), "{}", last_error());
    }
}

#[test]
fn games_and_strings() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ck_game_preset(cstr("game2").as_ptr(), &mut g), CkStatus::CkOk);
        let mut s = ptr::null_mut();
        assert_eq!(ck_game_bound(g, 1 << 24, &mut s), CkStatus::CkOk);
        assert_eq!(take(s), "5/6");
        let mut p = ptr::null_mut();
        assert_eq!(ck_process_preset(cstr("circular-mixture").as_ptr(), &mut p), CkStatus::CkOk);
        assert_eq!(ck_game_play(g, p, cstr("parity-relay").as_ptr(), &mut s), CkStatus::CkOk);
        assert_eq!(take(s), "1");
        ck_process_free(p);
        ck_game_free(g);
        assert_eq!(ck_game_preset(cstr("game9").as_ptr(), &mut g), CkStatus::CkUnknown);
    }
}

#[test]
fn quantum_calls() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(ck_ocb_value(1e-9, &mut v), CkStatus::CkOk);
        assert!((v - (2.0 + 2f64.sqrt()) / 4.0).abs() <= 1e-9);
        let mut w = ptr::null_mut();
        let mut ok = false;
        for (name, valid) in [("w-ocb", true), ("w-two-way-channels", false)] {
            assert_eq!(ck_matrix_preset(cstr(name).as_ptr(), &mut w), CkStatus::CkOk);
            assert_eq!(ck_matrix_validate(w, 1e-9, &mut ok), CkStatus::CkOk);
            assert_eq!(ok, valid, "{name}");
            ck_matrix_free(w);
        }
        let x = [0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        let z = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0];
        let mut bit = 9;
        assert_eq!(ck_commute_test(x.as_ptr(), z.as_ptr(), 1e-9, &mut bit), CkStatus::CkOk);
        assert_eq!(bit, 1);
        assert_eq!(ck_commute_test(z.as_ptr(), z.as_ptr(), 1e-9, &mut bit), CkStatus::CkOk);
        assert_eq!(bit, 0);
    }
}

#[test]
fn fixed_point_search_and_errors() {
    unsafe {
        let table = [3usize, 3, 0, 3];
        let (mut value, mut queries) = (0usize, 0u64);
        assert_eq!(ck_fixed_point_search(table.as_ptr(), 4, 1 << 24, &mut value, &mut queries), CkStatus::CkOk);
        assert_eq!((value, queries), (3, 1));
        let identity = [0usize, 1];
        assert_eq!(
            ck_fixed_point_search(identity.as_ptr(), 2, 1 << 24, &mut value, &mut queries),
            CkStatus::CkPromiseViolation
        );
        assert!(last_error().contains("promise"));
        assert_eq!(ck_fixed_point_search(ptr::null(), 2, 1 << 24, &mut value, &mut queries), CkStatus::CkNullPointer);
        assert_eq!(ck_ocb_value(1e-9, ptr::null_mut()), CkStatus::CkNullPointer);
        assert!(!CStr::from_ptr(ck_version()).to_bytes().is_empty());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/causalkit.h")).unwrap();
    for name in ["ck_last_error", "ck_process_from_text", "ck_game_bound", "ck_commute_test", "ck_fixed_point_search"] {
        assert!(header.contains(name), "{name}");
    }
    // Compile the header as C when a compiler is around.
    if let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-"])
        .arg(format!("-I{}/include", env!("CARGO_MANIFEST_DIR")))
        .stdin(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child.stdin.take().unwrap().write_all(b"#include \"causalkit.h\"\nint main(void) { return ck_version() == 0; }\n")?;
            child.wait_with_output()
        })
    {
        assert!(out.status.success());
    }
}
