use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use omv_ffi::*;

fn parse(s: &str) -> (OmvStatus, *mut OmvLattice) {
    let c = CString::new(s).unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { omv_lattice_parse(c.as_ptr(), &mut out) };
    (st, out)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(omv_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn parse_and_invariants() {
    let (st, lat) = parse("U^2 + A1(-13)");
    assert_eq!(st, OmvStatus::Ok);
    let mut rank = 0;
    assert_eq!(unsafe { omv_lattice_rank(lat, &mut rank) }, OmvStatus::Ok);
    assert_eq!(rank, 5);
    let mut inv = OmvInvariants::default();
    assert_eq!(unsafe { omv_lattice_invariants(lat, &mut inv) }, OmvStatus::Ok);
    assert_eq!((inv.discriminant, inv.level, inv.weight_twice, inv.u_count), (26, 52, 5, 2));
    assert_eq!((inv.n_plus, inv.n_minus, inv.det_sign), (2, 3, -1));
    let (mut v, mut e) = (0.0, 0.0);
    assert_eq!(unsafe { omv_c10(lat, 30, &mut v, &mut e) }, OmvStatus::Ok);
    assert!((v + 264.0 / 17.0).abs() < 1e-12 && e < 1e-20);
    unsafe { omv_lattice_free(lat) };
}

#[test]
fn error_codes() {
    let (st, lat) = parse("U^2 + Q");
    assert_eq!(st, OmvStatus::Parse);
    assert!(lat.is_null());
    assert!(last_error().contains("position"));

    let (st, _) = parse("E9");
    assert_eq!(st, OmvStatus::Parse);

    let (st, lat) = parse("E8");
    assert_eq!(st, OmvStatus::Ok);
    let (mut v, mut e) = (0.0, 0.0);
    assert_eq!(unsafe { omv_c10(lat, 30, &mut v, &mut e) }, OmvStatus::InvalidLattice);
    unsafe { omv_lattice_free(lat) };

    assert_eq!(unsafe { omv_lattice_parse(ptr::null(), &mut ptr::null_mut()) }, OmvStatus::NullPointer);
    assert_eq!(unsafe { omv_lattice_rank(ptr::null(), &mut 0) }, OmvStatus::NullPointer);
    assert_eq!(unsafe { omv_r_of_k(1, 30, &mut v) }, OmvStatus::InvalidArgument);
    unsafe { omv_lattice_free(ptr::null_mut()) };
    unsafe { omv_string_free(ptr::null_mut()) };
}

#[test]
fn r_of_k_and_json() {
    let mut r = 0.0;
    assert_eq!(unsafe { omv_r_of_k(10, 30, &mut r) }, OmvStatus::Ok);
    assert!((r - 504.0).abs() < 1e-9);

    let expr = CString::new("U^2 + E8(-1) + A1(-39)").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { omv_analyze_json(expr.as_ptr(), 30, &mut out) }, OmvStatus::Ok);
    let json = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { omv_string_free(out) };
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["invariants"]["N"], 156);
    assert_eq!(v["bound"]["holds"], false);
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/omv.h");
    let dir = std::env::temp_dir().join(format!("omv-h-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{header}\"\nint main(void) {{ OmvLattice *l = 0; OmvStatus s = omv_lattice_parse(\"U\", &l); omv_lattice_free(l); return s == OMV_STATUS_OK ? 0 : 1; }}\n"
        ),
    )
    .unwrap();
    let Ok(out) = Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).output() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
