//! C interface to `omv-core`. Lattices are opaque handles; every call returns an
//! [`OmvStatus`] and leaves a message for [`omv_last_error_message`] on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use omv_core::disc::discriminant_form;
use omv_core::eisenstein::{c10_coefficient, r_of_k, Weight};
use omv_core::lattice::{lattice, EvenLattice};
use omv_core::report::analyze;
use omv_core::OmvError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmvStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidLattice = 3,
    PrecisionExhausted = 4,
    InvalidArgument = 5,
    Internal = 6,
    Panic = 7,
}

/// Opaque lattice handle.
pub struct OmvLattice {
    inner: EvenLattice,
}

/// Invariants of a lattice as given (not normalized).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmvInvariants {
    pub rank: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    /// −1 or +1.
    pub det_sign: i32,
    /// Order of the discriminant group, `|det|`.
    pub discriminant: u64,
    pub level: u64,
    /// Twice the weight `rank / 2`.
    pub weight_twice: u32,
    pub u_count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &OmvError) -> OmvStatus {
    match e {
        OmvError::Parse { .. } | OmvError::Range { .. } => OmvStatus::Parse,
        OmvError::InvalidGram(_) | OmvError::Degenerate | OmvError::Signature { .. } => {
            OmvStatus::InvalidLattice
        }
        OmvError::PrecisionExhausted(_) => OmvStatus::PrecisionExhausted,
        OmvError::Internal(_) => OmvStatus::Internal,
        _ => OmvStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), OmvStatus>) -> OmvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OmvStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside omv");
            OmvStatus::Panic
        }
    }
}

fn fail(e: OmvError) -> OmvStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> OmvStatus {
    set_error(&format!("{what} is null"));
    OmvStatus::NullPointer
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, OmvStatus> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(&format!("{what} is not UTF-8"));
        OmvStatus::InvalidArgument
    })
}

/// Parse a lattice expression such as `"U^2 + E8(-1) + A1(-3)"`.
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omv_lattice_parse(expr: *const c_char, out: *mut *mut OmvLattice) -> OmvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(expr, "expr")?;
        let inner = lattice(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(OmvLattice { inner }));
        Ok(())
    })
}

/// Release a handle from [`omv_lattice_parse`]. Null is ignored.
///
/// # Safety
/// `lat` must come from [`omv_lattice_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn omv_lattice_free(lat: *mut OmvLattice) {
    if !lat.is_null() {
        drop(Box::from_raw(lat));
    }
}

/// # Safety
/// `lat` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omv_lattice_rank(lat: *const OmvLattice, out: *mut usize) -> OmvStatus {
    guard(|| {
        let (lat, out) = (lat.as_ref().ok_or_else(|| null("lat"))?, out.as_mut().ok_or_else(|| null("out"))?);
        *out = lat.inner.rank();
        Ok(())
    })
}

/// # Safety
/// `lat` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omv_lattice_invariants(lat: *const OmvLattice, out: *mut OmvInvariants) -> OmvStatus {
    guard(|| {
        let (lat, out) = (lat.as_ref().ok_or_else(|| null("lat"))?, out.as_mut().ok_or_else(|| null("out"))?);
        let l = &lat.inner;
        let form = discriminant_form(l).map_err(fail)?;
        let sig = l.signature();
        *out = OmvInvariants {
            rank: l.rank(),
            n_plus: sig.n_plus,
            n_minus: sig.n_minus,
            det_sign: if sig.n_minus % 2 == 0 { 1 } else { -1 },
            discriminant: form.order(),
            level: form.level(),
            weight_twice: Weight::from_rank(l.rank()).twice(),
            u_count: l.u_count(),
        };
        Ok(())
    })
}

/// `c₁,₀` of the lattice brought to signature `(b, 2)`, with its absolute error bound.
///
/// # Safety
/// `lat` must be a live handle; `value` and `error` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn omv_c10(
    lat: *const OmvLattice,
    digits: u32,
    value: *mut f64,
    error: *mut f64,
) -> OmvStatus {
    guard(|| {
        let lat = lat.as_ref().ok_or_else(|| null("lat"))?;
        let value = value.as_mut().ok_or_else(|| null("value"))?;
        let error = error.as_mut().ok_or_else(|| null("error"))?;
        let l = lat.inner.normalize_b2().map_err(fail)?;
        let c = c10_coefficient(&l, digits).map_err(fail)?;
        *value = c.value.to_f64();
        *error = c.value.error_bound();
        Ok(())
    })
}

/// `r(k) = (2π)^k / (Γ(k)·ζ(⌊k⌋))` at `k = b/2 + 1`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omv_r_of_k(b: u32, digits: u32, out: *mut f64) -> OmvStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = r_of_k(b, digits).map_err(fail)?.to_f64();
        Ok(())
    })
}

/// Full analysis as a JSON document; free the result with [`omv_string_free`].
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omv_analyze_json(expr: *const c_char, digits: u32, out: *mut *mut c_char) -> OmvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(expr, "expr")?;
        let r = analyze(text, digits, None).map_err(fail)?;
        let s = CString::new(r.to_json()).map_err(|_| fail(OmvError::Internal("NUL in report".into())))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn omv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread. Valid until the next failing call on
/// the same thread; never null.
#[no_mangle]
pub extern "C" fn omv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
