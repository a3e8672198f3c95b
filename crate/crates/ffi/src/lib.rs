//! C interface to the `tate` library.
//!
//! Every function returns a [`TateStatus`]. On failure a message is stored per
//! thread and can be read with [`tate_last_error_message`]. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`tate_string_free`]; lattices are released with [`tate_lattice_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tate::adeles::{adelic_cohomology, AdeleError};
use tate::kernel::{Field, Poly};
use tate::lattice::{index_bundle, Lattice, LatticeError};
use tate::linalg::LaurentMatrixJson;
use tate::places::{residue_sum, RatFunc};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TateStatus {
    Ok = 0,
    InvalidInput = 1,
    Precision = 2,
    NullPointer = 3,
    Panic = 4,
}

/// Opaque lattice handle.
pub struct TateLattice(Lattice);

struct Failure(TateStatus, String);

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure(TateStatus::InvalidInput, e.to_string())
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        let status = if e.is_precision() { TateStatus::Precision } else { TateStatus::InvalidInput };
        Failure(status, e.to_string())
    }
}

impl From<AdeleError> for Failure {
    fn from(e: AdeleError) -> Self {
        let status = if matches!(e, AdeleError::Unstable { .. }) { TateStatus::Precision } else { TateStatus::InvalidInput };
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TateStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TateStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal error: {msg}"));
            TateStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(TateStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(Failure::input)
}

unsafe fn lattice_arg<'a>(p: *const TateLattice) -> Result<&'a Lattice, Failure> {
    p.as_ref().map(|l| &l.0).ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn put_lattice(out: *mut *mut TateLattice, l: Lattice) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(TateLattice(l))))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    put(out, CString::new(s).map_err(Failure::input)?.into_raw())
}

fn field(q: u64) -> Result<Field, Failure> {
    Field::gf(q).map_err(Failure::input)
}

/// Message for the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn tate_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn tate_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a lattice from its JSON matrix over `F_q`; `prec` fills in entries without one.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tate_lattice_from_json(q: u64, json: *const c_char, prec: i64, out: *mut *mut TateLattice) -> TateStatus {
    guard(|| {
        let text = str_arg(json)?;
        let f = field(q)?;
        let m: LaurentMatrixJson = serde_json::from_str(text).map_err(Failure::input)?;
        let m = m.decode(&f, prec).map_err(|e| Failure::from(LatticeError::from(e)))?;
        put_lattice(out, Lattice::from_matrix(&m)?)
    })
}

/// `t^shift k[[t]]^n` over `F_q`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tate_lattice_standard(q: u64, n: usize, shift: i64, out: *mut *mut TateLattice) -> TateStatus {
    guard(|| {
        if n == 0 {
            return Err(Failure::input("rank must be positive"));
        }
        put_lattice(out, Lattice::standard(&field(q)?, n, shift, shift.abs() + 16))
    })
}

/// # Safety
/// `l` must be NULL or a handle from this library that is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tate_lattice_free(l: *mut TateLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `a`, `b` must be valid handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tate_lattice_join(a: *const TateLattice, b: *const TateLattice, out: *mut *mut TateLattice) -> TateStatus {
    guard(|| put_lattice(out, lattice_arg(a)?.join(lattice_arg(b)?)?))
}

/// # Safety
/// `a`, `b` must be valid handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tate_lattice_meet(a: *const TateLattice, b: *const TateLattice, out: *mut *mut TateLattice) -> TateStatus {
    guard(|| put_lattice(out, lattice_arg(a)?.meet(lattice_arg(b)?)?))
}

/// # Safety
/// `a`, `b` must be valid handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tate_lattice_leq(a: *const TateLattice, b: *const TateLattice, out: *mut bool) -> TateStatus {
    guard(|| put(out, lattice_arg(a)?.leq(lattice_arg(b)?)?))
}

/// Dimensions of `a/(a meet b)` and `b/(a meet b)`, and their difference.
///
/// # Safety
/// `a`, `b` must be valid handles and the out-parameters writable.
#[no_mangle]
pub unsafe extern "C" fn tate_lattice_index(
    a: *const TateLattice,
    b: *const TateLattice,
    pos: *mut u64,
    neg: *mut u64,
    net: *mut i64,
) -> TateStatus {
    guard(|| {
        if pos.is_null() || neg.is_null() || net.is_null() {
            return Err(null());
        }
        let ib = index_bundle(lattice_arg(a)?, lattice_arg(b)?)?;
        put(pos, ib.pos)?;
        put(neg, ib.neg)?;
        put(net, ib.net)
    })
}

/// # Safety
/// `l` must be a valid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tate_lattice_to_json(l: *const TateLattice, out: *mut *mut c_char) -> TateStatus {
    guard(|| {
        let json = serde_json::to_string(&lattice_arg(l)?.to_json()).map_err(Failure::input)?;
        put_string(out, json)
    })
}

/// `h^0` and `h^1` of `O(d)` on the projective line over `F_q`.
///
/// # Safety
/// `h0` and `h1` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tate_adele_cohomology(
    q: u64,
    d: i64,
    max_degree: usize,
    window: usize,
    h0: *mut usize,
    h1: *mut usize,
) -> TateStatus {
    guard(|| {
        if h0.is_null() || h1.is_null() {
            return Err(null());
        }
        let c = adelic_cohomology(&field(q)?, d, max_degree, window)?;
        put(h0, c.h0)?;
        put(h1, c.h1)
    })
}

/// Residues of `(num/den) d(g_num/g_den)` as the JSON document printed by `tate residue-sum`.
///
/// # Safety
/// The polynomial arguments must be nul-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tate_residue_sum(
    q: u64,
    num: *const c_char,
    den: *const c_char,
    g_num: *const c_char,
    g_den: *const c_char,
    out: *mut *mut c_char,
) -> TateStatus {
    guard(|| {
        let f = field(q)?;
        let poly = |p: *const c_char| -> Result<Poly, Failure> { Poly::parse(&f, str_arg(p)?).map_err(Failure::input) };
        let a = RatFunc::new(poly(num)?, poly(den)?).map_err(Failure::input)?;
        let g = RatFunc::new(poly(g_num)?, poly(g_den)?).map_err(Failure::input)?;
        let r = residue_sum(&a, &g).map_err(Failure::input)?;
        put_string(out, r.to_json(&f).to_string())
    })
}
