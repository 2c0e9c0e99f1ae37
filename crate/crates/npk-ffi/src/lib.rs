//! C ABI for the npk library.
//!
//! Matrices cross the boundary as opaque handles created from the same JSON
//! accepted by the CLI; scalar results come back through out-parameters and
//! every call reports an `NpkStatus` mirroring the CLI exit codes.  On any
//! non-`Ok` status a thread-local message is available from
//! [`npk_last_error`].
//!
//! Strings returned by this library are owned by the caller and must be
//! released with [`npk_string_free`]; handles with [`npk_matrix_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use npk::error::Error;
use npk::exactmat::CycMatrix;
use npk::kgroup::{class_of, group_structure, representative, same_kclass, KClass};
use npk::npotent::{are_similar, decompose, quadripotent_split_q4, random_npotent};
use npk::witness::Witness;

/// Status codes shared with the CLI: 0 success, 1 parse error, 2 not an
/// n-potent, 3 field violation, 4 verification failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NpkStatus {
    Ok = 0,
    ParseError = 1,
    NotNpotent = 2,
    FieldViolation = 3,
    VerificationFailed = 4,
    InvalidArgument = 5,
    InternalError = 6,
}

/// Opaque matrix handle.
pub struct NpkMatrix(CycMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let cstring = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_of(err: &Error) -> NpkStatus {
    match err {
        Error::NotNPotent { .. } => NpkStatus::NotNpotent,
        Error::FieldContainment { .. } | Error::FieldViolation { .. } | Error::FoldedOrbit { .. } => {
            NpkStatus::FieldViolation
        }
        Error::VerificationFailed(_) | Error::InvalidWitness(_) => NpkStatus::VerificationFailed,
        Error::Parse(_) | Error::Io(_) => NpkStatus::ParseError,
        _ => NpkStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> NpkStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> NpkStatus) -> NpkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            NpkStatus::InternalError
        }
    }
}

/// # Safety
/// `ptr` must be null or a pointer previously returned by this library's
/// string-producing functions.
#[no_mangle]
pub unsafe extern "C" fn npk_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

/// Last error message for the current thread, or null if none; free with
/// [`npk_string_free`].
#[no_mangle]
pub extern "C" fn npk_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

unsafe fn parse_cstr<'a>(ptr: *const c_char) -> Result<&'a str, NpkStatus> {
    if ptr.is_null() {
        set_error("null string pointer".into());
        return Err(NpkStatus::InvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8".into());
        NpkStatus::InvalidArgument
    })
}

unsafe fn matrix_ref<'a>(ptr: *const NpkMatrix) -> Result<&'a CycMatrix, NpkStatus> {
    if ptr.is_null() {
        set_error("null matrix handle".into());
        return Err(NpkStatus::InvalidArgument);
    }
    Ok(&(*ptr).0)
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Parse a matrix from its JSON form `{"m": ..., "rows": [[...], ...]}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn npk_matrix_from_json(
    json: *const c_char,
    out: *mut *mut NpkMatrix,
) -> NpkStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return NpkStatus::InvalidArgument;
        }
        let text = match parse_cstr(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match serde_json::from_str::<CycMatrix>(text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(NpkMatrix(m)));
                NpkStatus::Ok
            }
            Err(e) => fail(Error::Parse(e.to_string())),
        }
    })
}

/// Serialize a matrix handle back to JSON; null on error.
///
/// # Safety
/// `m` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn npk_matrix_to_json(m: *const NpkMatrix) -> *mut c_char {
    let Ok(m) = matrix_ref(m) else {
        return ptr::null_mut();
    };
    match serde_json::to_string(m) {
        Ok(s) => string_out(s),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `m` must be null or a live handle; the handle is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn npk_matrix_free(m: *mut NpkMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn npk_matrix_rows(m: *const NpkMatrix) -> usize {
    matrix_ref(m).map(|m| m.rows()).unwrap_or(0)
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn npk_matrix_cols(m: *const NpkMatrix) -> usize {
    matrix_ref(m).map(|m| m.cols()).unwrap_or(0)
}

/// Field conductor of the matrix.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn npk_matrix_order(m: *const NpkMatrix) -> u64 {
    matrix_ref(m).map(|m| m.order()).unwrap_or(0)
}

/// Exact test of `e^n = e`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn npk_is_npotent(m: *const NpkMatrix, n: u32, out: *mut bool) -> NpkStatus {
    guard(|| {
        let mat = match matrix_ref(m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null output pointer".into());
            return NpkStatus::InvalidArgument;
        }
        match mat.is_npotent(n) {
            Ok(v) => {
                *out = v;
                NpkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Decompose into the n-partition of unity; the partition is returned as
/// JSON (`{"n": ..., "m": ..., "components": [...]}`).
///
/// # Safety
/// `m` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn npk_decompose_json(
    m: *const NpkMatrix,
    n: u32,
    out_json: *mut *mut c_char,
) -> NpkStatus {
    guard(|| {
        let mat = match matrix_ref(m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if out_json.is_null() {
            set_error("null output pointer".into());
            return NpkStatus::InvalidArgument;
        }
        match decompose(mat, n).and_then(|p| Ok(serde_json::to_string(&p)?)) {
            Ok(s) => {
                *out_json = string_out(s);
                NpkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of Galois orbits (= number of class coordinates) for `(n, field)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn npk_orbit_count(n: u32, field: u64, out: *mut usize) -> NpkStatus {
    guard(|| {
        if n < 2 || out.is_null() {
            set_error("need n >= 2 and a valid output pointer".into());
            return NpkStatus::InvalidArgument;
        }
        *out = npk::cyclofield::galois_orbits(n, field).len();
        NpkStatus::Ok
    })
}

/// K-class of an n-potent over the base field: one value per Galois orbit,
/// written into `values` (capacity `len`); `written` receives the count.
///
/// # Safety
/// `m` must be a live handle; `values` must point to at least `len`
/// writable slots; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn npk_class_of(
    m: *const NpkMatrix,
    n: u32,
    field: u64,
    values: *mut i64,
    len: usize,
    written: *mut usize,
) -> NpkStatus {
    guard(|| {
        let mat = match matrix_ref(m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if values.is_null() || written.is_null() {
            set_error("null output pointer".into());
            return NpkStatus::InvalidArgument;
        }
        match class_of(mat, n, field) {
            Ok(c) => {
                if c.values().len() > len {
                    set_error(format!(
                        "buffer holds {len} values, class needs {}",
                        c.values().len()
                    ));
                    return NpkStatus::InvalidArgument;
                }
                for (i, v) in c.values().iter().enumerate() {
                    *values.add(i) = *v;
                }
                *written = c.values().len();
                NpkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Rendered group structure, e.g. `"Z (+) 2Z"`; free with
/// [`npk_string_free`].
#[no_mangle]
pub extern "C" fn npk_group_structure(n: u32, field: u64) -> *mut c_char {
    if n < 2 {
        set_error("need n >= 2".into());
        return ptr::null_mut();
    }
    string_out(group_structure(n, field).to_string())
}

/// Exact similarity decision for two n-potents of equal size.
///
/// # Safety
/// `e` and `f` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn npk_are_similar(
    e: *const NpkMatrix,
    f: *const NpkMatrix,
    n: u32,
    out: *mut bool,
) -> NpkStatus {
    guard(|| {
        let (e, f) = match (matrix_ref(e), matrix_ref(f)) {
            (Ok(e), Ok(f)) => (e, f),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        if out.is_null() {
            set_error("null output pointer".into());
            return NpkStatus::InvalidArgument;
        }
        match are_similar(e, f, n) {
            Ok(v) => {
                *out = v;
                NpkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Stable-class equality over the base field (sizes may differ).
///
/// # Safety
/// `e` and `f` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn npk_same_kclass(
    e: *const NpkMatrix,
    f: *const NpkMatrix,
    n: u32,
    field: u64,
    out: *mut bool,
) -> NpkStatus {
    guard(|| {
        let (e, f) = match (matrix_ref(e), matrix_ref(f)) {
            (Ok(e), Ok(f)) => (e, f),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        if out.is_null() {
            set_error("null output pointer".into());
            return NpkStatus::InvalidArgument;
        }
        match same_kclass(e, f, n, field) {
            Ok(v) => {
                *out = v;
                NpkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Block-diagonal n-potent realizing the class with the given orbit values.
///
/// # Safety
/// `values` must point to `len` readable values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn npk_representative(
    n: u32,
    field: u64,
    values: *const i64,
    len: usize,
    out: *mut *mut NpkMatrix,
) -> NpkStatus {
    guard(|| {
        if values.is_null() || out.is_null() {
            set_error("null pointer".into());
            return NpkStatus::InvalidArgument;
        }
        let vals: Vec<i64> = (0..len).map(|i| *values.add(i)).collect();
        match KClass::new(n, field, vals).and_then(|c| representative(&c)) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(NpkMatrix(m)));
                NpkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Deterministic random n-potent with the prescribed component ranks
/// (`ranks[k]` for `k = 0..n-1`, summing to `size`).
///
/// # Safety
/// `ranks` must point to `ranks_len` readable values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn npk_random_npotent(
    n: u32,
    field: u64,
    size: usize,
    ranks: *const usize,
    ranks_len: usize,
    seed: u64,
    out: *mut *mut NpkMatrix,
) -> NpkStatus {
    guard(|| {
        if ranks.is_null() || out.is_null() {
            set_error("null pointer".into());
            return NpkStatus::InvalidArgument;
        }
        let ranks: Vec<usize> = (0..ranks_len).map(|i| *ranks.add(i)).collect();
        match random_npotent(n, field, size, &ranks, seed) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(NpkMatrix(m)));
                NpkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Verify a witness JSON document (either kind); `Ok` means every identity
/// held exactly.
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn npk_witness_check_json(json: *const c_char) -> NpkStatus {
    guard(|| {
        let text = match parse_cstr(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let witness: Witness = match serde_json::from_str(text) {
            Ok(w) => w,
            Err(e) => return fail(Error::Parse(e.to_string())),
        };
        match witness.verify() {
            Ok(()) => NpkStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Traces of the quadripotent split `(e_1, e_2 + e_3)` over `Q(i)`.
///
/// # Safety
/// `m` must be a live handle; `trace_e1` and `trace_e23` must be valid.
#[no_mangle]
pub unsafe extern "C" fn npk_quadripotent_split_traces(
    m: *const NpkMatrix,
    trace_e1: *mut i64,
    trace_e23: *mut i64,
) -> NpkStatus {
    guard(|| {
        let mat = match matrix_ref(m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if trace_e1.is_null() || trace_e23.is_null() {
            set_error("null output pointer".into());
            return NpkStatus::InvalidArgument;
        }
        let traces = quadripotent_split_q4(mat).and_then(|(e1, e23)| {
            let t1 = e1.trace_int()?;
            let t23 = e23.trace_int()?;
            Ok((t1, t23))
        });
        match traces {
            Ok((t1, t23)) => {
                use num_traits::ToPrimitive;
                *trace_e1 = t1.to_i64().unwrap_or(i64::MAX);
                *trace_e23 = t23.to_i64().unwrap_or(i64::MAX);
                NpkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
