//! C ABI over the `ergosum` library.
//!
//! Objects are opaque handles created by `*_new` and released by the
//! matching `*_free`. Every fallible call returns an [`ErgosumStatus`] and
//! writes its result through an out-pointer; the message of the last failure
//! on the calling thread is available from [`ergosum_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use ergosum::cf::{ConvergentTable, IrrationalSpec};
use ergosum::clt::normalized_distribution;
use ergosum::ostrowski::expand;
use ergosum::sft::{MarkovMeasure, TransitionSystem, DEFAULT_TOLERANCE};
use ergosum::stepfn::PhiSpec;
use ergosum::sums::ErgodicSums;
use ergosum::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErgosumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Precision = 3,
    Resource = 4,
    NoConvergence = 5,
    ZeroVariance = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

impl From<&Error> for ErgosumStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::PrecisionExhausted { .. } | Error::ThresholdStraddle { .. } => {
                ErgosumStatus::Precision
            }
            Error::ResourceExceeded { .. } | Error::TableTooShort { .. } => ErgosumStatus::Resource,
            Error::NoConvergence(_) => ErgosumStatus::NoConvergence,
            Error::ZeroVariance(_) => ErgosumStatus::ZeroVariance,
            _ => ErgosumStatus::InvalidInput,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `f`, recording any error or panic for [`ergosum_last_error`].
fn guard(f: impl FnOnce() -> Result<(), ErgosumStatus>) -> ErgosumStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ErgosumStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            ErgosumStatus::Panic
        }
    }
}

fn fail(e: Error) -> ErgosumStatus {
    let status = ErgosumStatus::from(&e);
    set_error(e.to_string());
    status
}

fn invalid(msg: &str) -> ErgosumStatus {
    set_error(msg);
    ErgosumStatus::InvalidInput
}

fn null() -> ErgosumStatus {
    set_error("null pointer");
    ErgosumStatus::NullPointer
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, ErgosumStatus> {
    p.as_ref().ok_or_else(null)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, ErgosumStatus> {
    p.as_mut().ok_or_else(null)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, ErgosumStatus> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid("string is not UTF-8"))
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ergosum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ergosum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Continued-fraction data of a rotation number.
pub struct ErgosumTable(Arc<ConvergentTable>);

/// Ergodic sums of one step function over one rotation.
pub struct ErgosumSums(ErgodicSums);

/// Parry measure of the digit subshift of a quadratic irrational.
pub struct ErgosumMeasure {
    system: TransitionSystem,
    measure: MarkovMeasure,
}

/// Builds the first `count` convergents of `spec` (e.g. "golden", "sqrt2").
///
/// # Safety
/// `spec` must be a NUL-terminated string and `table` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ergosum_table_new(
    spec: *const c_char,
    count: usize,
    table: *mut *mut ErgosumTable,
) -> ErgosumStatus {
    guard(|| {
        let table = out(table)?;
        let spec: IrrationalSpec = text(spec)?.parse().map_err(fail)?;
        let t = ConvergentTable::new(&spec, count).map_err(fail)?;
        *table = Box::into_raw(Box::new(ErgosumTable(Arc::new(t))));
        Ok(())
    })
}

/// # Safety
/// `table` must come from [`ergosum_table_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ergosum_table_free(table: *mut ErgosumTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of convergents held by `table`.
///
/// # Safety
/// `table` must be a live handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn ergosum_table_len(table: *const ErgosumTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

/// Partial quotient `a_n`, `n >= 1`.
///
/// # Safety
/// `table` must be a live handle and `a` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_table_quotient(
    table: *const ErgosumTable,
    n: usize,
    a: *mut u64,
) -> ErgosumStatus {
    guard(|| {
        let t = &borrow(table)?.0;
        let a = out(a)?;
        if n == 0 || n > t.len() {
            return Err(invalid("index out of range"));
        }
        *a = t.a(n);
        Ok(())
    })
}

/// Convergent denominator `q_n`; fails with `Resource` above 2^64.
///
/// # Safety
/// `table` must be a live handle and `q` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_table_denominator(
    table: *const ErgosumTable,
    n: usize,
    q: *mut u64,
) -> ErgosumStatus {
    guard(|| {
        let t = &borrow(table)?.0;
        let q = out(q)?;
        if n >= t.len() {
            return Err(invalid("index out of range"));
        }
        *q = u64::try_from(t.try_q_u128(n).map_err(fail)?).map_err(|_| {
            set_error("q_n does not fit in 64 bits");
            ErgosumStatus::Resource
        })?;
        Ok(())
    })
}

/// `‖q_n α‖`, certified at the table's precision.
///
/// # Safety
/// `table` must be a live handle and `norm` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_table_norm(
    table: *const ErgosumTable,
    n: usize,
    norm: *mut f64,
) -> ErgosumStatus {
    guard(|| {
        let t = &borrow(table)?.0;
        let norm = out(norm)?;
        if n >= t.len() {
            return Err(invalid("index out of range"));
        }
        *norm = t.norm_multiple(t.q(n)).map_err(fail)?.to_f64();
        Ok(())
    })
}

/// Ostrowski digits of `n`, lowest first. `len` receives the digit count;
/// with a short buffer the call fails with `BufferTooSmall` and still
/// reports the length needed.
///
/// # Safety
/// `digits` must have room for `capacity` values (or be NULL when
/// `capacity` is 0); `table` must be live and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_ostrowski_expand(
    table: *const ErgosumTable,
    n: u64,
    digits: *mut u64,
    capacity: usize,
    len: *mut usize,
) -> ErgosumStatus {
    guard(|| {
        let t = &borrow(table)?.0;
        let len = out(len)?;
        let w = expand(t, n as u128).map_err(fail)?;
        *len = w.digits.len();
        if w.digits.len() > capacity {
            set_error("digit buffer too small");
            return Err(ErgosumStatus::BufferTooSmall);
        }
        if !w.digits.is_empty() {
            if digits.is_null() {
                return Err(null());
            }
            ptr::copy_nonoverlapping(w.digits.as_ptr(), digits, w.digits.len());
        }
        Ok(())
    })
}

/// Sums of the preset `phi` (e.g. "phi0", "psi_half") over `table`'s rotation.
///
/// # Safety
/// `table` must be live, `phi` NUL-terminated and `sums` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_sums_new(
    table: *const ErgosumTable,
    phi: *const c_char,
    sums: *mut *mut ErgosumSums,
) -> ErgosumStatus {
    guard(|| {
        let t = Arc::clone(&borrow(table)?.0);
        let sums = out(sums)?;
        let spec: PhiSpec = text(phi)?.parse().map_err(fail)?;
        let f = spec.build_one(t.alpha_phase()).map_err(fail)?;
        *sums = Box::into_raw(Box::new(ErgosumSums(ErgodicSums::new(f, t))));
        Ok(())
    })
}

/// # Safety
/// `sums` must come from [`ergosum_sums_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ergosum_sums_free(sums: *mut ErgosumSums) {
    if !sums.is_null() {
        drop(Box::from_raw(sums));
    }
}

/// `‖φ_n‖₂²`, integrated exactly over the profile of `φ_n`.
///
/// # Safety
/// `sums` must be live and `variance` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_sums_variance(
    sums: *const ErgosumSums,
    n: u64,
    variance: *mut f64,
) -> ErgosumStatus {
    guard(|| {
        let s = &borrow(sums)?.0;
        let variance = out(variance)?;
        *variance = s.variance_exact(n).map_err(fail)?;
        Ok(())
    })
}

/// Writes `‖φ_n‖₂²` for `0 <= n <= n_max` into `values`, which must hold
/// `n_max + 1` entries.
///
/// # Safety
/// `sums` must be live and `values` must have room for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn ergosum_sums_variance_scan(
    sums: *const ErgosumSums,
    n_max: u64,
    values: *mut f64,
    capacity: usize,
) -> ErgosumStatus {
    guard(|| {
        let s = &borrow(sums)?.0;
        if values.is_null() {
            return Err(null());
        }
        if (capacity as u64) <= n_max {
            set_error("variance buffer too small");
            return Err(ErgosumStatus::BufferTooSmall);
        }
        let scan = s.variance_scan(n_max);
        ptr::copy_nonoverlapping(scan.as_ptr(), values, scan.len());
        Ok(())
    })
}

/// Exact Kolmogorov distance between `φ_n / ‖φ_n‖₂` and the standard normal.
///
/// # Safety
/// `sums` must be live and `distance` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_sums_kolmogorov(
    sums: *const ErgosumSums,
    n: u64,
    distance: *mut f64,
) -> ErgosumStatus {
    guard(|| {
        let s = &borrow(sums)?.0;
        let distance = out(distance)?;
        *distance = normalized_distribution(s, n)
            .map_err(fail)?
            .kolmogorov_to_normal();
        Ok(())
    })
}

/// Digit subshift and Parry measure of a quadratic irrational `spec`.
///
/// # Safety
/// `spec` must be NUL-terminated and `measure` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_measure_new(
    spec: *const c_char,
    measure: *mut *mut ErgosumMeasure,
) -> ErgosumStatus {
    guard(|| {
        let measure = out(measure)?;
        let spec: IrrationalSpec = text(spec)?.parse().map_err(fail)?;
        let system = TransitionSystem::build(&spec).map_err(fail)?;
        let m = MarkovMeasure::new(&system, DEFAULT_TOLERANCE).map_err(fail)?;
        *measure = Box::into_raw(Box::new(ErgosumMeasure { system, measure: m }));
        Ok(())
    })
}

/// # Safety
/// `measure` must come from [`ergosum_measure_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ergosum_measure_free(measure: *mut ErgosumMeasure) {
    if !measure.is_null() {
        drop(Box::from_raw(measure));
    }
}

/// Alphabet size of the subshift; 0 for NULL.
///
/// # Safety
/// `measure` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn ergosum_measure_letters(measure: *const ErgosumMeasure) -> usize {
    measure.as_ref().map_or(0, |m| m.system.len())
}

/// Perron root `λ` of the transition matrix.
///
/// # Safety
/// `measure` must be live and `lambda` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_measure_lambda(
    measure: *const ErgosumMeasure,
    lambda: *mut f64,
) -> ErgosumStatus {
    guard(|| {
        let m = borrow(measure)?;
        *out(lambda)? = m.measure.lambda();
        Ok(())
    })
}

/// Entropy of the Parry measure, `log λ` up to rounding.
///
/// # Safety
/// `measure` must be live and `entropy` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_measure_entropy(
    measure: *const ErgosumMeasure,
    entropy: *mut f64,
) -> ErgosumStatus {
    guard(|| {
        let m = borrow(measure)?;
        *out(entropy)? = m.measure.entropy();
        Ok(())
    })
}

/// Measure of the cylinder spelled by `word` (letter indices); 0 for
/// inadmissible words.
///
/// # Safety
/// `word` must point to `len >= 1` readable indices; `measure` must be live
/// and `mass` writable.
#[no_mangle]
pub unsafe extern "C" fn ergosum_measure_cylinder(
    measure: *const ErgosumMeasure,
    word: *const usize,
    len: usize,
    mass: *mut f64,
) -> ErgosumStatus {
    guard(|| {
        let m = borrow(measure)?;
        let mass = out(mass)?;
        if len == 0 {
            return Err(invalid("empty word"));
        }
        borrow(word)?;
        let word = std::slice::from_raw_parts(word, len);
        *mass = m.measure.cylinder(&m.system, word).unwrap_or(0.0);
        Ok(())
    })
}
