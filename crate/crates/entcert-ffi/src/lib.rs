//! C ABI for the entanglement-certification library.
//!
//! Conventions:
//! - every state lives behind an opaque `EcState` handle created by
//!   [`ec_state_new`] and released by [`ec_state_free`];
//! - fallible calls return an [`EcStatus`] code and write results through
//!   out pointers, which are untouched on failure;
//! - the last failure message of the calling thread is available from
//!   [`ec_last_error_message`] until the next failing call;
//! - strings are NUL-terminated UTF-8; pair sets use the CLI spellings
//!   ("comp,sx", "comp,fourier", "mub3", "mub4"), family names likewise
//!   ("max", "classical", "rho_c", "rho_w", "rho_a", "rho_b", "rho_s").
//!
//! The generated header lives at `include/entcert.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use entcert::{certify, metrics, mi_sum, states, DensityMatrix, Error, PairSet, StateFamily};

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Dimension outside the supported range or mismatched.
    Dimension = 3,
    /// Malformed matrix or table shape.
    Shape = 4,
    /// Parameter outside its admissible range.
    Param = 5,
    /// A basis construction failed validation.
    Construction = 6,
    /// A numerical consistency check failed.
    Numerical = 7,
    /// The requested quantity is undefined on the data.
    Degenerate = 8,
    /// No data (e.g. zero total counts).
    EmptyData = 9,
    /// The library panicked; state may be inconsistent.
    Panic = 10,
}

fn status_of(err: &Error) -> EcStatus {
    match err {
        Error::Dimension(_) => EcStatus::Dimension,
        Error::Shape(_) => EcStatus::Shape,
        Error::Param(_) => EcStatus::Param,
        Error::Construction(_) => EcStatus::Construction,
        Error::Numerical(_) => EcStatus::Numerical,
        Error::Degenerate(_) => EcStatus::Degenerate,
        Error::EmptyData(_) => EcStatus::EmptyData,
    }
}

/// Certification verdict; matches the library's one-sided semantics.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcVerdict {
    Inconclusive = 0,
    Entangled = 1,
    MaximallyEntangledConsistent = 2,
}

impl From<certify::Verdict> for EcVerdict {
    fn from(v: certify::Verdict) -> Self {
        match v {
            certify::Verdict::Inconclusive => EcVerdict::Inconclusive,
            certify::Verdict::Entangled => EcVerdict::Entangled,
            certify::Verdict::MaximallyEntangledConsistent => {
                EcVerdict::MaximallyEntangledConsistent
            }
        }
    }
}

/// Result of a two-pair certification run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EcCertification {
    /// Correlation of the first pair (bits for MI, coefficient for Pearson).
    pub first_pair: f64,
    /// Correlation of the second pair.
    pub second_pair: f64,
    pub sum: f64,
    /// 1σ uncertainty of the sum (0 in exact mode).
    pub sigma: f64,
    /// Entanglement threshold (log₂d for MI, 1 for Pearson).
    pub threshold_ent: f64,
    /// Maximal-correlation value (2log₂d for MI, 2 for Pearson).
    pub threshold_max: f64,
    pub verdict: EcVerdict,
}

/// Opaque state handle: a constructed density matrix plus the family
/// parameters it was built from.
pub struct EcState {
    family: StateFamily,
    d: usize,
    p: f64,
    rho: DensityMatrix,
}

fn guard(body: impl FnOnce() -> EcStatus) -> EcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            EcStatus::Panic
        }
    }
}

unsafe fn parse_cstr<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, EcStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} pointer is NULL"));
        return Err(EcStatus::NullPointer);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_error(&format!("{what} is not valid UTF-8"));
            Err(EcStatus::InvalidUtf8)
        }
    }
}

unsafe fn deref_state<'a>(ptr: *const EcState) -> Result<&'a EcState, EcStatus> {
    if ptr.is_null() {
        set_error("state handle is NULL");
        return Err(EcStatus::NullPointer);
    }
    Ok(&*ptr)
}

fn require_out<T>(ptr: *mut T, what: &str) -> Result<(), EcStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} out-pointer is NULL"));
        return Err(EcStatus::NullPointer);
    }
    Ok(())
}

/// Message describing the calling thread's most recent failure. The
/// pointer stays valid until the next failing call on the same thread;
/// copy it if you need to keep it.
#[no_mangle]
pub extern "C" fn ec_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Build a state of `family` ("max", "classical", "rho_c", "rho_w",
/// "rho_a", "rho_b", "rho_s") with local dimension `d` and mixing
/// parameter `p`, writing an owned handle to `out`.
///
/// # Safety
/// `family` must be a valid NUL-terminated string and `out` a valid
/// pointer. The returned handle must be released with [`ec_state_free`].
#[no_mangle]
pub unsafe extern "C" fn ec_state_new(
    family: *const c_char,
    d: u32,
    p: f64,
    out: *mut *mut EcState,
) -> EcStatus {
    guard(|| {
        let name = match parse_cstr(family, "family") {
            Ok(s) => s,
            Err(code) => return code,
        };
        if require_out(out, "state").is_err() {
            return EcStatus::NullPointer;
        }
        let family = match StateFamily::from_str(name) {
            Ok(f) => f,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        match states::build(family, d as usize, p) {
            Ok(rho) => {
                let handle = Box::new(EcState {
                    family,
                    d: d as usize,
                    p,
                    rho,
                });
                *out = Box::into_raw(handle);
                EcStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Release a handle created by [`ec_state_new`]. NULL is a no-op.
///
/// # Safety
/// `state` must be NULL or a pointer previously returned by
/// [`ec_state_new`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ec_state_free(state: *mut EcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Local dimension d of the state behind the handle (0 for NULL).
///
/// # Safety
/// `state` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ec_state_local_dim(state: *const EcState) -> u32 {
    match deref_state(state) {
        Ok(s) => s.d as u32,
        Err(_) => 0,
    }
}

fn pair_set_from(name: &str, d: usize) -> Result<PairSet, Error> {
    if name.is_empty() || name == "default" {
        Ok(PairSet::default_for(d))
    } else {
        PairSet::from_str(name)
    }
}

fn fill_certification(out: *mut EcCertification, report: &certify::CertificationReport) {
    let cert = EcCertification {
        first_pair: report.per_pair[0],
        second_pair: report.per_pair[1],
        sum: report.sum,
        sigma: report.sigma,
        threshold_ent: report.threshold_ent,
        threshold_max: report.threshold_max,
        verdict: report.verdict.into(),
    };
    unsafe {
        *out = cert;
    }
}

/// Mutual-information certification of the state. `pairs` selects the
/// complementary pair set ("default" or empty picks comp,sx / comp,fourier
/// by dimension). With `exact` nonzero the sums come from exact tables
/// (σ = 0); otherwise one Poissonian counts table of budget `n_total` is
/// simulated per pair with the given seed.
///
/// # Safety
/// `state`, `pairs` and `out` must be valid pointers as described above.
#[no_mangle]
pub unsafe extern "C" fn ec_certify_mi(
    state: *const EcState,
    pairs: *const c_char,
    exact: i32,
    n_total: u64,
    seed: u64,
    out: *mut EcCertification,
) -> EcStatus {
    guard(|| {
        let handle = match deref_state(state) {
            Ok(h) => h,
            Err(code) => return code,
        };
        let pairs = match parse_cstr(pairs, "pairs") {
            Ok(s) => s,
            Err(code) => return code,
        };
        if require_out(out, "certification").is_err() {
            return EcStatus::NullPointer;
        }
        let run = pair_set_from(pairs, handle.d).and_then(|set| {
            let sampling = if exact != 0 {
                None
            } else {
                Some((n_total, seed))
            };
            certify::certify_state_mi(handle.family, handle.d, handle.p, set, sampling)
        });
        match run {
            Ok(report) => {
                fill_certification(out, &report);
                EcStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Pearson-coefficient certification (conjectured entanglement
/// threshold). In sampled mode σ is the spread over `trials` simulated
/// runs.
///
/// # Safety
/// Same pointer contract as [`ec_certify_mi`].
#[no_mangle]
pub unsafe extern "C" fn ec_certify_pearson(
    state: *const EcState,
    pairs: *const c_char,
    exact: i32,
    n_total: u64,
    trials: u32,
    seed: u64,
    out: *mut EcCertification,
) -> EcStatus {
    guard(|| {
        let handle = match deref_state(state) {
            Ok(h) => h,
            Err(code) => return code,
        };
        let pairs = match parse_cstr(pairs, "pairs") {
            Ok(s) => s,
            Err(code) => return code,
        };
        if require_out(out, "certification").is_err() {
            return EcStatus::NullPointer;
        }
        let run = pair_set_from(pairs, handle.d).and_then(|set| {
            let sampling = if exact != 0 {
                None
            } else {
                Some((n_total, trials, seed))
            };
            certify::certify_state_pearson(handle.family, handle.d, handle.p, set, sampling)
        });
        match run {
            Ok(report) => {
                fill_certification(out, &report);
                EcStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Exact per-pair mutual informations of the state under a pair set.
/// Writes at most `capacity` values to `per_pair`, the actual pair count
/// to `len`, and the total to `sum`. Fails with [`EcStatus::Shape`] when
/// the buffer is too small.
///
/// # Safety
/// All pointers must be valid; `per_pair` must have room for `capacity`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn ec_mi_sum(
    state: *const EcState,
    pairs: *const c_char,
    per_pair: *mut f64,
    capacity: usize,
    len: *mut usize,
    sum: *mut f64,
) -> EcStatus {
    guard(|| {
        let handle = match deref_state(state) {
            Ok(h) => h,
            Err(code) => return code,
        };
        let pairs_name = match parse_cstr(pairs, "pairs") {
            Ok(s) => s,
            Err(code) => return code,
        };
        if require_out(per_pair, "per_pair").is_err()
            || require_out(len, "len").is_err()
            || require_out(sum, "sum").is_err()
        {
            return EcStatus::NullPointer;
        }
        let run = pair_set_from(pairs_name, handle.d)
            .and_then(|set| set.build(handle.d))
            .and_then(|built| mi_sum(&handle.rho, &built));
        match run {
            Ok(result) => {
                if result.per_pair.len() > capacity {
                    set_error(&format!(
                        "buffer holds {capacity} values but the pair set has {}",
                        result.per_pair.len()
                    ));
                    return EcStatus::Shape;
                }
                for (i, v) in result.per_pair.iter().enumerate() {
                    *per_pair.add(i) = *v;
                }
                *len = result.per_pair.len();
                *sum = result.sum;
                EcStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Expectation value of the d = 2 comparison witness
/// W = I − σz⊗σz − σx⊗σx; negative certifies entanglement.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_witness_expectation(state: *const EcState, out: *mut f64) -> EcStatus {
    guard(|| {
        let handle = match deref_state(state) {
            Ok(h) => h,
            Err(code) => return code,
        };
        if require_out(out, "witness").is_err() {
            return EcStatus::NullPointer;
        }
        match metrics::witness_expectation(&handle.rho) {
            Ok(w) => {
                *out = w;
                EcStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

fn check_analytic_args(d: u32, p: f64, out: *mut f64) -> Result<(), EcStatus> {
    require_out(out, "value")?;
    if d < 2 {
        set_error(&format!("need d >= 2, got {d}"));
        return Err(EcStatus::Dimension);
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        set_error(&format!("mixing parameter p = {p} outside [0, 1]"));
        return Err(EcStatus::Param);
    }
    Ok(())
}

/// Closed-form mutual-information sum for the computational-correlation
/// mixture family at (d, p).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_analytic_mi_sum_rho_c(d: u32, p: f64, out: *mut f64) -> EcStatus {
    guard(|| match check_analytic_args(d, p, out) {
        Ok(()) => {
            *out = metrics::analytic_mi_sum_rho_c(d as usize, p);
            EcStatus::Ok
        }
        Err(code) => code,
    })
}

/// Closed-form mutual-information sum for the Werner family at (d, p).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_analytic_mi_sum_werner(d: u32, p: f64, out: *mut f64) -> EcStatus {
    guard(|| match check_analytic_args(d, p, out) {
        Ok(()) => {
            *out = metrics::analytic_mi_sum_werner(d as usize, p);
            EcStatus::Ok
        }
        Err(code) => code,
    })
}

/// The p where the Werner mutual-information sum crosses the log₂d
/// entanglement threshold (≈0.78 for d = 2), to 1e-6.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_werner_threshold_crossing(d: u32, out: *mut f64) -> EcStatus {
    guard(|| {
        if require_out(out, "crossing").is_err() {
            return EcStatus::NullPointer;
        }
        if d < 2 {
            set_error(&format!("need d >= 2, got {d}"));
            return EcStatus::Dimension;
        }
        match metrics::werner_threshold_crossing(d as usize) {
            Some(p) => {
                *out = p;
                EcStatus::Ok
            }
            None => {
                set_error("curve does not cross the threshold inside [0, 1]");
                EcStatus::Numerical
            }
        }
    })
}
