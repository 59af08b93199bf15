//! C ABI for the pentagons library.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`PtgStatus`]; on failure `ptg_last_error` describes the problem. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! must be released with [`ptg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pentagons::constructions::{conjectured_mu5, parabolic, pinwheel};
use pentagons::encoder::{decode_model, dimacs_bytes, encode_maxsat, encode_sat, wcnf_bytes, WcnfStyle};
use pentagons::geom::{count_convex_kgons, signotope_of, PointSet};
use pentagons::maxsat_bb::{solve_exact_with, SolveConfig, SolveError};
use pentagons::realizer::{realize, RealizationStatus, RealizeError, RealizerConfig};
use pentagons::signotope::{check_axioms, count_convex_pentagons, SignotopeAssignment};
use pentagons::sls::{sls_minimize, SlsConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// Input violates general position or the signotope axioms.
    Inconsistent = 4,
    BudgetExceeded = 5,
    Unsatisfiable = 6,
    NotFound = 7,
    Panic = 8,
}

/// A point set with distinct x-coordinates, in general position or not.
pub struct PtgPointSet {
    inner: PointSet,
}

/// A total assignment of orientations to the triples of `1..=n`.
pub struct PtgSignotope {
    inner: SignotopeAssignment,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl ToString) {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn fail(status: PtgStatus, msg: impl ToString) -> PtgStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into [`PtgStatus::Panic`].
fn guard(f: impl FnOnce() -> PtgStatus) -> PtgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == PtgStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(PtgStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PtgStatus> {
    if s.is_null() {
        return Err(fail(PtgStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(PtgStatus::ParseError, "string is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> PtgStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PtgStatus::Ok
        }
        Err(_) => fail(PtgStatus::Panic, "output contains a NUL byte"),
    }
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ptg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ptg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `C(floor(n/2),5) + C(ceil(n/2),5)`, saturated to 64 bits.
#[no_mangle]
pub extern "C" fn ptg_conjectured_mu5(n: u64) -> u64 {
    u64::try_from(conjectured_mu5(n)).unwrap_or(u64::MAX)
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_pinwheel(k: usize, out: *mut *mut PtgPointSet) -> PtgStatus {
    guard(|| {
        if out.is_null() {
            return fail(PtgStatus::NullPointer, "out is null");
        }
        match pinwheel(k) {
            Ok(inner) => {
                *out = boxed(PtgPointSet { inner });
                PtgStatus::Ok
            }
            Err(e) => fail(PtgStatus::InvalidArgument, e),
        }
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_parabolic(n: usize, out: *mut *mut PtgPointSet) -> PtgStatus {
    guard(|| {
        if out.is_null() {
            return fail(PtgStatus::NullPointer, "out is null");
        }
        match parabolic(n) {
            Ok(inner) => {
                *out = boxed(PtgPointSet { inner });
                PtgStatus::Ok
            }
            Err(e) => fail(PtgStatus::InvalidArgument, e),
        }
    })
}

/// Parses a point-set JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_point_set_from_json(json: *const c_char, out: *mut *mut PtgPointSet) -> PtgStatus {
    guard(|| {
        if out.is_null() {
            return fail(PtgStatus::NullPointer, "out is null");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match PointSet::from_json(text) {
            Ok(inner) => {
                *out = boxed(PtgPointSet { inner });
                PtgStatus::Ok
            }
            Err(e) => fail(PtgStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_point_set_to_json(set: *const PtgPointSet, out: *mut *mut c_char) -> PtgStatus {
    guard(|| match (set.as_ref(), out.is_null()) {
        (Some(s), false) => write_string(out, s.inner.to_json()),
        _ => fail(PtgStatus::NullPointer, "null argument"),
    })
}

/// Number of points; 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptg_point_set_len(set: *const PtgPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// # Safety
/// `set` must be NULL or a handle from this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn ptg_point_set_free(set: *mut PtgPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of `k`-subsets in convex position.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_count_convex(set: *const PtgPointSet, k: usize, out: *mut u64) -> PtgStatus {
    guard(|| {
        let Some(s) = set.as_ref().filter(|_| !out.is_null()) else {
            return fail(PtgStatus::NullPointer, "null argument");
        };
        match count_convex_kgons(&s.inner, k) {
            Ok(c) => {
                *out = c;
                PtgStatus::Ok
            }
            Err(e) => fail(PtgStatus::Inconsistent, e),
        }
    })
}

/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_signotope_of(set: *const PtgPointSet, out: *mut *mut PtgSignotope) -> PtgStatus {
    guard(|| {
        let Some(s) = set.as_ref().filter(|_| !out.is_null()) else {
            return fail(PtgStatus::NullPointer, "null argument");
        };
        match signotope_of(&s.inner) {
            Ok(inner) => {
                *out = boxed(PtgSignotope { inner });
                PtgStatus::Ok
            }
            Err(e) => fail(PtgStatus::Inconsistent, e),
        }
    })
}

/// Parses the text format: `n` on the first line, then one `+`/`-` per
/// triple in lexicographic order.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_signotope_from_text(text: *const c_char, out: *mut *mut PtgSignotope) -> PtgStatus {
    guard(|| {
        if out.is_null() {
            return fail(PtgStatus::NullPointer, "out is null");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match SignotopeAssignment::from_text(text) {
            Ok(inner) => {
                *out = boxed(PtgSignotope { inner });
                PtgStatus::Ok
            }
            Err(e) => fail(PtgStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `sig` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_signotope_to_text(sig: *const PtgSignotope, out: *mut *mut c_char) -> PtgStatus {
    guard(|| match (sig.as_ref(), out.is_null()) {
        (Some(s), false) => write_string(out, s.inner.to_text()),
        _ => fail(PtgStatus::NullPointer, "null argument"),
    })
}

/// Number of points; 0 for NULL.
///
/// # Safety
/// `sig` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptg_signotope_n(sig: *const PtgSignotope) -> usize {
    sig.as_ref().map_or(0, |s| s.inner.n())
}

/// # Safety
/// `sig` must be NULL or a handle from this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn ptg_signotope_free(sig: *mut PtgSignotope) {
    if !sig.is_null() {
        drop(Box::from_raw(sig));
    }
}

/// Number of falsified axiom clauses.
///
/// # Safety
/// `sig` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_signotope_axiom_violations(sig: *const PtgSignotope, out: *mut usize) -> PtgStatus {
    guard(|| {
        let Some(s) = sig.as_ref().filter(|_| !out.is_null()) else {
            return fail(PtgStatus::NullPointer, "null argument");
        };
        *out = check_axioms(&s.inner).len();
        PtgStatus::Ok
    })
}

/// Convex pentagons of an axiom-consistent assignment.
///
/// # Safety
/// `sig` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_count_convex_pentagons(sig: *const PtgSignotope, out: *mut u64) -> PtgStatus {
    guard(|| {
        let Some(s) = sig.as_ref().filter(|_| !out.is_null()) else {
            return fail(PtgStatus::NullPointer, "null argument");
        };
        match count_convex_pentagons(&s.inner) {
            Ok(c) => {
                *out = c;
                PtgStatus::Ok
            }
            Err(e) => fail(PtgStatus::Inconsistent, e),
        }
    })
}

/// The MaxSAT formula for `n` points in the classic WCNF format.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_encode_wcnf(n: usize, symmetry: bool, out: *mut *mut c_char) -> PtgStatus {
    guard(|| {
        if out.is_null() {
            return fail(PtgStatus::NullPointer, "out is null");
        }
        match encode_maxsat(n, symmetry) {
            Ok(f) => write_string(out, String::from_utf8(wcnf_bytes(&f, WcnfStyle::Classic)).expect("ascii")),
            Err(e) => fail(PtgStatus::InvalidArgument, e),
        }
    })
}

/// The SAT formula for `n` points in DIMACS format.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_encode_dimacs(n: usize, with_axioms: bool, out: *mut *mut c_char) -> PtgStatus {
    guard(|| {
        if out.is_null() {
            return fail(PtgStatus::NullPointer, "out is null");
        }
        match encode_sat(n, with_axioms) {
            Ok(f) => write_string(out, String::from_utf8(dimacs_bytes(&f)).expect("ascii")),
            Err(e) => fail(PtgStatus::InvalidArgument, e),
        }
    })
}

/// Exact minimum number of convex pentagons over `n`-point signotopes.
///
/// A negative `ub_hint` means no hint; `max_propagations == 0` means no
/// limit. `witness` may be NULL; otherwise it receives an optimal
/// assignment. On [`PtgStatus::BudgetExceeded`], `optimum` holds a proven
/// lower bound.
///
/// # Safety
/// `optimum` must be a valid pointer; `witness` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn ptg_solve_exact(
    n: usize,
    symmetry: bool,
    ub_hint: i64,
    max_propagations: u64,
    optimum: *mut u64,
    witness: *mut *mut PtgSignotope,
) -> PtgStatus {
    guard(|| {
        if optimum.is_null() {
            return fail(PtgStatus::NullPointer, "optimum is null");
        }
        let f = match encode_maxsat(n, symmetry) {
            Ok(f) => f,
            Err(e) => return fail(PtgStatus::InvalidArgument, e),
        };
        let cfg = SolveConfig {
            ub_hint: u64::try_from(ub_hint).ok(),
            max_propagations: (max_propagations > 0).then_some(max_propagations),
            ..SolveConfig::default()
        };
        match solve_exact_with(&f, &cfg) {
            Ok(s) => {
                *optimum = s.optimum;
                if !witness.is_null() {
                    match decode_model(n, &s.model) {
                        Ok(inner) => *witness = boxed(PtgSignotope { inner }),
                        Err(e) => return fail(PtgStatus::Panic, e),
                    }
                }
                PtgStatus::Ok
            }
            Err(e @ SolveError::BudgetExceeded { lower, .. }) => {
                *optimum = lower;
                fail(PtgStatus::BudgetExceeded, e)
            }
            Err(e @ SolveError::HardUnsat) => fail(PtgStatus::Unsatisfiable, e),
        }
    })
}

/// Clause-weighting local search with default parameters. A negative
/// `target` means run all `max_flips` flips.
///
/// # Safety
/// `best` must be a valid pointer; `assignment` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn ptg_sls_minimize(
    n: usize,
    seed: u64,
    max_flips: u64,
    target: i64,
    best: *mut u64,
    assignment: *mut *mut PtgSignotope,
) -> PtgStatus {
    guard(|| {
        if best.is_null() {
            return fail(PtgStatus::NullPointer, "best is null");
        }
        let cfg = SlsConfig { seed, max_flips, target: u64::try_from(target).ok(), ..SlsConfig::default() };
        match sls_minimize(n, &cfg) {
            Ok(r) => {
                *best = r.best_falsified;
                if !assignment.is_null() {
                    *assignment = boxed(PtgSignotope { inner: r.best_assignment });
                }
                PtgStatus::Ok
            }
            Err(e) => fail(PtgStatus::InvalidArgument, e),
        }
    })
}

/// Searches for points realizing `sig` with default parameters and the
/// given seed. [`PtgStatus::NotFound`] makes no claim about realizability.
///
/// # Safety
/// `sig` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ptg_realize(sig: *const PtgSignotope, seed: u64, out: *mut *mut PtgPointSet) -> PtgStatus {
    guard(|| {
        let Some(s) = sig.as_ref().filter(|_| !out.is_null()) else {
            return fail(PtgStatus::NullPointer, "null argument");
        };
        match realize(&s.inner, &RealizerConfig { seed, ..RealizerConfig::default() }) {
            Ok(r) => match (r.status, r.points) {
                (RealizationStatus::Realized, Some(inner)) => {
                    *out = boxed(PtgPointSet { inner });
                    PtgStatus::Ok
                }
                _ => fail(PtgStatus::NotFound, "no realization found within the budget"),
            },
            Err(e @ RealizeError::AxiomInconsistent(_)) => fail(PtgStatus::Inconsistent, e),
            Err(e) => fail(PtgStatus::InvalidArgument, e),
        }
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ptg_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
