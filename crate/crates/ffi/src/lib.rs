//! C ABI over `egz-core`.
//!
//! Conventions:
//!
//! * Every fallible function returns an [`EgzStatus`] and writes results through out-pointers.
//!   On failure the out-pointers are left untouched and [`egz_last_error`] describes the problem.
//! * Groups and search results are opaque heap handles released with their `_free` function.
//! * Strings returned by the library are NUL-terminated and must be released with
//!   [`egz_string_free`].
//! * Panics never cross the boundary; they surface as `EGZ_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use egz_core::bounds::{best_bounds, naslund_gamma, Policy};
use egz_core::search::{
    check_property_d, exact_value, find_zero_sum, known_property_d, Quantity, SearchBudget, SearchOutcome,
    SearchStatus, VerdictStatus,
};
use egz_core::{Error, FiniteAbelianGroup, LengthSpec, Sequence};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgzStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    NullOrInvalidArgument = 1,
    /// Group spec or sequence could not be parsed.
    Parse = 2,
    /// Argument outside the domain of the operation.
    Domain = 3,
    /// Property D query on a non-homocyclic group.
    NotHomocyclic = 4,
    /// The group is too large for the requested operation.
    TooLarge = 5,
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgzQuantity {
    S = 0,
    Eta = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgzPolicy {
    None = 0,
    RegistryOnly = 1,
    AssumeAll = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgzSearchStatus {
    Exact = 0,
    /// Node budget ran out; the value is a lower bound.
    LowerBoundOnly = 1,
    /// Wall-clock budget ran out; the value is a lower bound.
    BudgetExhausted = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgzVerdict {
    Holds = 0,
    Fails = 1,
    Unknown = 2,
}

/// Opaque finite Abelian group.
pub struct EgzGroup(FiniteAbelianGroup);

/// Opaque outcome of an exact search.
pub struct EgzSearchResult(SearchOutcome);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> EgzStatus {
    match e {
        Error::InvalidOrder(_) | Error::EmptyGroup | Error::GroupParse { .. } | Error::SequenceParse { .. } => {
            EgzStatus::Parse
        }
        Error::NotHomocyclic(_) => EgzStatus::NotHomocyclic,
        Error::TooLarge(_) => EgzStatus::TooLarge,
        _ => EgzStatus::Domain,
    }
}

struct Fail(EgzStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(&e.to_string());
        Fail(status_of(&e))
    }
}

fn invalid(msg: &str) -> Fail {
    set_error(msg);
    Fail(EgzStatus::NullOrInvalidArgument)
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EgzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EgzStatus::Ok
        }
        Ok(Err(Fail(s))) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| p.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            set_error(&format!("internal error: {msg}"));
            EgzStatus::Internal
        }
    }
}

unsafe fn group_ref<'a>(g: *const EgzGroup) -> Result<&'a FiniteAbelianGroup, Fail> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| invalid("null group handle"))
}

unsafe fn out_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| invalid("null out-pointer"))
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(invalid("null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid("string argument is not UTF-8"))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn quantity(q: EgzQuantity) -> Quantity {
    match q {
        EgzQuantity::S => Quantity::S,
        EgzQuantity::Eta => Quantity::Eta,
    }
}

fn budget(max_nodes: u64, max_wall_ms: u64) -> SearchBudget {
    let mut b = SearchBudget::default();
    if max_nodes > 0 {
        b.max_nodes = max_nodes;
    }
    if max_wall_ms > 0 {
        b.max_wall = Duration::from_millis(max_wall_ms);
    }
    b
}

/// Message for the most recent failure on this thread, or an empty string.
///
/// The pointer stays valid until the next `egz_*` call on the same thread.
#[no_mangle]
pub extern "C" fn egz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn egz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a group spec such as `Z3^2xZ6`.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn egz_group_parse(spec: *const c_char, out: *mut *mut EgzGroup) -> EgzStatus {
    guard(|| {
        let out = out_mut(out)?;
        let g: FiniteAbelianGroup = str_arg(spec)?.parse()?;
        *out = Box::into_raw(Box::new(EgzGroup(g)));
        Ok(())
    })
}

/// Build a group from cyclic factor orders.
///
/// # Safety
/// `orders` must point to `len` readable values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn egz_group_new(orders: *const u64, len: usize, out: *mut *mut EgzGroup) -> EgzStatus {
    guard(|| {
        let out = out_mut(out)?;
        if orders.is_null() && len > 0 {
            return Err(invalid("null orders"));
        }
        let orders = if len == 0 { &[][..] } else { std::slice::from_raw_parts(orders, len) };
        *out = Box::into_raw(Box::new(EgzGroup(FiniteAbelianGroup::new(orders)?)));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn egz_group_free(g: *mut EgzGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Canonical primary form, e.g. `Z2xZ3^2` for `Z3xZ6`. Free with [`egz_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_group_render(g: *const EgzGroup, out: *mut *mut c_char) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        *out_mut(out)? = owned_string(g.to_string());
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_group_exponent(g: *const EgzGroup, out: *mut u64) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        let out = out_mut(out)?;
        *out = g.exponent_u64().ok_or_else(|| Error::TooLarge(g.to_string()))?;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_group_order(g: *const EgzGroup, out: *mut u64) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        let out = out_mut(out)?;
        *out = g.order_u64().ok_or_else(|| Error::TooLarge(g.to_string()))?;
        Ok(())
    })
}

/// Number of coordinates per element in [`egz_find_zero_sum`]: one per factor as written
/// in the string the group was parsed from.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn egz_group_coordinate_count(g: *const EgzGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.input_orders().len())
}

/// Exhaustive search for `s` or `η`. Zero budgets select the defaults (2e8 nodes, 15 minutes).
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_exact(
    g: *const EgzGroup,
    q: EgzQuantity,
    max_nodes: u64,
    max_wall_ms: u64,
    out: *mut *mut EgzSearchResult,
) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        let out = out_mut(out)?;
        let o = exact_value(g, quantity(q), budget(max_nodes, max_wall_ms))?;
        *out = Box::into_raw(Box::new(EgzSearchResult(o)));
        Ok(())
    })
}

/// Convenience wrapper: exact `s(G)` with default budgets; fails with `EGZ_STATUS_DOMAIN` if
/// the search did not complete.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_exact_s(g: *const EgzGroup, out: *mut u64) -> EgzStatus {
    exact_u64(g, Quantity::S, out)
}

/// As [`egz_exact_s`] for `η(G)`.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_exact_eta(g: *const EgzGroup, out: *mut u64) -> EgzStatus {
    exact_u64(g, Quantity::Eta, out)
}

unsafe fn exact_u64(g: *const EgzGroup, q: Quantity, out: *mut u64) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        let out = out_mut(out)?;
        let o = exact_value(g, q, SearchBudget::default())?;
        if o.status != SearchStatus::Exact {
            return Err(Error::Domain(format!("search for {q}({g}) stopped early at {}", o.value)).into());
        }
        *out = o.value;
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn egz_search_result_free(r: *mut EgzSearchResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// The computed value (a lower bound unless the status is exact). 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn egz_search_result_value(r: *const EgzSearchResult) -> u64 {
    r.as_ref().map_or(0, |r| r.0.value)
}

/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn egz_search_result_status(r: *const EgzSearchResult, out: *mut EgzSearchStatus) -> EgzStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| invalid("null result handle"))?;
        *out_mut(out)? = match r.0.status {
            SearchStatus::Exact => EgzSearchStatus::Exact,
            SearchStatus::LowerBoundOnly => EgzSearchStatus::LowerBoundOnly,
            SearchStatus::BudgetExhausted => EgzSearchStatus::BudgetExhausted,
        };
        Ok(())
    })
}

/// Full outcome as JSON, including extremal sequences. Free with [`egz_string_free`].
///
/// # Safety
/// `r` must be a live result handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_search_result_to_json(r: *const EgzSearchResult, out: *mut *mut c_char) -> EgzStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| invalid("null result handle"))?;
        let text = serde_json::to_string_pretty(&r.0).map_err(|e| Error::Domain(e.to_string()))?;
        *out_mut(out)? = owned_string(text);
        Ok(())
    })
}

/// Look for a zero-sum subsequence.
///
/// `coords` holds `len` elements, each as [`egz_group_coordinate_count`] consecutive
/// residues. When `exactly` is true the subsequence must have exactly `length` terms,
/// otherwise between 1 and `length`. On success `*found` is set; if a subsequence exists
/// and `witness` is non-null, the positions of its terms in the input are written to
/// `witness` (capacity `len`) and their number to `*witness_len`.
///
/// # Safety
/// `g` must be a live handle, `coords` must hold `len * coordinate_count` values, `found`
/// must be valid, and `witness`/`witness_len` must be null or valid for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn egz_find_zero_sum(
    g: *const EgzGroup,
    coords: *const u64,
    len: usize,
    exactly: bool,
    length: u64,
    found: *mut bool,
    witness: *mut usize,
    witness_len: *mut usize,
) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        let found = out_mut(found)?;
        let width = g.input_orders().len();
        let total = len.checked_mul(width).ok_or_else(|| invalid("sequence too long"))?;
        if coords.is_null() && total > 0 {
            return Err(invalid("null coordinates"));
        }
        let flat = if total == 0 { &[][..] } else { std::slice::from_raw_parts(coords, total) };
        let elems = flat
            .chunks(width)
            .map(|c| g.from_input_coords(c))
            .collect::<egz_core::Result<Vec<_>>>()?;
        let seq = Sequence::from_elements(g.clone(), elems.iter().cloned())?;
        let target = if exactly { LengthSpec::Exactly(length) } else { LengthSpec::AtMost(length) };
        let w = find_zero_sum(&seq, target)?;
        *found = w.is_some();
        if let (Some(w), false) = (w, witness.is_null()) {
            let wl = out_mut(witness_len)?;
            let mut need = w.sub_multiplicities.clone();
            let mut n = 0;
            for (i, e) in elems.iter().enumerate() {
                if let Some(m) = need.get_mut(e).filter(|m| **m > 0) {
                    *m -= 1;
                    *witness.add(n) = i;
                    n += 1;
                }
            }
            *wl = n;
        }
        Ok(())
    })
}

/// Every applicable bound with the best ones under `policy`, as JSON.
/// A non-positive `tol` selects the default gamma tolerance.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_best_bounds_json(
    g: *const EgzGroup,
    q: EgzQuantity,
    policy: EgzPolicy,
    tol: f64,
    out: *mut *mut c_char,
) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        let out = out_mut(out)?;
        let policy = match policy {
            EgzPolicy::None => Policy::None,
            EgzPolicy::RegistryOnly => Policy::RegistryOnly,
            EgzPolicy::AssumeAll => Policy::AssumeAll,
        };
        let tol = if tol > 0.0 { tol } else { egz_core::bounds::DEFAULT_GAMMA_TOL };
        let b = best_bounds(g, quantity(q), policy, tol)?;
        let text = serde_json::to_string_pretty(&b).map_err(|e| Error::Domain(e.to_string()))?;
        *out = owned_string(text);
        Ok(())
    })
}

/// Upper enclosure of `γ_{k,q}`; a non-positive `tol` selects the default.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn egz_naslund_gamma(k: u64, q: u64, tol: f64, out: *mut f64) -> EgzStatus {
    guard(|| {
        let out = out_mut(out)?;
        let tol = if tol > 0.0 { tol } else { egz_core::bounds::DEFAULT_GAMMA_TOL };
        *out = naslund_gamma(k, q, tol)?.gamma_upper;
        Ok(())
    })
}

/// Whether the built-in registry already establishes Property D for `g`.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_known_property_d(g: *const EgzGroup, out: *mut bool) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        *out_mut(out)? = known_property_d(g).is_known();
        Ok(())
    })
}

/// Decide Property D by search. Zero budgets select the defaults.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn egz_check_property_d(
    g: *const EgzGroup,
    max_nodes: u64,
    max_wall_ms: u64,
    out: *mut EgzVerdict,
) -> EgzStatus {
    guard(|| {
        let g = group_ref(g)?;
        let out = out_mut(out)?;
        *out = match check_property_d(g, budget(max_nodes, max_wall_ms))?.status {
            VerdictStatus::Holds => EgzVerdict::Holds,
            VerdictStatus::Fails => EgzVerdict::Fails,
            VerdictStatus::Unknown => EgzVerdict::Unknown,
        };
        Ok(())
    })
}
