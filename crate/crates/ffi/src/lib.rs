//! C ABI over `gl2orbits`.
//!
//! Groups are passed as opaque `Gl2Group` handles owned by the caller and
//! released with `gl2_group_free`. Every fallible function returns a
//! `Gl2Status`; on failure a message for the calling thread is available
//! from `gl2_last_error_message`. Strings returned by the library are freed
//! with `gl2_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gl2orbits::divchain::{self, Case1Scenario, Case2Scenario, DegreeParameter};
use gl2orbits::gl2::{self, Mat2, MatrixGroup};
use gl2orbits::modarith::PrimeModulus;
use gl2orbits::orbits::{orbit_decomposition, Vector2};
use gl2orbits::semisimplify::{classify_lemma31, semisimplification, Lemma31Case};
use gl2orbits::sweep::{self, SweepConfig};
use gl2orbits::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gl2Status {
    Ok = 0,
    NullPointer = 1,
    InvalidPrime = 2,
    InvalidArgument = 3,
    Singular = 4,
    NotUpperTriangular = 5,
    NotSubgroup = 6,
    InvalidScenario = 7,
    Config = 8,
    VerificationFailed = 9,
    Internal = 10,
}

/// Groups with a closed-form construction.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gl2NamedGroup {
    Borel = 0,
    SplitCartan = 1,
    NonsplitCartan = 2,
    Scalars = 3,
    Unipotent = 4,
    Trivial = 5,
}

/// Which branch of the upper-triangular trichotomy applies.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gl2TrichotomyCase {
    RepeatedEigenvalue = 1,
    NonCommutative = 2,
    Diagonalizable = 3,
}

/// Opaque handle to a finite subgroup of GL2(F_ell).
pub struct Gl2Group {
    inner: MatrixGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Gl2Status {
    match e {
        Error::NotPrime(_) | Error::ModulusOutOfRange(_) | Error::EvenPrime | Error::PrimeAboveBound { .. } => {
            Gl2Status::InvalidPrime
        }
        Error::Singular(_) => Gl2Status::Singular,
        Error::NotUpperTriangular => Gl2Status::NotUpperTriangular,
        Error::NotSubgroup => Gl2Status::NotSubgroup,
        Error::InvalidScenario(_) => Gl2Status::InvalidScenario,
        Error::Config(_) | Error::Json(_) => Gl2Status::Config,
        Error::Io(_) => Gl2Status::Internal,
        _ => Gl2Status::InvalidArgument,
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard<F>(body: F) -> Gl2Status
where
    F: FnOnce() -> Result<(), (Gl2Status, String)>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            Gl2Status::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            Gl2Status::Internal
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (Gl2Status, String)>;
}

impl<T> IntoFfi<T> for Result<T, Error> {
    fn ffi(self) -> Result<T, (Gl2Status, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null() -> (Gl2Status, String) {
    (Gl2Status::NullPointer, "null pointer argument".into())
}

unsafe fn group_ref<'a>(g: *const Gl2Group) -> Result<&'a MatrixGroup, (Gl2Status, String)> {
    g.as_ref().map(|h| &h.inner).ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (Gl2Status, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn degree(d: u64) -> Result<DegreeParameter, (Gl2Status, String)> {
    DegreeParameter::new(d).map_err(|e| (Gl2Status::InvalidArgument, e.to_string()))
}

fn boxed(g: MatrixGroup) -> *mut Gl2Group {
    Box::into_raw(Box::new(Gl2Group { inner: g }))
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn gl2_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a named group at `ell`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_named(ell: u64, kind: Gl2NamedGroup, out: *mut *mut Gl2Group) -> Gl2Status {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let m = PrimeModulus::new(ell).ffi()?;
        let g = match kind {
            Gl2NamedGroup::Borel => gl2::borel(m),
            Gl2NamedGroup::SplitCartan => gl2::split_cartan(m),
            Gl2NamedGroup::NonsplitCartan => gl2::nonsplit_cartan(m).ffi()?,
            Gl2NamedGroup::Scalars => gl2::scalars(m),
            Gl2NamedGroup::Unipotent => gl2::unipotent(m),
            Gl2NamedGroup::Trivial => gl2::trivial(m),
        };
        write_out(out, boxed(g))
    })
}

/// Closure of `count` generators given as row-major quadruples `a, b, c, d`.
///
/// # Safety
/// `entries` must point to `4 * count` readable values (or be NULL when
/// `count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_generate(
    ell: u64,
    entries: *const i64,
    count: usize,
    out: *mut *mut Gl2Group,
) -> Gl2Status {
    guard(|| {
        if out.is_null() || (entries.is_null() && count > 0) {
            return Err(null());
        }
        let m = PrimeModulus::new(ell).ffi()?;
        let flat = if count == 0 { &[][..] } else { std::slice::from_raw_parts(entries, 4 * count) };
        let gens = flat
            .chunks_exact(4)
            .map(|e| Mat2::new(e[0], e[1], e[2], e[3], m))
            .collect::<Result<Vec<_>, _>>()
            .ffi()?;
        let g = gl2::closure(m, &gens).ffi()?;
        write_out(out, boxed(g))
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `group` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_free(group: *mut Gl2Group) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_order(group: *const Gl2Group, out: *mut u64) -> Gl2Status {
    guard(|| write_out(out, group_ref(group)?.order()))
}

/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_contains(
    group: *const Gl2Group,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    out: *mut bool,
) -> Gl2Status {
    guard(|| {
        let g = group_ref(group)?;
        let found = match Mat2::new(a, b, c, d, g.modulus()) {
            Ok(x) => g.contains(&x),
            Err(Error::Singular(_)) => false,
            Err(e) => return Err((status_of(&e), e.to_string())),
        };
        write_out(out, found)
    })
}

/// Number of orbits of the group on the nonzero vectors.
///
/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_orbit_count(group: *const Gl2Group, out: *mut u64) -> Gl2Status {
    guard(|| write_out(out, orbit_decomposition(group_ref(group)?).orbits.len() as u64))
}

/// Size of the orbit of the column vector `(x, y)`.
///
/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_orbit_size(group: *const Gl2Group, x: i64, y: i64, out: *mut u64) -> Gl2Status {
    guard(|| {
        let g = group_ref(group)?;
        let v = Vector2::new(x, y, g.modulus());
        if v.is_zero() {
            return Err((Gl2Status::InvalidArgument, Error::ZeroVector.to_string()));
        }
        write_out(out, gl2orbits::orbits::orbit(g, v).ffi()?.size)
    })
}

/// Group of diagonal parts of an upper-triangular group.
///
/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_semisimplification(group: *const Gl2Group, out: *mut *mut Gl2Group) -> Gl2Status {
    guard(|| {
        let gss = semisimplification(group_ref(group)?).ffi()?;
        write_out(out, boxed(gss))
    })
}

/// Classifies an upper-triangular group; `contained` reports whether its
/// semisimplification is a subgroup of it.
///
/// # Safety
/// `group` must be a live handle; `case_out` and `contained` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_group_trichotomy(
    group: *const Gl2Group,
    case_out: *mut Gl2TrichotomyCase,
    contained: *mut bool,
) -> Gl2Status {
    guard(|| {
        let res = classify_lemma31(group_ref(group)?).ffi()?;
        let case = match res.witness.case() {
            Lemma31Case::RepeatedEigenvalue => Gl2TrichotomyCase::RepeatedEigenvalue,
            Lemma31Case::NonCommutative => Gl2TrichotomyCase::NonCommutative,
            Lemma31Case::Diagonalizable => Gl2TrichotomyCase::Diagonalizable,
        };
        write_out(case_out, case)?;
        write_out(contained, res.contained_in_g)
    })
}

/// Verifies the split-CM divisibility chain for `G` with CM image `G'`.
/// `passed` is set when every orbit size times `864·d` is divisible by
/// `ell − 1` and each intermediate step holds.
///
/// # Safety
/// Both handles must be live; `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_verify_split_cm(
    g: *const Gl2Group,
    gp: *const Gl2Group,
    d: u64,
    passed: *mut bool,
) -> Gl2Status {
    guard(|| {
        let s = Case1Scenario {
            g: group_ref(g)?.clone(),
            gp: group_ref(gp)?.clone(),
            d: degree(d)?,
        };
        let cert = divchain::verify_case1_chain(&s).ffi()?;
        write_out(passed, cert.passes())
    })
}

/// Verifies the chain for a group whose semisimplification has scalar
/// sixth powers.
///
/// # Safety
/// `g` must be live; `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_verify_scalar_sixth_powers(g: *const Gl2Group, d: u64, passed: *mut bool) -> Gl2Status {
    guard(|| {
        let s = Case2Scenario {
            g: group_ref(g)?.clone(),
            d: degree(d)?,
        };
        let cert = divchain::verify_case2_chain(&s).ffi()?;
        write_out(passed, cert.passes())
    })
}

/// Sets `holds` to whether `ell + 1 | 12·w·f`.
///
/// # Safety
/// `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_inert_bound_check(ell: u64, w: u64, f: u64, rho_order: u64, holds: *mut bool) -> Gl2Status {
    guard(|| {
        let m = PrimeModulus::new(ell).ffi()?;
        write_out(holds, divchain::inert_bound_check(m, w, f, rho_order).ffi()?)
    })
}

/// Checks that the non-split Cartan acts simply transitively on nonzero vectors.
///
/// # Safety
/// `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_nonsplit_orbit_check(ell: u64, holds: *mut bool) -> Gl2Status {
    guard(|| {
        let m = PrimeModulus::new(ell).ffi()?;
        write_out(holds, divchain::nonsplit_orbit_check(m).ffi()?)
    })
}

/// Runs a sweep described by a JSON configuration and returns the JSON
/// report through `report_out` (free with `gl2_string_free`). Missing
/// fields take their defaults. Returns `VerificationFailed` when the sweep
/// completes with failures; the report is still written.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `report_out` writable.
#[no_mangle]
pub unsafe extern "C" fn gl2_sweep_run_json(config_json: *const c_char, report_out: *mut *mut c_char) -> Gl2Status {
    let mut failed = false;
    let status = guard(|| {
        if config_json.is_null() || report_out.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(config_json)
            .to_str()
            .map_err(|e| (Gl2Status::Config, e.to_string()))?;
        let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| (Gl2Status::Config, e.to_string()))?;
        let report = sweep::run(&cfg).ffi()?;
        failed = !report.passed();
        let json = CString::new(report.to_json().ffi()?).map_err(|e| (Gl2Status::Internal, e.to_string()))?;
        write_out(report_out, json.into_raw())
    });
    if status == Gl2Status::Ok && failed {
        set_last_error("sweep reported failures".into());
        return Gl2Status::VerificationFailed;
    }
    status
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gl2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
