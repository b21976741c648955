//! C interface to `orbm`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the
//! matching `*_free` function. Every fallible call returns an [`OrbmStatus`];
//! the message of the last failure on the calling thread is available from
//! [`orbm_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use orbm::disk::{simulate, DiskPath};
use orbm::harmonic::{hitting_test, hmu_to_theta, theta_to_hmu, BoundaryField, FieldKind, HarmonicPair};
use orbm::quad::Verdict;
use orbm::{Error, Tolerances};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The input lies outside the class the operation needs.
    NotInClass = 3,
    Inconclusive = 4,
    InternalConsistency = 5,
    Simulation = 6,
    BufferTooSmall = 7,
    Panic = 8,
    Other = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbmFieldKind {
    Angle = 0,
    Density = 1,
    Generic = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbmVerdict {
    Finite = 0,
    Divergent = 1,
    Inconclusive = 2,
}

/// Sampled boundary function.
pub struct OrbmField(BoundaryField);

/// Density and rotation number.
pub struct OrbmPair(HarmonicPair);

/// Simulated path.
pub struct OrbmPath(DiskPath);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OrbmStatus {
    match e {
        Error::InvalidInput(_) | Error::InvalidGrid(_) | Error::InvalidMobius(_) | Error::InvalidScales { .. } | Error::InvalidMeasure(_) | Error::Config(_) => {
            OrbmStatus::InvalidArgument
        }
        Error::DegenerateAngle(_)
        | Error::NotInT
        | Error::BranchPointAtBoundary { .. }
        | Error::NotInR { .. }
        | Error::NotInH { .. }
        | Error::ViolatesLipschitzCondition(_)
        | Error::NearSingularFlow(_)
        | Error::NotUnivalent(_) => OrbmStatus::NotInClass,
        Error::Inconclusive(_) => OrbmStatus::Inconclusive,
        Error::InternalConsistencyFailure(_) => OrbmStatus::InternalConsistency,
        Error::UseErbmModule | Error::InvalidStep(..) | Error::OutsideDomain | Error::PushbackFailure => OrbmStatus::Simulation,
        _ => OrbmStatus::Other,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), OrbmStatus>) -> OrbmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrbmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside orbm".into());
            OrbmStatus::Panic
        }
    }
}

fn lib<T>(r: orbm::Result<T>) -> Result<T, OrbmStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null() -> OrbmStatus {
    set_error("null pointer argument".into());
    OrbmStatus::NullPointer
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), OrbmStatus> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn orbm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn orbm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a field from `n` samples at angles `2 pi j / n`.
///
/// # Safety
/// `values` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orbm_field_new(kind: OrbmFieldKind, values: *const f64, n: usize, out: *mut *mut OrbmField) -> OrbmStatus {
    guard(|| {
        if values.is_null() {
            return Err(null());
        }
        let v = std::slice::from_raw_parts(values, n).to_vec();
        let kind = match kind {
            OrbmFieldKind::Angle => FieldKind::Angle,
            OrbmFieldKind::Density => FieldKind::Density,
            OrbmFieldKind::Generic => FieldKind::Generic,
        };
        let field = lib(BoundaryField::new(kind, v))?;
        put(out, OrbmField(field))
    })
}

/// # Safety
/// `field` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orbm_field_free(field: *mut OrbmField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn orbm_field_len(field: *const OrbmField) -> usize {
    field.as_ref().map_or(0, |f| f.0.n_grid())
}

/// Copies the samples into `out`, which holds `cap` doubles.
///
/// # Safety
/// `field` must be a live handle; `out` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn orbm_field_values(field: *const OrbmField, out: *mut f64, cap: usize) -> OrbmStatus {
    guard(|| {
        let f = field.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let v = f.0.values();
        if cap < v.len() {
            set_error(format!("buffer holds {cap} values, {} needed", v.len()));
            return Err(OrbmStatus::BufferTooSmall);
        }
        std::ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
        Ok(())
    })
}

/// Density pair of an angle field.
///
/// # Safety
/// `theta` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orbm_theta_to_hmu(theta: *const OrbmField, out: *mut *mut OrbmPair) -> OrbmStatus {
    guard(|| {
        let th = theta.as_ref().ok_or_else(null)?;
        let p = lib(theta_to_hmu(&th.0, &Tolerances::default()))?;
        put(out, OrbmPair(p))
    })
}

/// Boundary angle field of a pair on `n_grid` samples.
///
/// # Safety
/// `pair` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orbm_hmu_to_theta(pair: *const OrbmPair, n_grid: usize, out: *mut *mut OrbmField) -> OrbmStatus {
    guard(|| {
        let p = pair.as_ref().ok_or_else(null)?;
        let f = lib(hmu_to_theta(&p.0, n_grid, &Tolerances::default()))?;
        put(out, OrbmField(f))
    })
}

/// # Safety
/// `pair` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orbm_pair_free(pair: *mut OrbmPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// # Safety
/// `pair` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn orbm_pair_mu0(pair: *const OrbmPair) -> f64 {
    pair.as_ref().map_or(f64::NAN, |p| p.0.mu0)
}

/// Density, its conjugate, the angle and the rotation field at `x + i y`.
/// Any output pointer may be NULL.
///
/// # Safety
/// `pair` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn orbm_pair_eval(pair: *const OrbmPair, x: f64, y: f64, h: *mut f64, h_conj: *mut f64, theta: *mut f64, mu: *mut f64) -> OrbmStatus {
    guard(|| {
        let p = &pair.as_ref().ok_or_else(null)?.0;
        let z = Complex64::new(x, y);
        if !(z.norm() < 1.0) {
            set_error("evaluation point must lie in the open disk".into());
            return Err(OrbmStatus::InvalidArgument);
        }
        for (ptr, v) in [(h, p.h(z)), (h_conj, p.h.conj_eval(z)), (theta, p.theta(z)), (mu, p.mu(z))] {
            if let Some(slot) = ptr.as_mut() {
                *slot = v;
            }
        }
        Ok(())
    })
}

/// Radial hitting classification at boundary angle `angle`. `value` receives
/// the finite estimate or the divergence rate.
///
/// # Safety
/// `pair` must be a live handle; `verdict` and `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orbm_hitting_test(pair: *const OrbmPair, angle: f64, r_min: f64, verdict: *mut OrbmVerdict, value: *mut f64) -> OrbmStatus {
    guard(|| {
        let p = pair.as_ref().ok_or_else(null)?;
        if verdict.is_null() || value.is_null() {
            return Err(null());
        }
        let (v, x) = match lib(hitting_test(&p.0, angle, r_min, &Tolerances::default()))? {
            Verdict::Finite { estimate } => (OrbmVerdict::Finite, estimate),
            Verdict::Divergent { rate } => (OrbmVerdict::Divergent, rate),
            Verdict::Inconclusive { partial, .. } => (OrbmVerdict::Inconclusive, partial),
        };
        *verdict = v;
        *value = x;
        Ok(())
    })
}

/// Simulates the reflected process from `x0_re + i x0_im` up to `horizon`.
///
/// # Safety
/// `theta` must be a live angle-field handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orbm_simulate(theta: *const OrbmField, x0_re: f64, x0_im: f64, dt: f64, horizon: f64, seed: u64, out: *mut *mut OrbmPath) -> OrbmStatus {
    guard(|| {
        let th = theta.as_ref().ok_or_else(null)?;
        let path = lib(simulate(&th.0, Complex64::new(x0_re, x0_im), dt, horizon, seed, &Tolerances::default()))?;
        put(out, OrbmPath(path))
    })
}

/// # Safety
/// `path` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orbm_path_free(path: *mut OrbmPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Number of samples, including the start.
///
/// # Safety
/// `path` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn orbm_path_len(path: *const OrbmPath) -> usize {
    path.as_ref().map_or(0, |p| p.0.len())
}

/// Copies interleaved `(x, y)` positions into `xy` (room for `cap` doubles)
/// and, when `local_time` is not NULL, the local time into it (room for
/// `cap / 2` doubles).
///
/// # Safety
/// `path` must be a live handle; the buffers must have the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn orbm_path_samples(path: *const OrbmPath, xy: *mut f64, local_time: *mut f64, cap: usize) -> OrbmStatus {
    guard(|| {
        let p = &path.as_ref().ok_or_else(null)?.0;
        if xy.is_null() {
            return Err(null());
        }
        if cap < 2 * p.len() {
            set_error(format!("buffer holds {cap} values, {} needed", 2 * p.len()));
            return Err(OrbmStatus::BufferTooSmall);
        }
        let xy = std::slice::from_raw_parts_mut(xy, 2 * p.len());
        for (slot, z) in xy.chunks_exact_mut(2).zip(&p.positions) {
            slot[0] = z.re;
            slot[1] = z.im;
        }
        if !local_time.is_null() {
            std::ptr::copy_nonoverlapping(p.local_time.as_ptr(), local_time, p.len());
        }
        Ok(())
    })
}
