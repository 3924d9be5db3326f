//! C ABI for tf-figa.
//!
//! Signals and lattices cross the boundary as opaque handles that the caller
//! releases with the matching `*_free` function. Every fallible call returns a
//! [`TfStatus`]; on failure the message is available from [`tf_last_error`]
//! on the same thread. Complex data is passed as interleaved `(re, im)`
//! doubles. Strings returned by the library are released with
//! [`tf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use tf_figa::config::RunConfig;
use tf_figa::figa::figa_check;
use tf_figa::frames::{canonical_dual, frame_bounds};
use tf_figa::lattice::adjoint_lattice;
use tf_figa::report::{emit_table, Format};
use tf_figa::runner::{run, RunOptions};
use tf_figa::{Error, GroupParams, Lattice, Signal, C64};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LatticeLiteral = 3,
    NotAFrame = 4,
    Config = 5,
    Io = 6,
    BufferTooSmall = 7,
    Internal = 8,
    Panic = 9,
}

/// A signal on ℤ_N^d.
pub struct TfSignal(Signal);

/// A subgroup of ℤ_N^d × ℤ_N^d.
pub struct TfLattice(Lattice);

/// Both sides of the fundamental identity and their residuals.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct TfFigaResult {
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidParams(_)
            | Error::DimensionMismatch { .. }
            | Error::ParamsMismatch { .. }
            | Error::EmptyGenerators
            | Error::ExponentOutOfRange(_)
            | Error::StepDoesNotDivide { .. }
            | Error::ZeroWindow
            | Error::EmptyProbes
            | Error::InvalidGrid(_) => TfStatus::InvalidArgument,
            Error::LatticeLiteral(_) => TfStatus::LatticeLiteral,
            Error::NotAFrame { .. } => TfStatus::NotAFrame,
            Error::Config(_) | Error::UnsupportedFormat(_) => TfStatus::Config,
            Error::Io(_) => TfStatus::Io,
            Error::EigenSolver(_) => TfStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TfStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TfStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(TfStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure(TfStatus::Internal, "string contains a nul byte".into()))
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn tf_status_message(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer argument",
        2 => c"invalid argument",
        3 => c"malformed lattice literal",
        4 => c"window does not generate a frame",
        5 => c"invalid configuration",
        6 => c"i/o error",
        7 => c"output buffer too small",
        8 => c"internal error",
        9 => c"internal panic",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn boxed_signal(out: *mut *mut TfSignal, s: Signal) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { out.write(Box::into_raw(Box::new(TfSignal(s)))) };
    Ok(())
}

fn boxed_lattice(out: *mut *mut TfLattice, l: Lattice) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { out.write(Box::into_raw(Box::new(TfLattice(l)))) };
    Ok(())
}

/// Signal on ℤ_n^d from `len` complex values stored as interleaved doubles
/// (`2 * len` entries), in row-major order.
///
/// # Safety
/// `values` must point to `2 * len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_signal_from_values(
    n: usize,
    d: usize,
    values: *const f64,
    len: usize,
    out: *mut *mut TfSignal,
) -> TfStatus {
    guard(|| {
        let p = GroupParams::new(n, d)?;
        if values.is_null() {
            return Err(null("values"));
        }
        let raw = std::slice::from_raw_parts(values, 2 * len);
        let vals = raw.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
        boxed_signal(out, Signal::new(p, vals)?)
    })
}

/// Seeded signal with standard complex normal entries.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_signal_random(n: usize, d: usize, seed: u64, out: *mut *mut TfSignal) -> TfStatus {
    guard(|| boxed_signal(out, Signal::random(GroupParams::new(n, d)?, seed)))
}

/// Unit-norm periodized Gaussian.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_signal_gaussian(n: usize, d: usize, out: *mut *mut TfSignal) -> TfStatus {
    guard(|| boxed_signal(out, Signal::gaussian(GroupParams::new(n, d)?)))
}

/// Number of complex entries, or 0 for NULL.
///
/// # Safety
/// `signal` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tf_signal_len(signal: *const TfSignal) -> usize {
    signal.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the values into `out` as interleaved doubles. `capacity` counts
/// complex entries.
///
/// # Safety
/// `signal` must be a live handle; `out` must hold `2 * capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn tf_signal_copy_values(signal: *const TfSignal, out: *mut f64, capacity: usize) -> TfStatus {
    guard(|| {
        let s = &borrow(signal, "signal")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        if capacity < s.len() {
            return Err(Failure(
                TfStatus::BufferTooSmall,
                format!("buffer holds {capacity} values, signal has {}", s.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(out, 2 * s.len());
        for (c, v) in dst.chunks_exact_mut(2).zip(s.values()) {
            c[0] = v.re;
            c[1] = v.im;
        }
        Ok(())
    })
}

/// # Safety
/// `signal` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tf_signal_free(signal: *mut TfSignal) {
    if !signal.is_null() {
        drop(Box::from_raw(signal));
    }
}

/// Parses a lattice literal such as `"N=12;d=1;gens=(3,0),(0,4)"`.
///
/// # Safety
/// `literal` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_lattice_parse(literal: *const c_char, out: *mut *mut TfLattice) -> TfStatus {
    guard(|| {
        let text = read_str(literal, "literal")?;
        boxed_lattice(out, text.parse::<Lattice>()?)
    })
}

/// Number of lattice points, or 0 for NULL.
///
/// # Safety
/// `lattice` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tf_lattice_cardinality(lattice: *const TfLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.cardinality())
}

/// The adjoint lattice as a new handle.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_lattice_adjoint(lattice: *const TfLattice, out: *mut *mut TfLattice) -> TfStatus {
    guard(|| boxed_lattice(out, adjoint_lattice(&borrow(lattice, "lattice")?.0)))
}

/// Canonical literal of the lattice; release with [`tf_string_free`].
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_lattice_literal(lattice: *const TfLattice, out: *mut *mut c_char) -> TfStatus {
    guard(|| {
        let s = into_c_string(borrow(lattice, "lattice")?.0.literal())?;
        write_out(out, s, "out")
    })
}

/// # Safety
/// `lattice` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tf_lattice_free(lattice: *mut TfLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Evaluates both sides of the fundamental identity for `(f1, f2, g1, g2)`
/// on `lattice`.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_figa_check(
    f1: *const TfSignal,
    f2: *const TfSignal,
    g1: *const TfSignal,
    g2: *const TfSignal,
    lattice: *const TfLattice,
    out: *mut TfFigaResult,
) -> TfStatus {
    guard(|| {
        let r = figa_check(
            &borrow(f1, "f1")?.0,
            &borrow(f2, "f2")?.0,
            &borrow(g1, "g1")?.0,
            &borrow(g2, "g2")?.0,
            &borrow(lattice, "lattice")?.0,
        )?;
        let result = TfFigaResult {
            lhs_re: r.lhs.re,
            lhs_im: r.lhs.im,
            rhs_re: r.rhs.re,
            rhs_im: r.rhs.im,
            abs_residual: r.abs_residual,
            rel_residual: r.rel_residual,
        };
        write_out(out, result, "out")
    })
}

/// Optimal frame bounds of the Gabor system of `window` over `lattice`.
///
/// # Safety
/// Handles must be live; `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_frame_bounds(
    window: *const TfSignal,
    lattice: *const TfLattice,
    lower: *mut f64,
    upper: *mut f64,
) -> TfStatus {
    guard(|| {
        let b = frame_bounds(&borrow(window, "window")?.0, &borrow(lattice, "lattice")?.0)?;
        write_out(lower, b.lower, "lower")?;
        write_out(upper, b.upper, "upper")
    })
}

/// Canonical dual window; fails with `TF_STATUS_NOT_A_FRAME` when the system
/// is not a frame.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_canonical_dual(
    window: *const TfSignal,
    lattice: *const TfLattice,
    out: *mut *mut TfSignal,
) -> TfStatus {
    guard(|| {
        let dual = canonical_dual(&borrow(window, "window")?.0, &borrow(lattice, "lattice")?.0)?;
        boxed_signal(out, dual)
    })
}

/// Runs a JSON run configuration and returns the JSON report, byte-identical
/// to the CLI's. `base_dir` resolves `file:` signal specs and may be NULL
/// for the working directory. `all_pass` may be NULL.
///
/// # Safety
/// Strings must be NUL-terminated; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_run_config(
    config_json: *const c_char,
    base_dir: *const c_char,
    tolerance_scale: f64,
    report: *mut *mut c_char,
    all_pass: *mut bool,
) -> TfStatus {
    guard(|| {
        let config = RunConfig::from_json(read_str(config_json, "config_json")?)?;
        let base = if base_dir.is_null() { PathBuf::from(".") } else { PathBuf::from(read_str(base_dir, "base_dir")?) };
        let opts = RunOptions { tolerance_scale, base_dir: base };
        let result = run(&config, &opts)?;
        let bytes = emit_table(&result, Format::Json)?;
        let text = String::from_utf8(bytes).map_err(|_| Failure(TfStatus::Internal, "report is not UTF-8".into()))?;
        if report.is_null() {
            return Err(null("report"));
        }
        if !all_pass.is_null() {
            all_pass.write(result.all_pass);
        }
        report.write(into_c_string(text)?);
        Ok(())
    })
}
