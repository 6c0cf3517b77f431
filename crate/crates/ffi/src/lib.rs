//! C ABI for the tkindex engine.
//!
//! Objects are opaque handles created by `tk_*_new` (or returned through an
//! out-pointer) and released with the matching `tk_*_free`. Every fallible
//! call returns a [`TkStatus`]; on failure the message is available from
//! [`tk_last_error`] on the same thread until the next failing call.
//! Strings returned through `char **` are owned by the caller and released
//! with [`tk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_rational::Rational64;
use tkindex::cli::run::{exit_code, render, run_queries, Format, RunOptions};
use tkindex::cli::schema::{ExprDto, GenCharDto};
use tkindex::cli::{parse_problem, Problem};
use tkindex::error::Error;
use tkindex::genchar::{index_thom, GenChar, Window};
use tkindex::ktheory::{flag_index, in_dm, in_f, Membership};
use tkindex::lattice::{enumerate_flags, CharacterGroup, GModule, PolarizingVector};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed input (bad JSON, unknown names, out-of-range values).
    Parse = 3,
    /// A computation was not possible (not summable, not periodic, ...).
    Compute = 4,
    /// The engine panicked; this is a bug.
    Panic = 5,
}

/// Membership verdicts.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TkVerdict {
    ProvedIn = 0,
    ProvedOut = 1,
    Unknown = 2,
}

/// Output formats for [`tk_run_problem`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TkFormat {
    Json = 0,
    Text = 1,
    Pretty = 2,
}

pub struct TkGroup {
    inner: CharacterGroup,
}

pub struct TkModule {
    inner: GModule,
}

pub struct TkGenChar {
    inner: GenChar,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TkStatus {
    if e.is_parse_error()
        || matches!(
            e,
            Error::InvalidGroup(_) | Error::InvalidWeight(_) | Error::ZeroDifferential(_) | Error::DimensionMismatch { .. }
    ) {
        TkStatus::Parse
    } else {
        TkStatus::Compute
    }
}

enum Failure {
    Status(TkStatus, String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn null() -> Failure {
    Failure::Status(TkStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TkStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Engine(e))) => {
            set_error(format!("{}: {e}", e.code()));
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TkStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, n: usize) -> Result<&'a [T], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s.replace('\0', " ")).expect("interior nul removed").into_raw();
    Ok(())
}

/// Message of the last failing call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `ℤ^rank ⊕ ⊕ ℤ/torsion[i]`.
///
/// # Safety
/// `torsion` must point to `n_torsion` values (or be NULL when zero) and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_group_new(
    rank: usize,
    torsion: *const i64,
    n_torsion: usize,
    out: *mut *mut TkGroup,
) -> TkStatus {
    guard(|| {
        let t = slice(torsion, n_torsion)?.to_vec();
        let inner = CharacterGroup::new(rank, t)?;
        write_out(out, TkGroup { inner })
    })
}

/// # Safety
/// `g` must be NULL or a live handle from [`tk_group_new`].
#[no_mangle]
pub unsafe extern "C" fn tk_group_free(g: *mut TkGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// A module with `n_weights` weights. `free` holds `n_weights × rank`
/// integers row by row and `torsion` holds `n_weights × (number of cyclic
/// factors)` residues (NULL when the group has none).
///
/// # Safety
/// Pointers must be valid for the stated lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_module_new(
    group: *const TkGroup,
    free: *const i64,
    torsion: *const i64,
    n_weights: usize,
    trivial_real_dim: usize,
    out: *mut *mut TkModule,
) -> TkStatus {
    guard(|| {
        let g = &handle(group)?.inner;
        let r = g.free_rank();
        let t = g.torsion_orders().len();
        let free = slice(free, n_weights * r)?;
        let tors = slice(torsion, n_weights * t)?;
        let weights = (0..n_weights)
            .map(|i| g.weight(free[i * r..(i + 1) * r].to_vec(), tors[i * t..(i + 1) * t].to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        let inner = GModule::new(g, weights, trivial_real_dim)?;
        write_out(out, TkModule { inner })
    })
}

/// # Safety
/// `m` must be NULL or a live module handle.
#[no_mangle]
pub unsafe extern "C" fn tk_module_free(m: *mut TkModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Index of the Thom class pushed by `β = num[i]/den[i]`.
///
/// # Safety
/// `num` and `den` must hold `rank` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_index_thom(
    module: *const TkModule,
    num: *const i64,
    den: *const i64,
    out: *mut *mut TkGenChar,
) -> TkStatus {
    guard(|| {
        let v = &handle(module)?.inner;
        let r = v.group().free_rank();
        let (num, den) = (slice(num, r)?, slice(den, r)?);
        if den.contains(&0) {
            return Err(Failure::Status(TkStatus::Parse, "zero denominator in beta".into()));
        }
        let beta = PolarizingVector::new(num.iter().zip(den).map(|(&p, &q)| Rational64::new(p, q)).collect());
        let inner = index_thom(v, &beta)?;
        write_out(out, TkGenChar { inner })
    })
}

/// Index of the `k`-th enumerated flag generator.
///
/// # Safety
/// `module` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_index_flag(module: *const TkModule, k: usize, out: *mut *mut TkGenChar) -> TkStatus {
    guard(|| {
        let v = &handle(module)?.inner;
        let flag = enumerate_flags(v, k + 1)
            .into_iter()
            .nth(k)
            .ok_or_else(|| Failure::Status(TkStatus::Parse, format!("module has no flag with index {k}")))?;
        let inner = flag_index(v, &flag)?;
        write_out(out, TkGenChar { inner })
    })
}

/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tk_genchar_free(c: *mut TkGenChar) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Exact coefficient at the weight `(free, torsion)`.
///
/// # Safety
/// `free` must hold `rank` values and `torsion` one residue per cyclic
/// factor; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_genchar_coefficient(
    c: *const TkGenChar,
    free: *const i64,
    torsion: *const i64,
    out: *mut i64,
) -> TkStatus {
    guard(|| {
        let phi = &handle(c)?.inner;
        let g = phi.group();
        let w = g.weight(
            slice(free, g.free_rank())?.to_vec(),
            slice(torsion, g.torsion_orders().len())?.to_vec(),
        )?;
        if out.is_null() {
            return Err(null());
        }
        *out = phi.coefficient_at(&w);
        Ok(())
    })
}

/// The symbolic form as a JSON `literal` expression.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_genchar_to_json(c: *const TkGenChar, out: *mut *mut c_char) -> TkStatus {
    guard(|| {
        let phi = &handle(c)?.inner;
        let json = serde_json::to_string(&ExprDto::Literal(GenCharDto::of(phi))).expect("plain data serializes");
        write_string(out, json)
    })
}

/// Truncation to the box `[lo[i], hi[i]]` rendered as text
/// (`c * x^[..] + ...`).
///
/// # Safety
/// `lo` and `hi` must hold `rank` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_genchar_truncate(
    c: *const TkGenChar,
    lo: *const i64,
    hi: *const i64,
    out: *mut *mut c_char,
) -> TkStatus {
    guard(|| {
        let phi = &handle(c)?.inner;
        let r = phi.group().free_rank();
        let w = Window::new(slice(lo, r)?.to_vec(), slice(hi, r)?.to_vec())?;
        write_string(out, phi.truncate(&w).render_text())
    })
}

fn verdict(m: &Membership) -> TkVerdict {
    match m {
        Membership::ProvedIn => TkVerdict::ProvedIn,
        Membership::ProvedOut { .. } => TkVerdict::ProvedOut,
        Membership::Unknown { .. } => TkVerdict::Unknown,
    }
}

/// Membership of `c` in the Dahmen–Micchelli module of `module`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_check_dm(module: *const TkModule, c: *const TkGenChar, out: *mut TkVerdict) -> TkStatus {
    guard(|| {
        let m = in_dm(&handle(c)?.inner, &handle(module)?.inner);
        if out.is_null() {
            return Err(null());
        }
        *out = verdict(&m);
        Ok(())
    })
}

/// Membership of `c` in `𝓕_G(module)`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tk_check_f(module: *const TkModule, c: *const TkGenChar, out: *mut TkVerdict) -> TkStatus {
    guard(|| {
        let m = in_f(&handle(c)?.inner, &handle(module)?.inner);
        if out.is_null() {
            return Err(null());
        }
        *out = verdict(&m);
        Ok(())
    })
}

/// Runs every query of a problem document and returns the rendered output.
/// `exit_code_out` receives the code the command-line tool would exit with.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` and `exit_code_out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tk_run_problem(
    json: *const c_char,
    format: TkFormat,
    out: *mut *mut c_char,
    exit_code_out: *mut i32,
) -> TkStatus {
    guard(|| {
        if json.is_null() || exit_code_out.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure::Status(TkStatus::InvalidUtf8, e.to_string()))?;
        let problem: Problem = parse_problem(text)?;
        let format = match format {
            TkFormat::Json => Format::Json,
            TkFormat::Text => Format::Text,
            TkFormat::Pretty => Format::Pretty,
        };
        let outcomes = run_queries(
            &problem,
            &RunOptions {
                format,
                ..RunOptions::default()
            },
        );
        let (stdout, stderr) = render(&outcomes, format);
        *exit_code_out = exit_code(&outcomes);
        write_string(out, stdout + &stderr)
    })
}
