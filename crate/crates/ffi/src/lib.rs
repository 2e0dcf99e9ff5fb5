//! C interface to the `schubert` crate.
//!
//! Every function returns a [`SchubertErrorCode`]. On failure a message is
//! kept per thread and can be read with [`schubert_last_error_message`].
//! Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::ToPrimitive;
use schubert::criterion::{assess_adaptive, Assertions, Status};
use schubert::partition::SchubertProblem;
use schubert::report::{parse_partition, parse_problem, parse_shape};
use schubert::tree::ChoiceTree;
use schubert::Error;

/// Result of every call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SchubertErrorCode {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Overflow = 4,
    BufferTooSmall = 5,
    Internal = 6,
    Panic = 7,
}

/// Criterion outcome.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SchubertVerdict {
    /// Galois group at least alternating.
    Pass = 0,
    /// Pass, relying on asserted subproblems.
    PassConditional = 1,
    /// The criterion does not apply.
    Fail = 2,
}

/// A parsed zero-dimensional Schubert problem.
pub struct SchubertProblemHandle(SchubertProblem);

/// A choice tree built from a problem.
pub struct SchubertTreeHandle(ChoiceTree);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

struct Failure(SchubertErrorCode, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CountOverflow => SchubertErrorCode::Overflow,
            ref e if e.is_input_error() => SchubertErrorCode::InvalidInput,
            _ => SchubertErrorCode::Internal,
        };
        Failure(code, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SchubertErrorCode {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SchubertErrorCode::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside schubert".into());
            SchubertErrorCode::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            SchubertErrorCode::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            SchubertErrorCode::InvalidUtf8,
            format!("{what} is not UTF-8"),
        )
    })
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(SchubertErrorCode::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(SchubertErrorCode::NullPointer, "handle is null".into()))
}

fn to_u64(n: num_bigint::BigUint) -> Result<u64, Failure> {
    n.to_u64().ok_or_else(|| {
        Failure(
            SchubertErrorCode::Overflow,
            format!("{n} does not fit in 64 bits"),
        )
    })
}

/// Copies `s` plus a terminating NUL into `buf` when it fits. `needed`
/// receives the full length including the NUL.
unsafe fn write_text(
    s: &str,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> Result<(), Failure> {
    if let Some(n) = needed.as_mut() {
        *n = s.len() + 1;
    }
    if buf.is_null() || len < s.len() + 1 {
        return Err(Failure(
            SchubertErrorCode::BufferTooSmall,
            format!("need {} bytes", s.len() + 1),
        ));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Parses `conditions` such as `"(2,1)^2 (1)^3"` on `shape` such as `"G(3,6)"`.
///
/// # Safety
/// `shape` and `conditions` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn schubert_problem_parse(
    shape: *const c_char,
    conditions: *const c_char,
    out_problem: *mut *mut SchubertProblemHandle,
) -> SchubertErrorCode {
    guard(|| {
        let slot = out(out_problem, "out_problem")?;
        *slot = std::ptr::null_mut();
        let shape = parse_shape(text(shape, "shape")?)?;
        let problem = parse_problem(text(conditions, "conditions")?, shape)?;
        *slot = Box::into_raw(Box::new(SchubertProblemHandle(problem)));
        Ok(())
    })
}

/// Releases a problem. Null is ignored.
///
/// # Safety
/// `problem` must come from [`schubert_problem_parse`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn schubert_problem_free(problem: *mut SchubertProblemHandle) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Writes the canonical text form of a problem.
///
/// # Safety
/// `buf` must hold `len` bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn schubert_problem_text(
    problem: *const SchubertProblemHandle,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SchubertErrorCode {
    guard(|| write_text(&handle(problem)?.0.to_string(), buf, len, needed))
}

/// Number of solutions; `Overflow` if it exceeds 64 bits.
///
/// # Safety
/// `problem` must be a live handle; `degree` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schubert_problem_degree(
    problem: *const SchubertProblemHandle,
    degree: *mut u64,
) -> SchubertErrorCode {
    guard(|| {
        let d = schubert::puzzle::problem_degree(&handle(problem)?.0)?;
        *out(degree, "degree")? = to_u64(d)?;
        Ok(())
    })
}

/// Number of solutions in decimal, without size limit.
///
/// # Safety
/// `buf` must hold `len` bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn schubert_problem_degree_text(
    problem: *const SchubertProblemHandle,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SchubertErrorCode {
    guard(|| {
        let d = schubert::puzzle::problem_degree(&handle(problem)?.0)?;
        write_text(&d.to_string(), buf, len, needed)
    })
}

/// Runs the criterion with the adaptive tree policy and no assertions.
///
/// # Safety
/// `problem` must be a live handle; `verdict` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schubert_problem_criterion(
    problem: *const SchubertProblemHandle,
    verdict: *mut SchubertVerdict,
) -> SchubertErrorCode {
    guard(|| {
        let a = assess_adaptive(&handle(problem)?.0, &Assertions::default())?;
        *out(verdict, "verdict")? = match a.status {
            Status::Pass => SchubertVerdict::Pass,
            Status::PassConditional => SchubertVerdict::PassConditional,
            Status::Fail => SchubertVerdict::Fail,
        };
        Ok(())
    })
}

/// Littlewood-Richardson coefficient `c^gamma_{alpha,beta}` on `shape`.
///
/// # Safety
/// All strings must be NUL-terminated; `coefficient` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schubert_lr_coefficient(
    shape: *const c_char,
    alpha: *const c_char,
    beta: *const c_char,
    gamma: *const c_char,
    coefficient: *mut u64,
) -> SchubertErrorCode {
    guard(|| {
        let shape = parse_shape(text(shape, "shape")?)?;
        let a = parse_partition(text(alpha, "alpha")?)?;
        let b = parse_partition(text(beta, "beta")?)?;
        let g = parse_partition(text(gamma, "gamma")?)?;
        let c = schubert::puzzle::lr_coefficient(&a, &b, &g, shape)?;
        *out(coefficient, "coefficient")? = to_u64(c)?;
        Ok(())
    })
}

/// Builds the choice tree of a problem with the default vertex budget.
///
/// # Safety
/// `problem` must be a live handle; `out_tree` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schubert_tree_build(
    problem: *const SchubertProblemHandle,
    out_tree: *mut *mut SchubertTreeHandle,
) -> SchubertErrorCode {
    guard(|| {
        let slot = out(out_tree, "out_tree")?;
        *slot = std::ptr::null_mut();
        let tree = schubert::tree::build_tree(&handle(problem)?.0)?;
        *slot = Box::into_raw(Box::new(SchubertTreeHandle(tree)));
        Ok(())
    })
}

/// Releases a tree. Null is ignored.
///
/// # Safety
/// `tree` must come from [`schubert_tree_build`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn schubert_tree_free(tree: *mut SchubertTreeHandle) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Leaf and vertex counts of a tree.
///
/// # Safety
/// `tree` must be a live handle; either output may be null.
#[no_mangle]
pub unsafe extern "C" fn schubert_tree_counts(
    tree: *const SchubertTreeHandle,
    leaves: *mut u64,
    vertices: *mut u64,
) -> SchubertErrorCode {
    guard(|| {
        let t = &handle(tree)?.0;
        if let Some(l) = leaves.as_mut() {
            *l = to_u64(t.leaf_count())?;
        }
        if let Some(v) = vertices.as_mut() {
            *v = t.len() as u64;
        }
        Ok(())
    })
}

/// Copies the last error message of this thread; empty after a success.
/// Returns the length including the NUL, whether or not it fit.
///
/// # Safety
/// `buf` must hold `len` bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn schubert_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}
