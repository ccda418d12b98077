// SPDX-License-Identifier: Apache-2.0

//! C ABI over the rena library.
//!
//! Conventions: handles are opaque pointers created by `_new` functions and
//! released by the matching `_free`; strings returned through out-pointers
//! are NUL-terminated, UTF-8, and owned by the caller, who must release
//! them with [`rena_string_free`]; every fallible call returns a
//! [`RenaStatus`] and writes results through out-pointers only on
//! `RenaStatus::Ok`. All entry points are panic-safe.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rena::asymptotics::{self, Singularity};
use rena::expr;
use rena::glushkov;
use rena::sampler::{ExprClass, Sampler};
use rena::series::CoeffTable;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RenaStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An argument was out of range for the operation.
    InvalidArgument = 2,
    /// The expression text did not parse.
    ParseError = 3,
    /// Numeric analysis failed to converge or was queried out of domain.
    NumericError = 4,
    /// The caller-provided buffer is too small (see the `written` hint).
    BufferTooSmall = 5,
    /// Text was not valid UTF-8.
    InvalidUtf8 = 6,
    /// A panic was caught at the boundary; state is unchanged.
    InternalError = 7,
}

/// Expression class selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum RenaClass {
    /// All expressions.
    Re = 0,
    /// Expressions avoiding the absorbing pattern inside unions.
    Rena = 1,
}

/// Exact coefficient tables for one alphabet size (opaque).
pub struct RenaCoeffTable(CoeffTable);

/// Exact-uniform expression sampler (opaque).
pub struct RenaSampler(Sampler);

/// The counting functions of one expression.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct RenaCountFunctions {
    /// |First|
    pub first: u64,
    /// |Last|
    pub last: u64,
    /// |Follow|
    pub follow: u64,
    /// |Follow ∪ Last×First|
    pub star_follow: u64,
    /// Glushkov transition count, first + follow.
    pub transitions: u64,
}

/// Size measures and class predicates of one expression.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct RenaExprInfo {
    /// Number of symbols, parentheses disregarded.
    pub tree_size: u64,
    /// Number of letter occurrences.
    pub alphabetic_size: u64,
    /// 1 when the empty word is in the language.
    pub nullable: u8,
    /// 1 when no union operand is a full-alphabet starred union.
    pub in_restricted_class: u8,
}

/// One row of the singularity analysis.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct RenaTheoryRow {
    pub k: u32,
    /// Singularity of the unrestricted class, 1/(1+√(8+8k)).
    pub rho: f64,
    /// Dominant singularity of the restricted class.
    pub eta: f64,
    /// −η Δ'(η).
    pub psi: f64,
    /// g(η) of the letters closed form.
    pub g: f64,
    /// Asymptotic letters-per-size ratio.
    pub letters_ratio: f64,
    /// Asymptotic transitions-per-size slope.
    pub lambda: f64,
    /// Scaled residual |Δ(η)| of the root refinement.
    pub residual: f64,
}

fn guard(status: impl FnOnce() -> RenaStatus + std::panic::UnwindSafe) -> RenaStatus {
    catch_unwind(status).unwrap_or(RenaStatus::InternalError)
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, RenaStatus> {
    if ptr.is_null() {
        return Err(RenaStatus::NullArgument);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| RenaStatus::InvalidUtf8)
}

fn give_string(out: *mut *mut c_char, s: String) -> RenaStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            RenaStatus::Ok
        }
        Err(_) => RenaStatus::InternalError,
    }
}

/// Version of the library as a static string; do not free.
#[no_mangle]
pub extern "C" fn rena_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a rena function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn rena_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build every counting series to order `n_max` for a `k`-letter alphabet.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rena_coeff_table_new(
    k: u32,
    n_max: usize,
    out: *mut *mut RenaCoeffTable,
) -> RenaStatus {
    if out.is_null() {
        return RenaStatus::NullArgument;
    }
    guard(AssertUnwindSafe(|| {
        if k == 0 || n_max == 0 {
            return RenaStatus::InvalidArgument;
        }
        let table = CoeffTable::build(k, n_max);
        *out = Box::into_raw(Box::new(RenaCoeffTable(table)));
        RenaStatus::Ok
    }))
}

/// # Safety
/// `t` must come from [`rena_coeff_table_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rena_coeff_table_free(t: *mut RenaCoeffTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Write the decimal digits of one coefficient into `buf`.
///
/// `series` is one of `B`, `R`, `R_P`, `R_eps`, `R_eps_bar`, `L`, `P`, `F`,
/// `F_P`, `S`, `E`, `E_star`, `E_P`, `E_star_P`, `T`. On success `written`
/// receives the length excluding the NUL terminator; on
/// `RenaStatus::BufferTooSmall` it receives the required buffer size.
///
/// # Safety
/// `t`, `series`, `buf` and `written` must be valid; `buf` must have room
/// for `buf_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn rena_coeff_decimal(
    t: *const RenaCoeffTable,
    series: *const c_char,
    n: usize,
    buf: *mut c_char,
    buf_len: usize,
    written: *mut usize,
) -> RenaStatus {
    if t.is_null() || buf.is_null() || written.is_null() {
        return RenaStatus::NullArgument;
    }
    let name = match read_str(series) {
        Ok(s) => s,
        Err(e) => return e,
    };
    guard(AssertUnwindSafe(|| {
        let table = &(*t).0;
        let Some(coeffs) = table.series(name) else {
            return RenaStatus::InvalidArgument;
        };
        if n > table.n_max {
            return RenaStatus::InvalidArgument;
        }
        let text = coeffs[n].to_string();
        let needed = text.len() + 1;
        if buf_len < needed {
            *written = needed;
            return RenaStatus::BufferTooSmall;
        }
        std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
        *buf.add(text.len()) = 0;
        *written = text.len();
        RenaStatus::Ok
    }))
}

/// The whole table as the JSON document (decimal-string coefficients).
///
/// # Safety
/// `t` and `out` must be valid; free the string with [`rena_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rena_coeff_table_json(
    t: *const RenaCoeffTable,
    out: *mut *mut c_char,
) -> RenaStatus {
    if t.is_null() || out.is_null() {
        return RenaStatus::NullArgument;
    }
    guard(AssertUnwindSafe(|| {
        give_string(out, (*t).0.to_json().to_string())
    }))
}

/// Parse an expression and report its measures and class membership.
///
/// # Safety
/// `text` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rena_expr_info(
    text: *const c_char,
    k: u32,
    out: *mut RenaExprInfo,
) -> RenaStatus {
    if out.is_null() {
        return RenaStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(s) => s,
        Err(e) => return e,
    };
    guard(AssertUnwindSafe(|| {
        if k == 0 {
            return RenaStatus::InvalidArgument;
        }
        let Ok(e) = expr::parse(text, k) else {
            return RenaStatus::ParseError;
        };
        *out = RenaExprInfo {
            tree_size: e.size() as u64,
            alphabetic_size: e.alphabetic_size() as u64,
            nullable: e.is_nullable() as u8,
            in_restricted_class: e.avoids_absorbing_in_union(k) as u8,
        };
        RenaStatus::Ok
    }))
}

/// Counting functions of a parsed expression (never builds the sets).
///
/// # Safety
/// `text` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rena_count_functions(
    text: *const c_char,
    k: u32,
    out: *mut RenaCountFunctions,
) -> RenaStatus {
    if out.is_null() {
        return RenaStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(s) => s,
        Err(e) => return e,
    };
    guard(AssertUnwindSafe(|| {
        if k == 0 {
            return RenaStatus::InvalidArgument;
        }
        let Ok(e) = expr::parse(text, k) else {
            return RenaStatus::ParseError;
        };
        let c = glushkov::count_functions(&e);
        *out = RenaCountFunctions {
            first: c.first,
            last: c.last,
            follow: c.follow,
            star_follow: c.star_follow,
            transitions: c.transitions,
        };
        RenaStatus::Ok
    }))
}

/// Position automaton of an expression as a JSON document
/// `{states, transitions: [[src, letter, dst]], finals, counts}`.
///
/// # Safety
/// `text` and `out` must be valid; free the string with [`rena_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rena_glushkov_json(
    text: *const c_char,
    k: u32,
    out: *mut *mut c_char,
) -> RenaStatus {
    if out.is_null() {
        return RenaStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(s) => s,
        Err(e) => return e,
    };
    guard(AssertUnwindSafe(|| {
        if k == 0 {
            return RenaStatus::InvalidArgument;
        }
        let Ok(e) = expr::parse(text, k) else {
            return RenaStatus::ParseError;
        };
        let nfa = glushkov::build_glushkov(&e);
        let counts = glushkov::count_functions(&e);
        let transitions: Vec<serde_json::Value> = nfa
            .transitions
            .iter()
            .map(|&(src, letter, dst)| serde_json::json!([src, expr::letter_name(letter), dst]))
            .collect();
        let doc = serde_json::json!({
            "expr": e.to_string(),
            "states": nfa.state_count,
            "transitions": transitions,
            "finals": nfa.finals,
            "counts": {
                "f": counts.first,
                "s": counts.last,
                "e": counts.follow,
                "e_star": counts.star_follow,
                "t": counts.transitions,
            },
        });
        give_string(out, doc.to_string())
    }))
}

/// Create an exact-uniform sampler for `(k, n, class)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rena_sampler_new(
    k: u32,
    n: usize,
    class: RenaClass,
    out: *mut *mut RenaSampler,
) -> RenaStatus {
    if out.is_null() {
        return RenaStatus::NullArgument;
    }
    guard(AssertUnwindSafe(|| {
        let class = match class {
            RenaClass::Re => ExprClass::Re,
            RenaClass::Rena => ExprClass::Rena,
        };
        match Sampler::new(k, n, class) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(RenaSampler(s)));
                RenaStatus::Ok
            }
            Err(_) => RenaStatus::InvalidArgument,
        }
    }))
}

/// # Safety
/// `s` must come from [`rena_sampler_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rena_sampler_free(s: *mut RenaSampler) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Draw item `index` of the batch identified by `seed`, as canonical text.
/// Deterministic in `(seed, index)` regardless of call order.
///
/// # Safety
/// `s` and `out` must be valid; free the string with [`rena_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rena_sample_text(
    s: *const RenaSampler,
    seed: u64,
    index: u64,
    out: *mut *mut c_char,
) -> RenaStatus {
    if s.is_null() || out.is_null() {
        return RenaStatus::NullArgument;
    }
    guard(AssertUnwindSafe(|| {
        let e = (*s).0.sample_indexed(seed, index);
        give_string(out, e.to_string())
    }))
}

/// Solve the singularity analysis for one alphabet size.
/// `precision_digits = 0` selects the default working precision.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rena_theory_row(
    k: u32,
    precision_digits: usize,
    out: *mut RenaTheoryRow,
) -> RenaStatus {
    if out.is_null() {
        return RenaStatus::NullArgument;
    }
    guard(AssertUnwindSafe(|| {
        if k == 0 {
            return RenaStatus::InvalidArgument;
        }
        let digits = if precision_digits == 0 {
            asymptotics::default_digits(k)
        } else {
            precision_digits
        };
        let Ok(mut sing) = Singularity::solve(k, digits) else {
            return RenaStatus::NumericError;
        };
        let Ok(row) = sing.report() else {
            return RenaStatus::NumericError;
        };
        *out = RenaTheoryRow {
            k,
            rho: row.rho,
            eta: row.eta,
            psi: row.psi,
            g: row.g,
            letters_ratio: row.letters_ratio,
            lambda: row.lambda,
            residual: row.residual,
        };
        RenaStatus::Ok
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn version_is_static() {
        let v = unsafe { CStr::from_ptr(rena_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            assert_eq!(
                rena_coeff_table_new(2, 5, ptr::null_mut()),
                RenaStatus::NullArgument
            );
            let mut info = std::mem::zeroed::<RenaExprInfo>();
            assert_eq!(
                rena_expr_info(ptr::null(), 2, &mut info),
                RenaStatus::NullArgument
            );
        }
    }
}
