//! C ABI for the qhecke q-series engine.
//!
//! Catalogs are opaque handles; every function returns a [`QheckeStatus`]
//! and hands results (or, on failure, a descriptive error message) back
//! through an out-pointer as a NUL-terminated, heap-allocated string that
//! the caller releases with [`qhecke_string_free`].  Series and reports are
//! serialized as JSON; coefficients are exact `"numerator/denominator"`
//! strings.
//!
//! The generated header lives at `include/qhecke.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use qhecke::catalog::{Catalog, VerificationReport};
use qhecke::dsl::{eval, parse_expr};
use serde_json::json;

/// Opaque identity-catalog handle.
pub struct QheckeCatalog {
    inner: Catalog,
}

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum QheckeStatus {
    /// Success; for verification calls this means every checked identity
    /// held exactly.
    QheckeOk = 0,
    /// Verification ran but at least one identity failed; the report is
    /// still written to the out-pointer.
    QheckeMismatch = 1,
    QheckeNullArgument = 2,
    QheckeInvalidUtf8 = 3,
    QheckeParseError = 4,
    QheckeEvalError = 5,
    QheckeUnknownId = 6,
    QheckeCatalogError = 7,
    QheckePanic = 8,
}

use QheckeStatus::*;

fn write_string(out: *mut *mut c_char, text: String) {
    if out.is_null() {
        return;
    }
    // interior NULs cannot occur in our JSON/messages, but stay total
    let cstring = CString::new(text).unwrap_or_else(|_| CString::new("invalid string").unwrap());
    unsafe { *out = cstring.into_raw() };
}

fn guard(out: *mut *mut c_char, body: impl FnOnce() -> QheckeStatus) -> QheckeStatus {
    if !out.is_null() {
        unsafe { *out = ptr::null_mut() };
    }
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            write_string(out, "internal panic".to_string());
            QheckePanic
        }
    }
}

/// # Safety
/// `s` must be a valid NUL-terminated string or null.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, QheckeStatus> {
    if s.is_null() {
        return Err(QheckeNullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| QheckeInvalidUtf8)
}

/// Open the built-in catalog, optionally merging extra identities from a
/// TOML file (`path` may be null).  On success writes the handle to
/// `out_catalog`; on failure writes an error message to `out_error`.
///
/// # Safety
/// `out_catalog` must be a valid pointer; `path`, if non-null, must be a
/// valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qhecke_catalog_open(
    path: *const c_char,
    out_catalog: *mut *mut QheckeCatalog,
    out_error: *mut *mut c_char,
) -> QheckeStatus {
    guard(out_error, || {
        if out_catalog.is_null() {
            return QheckeNullArgument;
        }
        unsafe { *out_catalog = ptr::null_mut() };
        let catalog = if path.is_null() {
            Ok(Catalog::builtin().clone())
        } else {
            match unsafe { read_str(path) } {
                Ok(p) => Catalog::builtin_with_file(Path::new(p)),
                Err(status) => return status,
            }
        };
        match catalog {
            Ok(inner) => {
                let handle = Box::new(QheckeCatalog { inner });
                unsafe { *out_catalog = Box::into_raw(handle) };
                QheckeOk
            }
            Err(e) => {
                write_string(out_error, e.to_string());
                QheckeCatalogError
            }
        }
    })
}

/// Release a catalog handle (null is a no-op).
///
/// # Safety
/// `catalog` must have come from [`qhecke_catalog_open`] and not already be
/// freed.
#[no_mangle]
pub unsafe extern "C" fn qhecke_catalog_free(catalog: *mut QheckeCatalog) {
    if !catalog.is_null() {
        drop(unsafe { Box::from_raw(catalog) });
    }
}

/// Number of identities in the catalog (0 for a null handle).
///
/// # Safety
/// `catalog` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qhecke_catalog_len(catalog: *const QheckeCatalog) -> usize {
    if catalog.is_null() {
        0
    } else {
        unsafe { &*catalog }.inner.records().len()
    }
}

/// Write a JSON array of `{id, order, ref}` listing the catalog.
///
/// # Safety
/// `catalog` must be a live handle; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qhecke_list_json(
    catalog: *const QheckeCatalog,
    out_json: *mut *mut c_char,
) -> QheckeStatus {
    guard(out_json, || {
        if catalog.is_null() || out_json.is_null() {
            return QheckeNullArgument;
        }
        let records: Vec<serde_json::Value> = unsafe { &*catalog }
            .inner
            .records()
            .iter()
            .map(|r| json!({ "id": r.id, "order": r.order, "ref": r.reference }))
            .collect();
        write_string(out_json, serde_json::Value::Array(records).to_string());
        QheckeOk
    })
}

fn report_status(reports: &[VerificationReport]) -> QheckeStatus {
    if reports.iter().all(|r| r.equal) {
        QheckeOk
    } else {
        QheckeMismatch
    }
}

/// Verify one identity; `order <= 0` uses the record's default.  Writes the
/// verification report as JSON (even on mismatch).
///
/// # Safety
/// `catalog` must be a live handle; `id` a valid string; `out_json` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn qhecke_verify(
    catalog: *const QheckeCatalog,
    id: *const c_char,
    order: i64,
    out_json: *mut *mut c_char,
) -> QheckeStatus {
    guard(out_json, || {
        if catalog.is_null() || out_json.is_null() {
            return QheckeNullArgument;
        }
        let id = match unsafe { read_str(id) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let inner = &unsafe { &*catalog }.inner;
        if inner.find(id).is_none() {
            write_string(out_json, format!("unknown identity `{}`", id));
            return QheckeUnknownId;
        }
        match inner.verify(id, (order > 0).then_some(order)) {
            Ok(report) => {
                let status = report_status(std::slice::from_ref(&report));
                write_string(out_json, serde_json::to_string(&report).expect("report serializes"));
                status
            }
            Err(e) => {
                write_string(out_json, e.to_string());
                QheckeEvalError
            }
        }
    })
}

/// Verify every identity; `order <= 0` uses each record's default.  Writes
/// a JSON array of reports in registry order.
///
/// # Safety
/// `catalog` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qhecke_verify_all(
    catalog: *const QheckeCatalog,
    order: i64,
    out_json: *mut *mut c_char,
) -> QheckeStatus {
    guard(out_json, || {
        if catalog.is_null() || out_json.is_null() {
            return QheckeNullArgument;
        }
        let inner = &unsafe { &*catalog }.inner;
        let mut reports = Vec::new();
        for result in inner.verify_all((order > 0).then_some(order)) {
            match result {
                Ok(report) => reports.push(report),
                Err(e) => {
                    write_string(out_json, e.to_string());
                    return QheckeEvalError;
                }
            }
        }
        let status = report_status(&reports);
        write_string(out_json, serde_json::to_string(&reports).expect("reports serialize"));
        status
    })
}

/// Expand a DSL expression to the given order and write
/// `{"expr","order","terms":[[exponent,"num/den"],...]}`.
///
/// # Safety
/// `expr` must be a valid string; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qhecke_expand_json(
    expr: *const c_char,
    order: i64,
    out_json: *mut *mut c_char,
) -> QheckeStatus {
    guard(out_json, || {
        if out_json.is_null() {
            return QheckeNullArgument;
        }
        let text = match unsafe { read_str(expr) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let ast = match parse_expr(text) {
            Ok(ast) => ast,
            Err(e) => {
                write_string(out_json, e.to_string());
                return QheckeParseError;
            }
        };
        match eval(&ast, order) {
            Ok(series) => {
                let terms: Vec<serde_json::Value> = series
                    .coefficient_strings()
                    .into_iter()
                    .map(|(e, c)| json!([e, c]))
                    .collect();
                write_string(
                    out_json,
                    json!({ "expr": text, "order": order, "terms": terms }).to_string(),
                );
                QheckeOk
            }
            Err(e) => {
                write_string(out_json, e.to_string());
                QheckeEvalError
            }
        }
    })
}

/// Expand a DSL expression and write its human-readable form
/// (e.g. `1 - q - q^2 + q^5 + O(q^8)`).
///
/// # Safety
/// `expr` must be a valid string; `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qhecke_expand_text(
    expr: *const c_char,
    order: i64,
    out_text: *mut *mut c_char,
) -> QheckeStatus {
    guard(out_text, || {
        if out_text.is_null() {
            return QheckeNullArgument;
        }
        let text = match unsafe { read_str(expr) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let ast = match parse_expr(text) {
            Ok(ast) => ast,
            Err(e) => {
                write_string(out_text, e.to_string());
                return QheckeParseError;
            }
        };
        match eval(&ast, order) {
            Ok(series) => {
                write_string(out_text, series.to_string());
                QheckeOk
            }
            Err(e) => {
                write_string(out_text, e.to_string());
                QheckeEvalError
            }
        }
    })
}

/// Release a string produced by this library (null is a no-op).
///
/// # Safety
/// `s` must have been produced by this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn qhecke_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
