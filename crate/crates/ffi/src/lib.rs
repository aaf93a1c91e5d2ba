//! C ABI over `axial-core`.
//!
//! Algebras live behind an opaque `AxAlgebra` handle. Every function returns
//! a status code: `AX_OK` when a check passes (or a query succeeds),
//! `AX_FAIL` when a check runs and fails, and a negative code on error, with
//! the message available from `ax_last_error`. Reports come back as JSON
//! strings owned by the caller and released with `ax_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::{json, Value};

use axial_core::format::{self, AlgebraFile};
use axial_core::fusion::{decompose, verify_fusion, Violation};
use axial_core::martindale::check_conditions;
use axial_core::search::{run_search, SearchMode, SearchSpec, Target};
use axial_core::{cli, zoo, Error, FieldSpec, FusionLaw, Vector};

pub const AX_OK: i32 = 0;
pub const AX_FAIL: i32 = 1;
pub const AX_ERR_NULL: i32 = -1;
pub const AX_ERR_UTF8: i32 = -2;
pub const AX_ERR_PARSE: i32 = -3;
pub const AX_ERR_INVALID: i32 = -4;
pub const AX_ERR_BOUND: i32 = -5;
pub const AX_ERR_UNSUPPORTED: i32 = -6;
pub const AX_ERR_PANIC: i32 = -99;

/// A parsed finite-dimensional algebra with its declared axes and law.
pub struct AxAlgebra {
    file: AlgebraFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidScalar(_) | Error::UnknownBasis(_) => AX_ERR_PARSE,
            Error::SizeBound { .. } | Error::CapExceeded { .. } => AX_ERR_BOUND,
            Error::Unsupported(_) => AX_ERR_UNSUPPORTED,
            _ => AX_ERR_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn failure(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn set_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<i32, Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(code)) => {
            set_error(None);
            code
        }
        Ok(Err(f)) => {
            set_error(Some(f.message));
            f.code
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            AX_ERR_PANIC
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(failure(AX_ERR_NULL, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| failure(AX_ERR_UTF8, format!("{what} is not UTF-8")))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn handle<'a>(p: *const AxAlgebra) -> Result<&'a AxAlgebra, Failure> {
    p.as_ref().ok_or_else(|| failure(AX_ERR_NULL, "algebra handle is null"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(failure(AX_ERR_NULL, "output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| failure(AX_ERR_INVALID, "output contains a nul byte"))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_handle(out: *mut *mut AxAlgebra, file: AlgebraFile) -> Result<i32, Failure> {
    if out.is_null() {
        return Err(failure(AX_ERR_NULL, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(AxAlgebra { file }));
    Ok(AX_OK)
}

impl AxAlgebra {
    fn axis(&self, text: Option<&str>) -> Result<Vector, Failure> {
        match text {
            Some(t) => Ok(self.file.algebra.parse_element(t)?),
            None => self
                .file
                .axes
                .first()
                .cloned()
                .ok_or_else(|| failure(AX_ERR_INVALID, "no axis given and none declared")),
        }
    }

    fn law(&self, text: Option<&str>) -> Result<FusionLaw, Failure> {
        match text {
            Some(t) => Ok(FusionLaw::parse(t, self.file.algebra.field())?),
            None => self
                .file
                .law
                .clone()
                .ok_or_else(|| failure(AX_ERR_INVALID, "no law given and none declared")),
        }
    }

    fn fmt(&self, v: &Vector) -> String {
        self.file.algebra.format_element(v)
    }
}

/// Parses an algebra file. On success `*out` owns a new handle.
///
/// # Safety
/// `text_ptr` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ax_algebra_parse(text_ptr: *const c_char, out: *mut *mut AxAlgebra) -> i32 {
    guard(|| {
        let t = text(text_ptr, "text")?;
        write_handle(out, format::parse_algebra(t)?)
    })
}

/// Builds a zoo entry. `field` is `"Q"` or a prime such as `"7"`.
///
/// # Safety
/// `name` and `field` must be nul-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ax_algebra_zoo(name: *const c_char, field: *const c_char, out: *mut *mut AxAlgebra) -> i32 {
    guard(|| {
        let name = text(name, "name")?;
        let field = match text(field, "field")? {
            "Q" | "q" => FieldSpec::Rationals,
            p => FieldSpec::prime(p.parse().map_err(|_| failure(AX_ERR_PARSE, format!("bad field `{p}`")))?)?,
        };
        let z = zoo::by_name(name, field, None, None)?;
        write_handle(
            out,
            AlgebraFile {
                algebra: z.algebra,
                axes: z.axes,
                law: Some(z.law),
            },
        )
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `alg` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ax_algebra_free(alg: *mut AxAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension of the algebra, or 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ax_algebra_dim(alg: *const AxAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.file.algebra.dim())
}

/// The algebra in file syntax.
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ax_algebra_emit(alg: *const AxAlgebra, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let a = handle(alg)?;
        write_string(out, format::emit_file(&a.file))?;
        Ok(AX_OK)
    })
}

/// Eigenspace decomposition as JSON. `axis` and `law` may be null to use
/// the declared ones. Returns `AX_FAIL` when the parts do not span.
///
/// # Safety
/// Pointers must be null (where allowed) or valid; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ax_decompose(
    alg: *const AxAlgebra,
    axis: *const c_char,
    law: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let a = handle(alg)?;
        let e = a.axis(opt_text(axis, "axis")?)?;
        let d = decompose(&a.file.algebra, &e, &a.law(opt_text(law, "law")?)?)?;
        let parts: Vec<Value> = d
            .eigenvalues()
            .iter()
            .zip(d.parts())
            .map(|(l, p)| {
                let basis: Vec<String> = p.basis_vectors().iter().map(|v| a.fmt(v)).collect();
                json!({"eigenvalue": l.to_string(), "dim": p.dim(), "basis": basis})
            })
            .collect();
        let complete = d.is_complete();
        write_string(out, json!({"axis": a.fmt(&e), "parts": parts, "complete": complete}).to_string())?;
        Ok(if complete { AX_OK } else { AX_FAIL })
    })
}

/// Fusion law check; the JSON lists violations by kind.
///
/// # Safety
/// As for `ax_decompose`.
#[no_mangle]
pub unsafe extern "C" fn ax_fusion_check(
    alg: *const AxAlgebra,
    axis: *const c_char,
    law: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let a = handle(alg)?;
        let e = a.axis(opt_text(axis, "axis")?)?;
        let report = verify_fusion(&a.file.algebra, &e, &a.law(opt_text(law, "law")?)?)?;
        let passed = report.passed();
        let violations: Vec<Value> = report
            .violations
            .iter()
            .map(|v| match v {
                Violation::OutsideSpectrum { witness } => json!({"kind": "outside-spectrum", "witness": a.fmt(witness)}),
                Violation::Forbidden {
                    lambda,
                    mu,
                    left,
                    right,
                    component,
                    ..
                } => json!({
                    "kind": "forbidden",
                    "lambda": lambda.to_string(),
                    "mu": mu.to_string(),
                    "left": a.fmt(left),
                    "right": a.fmt(right),
                    "component": component.to_string(),
                }),
            })
            .collect();
        write_string(
            out,
            json!({
                "axis": a.fmt(&e),
                "law": report.law,
                "pairs_checked": report.pairs_checked,
                "passed": passed,
                "violations": violations,
            })
            .to_string(),
        )?;
        Ok(if passed { AX_OK } else { AX_FAIL })
    })
}

/// Martindale-like conditions; `AX_OK` when every condition holds.
///
/// # Safety
/// As for `ax_decompose`.
#[no_mangle]
pub unsafe extern "C" fn ax_martindale(
    alg: *const AxAlgebra,
    axis: *const c_char,
    law: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let a = handle(alg)?;
        let e = a.axis(opt_text(axis, "axis")?)?;
        let d = decompose(&a.file.algebra, &e, &a.law(opt_text(law, "law")?)?)?;
        let report = check_conditions(&a.file.algebra, &d)?;
        let conds: Vec<Value> = report
            .conditions
            .iter()
            .map(|c| {
                let witnesses: Vec<Option<String>> = c.checks.iter().map(|k| k.witness.as_ref().map(|w| a.fmt(w))).collect();
                json!({"label": c.label, "holds": c.holds(), "witnesses": witnesses})
            })
            .collect();
        let all = report.all_hold();
        write_string(out, json!({"axis": a.fmt(&e), "conditions": conds, "all_hold": all}).to_string())?;
        Ok(if all { AX_OK } else { AX_FAIL })
    })
}

/// Searches for a non-additive multiplicative map. `target` is
/// `"nonadditive-iso"` or `"nonadditive-derivation"`; a zero `budget` means
/// exhaustive. A completed search returns `AX_OK` whether or not a witness
/// was found; the JSON `status` says which.
///
/// # Safety
/// As for `ax_decompose`.
#[no_mangle]
pub unsafe extern "C" fn ax_search(
    alg: *const AxAlgebra,
    target: *const c_char,
    n: usize,
    budget: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let a = handle(alg)?;
        let target = Target::parse(text(target, "target")?)?;
        let mode = if budget == 0 {
            SearchMode::Exhaustive
        } else {
            SearchMode::Backtracking { budget, seed }
        };
        let out_search = run_search(&a.file.algebra, &SearchSpec::new(target, n, mode))?;
        let witness = out_search.witness.as_ref().map(|w| {
            json!({"table": w.table, "pair": [a.fmt(&w.pair.0), a.fmt(&w.pair.1)]})
        });
        write_string(
            out,
            json!({
                "status": out_search.status.name(),
                "nodes": out_search.nodes,
                "counts": out_search.counts.map(|(m, ad)| json!({"multiplicative": m, "additive": ad})),
                "witness": witness,
            })
            .to_string(),
        )?;
        Ok(AX_OK)
    })
}

/// Runs one `axial` command line. `argv` excludes the program name; `input`
/// (may be null) is fed as standard input. `*out` receives standard output
/// and the return value is the command's exit code (0, 1 or 2).
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ax_run(argc: usize, argv: *const *const c_char, input: *const c_char, out: *mut *mut c_char) -> i32 {
    let mut stderr = None;
    let code = guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(failure(AX_ERR_NULL, "argv is null"));
        }
        let mut args = vec!["axial".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i), "argument")?.to_string());
        }
        let stdin = opt_text(input, "input")?.unwrap_or("");
        let result = cli::run(&args, &mut stdin.as_bytes());
        write_string(out, result.stdout)?;
        if result.code == cli::EXIT_ERROR {
            stderr = Some(result.stderr.trim_end().to_string());
        }
        Ok(result.code)
    });
    if stderr.is_some() {
        set_error(stderr);
    }
    code
}

/// Message for the last error on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ax_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ax_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn ax_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
