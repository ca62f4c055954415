//! C ABI over the weylring engines.
//!
//! Objects are opaque handles released by their `_free` function. Every call
//! returns a [`WrStatus`]; on failure [`wr_last_error`] holds a message for
//! the calling thread. Strings handed out are released with [`wr_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use weylring::branchrules::{self, RuleParams};
use weylring::cli;
use weylring::error::Error;
use weylring::hpz::verify_spectrum;
use weylring::rootsys::{RootSystem, SystemId, Weight};
use weylring::tensor::{tensor_decompose, Decomposition};
use weylring::weights::weyl_dimension;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum WrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Guard = 3,
    Mismatch = 4,
    Overflow = 5,
    Panic = 6,
}

/// A root system.
pub struct WrRootSystem {
    inner: Arc<RootSystem>,
}

/// A decomposition into irreducibles, components sorted by highest weight.
pub struct WrDecomposition {
    inner: Decomposition,
    order: Vec<Weight>,
}

impl WrDecomposition {
    fn new(inner: Decomposition) -> Self {
        let order = inner.components.keys().cloned().collect();
        WrDecomposition { inner, order }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (WrStatus, String);

fn from_engine(e: Error) -> Failure {
    let status = match e {
        Error::GuardExceeded { .. } => WrStatus::Guard,
        Error::NegativeMultiplicity { .. } | Error::InvalidData(_) => WrStatus::Mismatch,
        _ => WrStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn null(what: &str) -> Failure {
    (WrStatus::NullPointer, format!("{what} is null"))
}

fn call(f: impl FnOnce() -> Result<(), Failure>) -> WrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WrStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {msg}"));
            WrStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (WrStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn weight_arg(rs: &RootSystem, p: *const i64, len: usize, what: &str) -> Result<Weight, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    let w = Weight::new(std::slice::from_raw_parts(p, len).to_vec());
    rs.check_weight(&w).map_err(from_engine)?;
    Ok(w)
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "")).expect("NUL bytes removed").into_raw()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on this thread.
#[no_mangle]
pub extern "C" fn wr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Opens a root system such as `"E6"` or `"D5"`.
#[no_mangle]
pub unsafe extern "C" fn wr_root_system_new(name: *const c_char, out: *mut *mut WrRootSystem) -> WrStatus {
    call(|| {
        let out = out_arg(out, "out")?;
        let id: SystemId = str_arg(name, "name")?.parse().map_err(from_engine)?;
        let inner = RootSystem::shared(id).map_err(from_engine)?;
        *out = Box::into_raw(Box::new(WrRootSystem { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn wr_root_system_free(rs: *mut WrRootSystem) {
    if !rs.is_null() {
        drop(Box::from_raw(rs));
    }
}

/// Rank, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn wr_root_system_rank(rs: *const WrRootSystem) -> usize {
    rs.as_ref().map_or(0, |r| r.inner.rank())
}

/// Number of positive roots, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn wr_root_system_positive_root_count(rs: *const WrRootSystem) -> usize {
    rs.as_ref().map_or(0, |r| r.inner.positive_roots().len())
}

/// Dimension of the irreducible module with highest weight `weight`, as a
/// decimal string.
#[no_mangle]
pub unsafe extern "C" fn wr_weyl_dimension(
    rs: *const WrRootSystem,
    weight: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> WrStatus {
    call(|| {
        let out = out_arg(out, "out")?;
        let rs = &rs.as_ref().ok_or_else(|| null("root system"))?.inner;
        let w = weight_arg(rs, weight, len, "weight")?;
        let d = weyl_dimension(rs, &w).map_err(from_engine)?;
        *out = to_c_string(d.to_string());
        Ok(())
    })
}

/// Decomposes `V(left) ⊗ V(right)`; both weights have `len` coordinates.
#[no_mangle]
pub unsafe extern "C" fn wr_tensor_decompose(
    rs: *const WrRootSystem,
    left: *const i64,
    right: *const i64,
    len: usize,
    out: *mut *mut WrDecomposition,
) -> WrStatus {
    call(|| {
        let out = out_arg(out, "out")?;
        let rs = &rs.as_ref().ok_or_else(|| null("root system"))?.inner;
        let l = weight_arg(rs, left, len, "left")?;
        let r = weight_arg(rs, right, len, "right")?;
        let d = tensor_decompose(rs, &l, &r).map_err(from_engine)?;
        *out = Box::into_raw(Box::new(WrDecomposition::new(d)));
        Ok(())
    })
}

/// Evaluates a built-in closed-form rule; `params` looks like `"n=5,a=1,d=0"`.
#[no_mangle]
pub unsafe extern "C" fn wr_closed_form(
    rule_id: *const c_char,
    params: *const c_char,
    out: *mut *mut WrDecomposition,
) -> WrStatus {
    call(|| {
        let out = out_arg(out, "out")?;
        let id = str_arg(rule_id, "rule_id")?;
        let p: RuleParams = str_arg(params, "params")?.parse().map_err(from_engine)?;
        let d = branchrules::closed_form(id, &p).map_err(from_engine)?;
        *out = Box::into_raw(Box::new(WrDecomposition::new(d)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn wr_decomposition_free(d: *mut WrDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of distinct components, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn wr_decomposition_len(d: *const WrDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.order.len())
}

/// Rank of the underlying root system, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn wr_decomposition_rank(d: *const WrDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.inner.system.rank)
}

/// Copies component `index` into `weight_out` (capacity `cap`, at least the
/// rank) and its multiplicity into `mult_out`.
#[no_mangle]
pub unsafe extern "C" fn wr_decomposition_component(
    d: *const WrDecomposition,
    index: usize,
    weight_out: *mut i64,
    cap: usize,
    mult_out: *mut u64,
) -> WrStatus {
    call(|| {
        let d = d.as_ref().ok_or_else(|| null("decomposition"))?;
        let mult_out = out_arg(mult_out, "mult_out")?;
        if weight_out.is_null() {
            return Err(null("weight_out"));
        }
        let w = d.order.get(index).map(Weight::coords).ok_or_else(|| {
            (WrStatus::InvalidArgument, format!("index {index} out of range 0..{}", d.order.len()))
        })?;
        if cap < w.len() {
            return Err((WrStatus::InvalidArgument, format!("capacity {cap} below rank {}", w.len())));
        }
        let m = u64::try_from(&d.inner.components[&d.order[index]])
            .map_err(|_| (WrStatus::Overflow, format!("multiplicity of {} exceeds 64 bits", Weight::new(w.to_vec()))))?;
        std::slice::from_raw_parts_mut(weight_out, w.len()).copy_from_slice(w);
        *mult_out = m;
        Ok(())
    })
}

/// The decomposition as JSON, same schema as the command-line tool.
#[no_mangle]
pub unsafe extern "C" fn wr_decomposition_json(d: *const WrDecomposition, out: *mut *mut c_char) -> WrStatus {
    call(|| {
        let out = out_arg(out, "out")?;
        let d = d.as_ref().ok_or_else(|| null("decomposition"))?;
        *out = to_c_string(cli::decomposition_json(&d.inner).to_string());
        Ok(())
    })
}

/// Runs the spectrum check for a built-in module up to `max_level`.
#[no_mangle]
pub unsafe extern "C" fn wr_verify_spectrum(module: *const c_char, max_level: u32, passed: *mut bool) -> WrStatus {
    call(|| {
        let passed = out_arg(passed, "passed")?;
        let report = verify_spectrum(str_arg(module, "module")?, max_level).map_err(from_engine)?;
        *passed = report.passed();
        Ok(())
    })
}

/// Runs the command-line tool in-process. `argv[0]` is the program name.
/// Output strings are always set on `Ok` and must be freed.
#[no_mangle]
pub unsafe extern "C" fn wr_cli_run(
    argc: c_int,
    argv: *const *const c_char,
    stdout_out: *mut *mut c_char,
    stderr_out: *mut *mut c_char,
    exit_code: *mut c_int,
) -> WrStatus {
    call(|| {
        let stdout_out = out_arg(stdout_out, "stdout_out")?;
        let stderr_out = out_arg(stderr_out, "stderr_out")?;
        let exit_code = out_arg(exit_code, "exit_code")?;
        let argc = usize::try_from(argc).map_err(|_| (WrStatus::InvalidArgument, "negative argc".to_string()))?;
        if argv.is_null() && argc > 0 {
            return Err(null("argv"));
        }
        let mut args = Vec::with_capacity(argc);
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argv entry")?.to_string());
        }
        if args.is_empty() {
            args.push("weylring".to_string());
        }
        let r = cli::run(args);
        *stdout_out = to_c_string(r.stdout);
        *stderr_out = to_c_string(r.stderr);
        *exit_code = r.status;
        Ok(())
    })
}
