//! C ABI for `cosettree`.
//!
//! Groups and trees are opaque handles owned by the caller and released with
//! the matching `*_free`. Every fallible call returns a [`CosettreeStatus`];
//! the message for the last failure on the calling thread is available from
//! [`cosettree_last_error`]. Strings returned through out-parameters are
//! released with [`cosettree_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cosettree::abelian::{AbelianError, GroupExpr};
use cosettree::classify::{classify, read_spec_json, ClassifyError};
use cosettree::trees::{
    height, read_tree_json, tree_to_json, Caps, FrontierMode, LevelTree, TreeError,
};
use cosettree::universal::{embedding_plan, PlanError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosettreeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed expression, tree or spec text.
    Parse = 3,
    /// Well-formed input that violates a precondition.
    InvalidInput = 4,
    NotTame = 5,
    CapExceeded = 6,
    Internal = 7,
}

/// Frontier semantics for derivatives.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosettreeMode {
    Closed = 0,
    Open = 1,
}

/// Opaque symbolic group.
pub struct CosettreeGroup(GroupExpr);

/// Opaque finite-depth tree.
pub struct CosettreeTree(LevelTree);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(CosettreeStatus, String);

impl From<AbelianError> for Failure {
    fn from(e: AbelianError) -> Self {
        let code = match e {
            AbelianError::Parse { .. } => CosettreeStatus::Parse,
            AbelianError::CapExceeded { .. } => CosettreeStatus::CapExceeded,
            _ => CosettreeStatus::InvalidInput,
        };
        Failure(code, e.to_string())
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        let code = match e {
            TreeError::Format { .. } => CosettreeStatus::Parse,
            TreeError::CapExceeded { .. } => CosettreeStatus::CapExceeded,
            _ => CosettreeStatus::InvalidInput,
        };
        Failure(code, e.to_string())
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        let code = match e {
            ClassifyError::MalformedSpec(_) => CosettreeStatus::Parse,
            _ => CosettreeStatus::InvalidInput,
        };
        Failure(code, e.to_string())
    }
}

impl From<PlanError> for Failure {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::NotTame => Failure(CosettreeStatus::NotTame, e.to_string()),
            PlanError::Classify(c) => c.into(),
            other => Failure(CosettreeStatus::InvalidInput, other.to_string()),
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CosettreeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CosettreeStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside cosettree");
            CosettreeStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(CosettreeStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(CosettreeStatus::InvalidUtf8, e.to_string()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(CosettreeStatus::NullPointer, "null output pointer".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(CosettreeStatus::NullPointer, "null handle".into()))
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure(CosettreeStatus::Internal, e.to_string()))
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure(CosettreeStatus::Internal, e.to_string()))
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cosettree_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cosettree_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a group expression such as `sum(Z(4),finsup(Zq(3)))`.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out_group` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_group_parse(
    expr: *const c_char,
    out_group: *mut *mut CosettreeGroup,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_group)?;
        let g: GroupExpr = text(expr)?.parse()?;
        *slot = Box::into_raw(Box::new(CosettreeGroup(g)));
        Ok(())
    })
}

/// # Safety
/// `group` must come from [`cosettree_group_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cosettree_group_free(group: *mut CosettreeGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` must be a live handle; `out_string` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_group_to_string(
    group: *const CosettreeGroup,
    out_string: *mut *mut c_char,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_string)?;
        *slot = c_string(handle(group)?.0.to_string())?;
        Ok(())
    })
}

/// # Safety
/// `group` must be a live handle; `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_group_is_torsion(
    group: *const CosettreeGroup,
    out_result: *mut bool,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_result)?;
        *slot = handle(group)?.0.is_torsion();
        Ok(())
    })
}

/// Torsion with finitely many elements of order `p`.
///
/// # Safety
/// `group` must be a live handle; `out_result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_group_is_p_compact(
    group: *const CosettreeGroup,
    p: u64,
    out_result: *mut bool,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_result)?;
        if !cosettree::abelian::primes::is_prime(p) {
            return Err(AbelianError::NotPrime(p).into());
        }
        *slot = handle(group)?.0.is_p_compact(p);
        Ok(())
    })
}

/// Reads a tree JSON document with the default caps.
///
/// # Safety
/// `tree_json` must be a NUL-terminated string; `out_tree` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_tree_from_json(
    tree_json: *const c_char,
    out_tree: *mut *mut CosettreeTree,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_tree)?;
        let t = read_tree_json(text(tree_json)?, Caps::default())?;
        *slot = Box::into_raw(Box::new(CosettreeTree(t)));
        Ok(())
    })
}

/// # Safety
/// `tree` must come from [`cosettree_tree_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cosettree_tree_free(tree: *mut CosettreeTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Canonical JSON of the tree.
///
/// # Safety
/// `tree` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_tree_to_json(
    tree: *const CosettreeTree,
    out_json: *mut *mut c_char,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_json)?;
        *slot = c_string(json(&tree_to_json(&handle(tree)?.0))?)?;
        Ok(())
    })
}

/// # Safety
/// `tree` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_tree_kind(
    tree: *const CosettreeTree,
    out_group_tree: *mut bool,
    out_coset_tree: *mut bool,
) -> CosettreeStatus {
    guard(|| {
        let t = &handle(tree)?.0;
        *out(out_group_tree)? = t.is_group_tree();
        *out(out_coset_tree)? = t.is_coset_tree();
        Ok(())
    })
}

/// Height of the tree; always finite at finite depth.
///
/// # Safety
/// `tree` must be a live handle; `out_height` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_tree_height(
    tree: *const CosettreeTree,
    mode: CosettreeMode,
    out_height: *mut u64,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_height)?;
        let mode = match mode {
            CosettreeMode::Closed => FrontierMode::ClosedWorld,
            CosettreeMode::Open => FrontierMode::OpenFrontier,
        };
        *slot = height(&handle(tree)?.0, mode)
            .as_finite()
            .ok_or_else(|| Failure(CosettreeStatus::Internal, "infinite height".into()))?;
        Ok(())
    })
}

/// Classifies a spec JSON document; writes the report as JSON.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_classify_json(
    spec_json: *const c_char,
    out_json: *mut *mut c_char,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_json)?;
        let report = classify(&read_spec_json(text(spec_json)?)?)?;
        *slot = c_string(json(&report)?)?;
        Ok(())
    })
}

/// Embedding plan of a tame product spec up to `horizon` (at least 2).
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosettree_embed_plan_json(
    spec_json: *const c_char,
    horizon: u32,
    out_json: *mut *mut c_char,
) -> CosettreeStatus {
    guard(|| {
        let slot = out(out_json)?;
        let plan = embedding_plan(&read_spec_json(text(spec_json)?)?, horizon as usize)?;
        *slot = c_string(json(&plan)?)?;
        Ok(())
    })
}
