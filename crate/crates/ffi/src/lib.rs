//! C ABI over `qfrucht`.
//!
//! Handles are opaque and owned by the caller; free each with its `qf_*_free`. Every call
//! returns a [`QfStatus`]. On failure the message is kept per thread and read back with
//! [`qf_last_error_message`]. Complex arrays are interleaved `re, im` doubles; matrices are
//! row-major. Panics never cross the boundary; they surface as `QF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qfrucht::fingroup::FiniteGroup;
use qfrucht::io::{parse_json, GroupFile};
use qfrucht::linalg::{c64, CVec, C64};
use qfrucht::qgroup::{cayley_graph, central_projection, GroupDual};
use qfrucht::qspace::QuantumGraph;
use qfrucht::rigidity::{rigid_projection_search, s3_rank_one_multiplier, VerdictKind};
use qfrucht::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Parse = 3,
    /// A hypothesis was not met; the call was declined, not broken.
    Refused = 4,
    Numerical = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfVerdict {
    RigidInjective = 0,
    RigidNoncentralSeparated = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QfGraphFlags {
    pub schur_idempotent: bool,
    pub real: bool,
    pub undirected: bool,
    pub loopless: bool,
    pub regular: bool,
    /// Meaningful only when `regular`.
    pub degree_re: f64,
    pub degree_im: f64,
}

/// Finite group.
pub struct QfGroup(FiniteGroup);
/// Dual quantum group of a finite group, with its chosen irreducibles.
pub struct QfDual(GroupDual);
/// Quantum graph on a quantum set.
pub struct QfGraph(QuantumGraph);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.as_bytes().to_vec());
}

fn status_of(e: &Error) -> QfStatus {
    match e {
        Error::Parse { .. } => QfStatus::Parse,
        e if e.is_refusal() => QfStatus::Refused,
        Error::NotNormal(_) | Error::NotQuantumGraph { .. } | Error::NotProjection { .. } | Error::Hopf(_) => {
            QfStatus::Numerical
        }
        _ => QfStatus::InvalidInput,
    }
}

struct Fail(QfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QfStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QfStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            QfStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| Fail(QfStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

/// Writes `values` interleaved into `out`, which holds `len` doubles.
unsafe fn write_complex(values: &[C64], out: *mut f64, len: usize) -> Result<(), Fail> {
    if len < 2 * values.len() {
        return Err(Fail(QfStatus::BufferTooSmall, format!("need {} doubles, got {len}", 2 * values.len())));
    }
    if out.is_null() {
        return Err(null("out"));
    }
    let buf = unsafe { std::slice::from_raw_parts_mut(out, len) };
    for (i, v) in values.iter().enumerate() {
        buf[2 * i] = v.re;
        buf[2 * i + 1] = v.im;
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qf_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated, truncated to
/// `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(msg.as_ptr().cast(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Group by name: `Z<n>`, `S<n>`, `A<n>`, `D<n>`, `Q8`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_group_named(name: *const c_char, out: *mut *mut QfGroup) -> QfStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        let g = FiniteGroup::by_name(unsafe { c_str(name, "name") }?)?;
        *out = Box::into_raw(Box::new(QfGroup(g)));
        Ok(())
    })
}

/// Group from the JSON group-file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_group_from_json(json: *const c_char, out: *mut *mut QfGroup) -> QfStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        let file: GroupFile = parse_json(unsafe { c_str(json, "json") }?, "<json>")?;
        *out = Box::into_raw(Box::new(QfGroup(file.build()?)));
        Ok(())
    })
}

/// # Safety
/// `group` must come from a `qf_group_*` constructor; `order` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_group_order(group: *const QfGroup, order: *mut usize) -> QfStatus {
    guard(|| {
        *unsafe { out_ptr(order, "order") }? = unsafe { as_ref(group, "group") }?.0.order();
        Ok(())
    })
}

/// # Safety
/// `group` must be null or an unfreed handle.
#[no_mangle]
pub unsafe extern "C" fn qf_group_free(group: *mut QfGroup) {
    if !group.is_null() {
        drop(unsafe { Box::from_raw(group) });
    }
}

/// Dual of `group`; irreducibles come from a seeded decomposition of the regular representation.
///
/// # Safety
/// `group` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_dual_new(group: *const QfGroup, seed: u64, tol: f64, out: *mut *mut QfDual) -> QfStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        let g = unsafe { as_ref(group, "group") }?.0.clone();
        *out = Box::into_raw(Box::new(QfDual(GroupDual::from_group(g, seed, tol)?)));
        Ok(())
    })
}

/// Dimension of the underlying quantum set (the group order).
///
/// # Safety
/// `dual` must be a live handle; `dim` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_dual_dim(dual: *const QfDual, dim: *mut usize) -> QfStatus {
    guard(|| {
        *unsafe { out_ptr(dim, "dim") }? = unsafe { as_ref(dual, "dual") }?.0.space().dim();
        Ok(())
    })
}

/// Block sizes of the irreducibles, in block order. `count` receives the number of blocks
/// even when `dims` is too small.
///
/// # Safety
/// `dual` must be a live handle; `dims` valid for `len` writes; `count` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_dual_irrep_dims(
    dual: *const QfDual,
    dims: *mut usize,
    len: usize,
    count: *mut usize,
) -> QfStatus {
    guard(|| {
        let blocks = unsafe { as_ref(dual, "dual") }?.0.space().blocks().to_vec();
        *unsafe { out_ptr(count, "count") }? = blocks.len();
        if len < blocks.len() {
            return Err(Fail(QfStatus::BufferTooSmall, format!("need {} entries, got {len}", blocks.len())));
        }
        if dims.is_null() {
            return Err(null("dims"));
        }
        unsafe { std::ptr::copy_nonoverlapping(blocks.as_ptr(), dims, blocks.len()) };
        Ok(())
    })
}

/// # Safety
/// `dual` must be null or an unfreed handle.
#[no_mangle]
pub unsafe extern "C" fn qf_dual_free(dual: *mut QfDual) {
    if !dual.is_null() {
        drop(unsafe { Box::from_raw(dual) });
    }
}

fn make_cayley(dual: &GroupDual, p: &CVec, tol: f64) -> Result<*mut QfGraph, Fail> {
    let (graph, _) = cayley_graph(dual.qgroup(), p, tol)?;
    Ok(Box::into_raw(Box::new(QfGraph(graph))))
}

/// Cayley graph of a block-basis projection given as `2 * dim` interleaved doubles.
///
/// # Safety
/// `dual` must be a live handle; `projection` valid for `len` reads; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_cayley_graph(
    dual: *const QfDual,
    projection: *const f64,
    len: usize,
    tol: f64,
    out: *mut *mut QfGraph,
) -> QfStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        let d = &unsafe { as_ref(dual, "dual") }?.0;
        let raw = unsafe { slice(projection, len, "projection") }?;
        if raw.len() != 2 * d.space().dim() {
            return Err(Fail(
                QfStatus::InvalidInput,
                format!("projection needs {} doubles, got {len}", 2 * d.space().dim()),
            ));
        }
        let p = CVec::from_fn(d.space().dim(), |i, _| c64(raw[2 * i], raw[2 * i + 1]));
        *out = make_cayley(d, &p, tol)?;
        Ok(())
    })
}

/// Cayley graph of the central projection on the listed irreducible indices.
///
/// # Safety
/// `dual` must be a live handle; `irreps` valid for `count` reads; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_cayley_central(
    dual: *const QfDual,
    irreps: *const usize,
    count: usize,
    tol: f64,
    out: *mut *mut QfGraph,
) -> QfStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        let d = &unsafe { as_ref(dual, "dual") }?.0;
        let subset = unsafe { slice(irreps, count, "irreps") }?;
        let p = d.to_block(&central_projection(d, subset)?);
        *out = make_cayley(d, &p, tol)?;
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle; `dim` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_graph_dim(graph: *const QfGraph, dim: *mut usize) -> QfStatus {
    guard(|| {
        *unsafe { out_ptr(dim, "dim") }? = unsafe { as_ref(graph, "graph") }?.0.space().dim();
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle; `flags` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qf_graph_flags(graph: *const QfGraph, flags: *mut QfGraphFlags) -> QfStatus {
    guard(|| {
        let f = unsafe { as_ref(graph, "graph") }?.0.flags();
        let [re, im] = f.regular_degree.unwrap_or([0.0, 0.0]);
        *unsafe { out_ptr(flags, "flags") }? = QfGraphFlags {
            schur_idempotent: f.schur_idempotent,
            real: f.real,
            undirected: f.undirected,
            loopless: f.loopless,
            regular: f.regular_degree.is_some(),
            degree_re: re,
            degree_im: im,
        };
        Ok(())
    })
}

/// Adjacency matrix in the matrix-unit basis, row-major, `2 * dim * dim` doubles.
///
/// # Safety
/// `graph` must be a live handle; `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qf_graph_adjacency(graph: *const QfGraph, out: *mut f64, len: usize) -> QfStatus {
    guard(|| {
        let m = unsafe { as_ref(graph, "graph") }?.0.adjacency().matrix();
        let values: Vec<C64> = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect();
        unsafe { write_complex(&values, out, len) }
    })
}

/// # Safety
/// `graph` must be null or an unfreed handle.
#[no_mangle]
pub unsafe extern "C" fn qf_graph_free(graph: *mut QfGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Seeded random search for a rigid projection. Writes the verdict of the returned trial and,
/// when `projection` is non-null, the block-basis projection (`2 * dim` doubles).
/// Abelian groups are refused with `QF_STATUS_REFUSED`.
///
/// # Safety
/// `dual` must be a live handle; `verdict` valid for writes; `projection` null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qf_rigid_search(
    dual: *const QfDual,
    seed: u64,
    trials: usize,
    tol: f64,
    verdict: *mut QfVerdict,
    projection: *mut f64,
    len: usize,
) -> QfStatus {
    guard(|| {
        let d = &unsafe { as_ref(dual, "dual") }?.0;
        let verdict = unsafe { out_ptr(verdict, "verdict") }?;
        let r = rigid_projection_search(d, seed, trials, tol, 1)?;
        *verdict = match r.verdict.kind {
            VerdictKind::RigidInjective => QfVerdict::RigidInjective,
            VerdictKind::RigidNoncentralSeparated => QfVerdict::RigidNoncentralSeparated,
            VerdictKind::Inconclusive => QfVerdict::Inconclusive,
        };
        if !projection.is_null() {
            unsafe { write_complex(&r.projection, projection, len) }?;
        }
        Ok(())
    })
}

/// Six interleaved values of the S3 rank-one multiplier at `alpha`, in the order
/// e, (1 2), (1 3), (2 3), (1 2 3), (1 3 2).
///
/// # Safety
/// `out` must be valid for 12 writes.
#[no_mangle]
pub unsafe extern "C" fn qf_s3_rank_one_multiplier(alpha_re: f64, alpha_im: f64, out: *mut f64) -> QfStatus {
    guard(|| unsafe { write_complex(&s3_rank_one_multiplier(c64(alpha_re, alpha_im)), out, 12) })
}
