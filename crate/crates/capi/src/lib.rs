//! Flat C interface: opaque surface handles, plain buffers and a
//! per-thread last-error message. Functions returning `c_int` use
//! `0` for success, `1` for invalid input and `2` for numerical failures.
//! Handles must not be shared between threads.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use curvenet::io::{tessellate, NetworkDocument, SurfaceDocument};
use curvenet::profiles::{cst_evaluate, CstParameters};
use curvenet::{build_gordon_surface, Error, Surface};

pub const CURVENET_OK: c_int = 0;
pub const CURVENET_INVALID: c_int = 1;
pub const CURVENET_NUMERIC: c_int = 2;

/// Opaque surface handle.
pub struct CurvenetSurface {
    surface: Surface,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn fail(e: &Error, msg: String) -> c_int {
    set_error(msg);
    if e.is_numeric() {
        CURVENET_NUMERIC
    } else {
        CURVENET_INVALID
    }
}

unsafe fn text_arg<'a>(text: *const c_char) -> Option<&'a str> {
    if text.is_null() {
        set_error("null text argument");
        return None;
    }
    match CStr::from_ptr(text).to_str() {
        Ok(s) => Some(s),
        Err(_) => {
            set_error("text argument is not valid UTF-8");
            None
        }
    }
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn curvenet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the Gordon surface of a JSON network document. Returns null on
/// failure.
///
/// # Safety
/// `document` must be null or a valid nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn curvenet_gordon_from_json(document: *const c_char) -> *mut CurvenetSurface {
    let Some(text) = text_arg(document) else { return ptr::null_mut() };
    let doc = match NetworkDocument::parse(text) {
        Ok(d) => d,
        Err(e) => {
            set_error(e.to_string());
            return ptr::null_mut();
        }
    };
    match doc.network().and_then(|net| build_gordon_surface(&net, &doc.config())) {
        Ok(g) => Box::into_raw(Box::new(CurvenetSurface { surface: g.surface })),
        Err(e) => {
            set_error(doc.describe(&e));
            ptr::null_mut()
        }
    }
}

/// Loads a JSON surface document. Returns null on failure.
///
/// # Safety
/// `document` must be null or a valid nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn curvenet_surface_from_json(document: *const c_char) -> *mut CurvenetSurface {
    let Some(text) = text_arg(document) else { return ptr::null_mut() };
    match SurfaceDocument::parse(text).and_then(|d| d.to_surface()) {
        Ok(surface) => Box::into_raw(Box::new(CurvenetSurface { surface })),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `handle` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn curvenet_surface_free(handle: *mut CurvenetSurface) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Writes the surface point at `(u, v)` to `out[0..3]`.
///
/// # Safety
/// `handle` must be a live handle and `out` must hold three doubles.
#[no_mangle]
pub unsafe extern "C" fn curvenet_evaluate(handle: *const CurvenetSurface, u: f64, v: f64, out: *mut f64) -> c_int {
    if handle.is_null() || out.is_null() {
        set_error("null handle or output buffer");
        return CURVENET_INVALID;
    }
    match (*handle).surface.evaluate(u, v) {
        Ok(p) => {
            std::slice::from_raw_parts_mut(out, 3).copy_from_slice(&p.0);
            CURVENET_OK
        }
        Err(e) => fail(&e, e.to_string()),
    }
}

/// Tessellates into caller buffers: `nu * nv * 3` vertex coordinates and
/// `2 * (nu - 1) * (nv - 1) * 3` zero-based triangle indices.
///
/// # Safety
/// `handle` must be a live handle; each buffer must hold at least the
/// stated number of elements.
#[no_mangle]
pub unsafe extern "C" fn curvenet_tessellate(
    handle: *const CurvenetSurface,
    nu: usize,
    nv: usize,
    vertices: *mut f64,
    vertices_len: usize,
    triangles: *mut u32,
    triangles_len: usize,
) -> c_int {
    if handle.is_null() || vertices.is_null() || triangles.is_null() {
        set_error("null handle or output buffer");
        return CURVENET_INVALID;
    }
    let grid = match tessellate(&(*handle).surface, nu, nv) {
        Ok(g) => g,
        Err(e) => return fail(&e, e.to_string()),
    };
    let nvert = grid.vertices.len() * 3;
    let ntri = grid.triangles.len() * 3;
    if vertices_len < nvert || triangles_len < ntri {
        set_error(format!("buffers too small: need {nvert} coordinates and {ntri} indices"));
        return CURVENET_INVALID;
    }
    if grid.vertices.len() > u32::MAX as usize {
        set_error("too many vertices for 32-bit indices");
        return CURVENET_INVALID;
    }
    let vbuf = std::slice::from_raw_parts_mut(vertices, nvert);
    for (chunk, p) in vbuf.chunks_exact_mut(3).zip(&grid.vertices) {
        chunk.copy_from_slice(&p.0);
    }
    let tbuf = std::slice::from_raw_parts_mut(triangles, ntri);
    for (chunk, t) in tbuf.chunks_exact_mut(3).zip(&grid.triangles) {
        for (dst, src) in chunk.iter_mut().zip(t) {
            *dst = *src as u32;
        }
    }
    CURVENET_OK
}

/// Evaluates a CST curve with `n_coefficients` shape coefficients at
/// `psi`, writing the height to `out`.
///
/// # Safety
/// `coefficients` must hold `n_coefficients` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn curvenet_cst_evaluate(
    n1: f64,
    n2: f64,
    coefficients: *const f64,
    n_coefficients: usize,
    zeta_te: f64,
    psi: f64,
    out: *mut f64,
) -> c_int {
    if coefficients.is_null() || out.is_null() {
        set_error("null coefficient or output pointer");
        return CURVENET_INVALID;
    }
    let a = std::slice::from_raw_parts(coefficients, n_coefficients).to_vec();
    match CstParameters::new(n1, n2, a, zeta_te).and_then(|p| cst_evaluate(&p, psi)) {
        Ok(z) => {
            *out = z;
            CURVENET_OK
        }
        Err(e) => fail(&e, e.to_string()),
    }
}
