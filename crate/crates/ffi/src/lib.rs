//! C ABI for the tropic library.
//!
//! Conventions:
//! * Every object is an opaque handle created by a `*_parse`/constructor
//!   call and released by the matching `*_free`. Handles are not thread
//!   safe; share them behind your own synchronization.
//! * Every fallible function returns a `TROP_*` status code and writes
//!   its results through out-pointers, which are touched only on
//!   `TROP_OK` (except buffer queries, which always report the needed
//!   size). On any non-OK status, [`trop_last_error`] retrieves a
//!   human-readable message for the calling thread.
//! * Buffers: callers pass `(buf, cap)` and receive the required size;
//!   when `cap` is too small nothing is copied and the call reports
//!   `TROP_ERR_BUFFER`, so a two-call size-then-fill pattern works.
//! * Panics never cross the boundary; they surface as `TROP_ERR_PANIC`.

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use tropic::amoeba::{default_probes, sample_hypersurface, spine, ComplexPolynomial, PointCloud};
use tropic::exact::f64_of_rational;
use tropic::pants::{euler_characteristics, pants_graph};
use tropic::tropical::{corner_locus, TropicalHypersurface, TropicalPolynomial};
use tropic::Error;

pub const TROP_OK: i32 = 0;
/// A required pointer argument was null.
pub const TROP_ERR_NULL: i32 = 1;
/// Input text was not valid UTF-8.
pub const TROP_ERR_UTF8: i32 = 2;
/// The input failed to parse or was inconsistent.
pub const TROP_ERR_INVALID: i32 = 3;
/// The operation is undefined for this input (domain error).
pub const TROP_ERR_DOMAIN: i32 = 4;
/// The destination buffer was too small; nothing was copied.
pub const TROP_ERR_BUFFER: i32 = 5;
/// An internal invariant failed; the handle remains usable.
pub const TROP_ERR_PANIC: i32 = 6;

/// Sentinel for "not defined" in integer outputs (e.g. the genus in
/// ambient dimension above two).
pub const TROP_UNDEFINED: i64 = i64::MIN;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn clear_error() {
    LAST_ERROR.with(|e| e.borrow_mut().clear());
}

fn status_of(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) => TROP_ERR_INVALID,
        _ => TROP_ERR_DOMAIN,
    }
}

fn guarded(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            TROP_ERR_PANIC
        }
    }
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string, truncating if needed, and returns the full
/// message length in bytes (excluding the NUL). A zero return means the
/// last call on this thread succeeded. `buf` may be null when `cap` is 0.
#[no_mangle]
pub unsafe extern "C" fn trop_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// A tropical polynomial (exact rational coefficients).
#[allow(non_camel_case_types)]
pub struct trop_tropical(TropicalPolynomial);

/// A complex Laurent polynomial.
#[allow(non_camel_case_types)]
pub struct trop_complex(ComplexPolynomial);

/// The corner locus of a tropical polynomial, with its dual data.
#[allow(non_camel_case_types)]
pub struct trop_locus(TropicalHypersurface);

/// A sampled point cloud in log/argument/phase coordinates.
#[allow(non_camel_case_types)]
pub struct trop_cloud(PointCloud);

unsafe fn text_from<'a>(ptr: *const c_char) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_error("null text pointer");
        return Err(TROP_ERR_NULL);
    }
    std::ffi::CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("text is not valid UTF-8");
        TROP_ERR_UTF8
    })
}

unsafe fn deref<'a, T>(ptr: *const T) -> Result<&'a T, i32> {
    if ptr.is_null() {
        set_error("null handle");
        return Err(TROP_ERR_NULL);
    }
    Ok(&*ptr)
}

unsafe fn out<'a, T>(ptr: *mut T) -> Result<&'a mut T, i32> {
    if ptr.is_null() {
        set_error("null out-pointer");
        return Err(TROP_ERR_NULL);
    }
    Ok(&mut *ptr)
}

fn emit<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Writes `text` into `(buf, cap)` NUL-terminated; reports the size
/// needed (including the NUL) through `needed`.
unsafe fn fill_text(text: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> i32 {
    let want = text.len() + 1;
    if !needed.is_null() {
        *needed = want;
    }
    if buf.is_null() || cap < want {
        set_error("buffer too small");
        return TROP_ERR_BUFFER;
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    TROP_OK
}

// ---------------------------------------------------------------------------
// Tropical polynomials
// ---------------------------------------------------------------------------

/// Parses tropical polynomial text (`coeff : e1 … en`, one term per line).
#[no_mangle]
pub unsafe extern "C" fn trop_tropical_parse(
    text: *const c_char,
    handle: *mut *mut trop_tropical,
) -> i32 {
    guarded(|| {
        clear_error();
        let text = match text_from(text) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let slot = match out(handle) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match tropic::formats::parse_tropical(text) {
            Ok(f) => {
                *slot = emit(trop_tropical(f));
                TROP_OK
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Releases a tropical polynomial handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn trop_tropical_free(handle: *mut trop_tropical) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of variables.
#[no_mangle]
pub unsafe extern "C" fn trop_tropical_ambient_dim(
    handle: *const trop_tropical,
    n: *mut usize,
) -> i32 {
    guarded(|| {
        clear_error();
        match (deref(handle), out(n)) {
            (Ok(h), Ok(slot)) => {
                *slot = h.0.ambient_dim();
                TROP_OK
            }
            (Err(code), _) | (_, Err(code)) => code,
        }
    })
}

/// Number of terms.
#[no_mangle]
pub unsafe extern "C" fn trop_tropical_term_count(
    handle: *const trop_tropical,
    count: *mut usize,
) -> i32 {
    guarded(|| {
        clear_error();
        match (deref(handle), out(count)) {
            (Ok(h), Ok(slot)) => {
                *slot = h.0.num_terms();
                TROP_OK
            }
            (Err(code), _) | (_, Err(code)) => code,
        }
    })
}

/// Canonical text form (round-trips through [`trop_tropical_parse`]).
#[no_mangle]
pub unsafe extern "C" fn trop_tropical_write(
    handle: *const trop_tropical,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> i32 {
    guarded(|| {
        clear_error();
        let h = match deref(handle) {
            Ok(h) => h,
            Err(code) => return code,
        };
        fill_text(&tropic::formats::write_tropical(&h.0), buf, cap, needed)
    })
}

// ---------------------------------------------------------------------------
// Complex polynomials
// ---------------------------------------------------------------------------

/// Parses complex polynomial text (`re im : e1 … en`, one term per line).
#[no_mangle]
pub unsafe extern "C" fn trop_complex_parse(
    text: *const c_char,
    handle: *mut *mut trop_complex,
) -> i32 {
    guarded(|| {
        clear_error();
        let text = match text_from(text) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let slot = match out(handle) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match tropic::formats::parse_complex(text) {
            Ok(f) => {
                *slot = emit(trop_complex(f));
                TROP_OK
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Releases a complex polynomial handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn trop_complex_free(handle: *mut trop_complex) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of variables.
#[no_mangle]
pub unsafe extern "C" fn trop_complex_ambient_dim(
    handle: *const trop_complex,
    n: *mut usize,
) -> i32 {
    guarded(|| {
        clear_error();
        match (deref(handle), out(n)) {
            (Ok(h), Ok(slot)) => {
                *slot = h.0.ambient_dim();
                TROP_OK
            }
            (Err(code), _) | (_, Err(code)) => code,
        }
    })
}

// ---------------------------------------------------------------------------
// Corner loci
// ---------------------------------------------------------------------------

/// Computes the corner locus of a tropical polynomial.
#[no_mangle]
pub unsafe extern "C" fn trop_corner_locus(
    poly: *const trop_tropical,
    handle: *mut *mut trop_locus,
) -> i32 {
    guarded(|| {
        clear_error();
        let (p, slot) = match (deref(poly), out(handle)) {
            (Ok(p), Ok(s)) => (p, s),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        match corner_locus(&p.0) {
            Ok(locus) => {
                *slot = emit(trop_locus(locus));
                TROP_OK
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Releases a corner-locus handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn trop_locus_free(handle: *mut trop_locus) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of variables of the ambient space.
#[no_mangle]
pub unsafe extern "C" fn trop_locus_ambient_dim(
    handle: *const trop_locus,
    n: *mut usize,
) -> i32 {
    guarded(|| {
        clear_error();
        match (deref(handle), out(n)) {
            (Ok(h), Ok(slot)) => {
                *slot = h.0.ambient_dim;
                TROP_OK
            }
            (Err(code), _) | (_, Err(code)) => code,
        }
    })
}

/// Number of cells of the given dimension.
#[no_mangle]
pub unsafe extern "C" fn trop_locus_cell_count(
    handle: *const trop_locus,
    dim: usize,
    count: *mut usize,
) -> i32 {
    guarded(|| {
        clear_error();
        match (deref(handle), out(count)) {
            (Ok(h), Ok(slot)) => {
                *slot = h.0.cells_of_dim(dim).count();
                TROP_OK
            }
            (Err(code), _) | (_, Err(code)) => code,
        }
    })
}

/// Whether the dual subdivision is a unimodular triangulation (writes 1)
/// or not (writes 0).
#[no_mangle]
pub unsafe extern "C" fn trop_locus_is_smooth(
    handle: *const trop_locus,
    smooth: *mut i32,
) -> i32 {
    guarded(|| {
        clear_error();
        match (deref(handle), out(smooth)) {
            (Ok(h), Ok(slot)) => {
                *slot = i32::from(h.0.is_smooth());
                TROP_OK
            }
            (Err(code), _) | (_, Err(code)) => code,
        }
    })
}

/// Copies all 0-cell positions into `buf`, one row of `ambient_dim`
/// doubles per vertex. `needed` receives the required double count.
#[no_mangle]
pub unsafe extern "C" fn trop_locus_vertices(
    handle: *const trop_locus,
    buf: *mut f64,
    cap: usize,
    needed: *mut usize,
) -> i32 {
    guarded(|| {
        clear_error();
        let h = match deref(handle) {
            Ok(h) => h,
            Err(code) => return code,
        };
        let vertices = h.0.vertex_points();
        let want = vertices.len() * h.0.ambient_dim;
        if !needed.is_null() {
            *needed = want;
        }
        if buf.is_null() || cap < want {
            set_error("buffer too small");
            return TROP_ERR_BUFFER;
        }
        let mut cursor = buf;
        for v in &vertices {
            for x in v {
                *cursor = f64_of_rational(x);
                cursor = cursor.add(1);
            }
        }
        TROP_OK
    })
}

/// Pants-decomposition summary of a smooth corner locus. `chi_compact`
/// and `genus` receive `TROP_UNDEFINED` when the ambient dimension is
/// above two; `conjectural` receives 1 when the Euler characteristic is
/// extrapolated beyond curves.
#[no_mangle]
pub unsafe extern "C" fn trop_locus_pants(
    handle: *const trop_locus,
    nodes: *mut usize,
    internal_edges: *mut usize,
    legs: *mut usize,
    chi_open: *mut i64,
    chi_compact: *mut i64,
    genus: *mut i64,
    conjectural: *mut i32,
) -> i32 {
    guarded(|| {
        clear_error();
        let h = match deref(handle) {
            Ok(h) => h,
            Err(code) => return code,
        };
        let slots = (
            out(nodes),
            out(internal_edges),
            out(legs),
            out(chi_open),
            out(chi_compact),
            out(genus),
            out(conjectural),
        );
        let (Ok(nodes), Ok(edges), Ok(legs), Ok(chi_o), Ok(chi_c), Ok(genus), Ok(conj)) = slots
        else {
            return TROP_ERR_NULL;
        };
        match pants_graph(&h.0) {
            Ok(graph) => {
                let euler = euler_characteristics(&graph);
                *nodes = graph.nodes.len();
                *edges = graph.internal_edges.len();
                *legs = graph.legs.len();
                *chi_o = euler.chi_open;
                *chi_c = euler.chi_compact.unwrap_or(TROP_UNDEFINED);
                *genus = euler.genus.unwrap_or(TROP_UNDEFINED);
                *conj = i32::from(euler.conjectural);
                TROP_OK
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

// ---------------------------------------------------------------------------
// Sampling and spines
// ---------------------------------------------------------------------------

/// Samples `k` points of the hypersurface of `poly` at stretch `t > 1`
/// inside the log-coordinate box `bounds` (`2n` doubles: lo/hi pairs).
#[no_mangle]
pub unsafe extern "C" fn trop_complex_sample(
    poly: *const trop_complex,
    t: f64,
    bounds: *const f64,
    k: usize,
    seed: u64,
    handle: *mut *mut trop_cloud,
) -> i32 {
    guarded(|| {
        clear_error();
        let (p, slot) = match (deref(poly), out(handle)) {
            (Ok(p), Ok(s)) => (p, s),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        if bounds.is_null() {
            set_error("null bounds pointer");
            return TROP_ERR_NULL;
        }
        let n = p.0.ambient_dim();
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (*bounds.add(2 * i), *bounds.add(2 * i + 1)))
            .collect();
        match sample_hypersurface(&p.0, t, &pairs, k, seed) {
            Ok(cloud) => {
                *slot = emit(trop_cloud(cloud));
                TROP_OK
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Recovers the snapped spine of the amoeba of `poly` as a new tropical
/// polynomial handle; `snap_error` (optional) receives the worst
/// estimate-to-snap distance.
#[no_mangle]
pub unsafe extern "C" fn trop_complex_spine(
    poly: *const trop_complex,
    probe_radius: f64,
    n_samples: usize,
    seed: u64,
    snap_error: *mut f64,
    handle: *mut *mut trop_tropical,
) -> i32 {
    guarded(|| {
        clear_error();
        let (p, slot) = match (deref(poly), out(handle)) {
            (Ok(p), Ok(s)) => (p, s),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        let result = default_probes(&p.0, probe_radius)
            .and_then(|probes| spine(&p.0, &probes, n_samples, seed));
        match result {
            Ok(r) => {
                if !snap_error.is_null() {
                    *snap_error = r.snap_error;
                }
                *slot = emit(trop_tropical(r.spine));
                TROP_OK
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Releases a point-cloud handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn trop_cloud_free(handle: *mut trop_cloud) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of points in the cloud.
#[no_mangle]
pub unsafe extern "C" fn trop_cloud_len(handle: *const trop_cloud, len: *mut usize) -> i32 {
    guarded(|| {
        clear_error();
        match (deref(handle), out(len)) {
            (Ok(h), Ok(slot)) => {
                *slot = h.0.len();
                TROP_OK
            }
            (Err(code), _) | (_, Err(code)) => code,
        }
    })
}

/// Doubles per point (`n` log coordinates followed by `n` arguments for
/// phase-space clouds).
#[no_mangle]
pub unsafe extern "C" fn trop_cloud_width(handle: *const trop_cloud, width: *mut usize) -> i32 {
    guarded(|| {
        clear_error();
        match (deref(handle), out(width)) {
            (Ok(h), Ok(slot)) => {
                *slot = h.0.points().first().map_or(0, |p| p.len());
                TROP_OK
            }
            (Err(code), _) | (_, Err(code)) => code,
        }
    })
}

/// Copies the cloud row-major into `buf`; `needed` receives
/// `len × width`.
#[no_mangle]
pub unsafe extern "C" fn trop_cloud_points(
    handle: *const trop_cloud,
    buf: *mut f64,
    cap: usize,
    needed: *mut usize,
) -> i32 {
    guarded(|| {
        clear_error();
        let h = match deref(handle) {
            Ok(h) => h,
            Err(code) => return code,
        };
        let want: usize = h.0.points().iter().map(Vec::len).sum();
        if !needed.is_null() {
            *needed = want;
        }
        if buf.is_null() || cap < want {
            set_error("buffer too small");
            return TROP_ERR_BUFFER;
        }
        let mut cursor = buf;
        for row in h.0.points() {
            for &x in row {
                *cursor = x;
                cursor = cursor.add(1);
            }
        }
        TROP_OK
    })
}
