//! C ABI over the incremental Voronoi engine.
//!
//! Handles are opaque heap pointers owned by the caller; every function
//! tolerates null and reports it with `VD_NULL_POINTER`.

use std::ffi::{c_char, CString};
use std::ptr;

use incvor::export;
use incvor::{Error, Voronoi};

/// Status codes returned by every fallible call.
#[allow(non_camel_case_types)]
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VdStatus {
    VD_OK = 0,
    VD_DEGENERATE = 1,
    VD_DUPLICATE = 2,
    VD_OUT_OF_BOUNDS = 3,
    VD_STRUCTURE = 4,
    VD_NULL_POINTER = 5,
}

impl From<&Error> for VdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Degeneracy(_) => VdStatus::VD_DEGENERATE,
            Error::DuplicateSite { .. } => VdStatus::VD_DUPLICATE,
            Error::OutOfBounds { .. } => VdStatus::VD_OUT_OF_BOUNDS,
            Error::EmptyIndex | Error::Structure(_) => VdStatus::VD_STRUCTURE,
        }
    }
}

/// Opaque diagram handle.
pub struct VdDiagram {
    inner: Voronoi,
}

/// Counters of the most recent successful insertion.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VdInsertStats {
    pub links: u64,
    pub cuts: u64,
    pub cells_changed: u64,
    pub dcr_rebuilds: u64,
    pub time_ns: u64,
}

/// Creates an empty diagram accepting coordinates in `[-bound, bound]`.
/// Returns null if the bound is not positive or too large.
#[no_mangle]
pub extern "C" fn vd_diagram_new(bound: i64) -> *mut VdDiagram {
    match Voronoi::new(bound) {
        Ok(inner) => Box::into_raw(Box::new(VdDiagram { inner })),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `h` must be null or a handle from `vd_diagram_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vd_diagram_free(h: *mut VdDiagram) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Inserts a site. On failure the diagram is unchanged. `stats` may be null.
///
/// # Safety
/// `h` must be a live handle; `stats` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn vd_insert(h: *mut VdDiagram, x: i64, y: i64, stats: *mut VdInsertStats) -> VdStatus {
    let Some(d) = h.as_mut() else {
        return VdStatus::VD_NULL_POINTER;
    };
    match d.inner.insert(x, y) {
        Ok(s) => {
            if let Some(out) = stats.as_mut() {
                *out = VdInsertStats {
                    links: s.links,
                    cuts: s.cuts,
                    cells_changed: s.cells_changed as u64,
                    dcr_rebuilds: s.dcr_rebuilds,
                    time_ns: s.wall_time.as_nanos() as u64,
                };
            }
            VdStatus::VD_OK
        }
        Err(e) => VdStatus::from(&e),
    }
}

/// Number of inserted sites, sentinels excluded.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vd_site_count(h: *const VdDiagram) -> u64 {
    h.as_ref().map_or(0, |d| d.inner.diagram().num_user_sites() as u64)
}

/// Number of finite Voronoi vertices.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vd_vertex_count(h: *const VdDiagram) -> u64 {
    h.as_ref().map_or(0, |d| d.inner.diagram().vertex_count() as u64)
}

/// Number of finite Voronoi edges.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vd_edge_count(h: *const VdDiagram) -> u64 {
    h.as_ref().map_or(0, |d| d.inner.diagram().edge_count() as u64)
}

/// Full consistency check of the diagram and its indices.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vd_check_invariants(h: *const VdDiagram) -> VdStatus {
    match h.as_ref() {
        None => VdStatus::VD_NULL_POINTER,
        Some(d) => match d.inner.check_invariants() {
            Ok(()) => VdStatus::VD_OK,
            Err(e) => VdStatus::from(&e),
        },
    }
}

/// Text export of the diagram, to be released with `vd_string_free`.
/// Returns null on a null handle or an internal error.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vd_export_text(h: *const VdDiagram, include_sentinels: bool) -> *mut c_char {
    let Some(d) = h.as_ref() else {
        return ptr::null_mut();
    };
    export::to_text(d.inner.diagram(), include_sentinels)
        .ok()
        .and_then(|s| CString::new(s).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn vd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
