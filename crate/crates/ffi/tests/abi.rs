use std::ffi::CStr;
use std::ptr;

use incvor_ffi::*;

#[test]
fn lifecycle_and_counts() {
    let h = vd_diagram_new(1000);
    assert!(!h.is_null());
    let mut st = VdInsertStats::default();
    unsafe {
        assert_eq!(vd_insert(h, 0, 0, &mut st), VdStatus::VD_OK);
        assert_eq!(st.links + st.cuts, 3);
        assert_eq!(vd_insert(h, 10, 0, ptr::null_mut()), VdStatus::VD_OK);
        assert_eq!(vd_insert(h, 5, 9, ptr::null_mut()), VdStatus::VD_OK);
        assert_eq!(vd_site_count(h), 3);
        assert_eq!(vd_vertex_count(h), 2 * 6 - 5);
        assert_eq!(vd_edge_count(h), 3 * 6 - 9);
        assert_eq!(vd_check_invariants(h), VdStatus::VD_OK);
        vd_diagram_free(h);
    }
}

#[test]
fn error_codes() {
    let h = vd_diagram_new(100);
    unsafe {
        for (x, y) in [(0, 0), (4, 0), (0, 4)] {
            assert_eq!(vd_insert(h, x, y, ptr::null_mut()), VdStatus::VD_OK);
        }
        assert_eq!(vd_insert(h, 4, 4, ptr::null_mut()), VdStatus::VD_DEGENERATE);
        assert_eq!(vd_insert(h, 0, 0, ptr::null_mut()), VdStatus::VD_DUPLICATE);
        assert_eq!(vd_insert(h, 101, 0, ptr::null_mut()), VdStatus::VD_OUT_OF_BOUNDS);
        assert_eq!(vd_site_count(h), 3);
        assert_eq!(vd_check_invariants(h), VdStatus::VD_OK);
        vd_diagram_free(h);
        assert_eq!(vd_insert(ptr::null_mut(), 0, 0, ptr::null_mut()), VdStatus::VD_NULL_POINTER);
        assert_eq!(vd_check_invariants(ptr::null()), VdStatus::VD_NULL_POINTER);
        assert!(vd_export_text(ptr::null(), false).is_null());
        vd_diagram_free(ptr::null_mut());
        vd_string_free(ptr::null_mut());
    }
    assert!(vd_diagram_new(0).is_null());
}

#[test]
fn text_export_parses() {
    let h = vd_diagram_new(1 << 20);
    unsafe {
        for i in 0..50i64 {
            assert_eq!(vd_insert(h, i * 37 % 101, i * 53 % 97, ptr::null_mut()), VdStatus::VD_OK);
        }
        let s = vd_export_text(h, true);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        vd_string_free(s);
        vd_diagram_free(h);
        let ex = incvor::export::parse_text(&text).unwrap();
        ex.check().unwrap();
        assert_eq!(ex.num_sites, 53);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/incvor.h")).unwrap();
    for name in ["vd_diagram_new", "vd_diagram_free", "vd_insert", "vd_export_text", "vd_string_free", "VD_DEGENERATE", "VdInsertStats"] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
