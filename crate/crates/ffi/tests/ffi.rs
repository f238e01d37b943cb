use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ncs_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { ncs_string_free(p) };
    s
}

fn last_error() -> String {
    let p = ncs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn graph_lifecycle_and_bounds() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ncs_graph_complete(5, &mut g) }, NcsStatus::Ok);
    assert_eq!(unsafe { ncs_graph_node_count(g) }, 5);
    assert_eq!(unsafe { ncs_graph_edge_count(g) }, 10);
    let mut lambda = 0;
    assert_eq!(
        unsafe { ncs_edge_connectivity(g, &mut lambda) },
        NcsStatus::Ok
    );
    assert_eq!(lambda, 4);
    let mut k = 0;
    assert_eq!(unsafe { ncs_tight_bound(g, &mut k) }, NcsStatus::Ok);
    assert_eq!(k, 1);
    let mut resilient = false;
    assert_eq!(
        unsafe { ncs_is_k_resilient(g, 2, &mut resilient) },
        NcsStatus::Ok
    );
    assert!(!resilient);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ncs_graph_to_json(g, &mut json) }, NcsStatus::Ok);
    assert!(take_string(json).starts_with(r#"{"edges":[[0,1],[0,2]"#));
    unsafe { ncs_graph_free(g) };
    assert_eq!(ncs_edge_count_lower_bound(6, 1), 9);
}

#[test]
fn flat_edge_arrays_and_errors() {
    let edges: [usize; 4] = [0, 1, 2, 3];
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { ncs_graph_new(4, edges.as_ptr(), 2, &mut g) },
        NcsStatus::Ok
    );
    let mut k = 0;
    assert_eq!(
        unsafe { ncs_tight_bound(g, &mut k) },
        NcsStatus::Disconnected
    );
    assert!(last_error().contains("disconnected"));
    unsafe { ncs_graph_free(g) };

    let looped: [usize; 2] = [1, 1];
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { ncs_graph_new(3, looped.as_ptr(), 1, &mut g) },
        NcsStatus::InvalidGraph
    );
    assert!(g.is_null());
    assert_eq!(
        unsafe { ncs_graph_new(3, ptr::null(), 1, &mut g) },
        NcsStatus::NullPointer
    );
    assert_eq!(
        unsafe { ncs_tight_bound(ptr::null(), &mut k) },
        NcsStatus::NullPointer
    );
    assert_eq!(unsafe { ncs_graph_node_count(ptr::null()) }, 0);
    unsafe { ncs_graph_free(ptr::null_mut()) };
    unsafe { ncs_string_free(ptr::null_mut()) };
}

#[test]
fn parse_and_sync() {
    let text = CString::new("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { ncs_graph_parse(text.as_ptr(), &mut g) },
        NcsStatus::Ok
    );
    assert_eq!(unsafe { ncs_graph_edge_count(g) }, 6);
    unsafe { ncs_graph_free(g) };

    let doc = CString::new(
        r#"{"graph": {"nodes": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]},
            "measurements": [[0,1,"-1"],[0,2,"-2.5"],[0,3,"3"],[1,2,"-1.5"],[1,3,"14"],[2,3,"5.5"]]}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ncs_sync_json(doc.as_ptr(), NcsAlgorithm::Fast, true, 2.0, &mut out) },
        NcsStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["offsets"], serde_json::json!(["1", "2.5", "-3"]));
    assert_eq!(v["detected_faults"], serde_json::json!([[1, 3, "10"]]));

    let bad = CString::new("{\"graph\": 3}").unwrap();
    assert_eq!(
        unsafe { ncs_sync_json(bad.as_ptr(), NcsAlgorithm::Fast, true, 2.0, &mut out) },
        NcsStatus::Parse
    );
    assert_eq!(
        unsafe {
            ncs_sync_json(
                doc.as_ptr(),
                NcsAlgorithm::Exhaustive,
                false,
                f64::NAN,
                &mut out,
            )
        },
        NcsStatus::InvalidArgument
    );
}

#[test]
fn json_entry_points() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ncs_min_graph_json(6, 1, 2, true, &mut out) },
        NcsStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["edge_count"], 9);
    assert_eq!(
        unsafe { ncs_min_graph_json(4, 2, 2, false, &mut out) },
        NcsStatus::Infeasible
    );

    assert_eq!(unsafe { ncs_tier_plan_json(16, &mut out) }, NcsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["total_edges"], 30);
    assert_eq!(
        unsafe { ncs_tier_plan_json(16, ptr::null_mut()) },
        NcsStatus::NullPointer
    );
}

fn profile_dir() -> PathBuf {
    // target/<profile>/deps/ffi-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include/ncs.h");
    let lib = profile_dir().join("libncs_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: cc or {} unavailable", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "ncs.h"
int main(void) {
    NcsGraph *g = NULL;
    size_t k = 0;
    if (ncs_graph_complete(7, &g) != NCS_STATUS_OK) return 1;
    if (ncs_tight_bound(g, &k) != NCS_STATUS_OK) return 2;
    ncs_graph_free(g);
    if (ncs_tight_bound(NULL, &k) != NCS_STATUS_NULL_POINTER) return 3;
    printf("%zu %s\n", k, ncs_last_error_message());
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2 graph is null\n");
}
