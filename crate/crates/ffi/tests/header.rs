use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("qfrucht.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "qf_version",
        "qf_last_error_message",
        "qf_group_named",
        "qf_group_from_json",
        "qf_dual_new",
        "qf_cayley_graph",
        "qf_cayley_central",
        "qf_graph_flags",
        "qf_graph_adjacency",
        "qf_rigid_search",
        "qf_s3_rank_one_multiplier",
        "QF_STATUS_REFUSED",
        "typedef struct QfDual QfDual;",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "qfrucht.h"
int main(void) {
    QfGroup *g = NULL;
    QfDual *d = NULL;
    QfGraph *a = NULL;
    size_t order = 0, k = 1;
    QfGraphFlags f;
    if (qf_group_named("S3", &g) != QF_STATUS_OK) return 1;
    if (qf_group_order(g, &order) != QF_STATUS_OK || order != 6) return 2;
    if (qf_dual_new(g, 0, 1e-9, &d) != QF_STATUS_OK) return 3;
    if (qf_cayley_central(d, &k, 1, 1e-9, &a) != QF_STATUS_OK) return 4;
    if (qf_graph_flags(a, &f) != QF_STATUS_OK || !f.schur_idempotent) return 5;
    if (qf_group_named("nope", &g) != QF_STATUS_INVALID_INPUT) return 6;
    char msg[128];
    if (qf_last_error_message(msg, sizeof msg) == 0) return 7;
    qf_graph_free(a);
    qf_dual_free(d);
    qf_group_free(g);
    printf("ok %s\n", qf_version());
    return 0;
}
"#;

/// Compiles and runs a C client against the static library when a C compiler is on PATH.
#[test]
fn c_client_links_and_runs() {
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let lib_dir = tmp.parent().unwrap().join(if cfg!(debug_assertions) { "debug" } else { "release" });
    let lib = lib_dir.join("libqfrucht_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    assert!(lib.exists(), "{} not built", lib.display());
    let src = tmp.join("qfrucht_client.c");
    let exe = tmp.join("qfrucht_client");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "client exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
