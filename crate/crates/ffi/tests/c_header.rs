//! Compiles and runs a small C program against the generated header and the
//! shared library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "cosettree.h"

int main(void) {
    CosettreeGroup *g = NULL;
    bool torsion = true;
    char *text = NULL;
    if (cosettree_group_parse("sum(Z,Zq(2))", &g) != COSETTREE_STATUS_OK) return 1;
    if (cosettree_group_is_torsion(g, &torsion) != COSETTREE_STATUS_OK || torsion) return 2;
    if (cosettree_group_to_string(g, &text) != COSETTREE_STATUS_OK) return 3;
    cosettree_string_free(text);
    cosettree_group_free(g);
    if (cosettree_group_parse("Zq(", &g) != COSETTREE_STATUS_PARSE) return 4;
    if (cosettree_last_error() == NULL || strlen(cosettree_last_error()) == 0) return 5;
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let lib_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lcosettree_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&exe)
        .env("LD_LIBRARY_PATH", &lib_dir)
        .env("DYLD_LIBRARY_PATH", &lib_dir)
        .status()
        .unwrap();
    assert!(run.success(), "C program exited with {run}");
}
