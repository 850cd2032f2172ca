use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "lambda_hvm.h"

int main(void) {
    LhModel *m = NULL;
    if (lh_model_new(2, 1, &m) != LH_STATUS_OK) return 1;
    if (lh_model_vertex_count(m) != 8) return 2;
    LhCircuit *c = NULL;
    const char *json = "{\"d\":2,\"n\":1,\"state\":{\"preset\":\"T\"},"
                       "\"ops\":[{\"measure\":{\"a\":\"Z:(1)|X:(0)\"}}]}";
    if (lh_circuit_parse(json, &c) != LH_STATUS_OK) return 3;
    uint32_t out[1000];
    if (lh_sample(m, c, 1, 1000, out, 1000, NULL, 0) != LH_STATUS_OK) return 4;
    int zeros = 0;
    for (int i = 0; i < 1000; i++) zeros += out[i] == 0;
    printf("%d\n", zeros);
    LhModel *bad = NULL;
    if (lh_model_new(0, 1, &bad) != LH_STATUS_INVALID_ARGUMENT) return 5;
    char msg[128];
    lh_last_error(msg, sizeof msg);
    printf("%s\n", msg);
    lh_circuit_free(c);
    lh_model_free(m);
    return 0;
}
"#;

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn cc() -> Option<String> {
    ["cc", "clang", "gcc"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .map(str::to_string)
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(include_dir().join("lambda_hvm.h")).unwrap();
    for sym in [
        "lh_model_new",
        "lh_model_free",
        "lh_decompose_preset",
        "lh_circuit_parse",
        "lh_sample",
        "lh_last_error",
        "LH_STATUS_INFEASIBLE",
        "typedef struct LhModel LhModel",
    ] {
        assert!(h.contains(sym), "missing {sym}");
    }
}

#[test]
fn c_program_compiles_and_runs() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    // The static library sits next to the test binary's parent directory.
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().parent().unwrap().join("liblambda_hvm_ffi.a");
    if !lib.exists() {
        let ok = Command::new(&cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
            .arg(include_dir())
            .arg(&src)
            .status()
            .unwrap();
        assert!(ok.success());
        return;
    }
    let bin = dir.path().join("main");
    let status = Command::new(&cc)
        .args(["-Wall", "-Werror", "-I"])
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let zeros: i32 = lines.next().unwrap().parse().unwrap();
    // Born probability (1 + 1/sqrt 3)/2 with 1000 shots.
    assert!((zeros - 789).abs() < 70, "{zeros}");
    assert!(lines.next().unwrap().contains("d >= 2"));
}
