//! Builds a small C program against the generated header and the static
//! library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "ergosum.h"

int main(void) {
    ErgosumTable *t = NULL;
    if (ergosum_table_new("sqrt2", 20, &t) != ERGOSUM_STATUS_OK) return 10;
    uint64_t q = 0;
    if (ergosum_table_denominator(t, 6, &q) != ERGOSUM_STATUS_OK || q != 169) return 11;
    ErgosumSums *s = NULL;
    if (ergosum_sums_new(t, "psi_half", &s) != ERGOSUM_STATUS_OK) return 12;
    ergosum_table_free(t);
    double v = 0.0;
    if (ergosum_sums_variance(s, 13, &v) != ERGOSUM_STATUS_OK) return 13;
    ergosum_sums_free(s);
    if (ergosum_table_new("sqrt9", 5, &t) != ERGOSUM_STATUS_INVALID_INPUT) return 14;
    printf("%.15f %s\n", v, ergosum_last_error());
    return fabs(v - 1.470996024365750630075765) < 1e-13 ? 0 : 15;
}
"#;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/c_program-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let lib = target_dir().join("libergosum_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    let run = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "exit {:?}: {stdout}",
        run.status.code()
    );
    assert!(stdout.contains("D must be non-square"));
}

fn which_cc() -> Option<String> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc)
            .arg("--version")
            .output()
            .is_ok_and(|o| o.status.success())
        {
            return Some(cc.to_string());
        }
    }
    None
}
