//! Builds a small C program against the generated header and the static
//! library, and runs it.

use std::path::PathBuf;
use std::process::Command;

const CLIENT: &str = r#"
#include <stdio.h>
#include <string.h>
#include "monodromy.h"

int main(void) {
    MdPoly *f = NULL;
    if (md_poly_parse("y^4 + 2*x^2*y", &f) != MD_STATUS_OK) return 10;
    MdPi1 *g = NULL;
    if (md_pi1(f, 53, 0, 64, &g) != MD_STATUS_OK) return 11;
    printf("rank %lld\n", (long long)md_pi1_abelian_rank(g));
    char *p = md_pi1_presentation(g);
    printf("presentation %s\n", p);
    md_string_free(p);
    md_pi1_free(g);
    md_poly_free(f);

    MdPoly *bad = NULL;
    if (md_poly_parse("y^2 +", &bad) != MD_STATUS_INPUT) return 12;
    printf("error %s\n", md_last_error());

    MdMonodromy *m = NULL;
    if (md_monodromy(MD_SYSTEM_PENDULUM, 53, false, &m) != MD_STATUS_OK) return 13;
    int64_t buf[9];
    size_t dim = 0;
    if (md_monodromy_matrix(m, 0, buf, 9, &dim) != MD_STATUS_OK) return 14;
    printf("dim %zu last row %lld %lld %lld\n", dim, (long long)buf[6], (long long)buf[7], (long long)buf[8]);
    md_monodromy_free(m);
    return 0;
}
"#;

fn profile_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = profile_dir().join("libmonodromy_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("monodromy-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("client.c");
    let exe = dir.join("client");
    std::fs::write(&src, CLIENT).unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-I", include])
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&exe).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{}", text);
    assert!(text.contains("rank 2"), "{}", text);
    assert!(text.contains("error syntax error"), "{}", text);
    assert!(text.contains("dim 3 last row 0 0 1"), "{}", text);
    std::fs::remove_dir_all(&dir).ok();
}
