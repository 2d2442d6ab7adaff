//! Compiles a small C program against the generated header and static
//! library and runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "layers_ffi.h"

int main(void) {
    size_t edges[] = {0, 1, 1, 2, 2, 3, 3, 0};
    LayersGraph *g = NULL;
    if (layers_graph_from_edges(4, edges, 4, &g) != LAYERS_STATUS_OK) return 1;
    if (layers_graph_vertex_count(g) != 4) return 2;
    uint32_t layers[4];
    if (layers_sample_layers(g, 3, layers, 4) != LAYERS_STATUS_OK) return 3;
    uint32_t excess = 0;
    for (int i = 0; i < 4; i++) excess += layers[i] - 1;
    if (excess != 4) return 4;
    layers_graph_free(g);

    size_t bad[] = {0, 5};
    if (layers_graph_from_edges(2, bad, 1, &g) != LAYERS_STATUS_INVALID_GRAPH) return 5;
    char *msg = layers_last_error_message();
    if (msg == NULL || strstr(msg, "out of range") == NULL) return 6;
    layers_string_free(msg);

    LayersReport *r = NULL;
    if (layers_run_experiment("experiment = layer-marginal\ngenerator = star:2\ntrials = 50\n", &r) != LAYERS_STATUS_OK) return 7;
    char *csv = layers_report_csv(r);
    if (csv == NULL || strstr(csv, "layer,count") == NULL) return 8;
    layers_string_free(csv);
    layers_report_free(r);
    puts("ok");
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler ({cc}); skipping");
        return;
    }
    let lib_dir = target_dir();
    let lib = lib_dir.join("liblayers_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let work = std::env::temp_dir().join(format!("layers_ffi_smoke_{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let bin = work.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "cc failed: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke exited with {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
    let _ = std::fs::remove_dir_all(&work);
}
