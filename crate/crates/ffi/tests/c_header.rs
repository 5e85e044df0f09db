//! Compiles a C program against the generated header and links it to the
//! shared library built alongside this test.

use std::path::{Path, PathBuf};
use std::process::Command;

fn library_dir() -> PathBuf {
    // test binaries live in <target>/<profile>/deps next to the cdylib
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap().to_path_buf();
    for dir in [deps.clone(), deps.parent().unwrap().to_path_buf()] {
        if dir.join("libmcpsd_ffi.so").exists() || dir.join("libmcpsd_ffi.dylib").exists() {
            return dir;
        }
    }
    panic!("shared library not found near {}", deps.display());
}

#[test]
fn header_compiles_and_links() {
    if !cfg!(unix) {
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let libdir = library_dir();
    let bin = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("mcpsd_c_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c_smoke.c"))
        .arg("-o")
        .arg(&bin)
        .arg("-L")
        .arg(&libdir)
        .arg("-lmcpsd_ffi")
        .arg(format!("-Wl,-rpath,{}", libdir.display()))
        .arg("-lm")
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C smoke test exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
