//! Compile and run the shipped C example against the generated header
//! and static library, proving the ABI from the consumer side. Skipped
//! when no C compiler is available.

use std::path::PathBuf;
use std::process::Command;

fn find_cc() -> Option<&'static str> {
    ["cc", "gcc", "clang"].into_iter().find(|cc| {
        Command::new(cc)
            .arg("--version")
            .output()
            .map(|o| o.status.success())
            .unwrap_or(false)
    })
}

#[test]
fn c_example_compiles_and_runs() {
    let Some(cc) = find_cc() else {
        eprintln!("no C compiler found, skipping C smoke test");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let source = manifest.join("examples/c/smoke.c");
    let staticlib = manifest.join("../../target/debug/libentcert_ffi.a");
    assert!(
        staticlib.exists(),
        "static library not built at {}",
        staticlib.display()
    );

    let dir = std::env::temp_dir().join(format!("entcert-csmoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let binary = dir.join("smoke");

    let compile = Command::new(cc)
        .arg(format!("-I{}", include.display()))
        .arg(&source)
        .arg(&staticlib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&binary)
        .output()
        .expect("compiler must run");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary)
        .output()
        .expect("smoke binary must run");
    assert!(
        run.status.success(),
        "smoke test failed:\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("C smoke test OK"), "{stdout}");
    std::fs::remove_dir_all(&dir).ok();
}
