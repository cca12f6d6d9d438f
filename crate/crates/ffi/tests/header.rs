//! The generated header must declare the whole API and compile as C.

use std::path::Path;
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/sperner.h");

#[test]
fn header_declares_api() {
    let text = std::fs::read_to_string(HEADER).expect("header generated by build.rs");
    for name in [
        "sp_last_error",
        "sp_version",
        "sp_fixture_load",
        "sp_parse",
        "sp_construct",
        "sp_system_free",
        "sp_system_n",
        "sp_system_k",
        "sp_system_len",
        "sp_system_class",
        "sp_verify",
        "sp_serialize_json",
        "sp_serialize_text",
        "sp_string_free",
        "sp_bounds",
        "sp_search",
        "typedef struct SpSystem SpSystem",
        "SP_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(out) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success());
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"sperner.h\"\n\
         int main(void) {\n\
             SpSystem *s = 0;\n\
             SpBounds b;\n\
             if (sp_fixture_load(\"fig1\", &s) != SP_STATUS_OK) return 1;\n\
             sp_bounds(9, 4, &b);\n\
             sp_system_free(s);\n\
             return b.exact ? 0 : 2;\n\
         }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(Path::new(HEADER).parent().unwrap())
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}
