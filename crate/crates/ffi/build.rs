fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    cbindgen::Builder::new()
        .with_crate(".")
        .with_language(cbindgen::Language::C)
        .with_include_guard("INCVOR_H")
        .with_pragma_once(false)
        .generate()
        .expect("Unable to generate bindings")
        .write_to_file("include/incvor.h");
}
