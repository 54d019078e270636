use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    let config = cbindgen::Config::from_file(dir.join("cbindgen.toml")).expect("cbindgen.toml");
    let bindings = cbindgen::Builder::new().with_crate(&dir).with_config(config).generate().expect("header generation");
    let header = dir.join("include").join("qfrucht.h");
    std::fs::create_dir_all(header.parent().unwrap()).unwrap();
    // write_to_file leaves the file untouched when the content is unchanged.
    bindings.write_to_file(&header);
}
