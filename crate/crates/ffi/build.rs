//! Regenerates include/tropic.h from the exported items. The committed
//! header is refreshed on every build so it never drifts from the source;
//! generation failures keep the previous header and only warn.

use std::path::Path;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets the manifest dir");
    let header = Path::new(&crate_dir).join("include").join("tropic.h");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        Err(err) => {
            println!("cargo:warning=header generation failed, keeping the committed one: {err}");
        }
    }
}
