fn main() {
    // lapack-sys only declares the FFI symbols; link the system libraries.
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rustc-link-lib=dylib=blas");
}
