fn main() {
    // lapack-sys declares the FFI only; link the system LAPACK and BLAS
    // (zgesdd for truncations, zgemm for tensor contractions).
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rustc-link-lib=dylib=blas");
}
