use crate::TnError;
use clock_algebra::C64;
use ndarray::{Array2, ArrayView2};

extern "C" {
    // BLAS complex GEMM; ndarray's generic fallback is far too slow for the
    // contraction-heavy sweep loop.
    fn zgemm_(
        transa: *const i8,
        transb: *const i8,
        m: *const i32,
        n: *const i32,
        k: *const i32,
        alpha: *const C64,
        a: *const C64,
        lda: *const i32,
        b: *const C64,
        ldb: *const i32,
        beta: *const C64,
        c: *mut C64,
        ldc: *const i32,
    );
}

/// Row-major matrix product via column-major BLAS: C = A B computed as
/// C^T = B^T A^T on the raw buffers.
pub(crate) fn matmul(a: ArrayView2<C64>, b: ArrayView2<C64>) -> Array2<C64> {
    let (m, ka) = a.dim();
    let (kb, n) = b.dim();
    assert_eq!(ka, kb, "inner dimensions differ: {ka} vs {kb}");
    if m == 0 || n == 0 {
        return Array2::zeros((m, n));
    }
    let mut out = vec![C64::new(0.0, 0.0); m * n];
    if ka == 0 {
        return Array2::from_shape_vec((m, n), out).unwrap();
    }
    let a_std = a.as_standard_layout();
    let b_std = b.as_standard_layout();
    let a_slice = a_std.as_slice().unwrap();
    let b_slice = b_std.as_slice().unwrap();
    let (mi, ni, ki) = (n as i32, m as i32, ka as i32);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let nn = b'N' as i8;
    unsafe {
        zgemm_(
            &nn,
            &nn,
            &mi,
            &ni,
            &ki,
            &one,
            b_slice.as_ptr(),
            &mi,
            a_slice.as_ptr(),
            &ki,
            &zero,
            out.as_mut_ptr(),
            &mi,
        );
    }
    Array2::from_shape_vec((m, n), out).unwrap()
}

/// Economy SVD of a row-major matrix via zgesdd. Returns (U, s, V^dag) with
/// U of shape (m, k), V^dag of shape (k, n), k = min(m, n), s descending.
///
/// The buffer of a row-major (m, n) matrix is A^T in column-major terms, and
/// A^T = conj(V) S U^T, so the factors come back transposed: LAPACK's VT
/// buffer read row-major is exactly U, and its U buffer is exactly V^dag.
pub(crate) fn svd_econ(a: ArrayView2<C64>) -> Result<(Array2<C64>, Vec<f64>, Array2<C64>), TnError> {
    let (m, n) = a.dim();
    let k = m.min(n);
    if k == 0 {
        return Ok((Array2::zeros((m, 0)), Vec::new(), Array2::zeros((0, n))));
    }
    let a_std = a.as_standard_layout();
    let mut buf = a_std.as_slice().unwrap().to_vec();
    // Column-major problem: M' = n rows, N' = m cols.
    let (mi, ni) = (n as i32, m as i32);
    let mut s = vec![0.0f64; k];
    let mut u = vec![C64::new(0.0, 0.0); n * k];
    let mut vt = vec![C64::new(0.0, 0.0); k * m];
    let (ldu, ldvt) = (n as i32, k as i32);
    let jobz = b'S' as i8;
    let mut info = 0i32;
    let minus1 = -1i32;
    let mn_max = m.max(n);
    let lrwork = k * (5 * k + 7).max(2 * mn_max + 2 * k + 1);
    let mut rwork = vec![0.0f64; lrwork.max(1)];
    let mut iwork = vec![0i32; 8 * k];
    let mut work_q = [C64::new(0.0, 0.0)];
    unsafe {
        lapack_sys::zgesdd_(
            &jobz,
            &mi,
            &ni,
            buf.as_mut_ptr() as *mut _,
            &mi,
            s.as_mut_ptr(),
            u.as_mut_ptr() as *mut _,
            &ldu,
            vt.as_mut_ptr() as *mut _,
            &ldvt,
            work_q.as_mut_ptr() as *mut _,
            &minus1,
            rwork.as_mut_ptr(),
            iwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(TnError::Lapack { routine: "zgesdd (query)", info });
    }
    let lwork = work_q[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack_sys::zgesdd_(
            &jobz,
            &mi,
            &ni,
            buf.as_mut_ptr() as *mut _,
            &mi,
            s.as_mut_ptr(),
            u.as_mut_ptr() as *mut _,
            &ldu,
            vt.as_mut_ptr() as *mut _,
            &ldvt,
            work.as_mut_ptr() as *mut _,
            &lwork,
            rwork.as_mut_ptr(),
            iwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(TnError::Lapack { routine: "zgesdd", info });
    }
    let u_ours = Array2::from_shape_vec((m, k), vt).unwrap();
    let vt_ours = Array2::from_shape_vec((k, n), u).unwrap();
    Ok((u_ours, s, vt_ours))
}

/// Entrywise conjugate copy.
pub(crate) fn conj2(a: ArrayView2<C64>) -> Array2<C64> {
    a.mapv(|z| z.conj())
}

/// Standard-layout copy reshaped to `shape`; accepts permuted views.
pub(crate) fn reshaped<D, Sh>(a: ndarray::ArrayView<C64, D>, shape: Sh) -> ndarray::Array<C64, Sh::Dim>
where
    D: ndarray::Dimension,
    Sh: ndarray::IntoDimension,
{
    a.as_standard_layout()
        .into_owned()
        .into_shape(shape.into_dimension())
        .unwrap()
}
