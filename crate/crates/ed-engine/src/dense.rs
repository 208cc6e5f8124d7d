use crate::{C64, EdError};
use ndarray::Array2;

/// Hermitian eigendecomposition via the divide-and-conquer driver zheevd.
/// Returns ascending eigenvalues and the eigenvectors as matrix columns.
pub fn eigh(a: &Array2<C64>) -> Result<(Vec<f64>, Array2<C64>), EdError> {
    let (w, v) = zheevd(a, b'V')?;
    Ok((w, v))
}

/// Eigenvalues only (zheevd with jobz = 'N').
pub fn eigh_values(a: &Array2<C64>) -> Result<Vec<f64>, EdError> {
    let (w, _) = zheevd(a, b'N')?;
    Ok(w)
}

fn zheevd(a: &Array2<C64>, jobz: u8) -> Result<(Vec<f64>, Array2<C64>), EdError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    if n == 0 {
        return Ok((Vec::new(), Array2::zeros((0, 0))));
    }
    // Column-major copy; LAPACK overwrites it with eigenvectors.
    let mut buf: Vec<C64> = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            buf.push(a[(i, j)]);
        }
    }
    let mut w = vec![0.0f64; n];
    let ni = n as i32;
    let mut info: i32 = 0;

    // Workspace query.
    let mut work_q = [C64::new(0.0, 0.0)];
    let mut rwork_q = [0.0f64];
    let mut iwork_q = [0i32];
    let minus1 = -1i32;
    unsafe {
        lapack_sys::zheevd_(
            &(jobz as i8),
            &(b'L' as i8),
            &ni,
            buf.as_mut_ptr() as *mut _,
            &ni,
            w.as_mut_ptr(),
            work_q.as_mut_ptr() as *mut _,
            &minus1,
            rwork_q.as_mut_ptr(),
            &minus1,
            iwork_q.as_mut_ptr(),
            &minus1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(EdError::Lapack { routine: "zheevd (query)", info });
    }
    let lwork = work_q[0].re as i32;
    let lrwork = rwork_q[0] as i32;
    let liwork = iwork_q[0];
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    let mut rwork = vec![0.0f64; lrwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack_sys::zheevd_(
            &(jobz as i8),
            &(b'L' as i8),
            &ni,
            buf.as_mut_ptr() as *mut _,
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr() as *mut _,
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(EdError::Lapack { routine: "zheevd", info });
    }
    let vectors = if jobz == b'V' {
        let mut v = Array2::zeros((n, n));
        for j in 0..n {
            for i in 0..n {
                v[(i, j)] = buf[j * n + i];
            }
        }
        v
    } else {
        Array2::zeros((0, 0))
    };
    Ok((w, vectors))
}

/// Real symmetric eigendecomposition via dsyevd, for the small projected
/// matrices inside Lanczos restarts. Input in row-major order; symmetric,
/// so the layout does not matter.
pub fn eigh_real_symmetric(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>), EdError> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut buf = a.to_vec();
    let mut w = vec![0.0f64; n];
    let ni = n as i32;
    let mut info = 0i32;
    let minus1 = -1i32;
    let mut work_q = [0.0f64];
    let mut iwork_q = [0i32];
    unsafe {
        lapack_sys::dsyevd_(
            &(b'V' as i8),
            &(b'L' as i8),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work_q.as_mut_ptr(),
            &minus1,
            iwork_q.as_mut_ptr(),
            &minus1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(EdError::Lapack { routine: "dsyevd (query)", info });
    }
    let lwork = work_q[0] as i32;
    let liwork = iwork_q[0];
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack_sys::dsyevd_(
            &(b'V' as i8),
            &(b'L' as i8),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(EdError::Lapack { routine: "dsyevd", info });
    }
    // buf holds eigenvectors column-major: component i of vector j is
    // buf[j * n + i].
    Ok((w, buf))
}
