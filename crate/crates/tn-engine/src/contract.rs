//! Environment contractions shared by the sweep loop and expectation values.

use crate::linalg::{conj2, matmul, reshaped};
use clock_algebra::C64;
use ndarray::{Array3, Array4};

/// Grow a left environment by one site.
///
/// `env` has axes [bra bond, MPO bond, ket bond] at cut i; the result is the
/// environment at cut i + 1. The same tensor `a` is used on bra and ket.
pub(crate) fn advance_left(env: &Array3<C64>, a: &Array3<C64>, w: &Array4<C64>) -> Array3<C64> {
    let (lb, wl, lk) = env.dim();
    let (la, p, rk) = a.dim();
    let (wla, wr, po, pi) = w.dim();
    assert_eq!(lk, la);
    assert_eq!(wl, wla);
    assert_eq!(p, pi);
    assert_eq!(p, po);
    let u1 = matmul(
        reshaped(env.view(), (lb * wl, lk)).view(),
        reshaped(a.view(), (la, p * rk)).view(),
    );
    let u1 = u1.into_shape((lb, wl, p, rk)).unwrap();
    let u1 = reshaped(u1.view().permuted_axes([0, 3, 1, 2]), (lb * rk, wl * p));
    let wp = reshaped(w.view().permuted_axes([0, 3, 1, 2]), (wl * pi, wr * po));
    let u2 = matmul(u1.view(), wp.view());
    let u2 = u2.into_shape((lb, rk, wr, po)).unwrap();
    let u2 = reshaped(u2.view().permuted_axes([1, 2, 0, 3]), (rk * wr, lb * po));
    let adj = conj2(reshaped(a.view(), (la * p, rk)).view());
    // Bra tensor indexed (lb, p_out, rb); lb here equals the bra bond of env.
    assert_eq!(la, lb);
    let u3 = matmul(u2.view(), adj.view());
    let u3 = u3.into_shape((rk, wr, rk)).unwrap();
    reshaped(u3.view().permuted_axes([2, 1, 0]), (rk, wr, rk))
}

/// Grow a right environment by one site: env at cut i + 1 -> env at cut i.
pub(crate) fn advance_right(env: &Array3<C64>, a: &Array3<C64>, w: &Array4<C64>) -> Array3<C64> {
    let (rb, wr, rk) = env.dim();
    let (lk, p, ra) = a.dim();
    let (wl, wra, po, pi) = w.dim();
    assert_eq!(rk, ra);
    assert_eq!(wr, wra);
    assert_eq!(p, pi);
    assert_eq!(p, po);
    assert_eq!(rb, ra);
    let envp = reshaped(env.view().permuted_axes([2, 1, 0]), (rk, wr * rb));
    let u1 = matmul(reshaped(a.view(), (lk * p, ra)).view(), envp.view());
    let u1 = u1.into_shape((lk, p, wr, rb)).unwrap();
    let u1 = reshaped(u1.view().permuted_axes([0, 3, 2, 1]), (lk * rb, wr * p));
    let wp = reshaped(w.view().permuted_axes([1, 3, 0, 2]), (wr * pi, wl * po));
    let u2 = matmul(u1.view(), wp.view());
    let u2 = u2.into_shape((lk, rb, wl, po)).unwrap();
    let u2 = reshaped(u2.view().permuted_axes([0, 2, 1, 3]), (lk * wl, rb * po));
    let adj = conj2(reshaped(a.view().permuted_axes([2, 1, 0]), (rb * p, lk)).view());
    let u3 = matmul(u2.view(), adj.view());
    let u3 = u3.into_shape((lk, wl, lk)).unwrap();
    reshaped(u3.view().permuted_axes([2, 1, 0]), (lk, wl, lk))
}
