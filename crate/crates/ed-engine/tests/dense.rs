use ed_engine::{eigh, eigh_real_symmetric, eigh_values, C64};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(n: usize, seed: u64) -> Array2<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
    }
    let bt = b.t().mapv(|z: C64| z.conj());
    (&b + &bt) / 2.0
}

#[test]
fn eigh_reconstructs_random_hermitian() {
    let a = random_hermitian(60, 7);
    let (w, v) = eigh(&a).unwrap();
    let scale: f64 = w.iter().fold(1.0f64, |m, &x| m.max(x.abs()));

    for q in 1..w.len() {
        assert!(w[q] >= w[q - 1], "eigenvalues not ascending");
    }
    // Columns are eigenvectors: A v_q = w_q v_q.
    for q in 0..w.len() {
        for i in 0..60 {
            let mut av = C64::new(0.0, 0.0);
            for k in 0..60 {
                av += a[(i, k)] * v[(k, q)];
            }
            assert!(
                (av - w[q] * v[(i, q)]).norm() < 1e-11 * scale,
                "residual too large at pair {q}"
            );
        }
    }
    // Orthonormal columns.
    for p in 0..60 {
        for q in 0..60 {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..60 {
                dot += v[(i, p)].conj() * v[(i, q)];
            }
            let expect = if p == q { 1.0 } else { 0.0 };
            assert!((dot - expect).norm() < 1e-12, "columns not orthonormal");
        }
    }
    // Trace equals the eigenvalue sum.
    let tr: C64 = (0..60).map(|i| a[(i, i)]).sum();
    let ws: f64 = w.iter().sum();
    assert!((tr.re - ws).abs() < 1e-10 * scale);
    assert!(tr.im.abs() < 1e-12);
}

#[test]
fn eigh_values_matches_eigh() {
    let a = random_hermitian(31, 11);
    let (w, _) = eigh(&a).unwrap();
    let w2 = eigh_values(&a).unwrap();
    for (x, y) in w.iter().zip(&w2) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn eigh_two_by_two_closed_form() {
    // [[a, b], [conj(b), c]] has eigenvalues (a+c)/2 -+ sqrt(((a-c)/2)^2 + |b|^2).
    let (a, c) = (0.3, -1.1);
    let b = C64::new(0.4, -0.2);
    let mut m = Array2::zeros((2, 2));
    m[(0, 0)] = C64::new(a, 0.0);
    m[(0, 1)] = b;
    m[(1, 0)] = b.conj();
    m[(1, 1)] = C64::new(c, 0.0);
    let disc = (((a - c) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    let w = eigh_values(&m).unwrap();
    assert!((w[0] - ((a + c) / 2.0 - disc)).abs() < 1e-14);
    assert!((w[1] - ((a + c) / 2.0 + disc)).abs() < 1e-14);
}

#[test]
fn real_symmetric_driver_reconstructs() {
    let n = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut a = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let x = rng.gen::<f64>() - 0.5;
            a[i * n + j] = x;
            a[j * n + i] = x;
        }
    }
    let (w, s) = eigh_real_symmetric(&a, n).unwrap();
    for q in 1..n {
        assert!(w[q] >= w[q - 1]);
    }
    // Vectors come back column-major: component i of vector q is s[q*n + i].
    for q in 0..n {
        for i in 0..n {
            let av: f64 = (0..n).map(|k| a[i * n + k] * s[q * n + k]).sum();
            assert!((av - w[q] * s[q * n + i]).abs() < 1e-11);
        }
    }
}

#[test]
fn empty_matrix_is_fine() {
    let a: Array2<C64> = Array2::zeros((0, 0));
    let (w, v) = eigh(&a).unwrap();
    assert!(w.is_empty());
    assert_eq!(v.dim(), (0, 0));
}
