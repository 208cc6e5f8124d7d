//! Z_N clock and shift operators for a single N-state site.
//!
//! Two bases show up throughout the workspace:
//!
//! * the *clock basis*, where `sigma` is diagonal and `tau` cyclically
//!   shifts states. This is the presentation returned by [`clock_matrices`].
//! * the *field basis* (the `tau` eigenbasis), where `tau` is diagonal and
//!   `sigma` shifts. Every Hamiltonian term built downstream is a generalized
//!   permutation matrix in this basis, which is what makes matrix-free
//!   diagonalization and Gauss-sector filtering cheap. See the
//!   `field_basis_*` helpers.

use ndarray::Array2;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = Array2<C64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClockError {
    /// N must be at least 2.
    BadOrder(usize),
}

impl std::fmt::Display for ClockError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClockError::BadOrder(n) => write!(f, "clock order must be >= 2, got {n}"),
        }
    }
}

impl std::error::Error for ClockError {}

/// Primitive N-th root of unity, e^{i 2 pi / N}.
pub fn omega(n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64)
}

/// e^{i 2 pi k / N} with an exactly periodic integer phase argument.
pub fn omega_pow(n: usize, k: i64) -> C64 {
    let m = k.rem_euclid(n as i64);
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / n as f64)
}

/// Electric-field eigenvalue attached to the tau eigenstate of phase
/// omega^m. Branch cut chosen symmetric about zero; even N carries one
/// extra positive value (N = 2 gives {0, 1}, N = 4 gives {-1, 0, 1, 2}).
pub fn electric_branch(m: usize, n: usize) -> i64 {
    debug_assert!(m < n);
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// Generators of one Z_N site, clock basis.
///
/// Invariants (all machine-checked in the test suite):
/// sigma^N = tau^N = 1, both unitary, sigma tau = omega tau sigma,
/// and tau = exp(i (2 pi / N) E) with E Hermitian and integer spectrum.
#[derive(Debug, Clone)]
pub struct ClockAlgebra {
    pub n: usize,
    /// diag(1, omega, ..., omega^{N-1}).
    pub sigma: CMat,
    /// Cyclic shift |k> -> |k+1 mod N>. The sign of the shift is fixed by
    /// requiring sigma tau = omega tau sigma with the diagonal sigma above.
    pub tau: CMat,
    /// Matter clock operator; same matrix as sigma.
    pub zeta: CMat,
    /// Matter shift operator; same matrix as tau.
    pub eta: CMat,
    /// Electric field conjugate to the link phase, Hermitian.
    pub e: CMat,
}

/// Builds the single-site generators for Z_N.
pub fn clock_matrices(n: usize) -> Result<ClockAlgebra, ClockError> {
    if n < 2 {
        return Err(ClockError::BadOrder(n));
    }
    let mut sigma = CMat::zeros((n, n));
    let mut tau = CMat::zeros((n, n));
    for k in 0..n {
        sigma[(k, k)] = omega_pow(n, k as i64);
        tau[((k + 1) % n, k)] = C64::new(1.0, 0.0);
    }
    let zeta = sigma.clone();
    let eta = tau.clone();
    let e = electric_from_shift(n);
    Ok(ClockAlgebra {
        n,
        sigma,
        tau,
        zeta,
        eta,
        e,
    })
}

/// Electric-field operator of the algebra, clock basis.
///
/// Diagonal in the tau eigenbasis with eigenvalues [`electric_branch`];
/// satisfies tau = exp(i (2 pi / N) E).
pub fn electric_operator(alg: &ClockAlgebra) -> CMat {
    alg.e.clone()
}

fn electric_from_shift(n: usize) -> CMat {
    // E_{jk} = (1/N) sum_m branch(m) omega^{m (k - j)}; the tau eigenvector
    // with eigenvalue omega^m is (1/sqrt N) sum_k omega^{-mk} |k>.
    let mut e = CMat::zeros((n, n));
    for j in 0..n {
        for k in 0..n {
            let mut z = C64::new(0.0, 0.0);
            for m in 0..n {
                let b = electric_branch(m, n) as f64;
                z += omega_pow(n, (m * k) as i64 - (m * j) as i64) * b;
            }
            e[(j, k)] = z / n as f64;
        }
    }
    e
}

/// sigma in the field basis: shifts the tau quantum number m -> m-1 mod N.
pub fn field_basis_sigma(n: usize) -> CMat {
    let mut s = CMat::zeros((n, n));
    for m in 0..n {
        s[((m + n - 1) % n, m)] = C64::new(1.0, 0.0);
    }
    s
}

/// tau in the field basis: diag(1, omega, ..., omega^{N-1}).
pub fn field_basis_tau(n: usize) -> CMat {
    let mut t = CMat::zeros((n, n));
    for m in 0..n {
        t[(m, m)] = omega_pow(n, m as i64);
    }
    t
}

/// E in the field basis: diag(branch(0), ..., branch(N-1)).
pub fn field_basis_electric(n: usize) -> CMat {
    let mut e = CMat::zeros((n, n));
    for m in 0..n {
        e[(m, m)] = C64::new(electric_branch(m, n) as f64, 0.0);
    }
    e
}
