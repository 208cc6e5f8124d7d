//! Exact diagonalization over term lists: dense divide-and-conquer
//! eigensolves, matrix-free application in the field basis, thick-restart
//! Lanczos for ground states, and Gauss-sector projection by basis
//! filtering.

mod dense;
mod hamop;
mod lanczos;
mod sector;

pub use dense::{eigh, eigh_values, eigh_real_symmetric};
pub use hamop::{HamOp, TermListOp};
pub use lanczos::{
    lanczos_best_effort, lanczos_best_effort_from, lanczos_lowest, LanczosParams, LanczosResult,
};
pub use sector::{project_gauss, SectorHamiltonian, SECTOR_ENUM_LIMIT};

use model_builder::TermList;
use num_complex::Complex64;

pub type C64 = Complex64;

/// Dense spectra stay below this Hilbert-space dimension; above it the
/// memory cost (dim^2 complex entries) is past what the workspace budgets.
pub const DENSE_DIM_LIMIT: usize = 10_240;

#[derive(Debug, thiserror::Error)]
pub enum EdError {
    #[error(transparent)]
    Model(#[from] model_builder::ModelError),
    #[error("lapack {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },
    #[error("eigensolver did not converge: best residual {residual:.3e} after {iterations} iterations (tol {tol:.3e})")]
    NonConvergence {
        residual: f64,
        iterations: usize,
        tol: f64,
    },
    #[error("Gauss sector is empty: {0}")]
    EmptySector(String),
    #[error("basis enumeration dimension {dim} exceeds limit {max}")]
    SectorTooLarge { dim: usize, max: usize },
    #[error("hamiltonian does not preserve the requested sector: {0}")]
    SectorViolation(String),
}

/// Full spectrum (and eigenvectors, columnwise) of a term list.
#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    pub eigenvalues: Vec<f64>,
    pub vectors: ndarray::Array2<C64>,
}

/// Full dense diagonalization in the field basis.
pub fn dense_spectrum(terms: &TermList) -> Result<DenseSpectrum, EdError> {
    let h = terms.to_dense(DENSE_DIM_LIMIT)?;
    let (eigenvalues, vectors) = eigh(&h)?;
    Ok(DenseSpectrum { eigenvalues, vectors })
}

/// Ground state of a term list via Lanczos, matrix-free.
pub fn sparse_ground(terms: &TermList, tol: f64) -> Result<LanczosResult, EdError> {
    let op = TermListOp::new(terms);
    lanczos_lowest(&op, &LanczosParams::ground(tol))
}

/// Lowest k eigenpairs of a term list via Lanczos, matrix-free.
pub fn sparse_lowest(terms: &TermList, k: usize, tol: f64) -> Result<LanczosResult, EdError> {
    let op = TermListOp::new(terms);
    lanczos_lowest(&op, &LanczosParams::lowest(k, tol))
}
