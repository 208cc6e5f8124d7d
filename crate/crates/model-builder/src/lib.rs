//! Ladder geometry and Hamiltonian term lists for the Z_N two-leg gauge
//! theory, in every formulation the workspace needs: the full link+matter
//! Hilbert space, the unitary gauge on links only, the pure gauge sector in
//! axial gauge, its bond-algebra dual, and the pure matter clock limit.
//!
//! All term lists are expressed in the field basis (tau diagonal), where
//! each term is a generalized permutation: a phase times a shift of the
//! per-site quantum numbers. Engines exploit that; dense assembly is only
//! for small cross-checks.

mod build;
mod layout;
mod spec;
mod terms;

pub use build::{
    build, build_clock_limit, build_full, build_pure_axial, build_pure_dual,
    build_unitary_gauge, gauge_invariance_violation, gauss_operators, GaussSector, ModelKind,
};
pub use layout::{chain_layout, ChainLayout, LayoutMode, LinkKind, Site};
pub use spec::{Boundary, Couplings, LadderSpec, Leg, StaticCharge};
pub use terms::{CompiledTerm, Factor, LocalOp, SiteDigits, Term, TermList};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid ladder: {0}")]
    InvalidSpec(String),
    #[error("invalid couplings: {0}")]
    InvalidCoupling(String),
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("dense matrix dimension {dim} exceeds limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("term list parse error: {0}")]
    Parse(String),
}
