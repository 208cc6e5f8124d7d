//! Matrix product state machinery for the ladder models: MPO compilation
//! from term lists, two-site sweeping with staged truncation, and the
//! expectation/entropy/checkpoint plumbing built on top of it.

mod contract;
mod dmrg;
mod linalg;
mod mpo;
mod mps;

pub use dmrg::{dmrg_best_effort, dmrg_ground, DmrgParams, DmrgResult, SweepStage};
pub use mpo::{compile_mpo, Mpo};
pub use mps::{overlap, Mps};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TnError {
    #[error(transparent)]
    Model(#[from] model_builder::ModelError),
    #[error(transparent)]
    Ed(#[from] ed_engine::EdError),
    #[error("LAPACK {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("sweeps exhausted at energy {:.12} after {} sweeps", .0.energy, .0.sweeps)]
    NonConverged(Box<DmrgResult>),
}
