//! Gauge-invariant observables for the ladder gauge theory: string-operator
//! builders for every model formulation, their evaluation on exact vectors
//! and matrix product states, finite-difference susceptibilities, the
//! entropy / decay / truncation fits, and a JSON-lines record format.
//!
//! Every string operator is built as a [`model_builder::TermList`] against
//! the chain layout of its model kind, so one builder serves the full
//! Hilbert space, the unitary gauge and the clock limit; on the full space
//! gauge invariance is asserted structurally at build time, never assumed.

mod eval;
mod fits;
mod record;
mod strings;
mod suscept;

pub use eval::{
    assert_real, electric_profile_dense, electric_profile_mps, entropy_profile, eval_dense,
    eval_mps, REAL_TOL,
};
pub use fits::{
    chord_distance, compare_decay_models, extrapolate_truncation, fit_central_charge, fit_decay,
    modified_chord_distance, DecayComparison, FitModel, FitResult,
};
pub use record::{
    append_records, boundaries_label, model_label, read_records, ObservableRecord, RunMeta,
    SCHEMA_VERSION,
};
pub use strings::{
    assert_gauge_invariant, charge_string_op, electric_ops, electric_sum, meson_op,
    order_parameter_op, rung_correlator_op, thooft_op, tunneling_sum, StringSector,
};
pub use suscept::{
    central_susceptibility, fidelity_susceptibility, ChiEstimate, DERIVATIVE_STEP, FIDELITY_FLOOR,
    FIDELITY_STEP,
};

#[derive(Debug, thiserror::Error)]
pub enum ObsError {
    #[error(transparent)]
    Model(#[from] model_builder::ModelError),
    #[error(transparent)]
    Ed(#[from] ed_engine::EdError),
    #[error(transparent)]
    Tn(#[from] tn_engine::TnError),
    #[error("bad arguments: {0}")]
    BadArguments(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("operator fails gauge invariance: {0}")]
    GaugeViolation(String),
    #[error("{name} should be real, got imaginary part {im:.3e}")]
    NotReal { name: String, im: f64 },
    #[error("ground-state overlap {fidelity:.3e} is consistent with a level crossing")]
    LevelCrossing { fidelity: f64 },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("{what} must be positive inside the fit window")]
    NonPositive { what: &'static str },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
