//! Second-order coupling flow for the N-state ladder.
//!
//! The crate turns microscopic parameters (clock order N, electric coupling
//! g, chain coupling lambda) into bare long-wavelength couplings, integrates
//! the thirteen flow equations with an adaptive embedded Runge-Kutta method,
//! classifies each terminated trajectory into one of six strong-coupling
//! patterns, and rasterizes (g, lambda) phase diagrams to CSV.
//!
//! The flow tracks three Luttinger sectors: symmetric (rho) and
//! antisymmetric (sigma) matter modes and one gauge mode (0). At g = 0 the
//! gauge mode is frozen from the start and drops out of the system entirely.

mod classify;
mod flow;
mod raster;
pub mod sectors;
mod state;

pub use classify::{classify, Classification, PhaseLabel};
pub use flow::{
    flow, flow_with, Crossing, FlowOutcome, FlowParams, StopReason, Thresholds, DEFAULT_LOWER,
    DEFAULT_UPPER_FACTOR,
};
pub use raster::{
    grid_thresholds, linspace, raster, raster_sequential, raster_with_options, PhaseMap,
    PhasePoint,
};
pub use state::{
    bare_state, bare_state_with, kink_amplitude, lambda_is_reliable, BareOptions, CouplingId,
    Luttinger, RgConstants, RgCouplings, RgState, RELIABLE_LAMBDA,
};

#[derive(Debug, thiserror::Error)]
pub enum RgError {
    #[error("bad arguments: {0}")]
    BadArguments(String),
}
