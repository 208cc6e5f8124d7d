use crate::strings::electric_ops;
use crate::ObsError;
use clock_algebra::C64;
use ed_engine::{HamOp, TermListOp};
use model_builder::{ChainLayout, LadderSpec, ModelKind, Site, TermList};
use tn_engine::Mps;

/// Allowed imaginary leakage, relative to max(1, |re|), when an expectation
/// is physically real.
pub const REAL_TOL: f64 = 1e-8;

/// Demand that a physically real expectation is numerically real.
pub fn assert_real(name: &str, value: C64) -> Result<f64, ObsError> {
    if value.im.abs() > REAL_TOL * value.re.abs().max(1.0) {
        return Err(ObsError::NotReal { name: name.to_string(), im: value.im });
    }
    Ok(value.re)
}

/// <x|O|x> / <x|x> on a dense vector, applied matrix-free.
pub fn eval_dense(op: &TermList, state: &[C64]) -> Result<C64, ObsError> {
    let compiled = TermListOp::new(op);
    if compiled.dim() != state.len() {
        return Err(ObsError::BadArguments(format!(
            "operator dimension {} does not match state length {}",
            compiled.dim(),
            state.len()
        )));
    }
    let mut y = vec![C64::new(0.0, 0.0); state.len()];
    compiled.apply(state, &mut y);
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    for (xi, yi) in state.iter().zip(&y) {
        num += xi.conj() * yi;
        den += xi.norm_sqr();
    }
    if den == 0.0 {
        return Err(ObsError::BadArguments("state has zero norm".into()));
    }
    Ok(num / den)
}

/// Normalized expectation on a matrix product state.
pub fn eval_mps(op: &TermList, mps: &mut Mps) -> Result<C64, ObsError> {
    if op.sites != mps.sites() || op.n != mps.n {
        return Err(ObsError::BadArguments(format!(
            "operator on {} sites mod {} does not match state on {} sites mod {}",
            op.sites,
            op.n,
            mps.sites(),
            mps.n
        )));
    }
    Ok(mps.expectation_terms(op))
}

/// Electric field expectation per link, in chain order.
pub fn electric_profile_dense(
    kind: ModelKind,
    spec: &LadderSpec,
    state: &[C64],
) -> Result<Vec<(Site, f64)>, ObsError> {
    electric_ops(kind, spec)?
        .into_iter()
        .map(|(site, op)| Ok((site, assert_real("electric field", eval_dense(&op, state)?)?)))
        .collect()
}

/// Electric field expectation per link on a matrix product state.
pub fn electric_profile_mps(
    kind: ModelKind,
    spec: &LadderSpec,
    mps: &mut Mps,
) -> Result<Vec<(Site, f64)>, ObsError> {
    electric_ops(kind, spec)?
        .into_iter()
        .map(|(site, op)| Ok((site, assert_real("electric field", eval_mps(&op, mps)?)?)))
        .collect()
}

/// Entanglement entropy across every unit-cell boundary: entries
/// (cells left of the cut, entropy).
pub fn entropy_profile(mps: &mut Mps, layout: &ChainLayout) -> Vec<(usize, f64)> {
    layout
        .unit_cell_cuts()
        .into_iter()
        .enumerate()
        .map(|(i, cut)| (i + 1, mps.entanglement_entropy(cut)))
        .collect()
}
