use crate::ObsError;

/// Default coupling offset for fidelity stencils.
pub const FIDELITY_STEP: f64 = 1e-3;
/// Default coupling offset for central-difference derivatives.
pub const DERIVATIVE_STEP: f64 = 1e-2;
/// Overlaps below this are treated as a level crossing, not a fidelity.
pub const FIDELITY_FLOOR: f64 = 1e-6;

/// A finite-difference susceptibility together with its own convergence
/// diagnostic: the same stencil at half the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiEstimate {
    pub value: f64,
    pub value_half_step: f64,
    /// |value - value_half_step| relative to the larger magnitude.
    pub rel_change: f64,
    pub step: f64,
    pub links: usize,
}

impl ChiEstimate {
    fn new(value: f64, value_half_step: f64, step: f64, links: usize) -> ChiEstimate {
        let scale = value.abs().max(value_half_step.abs()).max(1e-300);
        ChiEstimate {
            value,
            value_half_step,
            rel_change: (value - value_half_step).abs() / scale,
            step,
            links,
        }
    }

    /// The finer of the two stencils.
    pub fn best(&self) -> f64 {
        self.value_half_step
    }
}

fn check_args(links: usize, step: f64) -> Result<(), ObsError> {
    if links == 0 {
        return Err(ObsError::BadArguments("links must be positive".into()));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(ObsError::BadArguments(format!(
            "step must be positive and finite, got {step}"
        )));
    }
    Ok(())
}

/// Fidelity susceptibility per link, -2 ln F / (links step^2), where
/// `fidelity(a, b)` returns |<psi0(a)|psi0(b)>| for ground states at two
/// values of the driving coupling. Evaluated at `step` and `step / 2`; an
/// overlap at or below [`FIDELITY_FLOOR`] is reported as a level crossing.
pub fn fidelity_susceptibility(
    links: usize,
    at: f64,
    step: f64,
    mut fidelity: impl FnMut(f64, f64) -> Result<f64, ObsError>,
) -> Result<ChiEstimate, ObsError> {
    check_args(links, step)?;
    let mut chi = |d: f64| -> Result<f64, ObsError> {
        let f = fidelity(at, at + d)?;
        if !(f > FIDELITY_FLOOR) {
            return Err(ObsError::LevelCrossing { fidelity: f });
        }
        Ok(-2.0 * f.ln() / (links as f64 * d * d))
    };
    let value = chi(step)?;
    let value_half_step = chi(step / 2.0)?;
    Ok(ChiEstimate::new(value, value_half_step, step, links))
}

/// Central-difference derivative of a ground-state expectation with respect
/// to its coupling, per link: (e(x+d) - e(x-d)) / (2 d links), evaluated at
/// `step` and `step / 2`.
pub fn central_susceptibility(
    links: usize,
    at: f64,
    step: f64,
    mut expectation: impl FnMut(f64) -> Result<f64, ObsError>,
) -> Result<ChiEstimate, ObsError> {
    check_args(links, step)?;
    let mut deriv = |d: f64| -> Result<f64, ObsError> {
        let plus = expectation(at + d)?;
        let minus = expectation(at - d)?;
        Ok((plus - minus) / (2.0 * d * links as f64))
    };
    let value = deriv(step)?;
    let value_half_step = deriv(step / 2.0)?;
    Ok(ChiEstimate::new(value, value_half_step, step, links))
}
