use crate::ObsError;

/// Functional form fitted by least squares after a coordinate transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// ln y = slope r + intercept; correlation length -1/slope.
    Exponential,
    /// ln y = slope ln r + intercept; decay exponent slope.
    PowerLaw,
    /// S = (c/6) x + c_alpha/2 with x = ln((2L/pi) sin(pi l/L)).
    CardyEntropy,
    /// y = slope sqrt(eps) + intercept; intercept is the eps -> 0 limit.
    LinearInSqrtEps,
}

/// A straight-line fit in the model's regression coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in regression coordinates.
    pub residual: f64,
    /// Abscissa range used, in regression coordinates.
    pub window: (f64, f64),
    pub points: usize,
    /// Whether the ordinate is weakly monotone across the window.
    pub monotone: bool,
}

impl FitResult {
    /// Correlation length of an exponential fit. Meaningful when the data
    /// decays, i.e. slope < 0.
    pub fn xi(&self) -> f64 {
        -1.0 / self.slope
    }

    /// Decay exponent of a power-law fit (negative for decaying data).
    pub fn exponent(&self) -> f64 {
        self.slope
    }

    /// Central charge read off a Cardy entropy fit.
    pub fn central_charge(&self) -> f64 {
        6.0 * self.slope
    }

    /// Non-universal entropy offset of a Cardy fit.
    pub fn c_alpha(&self) -> f64 {
        2.0 * self.intercept
    }

    /// Zero-truncation extrapolation of a [`FitModel::LinearInSqrtEps`] fit.
    pub fn extrapolated(&self) -> f64 {
        self.intercept
    }
}

/// Open-chain chord distance (l/pi)|sin(pi r/l)|.
pub fn chord_distance(r: f64, l: f64) -> f64 {
    (l / std::f64::consts::PI) * (std::f64::consts::PI * r / l).sin().abs()
}

/// Chord distance corrected for two open-boundary insertions at x and y:
/// d(x+y|2l) d(x-y|2l) / sqrt(d(2x|2l) d(2y|2l)).
pub fn modified_chord_distance(x: f64, y: f64, l: f64) -> f64 {
    let l2 = 2.0 * l;
    chord_distance(x + y, l2) * chord_distance(x - y, l2)
        / (chord_distance(2.0 * x, l2) * chord_distance(2.0 * y, l2)).sqrt()
}

fn regress(model: FitModel, pts: &[(f64, f64)]) -> Result<FitResult, ObsError> {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let span = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
        - pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if !(sxx > 1e-24 * n * (1.0 + span * span)) {
        return Err(ObsError::BadArguments(
            "abscissa is degenerate, nothing to fit".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| {
            let e = p.1 - slope * p.0 - intercept;
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    let mut sorted: Vec<(f64, f64)> = pts.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotone = sorted.windows(2).all(|w| w[1].1 >= w[0].1)
        || sorted.windows(2).all(|w| w[1].1 <= w[0].1);
    let window = (sorted[0].0, sorted[sorted.len() - 1].0);
    Ok(FitResult { model, slope, intercept, residual, window, points: pts.len(), monotone })
}

/// Fit a correlator against distance, in log coordinates. At least five
/// points; values must be positive, and for a power law so must distances.
pub fn fit_decay(points: &[(f64, f64)], model: FitModel) -> Result<FitResult, ObsError> {
    if !matches!(model, FitModel::Exponential | FitModel::PowerLaw) {
        return Err(ObsError::BadArguments(format!(
            "fit_decay handles decay models only, got {model:?}"
        )));
    }
    if points.len() < 5 {
        return Err(ObsError::TooFewPoints { needed: 5, got: points.len() });
    }
    let mut pts = Vec::with_capacity(points.len());
    for &(r, v) in points {
        if !(v > 0.0) {
            return Err(ObsError::NonPositive { what: "correlator value" });
        }
        let x = match model {
            FitModel::Exponential => r,
            _ => {
                if !(r > 0.0) {
                    return Err(ObsError::NonPositive { what: "distance" });
                }
                r.ln()
            }
        };
        pts.push((x, v.ln()));
    }
    regress(model, &pts)
}

/// Both decay fits on the same data.
#[derive(Debug, Clone, Copy)]
pub struct DecayComparison {
    pub exponential: FitResult,
    pub power_law: FitResult,
}

impl DecayComparison {
    /// The model with the smaller log-space residual.
    pub fn preferred(&self) -> FitModel {
        if self.exponential.residual <= self.power_law.residual {
            FitModel::Exponential
        } else {
            FitModel::PowerLaw
        }
    }
}

/// Fit the same correlator as an exponential and as a power law. Both fits
/// regress ln y, so their residuals are directly comparable.
pub fn compare_decay_models(points: &[(f64, f64)]) -> Result<DecayComparison, ObsError> {
    Ok(DecayComparison {
        exponential: fit_decay(points, FitModel::Exponential)?,
        power_law: fit_decay(points, FitModel::PowerLaw)?,
    })
}

/// Central charge from an entropy profile over cuts (cells left, entropy)
/// of an open chain of `l` cells: S = (c/6) ln((2l/pi) sin(pi x/l)) + c_a/2.
/// Cuts within `exclude` cells of either edge are dropped (default l/8).
pub fn fit_central_charge(
    profile: &[(usize, f64)],
    l: usize,
    exclude: Option<usize>,
) -> Result<FitResult, ObsError> {
    if l < 2 {
        return Err(ObsError::BadArguments("need at least two cells".into()));
    }
    let w = exclude.unwrap_or(l / 8);
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .filter(|&&(cells, _)| cells > w && cells + w < l)
        .map(|&(cells, s)| {
            let lf = l as f64;
            let x = (2.0 * lf / std::f64::consts::PI
                * (std::f64::consts::PI * cells as f64 / lf).sin())
            .ln();
            (x, s)
        })
        .collect();
    if pts.len() < 4 {
        return Err(ObsError::TooFewPoints { needed: 4, got: pts.len() });
    }
    regress(FitModel::CardyEntropy, &pts)
}

/// Extrapolate a sequence of estimates to zero truncation error, linear in
/// sqrt(eps). The intercept of the returned fit is the extrapolated value.
pub fn extrapolate_truncation(values: &[f64], eps: &[f64]) -> Result<FitResult, ObsError> {
    if values.len() != eps.len() {
        return Err(ObsError::BadArguments(format!(
            "{} values against {} truncation errors",
            values.len(),
            eps.len()
        )));
    }
    if values.len() < 3 {
        return Err(ObsError::TooFewPoints { needed: 3, got: values.len() });
    }
    if eps.iter().any(|&e| e < 0.0) {
        return Err(ObsError::BadArguments(
            "truncation errors must be nonnegative".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(values)
        .map(|(&e, &v)| (e.sqrt(), v))
        .collect();
    regress(FitModel::LinearInSqrtEps, &pts)
}
