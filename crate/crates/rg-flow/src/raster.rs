//! Phase-diagram rasters over (g, lambda) grids.
//!
//! Points are independent, so the raster is data parallel: with the
//! `parallel` feature the grid is distributed over a thread pool, without it
//! the same per-point routine runs sequentially. Results are deterministic
//! and identical either way.

use crate::classify::{classify, PhaseLabel};
use crate::flow::{flow_with, FlowParams, StopReason, Thresholds};
use crate::state::{bare_state_with, lambda_is_reliable, BareOptions, CouplingId};
use crate::RgError;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One classified grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub g: f64,
    pub lambda: f64,
    pub label: PhaseLabel,
    pub stop_ell: f64,
    pub winning: Vec<CouplingId>,
    pub stop: StopReason,
    /// False where the K = 1/lambda seed is outside its validity window.
    pub reliable: bool,
}

/// Classified grid, row-major with `g` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap {
    pub n: usize,
    pub gs: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub points: Vec<PhasePoint>,
}

impl PhaseMap {
    pub fn point(&self, ig: usize, il: usize) -> &PhasePoint {
        &self.points[ig * self.lambdas.len() + il]
    }

    /// Occurrences of each label, in the fixed label order.
    pub fn label_counts(&self) -> Vec<(PhaseLabel, usize)> {
        PhaseLabel::ALL
            .iter()
            .map(|&l| (l, self.points.iter().filter(|p| p.label == l).count()))
            .collect()
    }

    /// CSV with one row per point: g, lambda, label, stop_ell, winning_set,
    /// reliable. The winning set is joined with `+`; an empty set prints `-`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("g,lambda,label,stop_ell,winning_set,reliable\n");
        for p in &self.points {
            let winning = if p.winning.is_empty() {
                "-".to_string()
            } else {
                p.winning
                    .iter()
                    .map(|id| id.label())
                    .collect::<Vec<_>>()
                    .join("+")
            };
            out.push_str(&format!(
                "{},{},{},{:.6},{},{}\n",
                p.g, p.lambda, p.label, p.stop_ell, winning, p.reliable
            ));
        }
        out
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

/// Thresholds whose ceiling covers every bare coupling on the grid.
pub fn grid_thresholds(
    n: usize,
    gs: &[f64],
    lambdas: &[f64],
    opts: &BareOptions,
    lower: f64,
    factor: f64,
) -> Result<Thresholds, RgError> {
    let mut states = Vec::with_capacity(gs.len() * lambdas.len());
    for &g in gs {
        for &lambda in lambdas {
            states.push(bare_state_with(n, g, lambda, opts)?);
        }
    }
    Thresholds::covering(lower, factor, &states)
}

fn solve_point(
    n: usize,
    g: f64,
    lambda: f64,
    opts: &BareOptions,
    thresholds: &Thresholds,
    params: &FlowParams,
) -> Result<PhasePoint, RgError> {
    let seed = bare_state_with(n, g, lambda, opts)
        .map_err(|e| RgError::BadArguments(format!("at g = {g}, lambda = {lambda}: {e}")))?;
    let outcome = flow_with(&seed, thresholds, params)
        .map_err(|e| RgError::BadArguments(format!("at g = {g}, lambda = {lambda}: {e}")))?;
    let class = classify(&outcome);
    Ok(PhasePoint {
        g,
        lambda,
        label: class.label,
        stop_ell: class.stop_ell,
        winning: class.winning,
        stop: outcome.stop,
        reliable: lambda_is_reliable(lambda),
    })
}

fn check_grids(gs: &[f64], lambdas: &[f64]) -> Result<(), RgError> {
    if gs.is_empty() || lambdas.is_empty() {
        return Err(RgError::BadArguments("raster grids must be non-empty".into()));
    }
    Ok(())
}

/// Classify every grid point, parallel when the feature is enabled.
pub fn raster(
    n: usize,
    gs: &[f64],
    lambdas: &[f64],
    thresholds: &Thresholds,
    params: &FlowParams,
) -> Result<PhaseMap, RgError> {
    raster_with_options(n, gs, lambdas, &BareOptions::default(), thresholds, params)
}

/// Raster with explicit bare-coupling conventions.
pub fn raster_with_options(
    n: usize,
    gs: &[f64],
    lambdas: &[f64],
    opts: &BareOptions,
    thresholds: &Thresholds,
    params: &FlowParams,
) -> Result<PhaseMap, RgError> {
    check_grids(gs, lambdas)?;
    let coords: Vec<(f64, f64)> = gs
        .iter()
        .flat_map(|&g| lambdas.iter().map(move |&l| (g, l)))
        .collect();

    #[cfg(feature = "parallel")]
    let points: Result<Vec<PhasePoint>, RgError> = coords
        .par_iter()
        .map(|&(g, l)| solve_point(n, g, l, opts, thresholds, params))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let points: Result<Vec<PhasePoint>, RgError> = coords
        .iter()
        .map(|&(g, l)| solve_point(n, g, l, opts, thresholds, params))
        .collect();

    Ok(PhaseMap {
        n,
        gs: gs.to_vec(),
        lambdas: lambdas.to_vec(),
        points: points?,
    })
}

/// Single-threaded raster, kept unconditionally for benchmark comparison and
/// as the fallback path.
pub fn raster_sequential(
    n: usize,
    gs: &[f64],
    lambdas: &[f64],
    thresholds: &Thresholds,
    params: &FlowParams,
) -> Result<PhaseMap, RgError> {
    check_grids(gs, lambdas)?;
    let opts = BareOptions::default();
    let mut points = Vec::with_capacity(gs.len() * lambdas.len());
    for &g in gs {
        for &lambda in lambdas {
            points.push(solve_point(n, g, lambda, &opts, thresholds, params)?);
        }
    }
    Ok(PhaseMap {
        n,
        gs: gs.to_vec(),
        lambdas: lambdas.to_vec(),
        points,
    })
}

/// Uniform grid helper: `count` points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1, "need at least one grid point");
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}
