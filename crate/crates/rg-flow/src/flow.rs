//! Adaptive integration of the thirteen coupled flow equations.
//!
//! The right-hand side carries each cosine's scaling dimension plus the
//! second-order cross terms that seed the sector locks, and feeds every
//! coupling back onto the three stiffnesses. Mixing gradients between the
//! sigma and 0 sectors are neglected, as are the second-order theta-side
//! cross terms; both are small in the regime the seeds cover.
//!
//! A coupling whose magnitude reaches the upper threshold is frozen there:
//! beyond that point the perturbative equation for it stops meaning
//! anything, but the frozen amplitude keeps driving the stiffnesses so that
//! slower couplings still feel it. Crossings and stop conditions are
//! localized inside an accepted step by bisection, which makes stop times a
//! property of the error tolerance rather than of the step-size ceiling.

use crate::sectors::{gaps_rho, spans_active, spans_all_but_rho};
use crate::state::{CouplingId, Luttinger, RgConstants, RgCouplings, RgState};
use crate::RgError;
use std::f64::consts::PI;

/// Couplings below this are treated as unable to gap anything.
pub const DEFAULT_LOWER: f64 = 0.2;

/// Default ratio between the strong-coupling ceiling and the largest bare
/// coupling it must dominate.
pub const DEFAULT_UPPER_FACTOR: f64 = 2.0;

const NC: usize = 10;
const NY: usize = 13;
const IKR: usize = 10;
const IKS: usize = 11;
const IK0: usize = 12;

const H_MIN: f64 = 1e-12;
const K_MIN: f64 = 1e-9;
const MAX_STEPS: usize = 2_000_000;

/// Negligible / strong-coupling cutoffs bracketing the flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub lower: f64,
    pub upper: f64,
}

impl Thresholds {
    pub fn new(lower: f64, upper: f64) -> Result<Self, RgError> {
        let th = Thresholds { lower, upper };
        th.validate()?;
        Ok(th)
    }

    fn validate(&self) -> Result<(), RgError> {
        if !(self.lower.is_finite() && self.upper.is_finite())
            || self.lower <= 0.0
            || self.upper <= self.lower
        {
            return Err(RgError::BadArguments(format!(
                "thresholds need 0 < lower < upper, got lower = {}, upper = {}",
                self.lower, self.upper
            )));
        }
        Ok(())
    }

    /// Ceiling at `factor` times the largest bare magnitude over `states`,
    /// floored at ten times `lower` so weakly coupled seeds still validate.
    pub fn covering<'a>(
        lower: f64,
        factor: f64,
        states: impl IntoIterator<Item = &'a RgState>,
    ) -> Result<Self, RgError> {
        if !(factor > 1.0) {
            return Err(RgError::BadArguments(format!(
                "upper factor must exceed 1, got {factor}"
            )));
        }
        let max_bare = states
            .into_iter()
            .fold(0.0_f64, |m, s| m.max(s.couplings.max_abs()));
        Thresholds::new(lower, (factor * max_bare).max(10.0 * lower))
    }
}

/// Integration controls. `dl_max` caps the step, `l_max` bounds the total
/// flow time for trajectories that never meet a stop condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub dl_max: f64,
    pub l_max: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            dl_max: 0.05,
            l_max: 30.0,
            rtol: 1e-8,
            atol: 1e-12,
        }
    }
}

/// Why a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The frozen couplings pin enough directions to gap every sector.
    AllSectorsGapped,
    /// Everything but rho is gapped and no rho-capable coupling survives.
    RhoSectorGapless,
    /// `l_max` reached with neither condition met.
    MaxFlowTime,
    /// Step control collapsed below the minimum step or the step budget.
    StepUnderflow,
    /// A stiffness left (0, inf) or a value went non-finite.
    LuttingerCollapse,
}

impl StopReason {
    /// Flagged outcomes mark numerical failure rather than a physics stop.
    pub fn is_flagged(self) -> bool {
        matches!(self, StopReason::StepUnderflow | StopReason::LuttingerCollapse)
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StopReason::AllSectorsGapped => "all sectors gapped",
            StopReason::RhoSectorGapless => "rho sector gapless",
            StopReason::MaxFlowTime => "max flow time",
            StopReason::StepUnderflow => "step underflow",
            StopReason::LuttingerCollapse => "luttinger collapse",
        };
        f.write_str(s)
    }
}

/// A coupling reaching the strong-coupling ceiling, with the flow time at
/// which it got there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub id: CouplingId,
    pub ell: f64,
}

/// Terminated trajectory. The trajectory is thinned once it grows past a few
/// thousand points; the first and final states are always retained.
#[derive(Debug, Clone)]
pub struct FlowOutcome {
    pub trajectory: Vec<RgState>,
    pub stop: StopReason,
    pub stop_ell: f64,
    pub crossings: Vec<Crossing>,
}

impl FlowOutcome {
    pub fn final_state(&self) -> &RgState {
        self.trajectory.last().expect("trajectory holds the seed")
    }

    /// Strong couplings at stop, in crossing order.
    pub fn crossed(&self) -> Vec<CouplingId> {
        self.crossings.iter().map(|c| c.id).collect()
    }

    pub fn crossing_ell(&self, id: CouplingId) -> Option<f64> {
        self.crossings.iter().find(|c| c.id == id).map(|c| c.ell)
    }
}

/// Flow with default tolerances; `dl_max` caps the adaptive step.
pub fn flow(state: &RgState, thresholds: &Thresholds, dl_max: f64) -> Result<FlowOutcome, RgError> {
    flow_with(
        state,
        thresholds,
        &FlowParams {
            dl_max,
            ..FlowParams::default()
        },
    )
}

fn pack(state: &RgState) -> [f64; NY] {
    let c = state.couplings.as_array();
    let mut y = [0.0; NY];
    y[..NC].copy_from_slice(&c);
    y[IKR] = state.luttinger.k_rho;
    y[IKS] = state.luttinger.k_sigma;
    y[IK0] = state.luttinger.k_0;
    y
}

fn unpack(y: &[f64; NY], ell: f64, constants: RgConstants) -> RgState {
    let mut c = [0.0; NC];
    c.copy_from_slice(&y[..NC]);
    RgState {
        ell,
        couplings: RgCouplings::from_array(c),
        luttinger: Luttinger {
            k_rho: y[IKR],
            k_sigma: y[IKS],
            k_0: y[IK0],
        },
        constants,
    }
}

/// Flow derivative at `y`. Frozen couplings are held; gauge-sector terms are
/// skipped entirely at g = 0 so no reciprocal of K_0 is ever formed there.
fn rhs(y: &[f64; NY], c: &RgConstants, frozen: &[bool; NC]) -> [f64; NY] {
    let gauge = c.gauge_sector;
    let n = c.n as f64;
    let n2 = n * n;
    let v = c.v;
    let v2 = v * v;

    let [p, q, p0, q0, t, g, cr, cs, cpr, cps] = [
        y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], y[8], y[9],
    ];
    let (kr, ks, k0) = (y[IKR], y[IKS], y[IK0]);
    let inv_kr = 1.0 / kr;
    let inv_ks = 1.0 / ks;
    let inv_k0 = if gauge { 1.0 / k0 } else { 0.0 };
    let sum_inv = inv_kr + inv_ks + 2.0 * inv_k0;

    let mut dy = [0.0; NY];

    dy[0] = (2.0 - 0.25 * n * (kr + ks)) * p;
    dy[1] = (2.0 - 0.25 * n * (inv_kr + inv_ks)) * q;
    dy[4] = (2.0 - ks / n - k0 / (2.0 * n)) * t;

    // phi locks of the individual sectors, seeded by the background locks
    // once the two matter stiffnesses differ.
    let mismatch = 0.25 * n * (inv_kr - inv_ks);
    dy[6] = (2.0 - 2.0 * n * inv_kr) * cr + q * q / v * mismatch;
    dy[7] = (2.0 - 2.0 * n * inv_ks) * cs - q * q / v * mismatch;

    if gauge {
        dy[2] = (2.0 - 0.5 * n * k0) * p0;
        dy[3] = (2.0 - 0.5 * n * inv_k0) * q0;
        dy[5] = (2.0 - sum_inv / (4.0 * n)) * g
            - cpr * g / (4.0 * n * kr * v)
            - cps * g / (4.0 * n * v) * (inv_ks + 2.0 * inv_k0);
        let cross = g * g / (4.0 * n * v) * (inv_kr - inv_ks - 2.0 * inv_k0);
        dy[8] = (2.0 - inv_kr / n) * cpr + cross;
        dy[9] = (2.0 - inv_ks / n - 2.0 * inv_k0 / n) * cps - cross;
    }

    // Stiffness feedback, second order in every coupling: theta locks push
    // their K down, phi locks push it up.
    let theta_bg = PI * n2 * p * p * (kr + ks) / (4.0 * v2);
    let phi_bg = PI * n2 * q * q * (inv_kr + inv_ks) / (4.0 * v2);
    let g_feed = PI * g * g * sum_inv / (4.0 * n2 * v2);

    dy[IKR] = -theta_bg * kr * kr + phi_bg + 2.0 * PI * n2 * cr * cr / (v2 * kr) + g_feed;
    dy[IKS] = -theta_bg * ks * ks + phi_bg + 2.0 * PI * n2 * cs * cs / (v2 * ks)
        - 2.0 * PI * t * t * ks * ks * (ks + 0.5 * k0) / (n2 * v2)
        + g_feed;
    if gauge {
        dy[IKR] += 2.0 * PI * cpr * cpr / (n2 * v2 * kr);
        dy[IKS] += 2.0 * PI * cps * cps * (inv_ks + inv_k0) / (n2 * v2);
        dy[IK0] = PI * n2 * q0 * q0 * inv_k0 / v2 - PI * n2 * p0 * p0 * k0 * k0 * k0 / v2
            - PI * t * t * k0 * k0 * (ks + 0.5 * k0) / (n2 * v2)
            + 2.0 * PI * cps * cps * (inv_ks + 2.0 * inv_k0) / (n2 * v2)
            + PI * g * g * sum_inv / (2.0 * n2 * v2);
    }

    for i in 0..NC {
        if frozen[i] {
            dy[i] = 0.0;
        }
    }
    dy
}

/// One Dormand-Prince 5(4) step; returns the fifth-order solution and the
/// embedded error estimate.
fn dp_step(y: &[f64; NY], h: f64, c: &RgConstants, frozen: &[bool; NC]) -> ([f64; NY], [f64; NY]) {
    const A2: [f64; 1] = [1.0 / 5.0];
    const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
    const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
    const A5: [f64; 4] = [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ];
    const A6: [f64; 5] = [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ];
    const B5: [f64; 6] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let stage = |coeffs: &[f64], ks: &[[f64; NY]]| {
        let mut yt = *y;
        for (a, k) in coeffs.iter().zip(ks) {
            for i in 0..NY {
                yt[i] += h * a * k[i];
            }
        }
        yt
    };

    let k1 = rhs(y, c, frozen);
    let k2 = rhs(&stage(&A2, &[k1]), c, frozen);
    let k3 = rhs(&stage(&A3, &[k1, k2]), c, frozen);
    let k4 = rhs(&stage(&A4, &[k1, k2, k3]), c, frozen);
    let k5 = rhs(&stage(&A5, &[k1, k2, k3, k4]), c, frozen);
    let k6 = rhs(&stage(&A6, &[k1, k2, k3, k4, k5]), c, frozen);
    let y5 = stage(&B5, &[k1, k2, k3, k4, k5, k6]);
    let k7 = rhs(&y5, c, frozen);

    let ks = [k1, k2, k3, k4, k5, k6, k7];
    let mut err = [0.0; NY];
    for i in 0..NY {
        let mut e = 0.0;
        for (j, k) in ks.iter().enumerate() {
            let b5 = if j < 6 { B5[j] } else { 0.0 };
            e += (b5 - B4[j]) * k[i];
        }
        err[i] = h * e;
    }
    (y5, err)
}

fn error_norm(y0: &[f64; NY], y1: &[f64; NY], err: &[f64; NY], p: &FlowParams) -> f64 {
    let mut s = 0.0;
    for i in 0..NY {
        let scale = p.atol + p.rtol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / scale;
        s += r * r;
    }
    (s / NY as f64).sqrt()
}

fn frozen_ids(frozen: &[bool; NC]) -> Vec<CouplingId> {
    CouplingId::ALL
        .iter()
        .copied()
        .filter(|id| frozen[id.index()])
        .collect()
}

/// True when some live coupling has reached the ceiling at `y`.
fn new_crossing(y: &[f64; NY], frozen: &[bool; NC], th: &Thresholds) -> bool {
    (0..NC).any(|i| !frozen[i] && y[i].abs() >= th.upper)
}

/// Gapless-rho stop: the already-frozen couplings gap everything but rho and
/// never touch it, while every live rho-capable coupling sits below the
/// lower threshold.
fn rho_gapless(y: &[f64; NY], frozen: &[bool; NC], c: &RgConstants, th: &Thresholds) -> bool {
    if !spans_all_but_rho(&frozen_ids(frozen), c.gauge_sector) {
        return false;
    }
    CouplingId::ALL
        .iter()
        .all(|&id| !gaps_rho(id) || y[id.index()].abs() < th.lower)
}

fn luttinger_ok(y: &[f64; NY], gauge: bool) -> bool {
    let ks_ok = |k: f64| k.is_finite() && k > K_MIN && k < 1.0 / K_MIN;
    y.iter().all(|x| x.is_finite()) && ks_ok(y[IKR]) && ks_ok(y[IKS]) && (!gauge || ks_ok(y[IK0]))
}

// Thinning trajectory store: keeps every stride-th accepted state, doubling
// the stride whenever the buffer fills, so long stiff tails stay bounded.
struct TrajBuf {
    states: Vec<RgState>,
    stride: usize,
    seen: usize,
}

impl TrajBuf {
    const CAP: usize = 16_384;

    fn new(seed: RgState) -> Self {
        TrajBuf {
            states: vec![seed],
            stride: 1,
            seen: 0,
        }
    }

    fn push(&mut self, s: RgState) {
        self.seen += 1;
        if self.seen % self.stride == 0 {
            self.states.push(s);
            if self.states.len() >= Self::CAP {
                let keep: Vec<RgState> = self
                    .states
                    .iter()
                    .step_by(2)
                    .copied()
                    .collect();
                self.states = keep;
                self.stride *= 2;
            }
        }
    }

    fn finish(mut self, last: RgState) -> Vec<RgState> {
        if self.states.last() != Some(&last) {
            self.states.push(last);
        }
        self.states
    }
}

/// Integrate from `state` until a stop condition fires.
///
/// Flagged numerical failures (`StepUnderflow`, `LuttingerCollapse`) are
/// reported through the stop reason, not as errors; `Err` is reserved for
/// invalid inputs such as a ceiling at or below a bare coupling.
pub fn flow_with(
    state: &RgState,
    thresholds: &Thresholds,
    params: &FlowParams,
) -> Result<FlowOutcome, RgError> {
    thresholds.validate()?;
    if !(params.dl_max > 0.0 && params.dl_max.is_finite()) {
        return Err(RgError::BadArguments(format!(
            "dl_max must be positive and finite, got {}",
            params.dl_max
        )));
    }
    if !(params.l_max > state.ell) {
        return Err(RgError::BadArguments(format!(
            "l_max = {} does not exceed the seed flow time {}",
            params.l_max, state.ell
        )));
    }
    let constants = state.constants;
    let mut y = pack(state);
    if !luttinger_ok(&y, constants.gauge_sector) {
        return Err(RgError::BadArguments(
            "seed state has non-finite entries or non-positive stiffnesses".into(),
        ));
    }
    if state.couplings.max_abs() >= thresholds.upper {
        return Err(RgError::BadArguments(format!(
            "upper threshold {} must exceed every bare coupling (largest is {})",
            thresholds.upper,
            state.couplings.max_abs()
        )));
    }

    let mut ell = state.ell;
    let mut frozen = [false; NC];
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut traj = TrajBuf::new(*state);
    let mut h = params.dl_max.min(1e-2);
    let mut steps = 0usize;

    let stop = loop {
        if ell >= params.l_max {
            break StopReason::MaxFlowTime;
        }
        steps += 1;
        if steps > MAX_STEPS {
            break StopReason::StepUnderflow;
        }

        let h_try = h.min(params.l_max - ell).max(H_MIN);
        let (y_full, err) = dp_step(&y, h_try, &constants, &frozen);
        let en = error_norm(&y, &y_full, &err, params);
        if !en.is_finite() || en > 1.0 {
            let shrink = if en.is_finite() {
                (0.9 * en.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h = h_try * shrink;
            if h < H_MIN {
                break StopReason::StepUnderflow;
            }
            continue;
        }

        // Localize the earliest event inside the accepted span: either a
        // live coupling reaching the ceiling or the gapless-rho condition
        // turning true. The frozen set is fixed during the search.
        let fires = |yc: &[f64; NY]| {
            new_crossing(yc, &frozen, thresholds) || rho_gapless(yc, &frozen, &constants, thresholds)
        };
        let (h_used, mut y_new) = if fires(&y_full) {
            let mut lo = 0.0_f64;
            let mut hi = h_try;
            for _ in 0..60 {
                if hi - lo <= 1e-9 * h_try {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let (ym, _) = dp_step(&y, mid, &constants, &frozen);
                if fires(&ym) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            (hi, dp_step(&y, hi, &constants, &frozen).0)
        } else {
            (h_try, y_full)
        };

        ell += h_used;
        for i in 0..NC {
            if !frozen[i] && y_new[i].abs() >= thresholds.upper {
                y_new[i] = thresholds.upper.copysign(y_new[i]);
                frozen[i] = true;
                crossings.push(Crossing {
                    id: CouplingId::ALL[i],
                    ell,
                });
            }
        }
        y = y_new;
        traj.push(unpack(&y, ell, constants));

        if !luttinger_ok(&y, constants.gauge_sector) {
            break StopReason::LuttingerCollapse;
        }
        if spans_active(&frozen_ids(&frozen), constants.gauge_sector) {
            break StopReason::AllSectorsGapped;
        }
        if rho_gapless(&y, &frozen, &constants, thresholds) {
            break StopReason::RhoSectorGapless;
        }

        h = (h_try * (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)).min(params.dl_max);
    };

    let last = unpack(&y, ell, constants);
    Ok(FlowOutcome {
        trajectory: traj.finish(last),
        stop,
        stop_ell: ell,
        crossings,
    })
}
