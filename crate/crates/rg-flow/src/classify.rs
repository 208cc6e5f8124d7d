//! Endpoint classification: which strong-coupling pattern a terminated
//! trajectory landed in.
//!
//! The label is read off the set of couplings that reached the ceiling. The
//! six recognized patterns and the couplings that identify them:
//!
//! * deconfined: the matter phi lock `Q` leads, rung hop never strong;
//! * quadrupolar: rung hop `T` leads with a rho-side phi lock closing the gap;
//! * coulomb: rho stays gapless while `T` gaps the rest;
//! * higgs: theta locks everywhere, `P` together with `T`;
//! * fully confined: leg electric term `G` strong alongside phi locks,
//!   without the rung hop;
//! * confined, rung dominated: `G` strong together with `T`.
//!
//! When two non-commuting couplings both reach the ceiling, the earlier
//! crossing wins (it reached strong coupling first; frozen magnitudes are
//! equal afterwards, so the crossing time is the only faithful order left).
//! Any set matching no pattern is reported as unclassified with the raw set
//! attached rather than silently forced into a bin.

use crate::flow::{FlowOutcome, StopReason};
use crate::state::CouplingId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    Deconfined,
    Quadrupolar,
    Coulomb,
    Higgs,
    FullyConfined,
    ConfinedRungDominated,
    Unclassified,
}

impl PhaseLabel {
    pub const ALL: [PhaseLabel; 7] = [
        PhaseLabel::Deconfined,
        PhaseLabel::Quadrupolar,
        PhaseLabel::Coulomb,
        PhaseLabel::Higgs,
        PhaseLabel::FullyConfined,
        PhaseLabel::ConfinedRungDominated,
        PhaseLabel::Unclassified,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PhaseLabel::Deconfined => "deconfined",
            PhaseLabel::Quadrupolar => "quadrupolar",
            PhaseLabel::Coulomb => "coulomb",
            PhaseLabel::Higgs => "higgs",
            PhaseLabel::FullyConfined => "fully_confined",
            PhaseLabel::ConfinedRungDominated => "confined_rung_dominated",
            PhaseLabel::Unclassified => "unclassified",
        }
    }
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Label plus the evidence it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: PhaseLabel,
    /// Couplings that reached the ceiling, in crossing order.
    pub winning: Vec<CouplingId>,
    pub stop_ell: f64,
}

/// Classify a terminated trajectory.
pub fn classify(outcome: &FlowOutcome) -> Classification {
    let winning = outcome.crossed();
    let label = match outcome.stop {
        StopReason::RhoSectorGapless => {
            // The rung hop must be among the couplings that gapped the rest;
            // anything else gapping sigma without it is not this pattern.
            if winning.contains(&CouplingId::T) {
                PhaseLabel::Coulomb
            } else {
                PhaseLabel::Unclassified
            }
        }
        StopReason::AllSectorsGapped => strong_coupling_label(outcome, &winning),
        StopReason::MaxFlowTime | StopReason::StepUnderflow | StopReason::LuttingerCollapse => {
            PhaseLabel::Unclassified
        }
    };
    Classification {
        label,
        winning,
        stop_ell: outcome.stop_ell,
    }
}

fn strong_coupling_label(outcome: &FlowOutcome, winning: &[CouplingId]) -> PhaseLabel {
    let has = |id: CouplingId| winning.contains(&id);
    // Earlier crossing = stronger; ties cannot happen within one bisected
    // event, and identical times fall back to the listed order.
    let earlier = |a: CouplingId, b: CouplingId| {
        outcome.crossing_ell(a).unwrap_or(f64::INFINITY)
            <= outcome.crossing_ell(b).unwrap_or(f64::INFINITY)
    };

    // The sigma-0 lock only grows where the gauge mode is soft, so it marks
    // a dominant electric term just as well as G itself; at small g it dies
    // before doing anything. Cp_rho is not such a marker: it is an ordinary
    // rho-side lock that gets seeded at any g.
    if has(CouplingId::G) || has(CouplingId::CpSigma) {
        let q_like = if has(CouplingId::Q) {
            Some(CouplingId::Q)
        } else if has(CouplingId::Q0) {
            Some(CouplingId::Q0)
        } else {
            None
        };
        return match (has(CouplingId::T), q_like) {
            (true, None) => PhaseLabel::ConfinedRungDominated,
            // Phi locks everywhere and the rung hop never got strong.
            (false, _) => PhaseLabel::FullyConfined,
            (true, Some(q)) => {
                if earlier(CouplingId::T, q) {
                    PhaseLabel::ConfinedRungDominated
                } else {
                    PhaseLabel::FullyConfined
                }
            }
        };
    }

    // No strong electric term: order the first-order drivers by crossing
    // time and let the leader name the pattern.
    let leader = [CouplingId::T, CouplingId::P, CouplingId::Q]
        .into_iter()
        .filter(|&id| has(id))
        .min_by(|&a, &b| {
            outcome
                .crossing_ell(a)
                .partial_cmp(&outcome.crossing_ell(b))
                .unwrap()
        });
    match leader {
        // Both matter phi locks strong without the rung hop: the deconfined
        // pattern even when Q itself stopped short of the ceiling.
        None if has(CouplingId::CRho) && has(CouplingId::CSigma) => PhaseLabel::Deconfined,
        Some(CouplingId::Q) => PhaseLabel::Deconfined,
        Some(CouplingId::P) => {
            if has(CouplingId::T) {
                PhaseLabel::Higgs
            } else {
                PhaseLabel::Unclassified
            }
        }
        Some(CouplingId::T) => {
            if has(CouplingId::P) {
                PhaseLabel::Higgs
            } else if has(CouplingId::CRho) || has(CouplingId::CpRho) || has(CouplingId::Q) {
                // The rung ordered first and the rho gap closed on the phi
                // side afterwards: the quadrupolar pattern.
                PhaseLabel::Quadrupolar
            } else {
                PhaseLabel::Unclassified
            }
        }
        _ => PhaseLabel::Unclassified,
    }
}
