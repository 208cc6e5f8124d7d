//! Which sectors a set of strong couplings can gap.
//!
//! Every cosine pins one or two directions in the three-dimensional mode
//! space (rho, sigma, 0). A sector counts as gapped when the pinned
//! directions of the strong couplings span it, pooling theta- and phi-side
//! locks: a mode is massive as soon as either side is locked. The flow
//! terminates when the span covers the whole active space, or when it covers
//! everything except rho while no rho-capable coupling is alive.

use crate::state::CouplingId;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Directions pinned by one strong coupling, as rows in (rho, sigma, 0)
/// coordinates. Two-row entries pin two independent combinations at once.
pub fn pinned_directions(id: CouplingId) -> &'static [[f64; 3]] {
    match id {
        // Matter locks act on both legs and pin rho and sigma together.
        CouplingId::P | CouplingId::Q => &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        CouplingId::P0 | CouplingId::Q0 => &[[0.0, 0.0, 1.0]],
        // Rung hop: sqrt(2) theta_sigma - theta_0.
        CouplingId::T => &[[0.0, SQRT2, -1.0]],
        // Leg electric term: phi_up + phi_0 and phi_down - phi_0, whose sum
        // and difference are phi_rho and the same sigma-0 ray Cp_sigma pins.
        CouplingId::G => &[[1.0, 0.0, 0.0], [0.0, 1.0, SQRT2]],
        CouplingId::CRho | CouplingId::CpRho => &[[1.0, 0.0, 0.0]],
        CouplingId::CSigma => &[[0.0, 1.0, 0.0]],
        CouplingId::CpSigma => &[[0.0, 1.0, SQRT2]],
    }
}

/// Couplings able to open a rho gap; the gapless-rho stop requires all of
/// these to have dropped below the lower threshold.
pub fn gaps_rho(id: CouplingId) -> bool {
    pinned_directions(id).iter().any(|d| d[0] != 0.0)
}

fn active_dim(gauge_sector: bool) -> usize {
    if gauge_sector {
        3
    } else {
        2
    }
}

/// Rank of the pinned span of `ids` inside the active mode space. Without a
/// gauge sector the 0 components are projected out before elimination.
pub fn pinned_rank(ids: &[CouplingId], gauge_sector: bool) -> usize {
    let mut rows: Vec<[f64; 3]> = Vec::new();
    for &id in ids {
        for d in pinned_directions(id) {
            let mut r = *d;
            if !gauge_sector {
                r[2] = 0.0;
            }
            rows.push(r);
        }
    }
    let mut rank = 0;
    for col in 0..3 {
        let Some(pivot) = (rank..rows.len()).max_by(|&a, &b| {
            rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap()
        }) else {
            break;
        };
        if rows[pivot][col].abs() < 1e-12 {
            continue;
        }
        rows.swap(rank, pivot);
        for i in rank + 1..rows.len() {
            let f = rows[i][col] / rows[rank][col];
            for c in col..3 {
                rows[i][c] -= f * rows[rank][c];
            }
        }
        rank += 1;
    }
    rank
}

/// True when the strong couplings gap every active sector.
pub fn spans_active(ids: &[CouplingId], gauge_sector: bool) -> bool {
    pinned_rank(ids, gauge_sector) == active_dim(gauge_sector)
}

/// True when the strong couplings gap everything except the rho sector and
/// none of them touches rho at all.
pub fn spans_all_but_rho(ids: &[CouplingId], gauge_sector: bool) -> bool {
    if ids.iter().any(|&id| gaps_rho(id)) {
        return false;
    }
    pinned_rank(ids, gauge_sector) == active_dim(gauge_sector) - 1
}
