//! Flow state: three Luttinger sectors plus ten cosine couplings.
//!
//! The long-wavelength description of the ladder keeps a symmetric (rho) and
//! an antisymmetric (sigma) matter mode and one gauge mode (0). Lattice units
//! are fixed to a = 1, which makes the common mode velocity 4 pi / N and
//! leaves thirteen running numbers in total.

use std::f64::consts::PI;

use crate::RgError;

/// K = 1/lambda is a trustworthy starting point only near lambda = 1.
/// Raster points outside this window are flagged, not rejected.
pub const RELIABLE_LAMBDA: (f64, f64) = (0.2, 3.0);

/// Whether the K = 1/lambda seed is inside its window of validity.
pub fn lambda_is_reliable(lambda: f64) -> bool {
    lambda >= RELIABLE_LAMBDA.0 && lambda <= RELIABLE_LAMBDA.1
}

/// Names for the ten cosine couplings.
///
/// `P`/`Q` lock the matter theta/phi fields at clock periodicity, `P0`/`Q0`
/// do the same for the gauge mode, `T` is the rung hop, `G` the leg electric
/// term, and the four `C`s are the second-order-generated sector locks
/// (plain ones at clock periodicity, primed ones at unit winding).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingId {
    P,
    Q,
    P0,
    Q0,
    T,
    G,
    CRho,
    CSigma,
    CpRho,
    CpSigma,
}

impl CouplingId {
    pub const ALL: [CouplingId; 10] = [
        CouplingId::P,
        CouplingId::Q,
        CouplingId::P0,
        CouplingId::Q0,
        CouplingId::T,
        CouplingId::G,
        CouplingId::CRho,
        CouplingId::CSigma,
        CouplingId::CpRho,
        CouplingId::CpSigma,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CouplingId::P => "P",
            CouplingId::Q => "Q",
            CouplingId::P0 => "P_0",
            CouplingId::Q0 => "Q_0",
            CouplingId::T => "T",
            CouplingId::G => "G",
            CouplingId::CRho => "C_rho",
            CouplingId::CSigma => "C_sigma",
            CouplingId::CpRho => "Cp_rho",
            CouplingId::CpSigma => "Cp_sigma",
        }
    }

    /// Position in the packed coupling array.
    pub fn index(self) -> usize {
        CouplingId::ALL.iter().position(|&c| c == self).unwrap()
    }
}

impl std::fmt::Display for CouplingId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Amplitudes of the ten cosines, in energy-density units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RgCouplings {
    pub p: f64,
    pub q: f64,
    pub p0: f64,
    pub q0: f64,
    pub t: f64,
    pub g: f64,
    pub c_rho: f64,
    pub c_sigma: f64,
    pub cp_rho: f64,
    pub cp_sigma: f64,
}

impl RgCouplings {
    pub fn as_array(&self) -> [f64; 10] {
        [
            self.p,
            self.q,
            self.p0,
            self.q0,
            self.t,
            self.g,
            self.c_rho,
            self.c_sigma,
            self.cp_rho,
            self.cp_sigma,
        ]
    }

    pub fn from_array(a: [f64; 10]) -> Self {
        RgCouplings {
            p: a[0],
            q: a[1],
            p0: a[2],
            q0: a[3],
            t: a[4],
            g: a[5],
            c_rho: a[6],
            c_sigma: a[7],
            cp_rho: a[8],
            cp_sigma: a[9],
        }
    }

    pub fn get(&self, id: CouplingId) -> f64 {
        self.as_array()[id.index()]
    }

    pub fn set(&mut self, id: CouplingId, value: f64) {
        let mut a = self.as_array();
        a[id.index()] = value;
        *self = RgCouplings::from_array(a);
    }

    /// Largest coupling magnitude; thresholds must sit above this at the
    /// start of a flow.
    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Stiffnesses of the three gapless sectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Luttinger {
    pub k_rho: f64,
    pub k_sigma: f64,
    pub k_0: f64,
}

/// Quantities held fixed along a trajectory.
///
/// `gauge_sector` is false in the frozen-gauge (g = 0) limit, where the 0
/// mode drops out: its stiffness vanishes, the dual field is pinned from the
/// outset, and every coupling involving the mode stays identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RgConstants {
    pub n: usize,
    pub v: f64,
    pub gauge_sector: bool,
}

/// One point on a flow trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RgState {
    pub ell: f64,
    pub couplings: RgCouplings,
    pub luttinger: Luttinger,
    pub constants: RgConstants,
}

/// Variant conventions for the bare couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BareOptions {
    /// The gauge-mode theta lock can be seeded either with the stiffness
    /// read off the microscopic model (P_0 ~ 1/g, the default) or with its
    /// dual (P_0 ~ g). Exposed for sensitivity studies only.
    pub p0_proportional_to_g: bool,
}

/// Common amplitude of the background lock-in couplings: the energy balance
/// of a kink pair in a clock chain gives N^2 (1 - cos 2 pi / N)^2 / 32 per
/// unit of chain coupling.
pub fn kink_amplitude(n: usize) -> f64 {
    let nf = n as f64;
    let c = 1.0 - (2.0 * PI / nf).cos();
    nf * nf * c * c / 32.0
}

/// Bare couplings at microscopic electric coupling `g` and chain coupling
/// `lambda`, default conventions.
pub fn bare_state(n: usize, g: f64, lambda: f64) -> Result<RgState, RgError> {
    bare_state_with(n, g, lambda, &BareOptions::default())
}

/// Bare couplings with explicit convention switches.
///
/// `g = 0` selects the frozen-gauge limit: the 0 sector and every coupling
/// tied to it (P_0, Q_0, G, both primed C's) are dropped rather than seeded
/// with singular values.
pub fn bare_state_with(
    n: usize,
    g: f64,
    lambda: f64,
    opts: &BareOptions,
) -> Result<RgState, RgError> {
    if n < 2 {
        return Err(RgError::BadArguments(format!(
            "clock order must be at least 2, got {n}"
        )));
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(RgError::BadArguments(format!(
            "chain coupling must be positive and finite, got {lambda}"
        )));
    }
    if !g.is_finite() || g < 0.0 {
        return Err(RgError::BadArguments(format!(
            "electric coupling must be nonnegative and finite, got {g}"
        )));
    }

    let kink = kink_amplitude(n);
    let gauge_sector = g > 0.0;
    let mut couplings = RgCouplings {
        p: lambda * kink,
        q: kink / lambda,
        t: 2.0 * lambda,
        ..RgCouplings::default()
    };
    if gauge_sector {
        couplings.g = 2.0 * g;
        couplings.q0 = g * kink;
        couplings.p0 = if opts.p0_proportional_to_g {
            g * kink
        } else {
            kink / g
        };
    }

    Ok(RgState {
        ell: 0.0,
        couplings,
        luttinger: Luttinger {
            k_rho: 1.0 / lambda,
            k_sigma: 1.0 / lambda,
            k_0: g,
        },
        constants: RgConstants {
            n,
            v: 4.0 * PI / n as f64,
            gauge_sector,
        },
    })
}
