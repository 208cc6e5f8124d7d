use crate::ModelError;

/// Ladder leg, also labels the matter vertex rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Leg {
    Up,
    Down,
}

impl Leg {
    pub const BOTH: [Leg; 2] = [Leg::Up, Leg::Down];

    /// Sign carried by the rung shift operator in the Gauss generator of
    /// this leg: +1 for up, -1 for down.
    pub fn rung_sign(self) -> i32 {
        match self {
            Leg::Up => 1,
            Leg::Down => -1,
        }
    }
}

/// Left or right termination of the ladder. A rough edge keeps the dangling
/// leg links of the outermost unit cell; a smooth edge removes them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Rough,
    Smooth,
}

/// Static background charge q (mod N) at matter vertex (r, leg). The Gauss
/// generator there is required to take the eigenvalue omega^q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StaticCharge {
    pub r: usize,
    pub leg: Leg,
    pub q: i64,
}

/// Geometry of one ladder: N-state clocks on links, N-state matter on the
/// 2L vertices, L rungs.
#[derive(Debug, Clone)]
pub struct LadderSpec {
    pub n: usize,
    pub l: usize,
    pub boundary_left: Boundary,
    pub boundary_right: Boundary,
    pub static_charges: Vec<StaticCharge>,
}

impl LadderSpec {
    pub fn new(
        n: usize,
        l: usize,
        boundary_left: Boundary,
        boundary_right: Boundary,
        static_charges: Vec<StaticCharge>,
    ) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::InvalidSpec(format!("clock order N={n} < 2")));
        }
        if l < 2 {
            return Err(ModelError::InvalidSpec(format!("ladder length L={l} < 2")));
        }
        for c in &static_charges {
            if c.r < 1 || c.r > l {
                return Err(ModelError::InvalidSpec(format!(
                    "static charge rung {} outside 1..={l}",
                    c.r
                )));
            }
            if c.q.rem_euclid(n as i64) == 0 {
                return Err(ModelError::InvalidSpec(
                    "static charge is zero mod N".into(),
                ));
            }
        }
        // With two smooth edges every electric string must terminate on a
        // charge, so the total charge has to vanish mod N.
        if boundary_left == Boundary::Smooth && boundary_right == Boundary::Smooth {
            let total: i64 = static_charges.iter().map(|c| c.q).sum();
            if total.rem_euclid(n as i64) != 0 {
                return Err(ModelError::InvalidSpec(format!(
                    "total static charge {total} != 0 mod {n} with smooth boundaries"
                )));
            }
        }
        Ok(LadderSpec {
            n,
            l,
            boundary_left,
            boundary_right,
            static_charges,
        })
    }

    /// Convenience: rough left edge, smooth right edge, no charges.
    pub fn rough_smooth(n: usize, l: usize) -> Result<Self, ModelError> {
        LadderSpec::new(n, l, Boundary::Rough, Boundary::Smooth, vec![])
    }

    /// Convenience: smooth on both edges, no charges.
    pub fn smooth_smooth(n: usize, l: usize) -> Result<Self, ModelError> {
        LadderSpec::new(n, l, Boundary::Smooth, Boundary::Smooth, vec![])
    }

    /// Charge (mod N) pinned at vertex (r, leg), zero when none declared.
    pub fn charge_at(&self, r: usize, leg: Leg) -> i64 {
        self.static_charges
            .iter()
            .filter(|c| c.r == r && c.leg == leg)
            .map(|c| c.q)
            .sum::<i64>()
            .rem_euclid(self.n as i64)
    }

    /// Rung indices r whose leg links (r, s) exist.
    pub fn leg_link_rungs(&self) -> std::ops::RangeInclusive<usize> {
        let lo = match self.boundary_left {
            Boundary::Rough => 1,
            Boundary::Smooth => 2,
        };
        let hi = match self.boundary_right {
            Boundary::Rough => self.l + 1,
            Boundary::Smooth => self.l,
        };
        lo..=hi
    }

    pub fn has_leg_link(&self, r: usize) -> bool {
        self.leg_link_rungs().contains(&r)
    }
}

/// Coupling constants. g multiplies the electric terms (1/g the plaquette),
/// lambda the matter tunneling (1/lambda the mass), lambda_b the rough-edge
/// boundary field, g_b an optional left boundary plaquette.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub g: f64,
    pub lambda: f64,
    pub lambda_b: f64,
    pub g_b: Option<f64>,
}

impl Couplings {
    pub fn new(g: f64, lambda: f64, lambda_b: f64, g_b: Option<f64>) -> Result<Self, ModelError> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(ModelError::InvalidCoupling(format!("g = {g} must be > 0")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(ModelError::InvalidCoupling(format!(
                "lambda = {lambda} must be >= 0"
            )));
        }
        if !(lambda_b >= 0.0) || !lambda_b.is_finite() {
            return Err(ModelError::InvalidCoupling(format!(
                "lambda_b = {lambda_b} must be >= 0"
            )));
        }
        if let Some(gb) = g_b {
            if !(gb > 0.0) || !gb.is_finite() {
                return Err(ModelError::InvalidCoupling(format!(
                    "g_b = {gb} must be > 0"
                )));
            }
        }
        Ok(Couplings {
            g,
            lambda,
            lambda_b,
            g_b,
        })
    }

    pub fn bulk(g: f64, lambda: f64) -> Result<Self, ModelError> {
        Couplings::new(g, lambda, 0.0, None)
    }
}
