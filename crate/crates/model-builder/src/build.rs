use crate::layout::{chain_layout, ChainLayout, LayoutMode};
use crate::spec::{Boundary, Couplings, LadderSpec, Leg};
use crate::terms::{LocalOp, TermList};
use crate::ModelError;
use clock_algebra::{omega_pow, C64};

/// Which formulation a term list was built in; fixes the chain layout used
/// to interpret its site indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Full,
    UnitaryGauge,
    PureAxial,
    PureDual,
    ClockLimit,
}

impl ModelKind {
    pub fn layout_mode(self) -> LayoutMode {
        match self {
            ModelKind::Full => LayoutMode::FullHilbert,
            ModelKind::UnitaryGauge => LayoutMode::LinksOnly,
            ModelKind::PureAxial | ModelKind::PureDual => LayoutMode::RungChain,
            ModelKind::ClockLimit => LayoutMode::MatterOnly,
        }
    }

    pub fn layout(self, spec: &LadderSpec) -> ChainLayout {
        chain_layout(spec, self.layout_mode())
    }
}

/// Dispatches to the builder for `kind`.
pub fn build(
    kind: ModelKind,
    spec: &LadderSpec,
    couplings: &Couplings,
) -> Result<TermList, ModelError> {
    match kind {
        ModelKind::Full => build_full(spec, couplings),
        ModelKind::UnitaryGauge => build_unitary_gauge(spec, couplings),
        ModelKind::PureAxial => build_pure_axial(spec, couplings),
        ModelKind::PureDual => build_pure_dual(spec, couplings),
        ModelKind::ClockLimit => build_clock_limit(spec, couplings),
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_boundary_couplings(spec: &LadderSpec, c: &Couplings) -> Result<(), ModelError> {
    if spec.boundary_left != Boundary::Rough {
        if c.lambda_b > 0.0 {
            return Err(ModelError::InvalidCoupling(
                "lambda_b > 0 needs a rough left edge (no dangling links to pin)".into(),
            ));
        }
        if c.g_b.is_some() {
            return Err(ModelError::InvalidCoupling(
                "g_b needs a rough left edge (no boundary plaquette otherwise)".into(),
            ));
        }
    }
    Ok(())
}

/// Full link+matter Hamiltonian: plaquettes, electric fields, matter mass,
/// gauge-covariant tunneling along legs and rungs, plus the rough-edge
/// boundary field lambda_b and the optional left boundary plaquette g_b.
pub fn build_full(spec: &LadderSpec, c: &Couplings) -> Result<TermList, ModelError> {
    if c.lambda <= 0.0 {
        return Err(ModelError::InvalidCoupling(
            "full model needs lambda > 0 (mass term carries 1/lambda)".into(),
        ));
    }
    check_boundary_couplings(spec, c)?;
    let lay = chain_layout(spec, LayoutMode::FullHilbert);
    let mut h = TermList::new(spec.n, lay.chain_length());

    // Plaquettes: -(1/g) sigma_{r,0} sigma_{r+1,up} sigma^+_{r+1,0} sigma^+_{r+1,down} + H.c.
    for r in 1..spec.l {
        h.push_with_adjoint(
            re(-1.0 / c.g),
            vec![
                (lay.rung(r).unwrap(), LocalOp::Sigma(1)),
                (lay.leg_link(r + 1, Leg::Up).unwrap(), LocalOp::Sigma(1)),
                (lay.rung(r + 1).unwrap(), LocalOp::Sigma(-1)),
                (lay.leg_link(r + 1, Leg::Down).unwrap(), LocalOp::Sigma(-1)),
            ],
        );
    }
    if let Some(gb) = c.g_b {
        h.push_with_adjoint(
            re(-1.0 / gb),
            vec![
                (lay.leg_link(1, Leg::Up).unwrap(), LocalOp::Sigma(1)),
                (lay.rung(1).unwrap(), LocalOp::Sigma(-1)),
                (lay.leg_link(1, Leg::Down).unwrap(), LocalOp::Sigma(-1)),
            ],
        );
    }

    // Electric term on every link, including dangling ones.
    for (pos, _) in lay.links() {
        h.push_with_adjoint(re(-c.g), vec![(pos, LocalOp::Tau(1))]);
    }

    // Matter mass on every vertex.
    for r in 1..=spec.l {
        for leg in Leg::BOTH {
            h.push_with_adjoint(
                re(-1.0 / c.lambda),
                vec![(lay.vertex(r, leg).unwrap(), LocalOp::Eta(1))],
            );
        }
    }

    // Leg tunneling: -lambda zeta^+_{r,s} sigma^+_{r+1,s} zeta_{r+1,s} + H.c.
    for r in 1..spec.l {
        for leg in Leg::BOTH {
            h.push_with_adjoint(
                re(-c.lambda),
                vec![
                    (lay.vertex(r, leg).unwrap(), LocalOp::Zeta(-1)),
                    (lay.leg_link(r + 1, leg).unwrap(), LocalOp::Sigma(-1)),
                    (lay.vertex(r + 1, leg).unwrap(), LocalOp::Zeta(1)),
                ],
            );
        }
    }

    // Rung tunneling: -lambda zeta^+_{r,up} sigma_{r,0} zeta_{r,down} + H.c.
    for r in 1..=spec.l {
        h.push_with_adjoint(
            re(-c.lambda),
            vec![
                (lay.vertex(r, Leg::Up).unwrap(), LocalOp::Zeta(-1)),
                (lay.rung(r).unwrap(), LocalOp::Sigma(1)),
                (lay.vertex(r, Leg::Down).unwrap(), LocalOp::Zeta(1)),
            ],
        );
    }

    // Rough-edge boundary field: -lambda_b (sigma^+_{1,s} zeta_{1,s} + H.c.).
    if c.lambda_b > 0.0 {
        for leg in Leg::BOTH {
            h.push_with_adjoint(
                re(-c.lambda_b),
                vec![
                    (lay.leg_link(1, leg).unwrap(), LocalOp::Sigma(-1)),
                    (lay.vertex(1, leg).unwrap(), LocalOp::Zeta(1)),
                ],
            );
        }
    }
    Ok(h)
}

/// Gauss generators and their prescribed sector.
#[derive(Debug, Clone)]
pub struct GaussSector {
    /// One generator per vertex, ordered r = 1..L with Up before Down.
    pub generators: Vec<TermList>,
    pub vertices: Vec<(usize, Leg)>,
    /// Required eigenvalue exponents: G_v = omega^{charges[v]} on the sector.
    pub charges: Vec<i64>,
}

/// Gauss generators on the full Hilbert space. The generator at vertex
/// (r, s) multiplies the shifts of every link touching the vertex (legs
/// when they exist, the rung with a leg-dependent sign) by the matter
/// shift eta. All generators are diagonal in the field basis.
pub fn gauss_operators(spec: &LadderSpec) -> GaussSector {
    let lay = chain_layout(spec, LayoutMode::FullHilbert);
    let mut generators = Vec::new();
    let mut vertices = Vec::new();
    let mut charges = Vec::new();
    for r in 1..=spec.l {
        for leg in Leg::BOTH {
            let mut g = TermList::new(spec.n, lay.chain_length());
            let mut factors = vec![
                (lay.rung(r).unwrap(), LocalOp::Tau(leg.rung_sign())),
                (lay.vertex(r, leg).unwrap(), LocalOp::Eta(1)),
            ];
            if let Some(pos) = lay.leg_link(r, leg) {
                factors.push((pos, LocalOp::Tau(1)));
            }
            if let Some(pos) = lay.leg_link(r + 1, leg) {
                factors.push((pos, LocalOp::Tau(-1)));
            }
            g.push(one(), factors);
            generators.push(g);
            vertices.push((r, leg));
            charges.push(spec.charge_at(r, leg));
        }
    }
    GaussSector { generators, vertices, charges }
}

/// Checks that every term of `h` commutes with every Gauss generator.
///
/// Generators are diagonal in the field basis with eigenvalue exponent
/// e_v(m) = sum_i b_i m_i mod N, and a term shifts digits by fixed amounts,
/// so [term, G_v] = 0 iff sum over the term's shifted sites of b_i a_i
/// vanishes mod N. Structural, exact, and independent of L. Returns a
/// description of the first violating (term, vertex) pair, if any.
pub fn gauge_invariance_violation(h: &TermList, sector: &GaussSector) -> Option<String> {
    let n = h.n as i64;
    let gens: Vec<Vec<(usize, i64)>> = sector
        .generators
        .iter()
        .map(|g| {
            g.compiled()
                .first()
                .map(|ct| ct.phases.iter().map(|&(s, b)| (s, b as i64)).collect())
                .unwrap_or_default()
        })
        .collect();
    for (ti, ct) in h.compiled().iter().enumerate() {
        for (vi, phases) in gens.iter().enumerate() {
            let mut acc: i64 = 0;
            for &(site, a) in &ct.shifts {
                if let Some(&(_, b)) = phases.iter().find(|(s, _)| *s == site) {
                    acc += b * a as i64;
                }
            }
            if acc.rem_euclid(n) != 0 {
                let (r, leg) = sector.vertices[vi];
                return Some(format!(
                    "term {ti} shifts the Gauss phase at vertex ({r}, {leg:?}) by {} mod {n}",
                    acc.rem_euclid(n)
                ));
            }
        }
    }
    None
}

/// Unitary-gauge Hamiltonian on links only: matter is frozen to the clock
/// vacuum and the mass term is rewritten through the Gauss law as short
/// shift strings on links. A static charge q at (r, s) multiplies that
/// vertex's rewritten mass term by omega^q.
pub fn build_unitary_gauge(spec: &LadderSpec, c: &Couplings) -> Result<TermList, ModelError> {
    if c.lambda <= 0.0 {
        return Err(ModelError::InvalidCoupling(
            "unitary gauge needs lambda > 0 (mass term carries 1/lambda)".into(),
        ));
    }
    if spec.boundary_right == Boundary::Rough {
        return Err(ModelError::NotSupported(
            "unitary gauge assumes the right-edge Gauss form; rough right edge not derived".into(),
        ));
    }
    check_boundary_couplings(spec, c)?;
    let lay = chain_layout(spec, LayoutMode::LinksOnly);
    let mut h = TermList::new(spec.n, lay.chain_length());

    for r in 1..spec.l {
        h.push_with_adjoint(
            re(-1.0 / c.g),
            vec![
                (lay.rung(r).unwrap(), LocalOp::Sigma(1)),
                (lay.leg_link(r + 1, Leg::Up).unwrap(), LocalOp::Sigma(1)),
                (lay.rung(r + 1).unwrap(), LocalOp::Sigma(-1)),
                (lay.leg_link(r + 1, Leg::Down).unwrap(), LocalOp::Sigma(-1)),
            ],
        );
    }
    if let Some(gb) = c.g_b {
        h.push_with_adjoint(
            re(-1.0 / gb),
            vec![
                (lay.leg_link(1, Leg::Up).unwrap(), LocalOp::Sigma(1)),
                (lay.rung(1).unwrap(), LocalOp::Sigma(-1)),
                (lay.leg_link(1, Leg::Down).unwrap(), LocalOp::Sigma(-1)),
            ],
        );
    }

    for (pos, _) in lay.links() {
        h.push_with_adjoint(re(-c.g), vec![(pos, LocalOp::Tau(1))]);
    }

    // Eliminated mass: eta_{r,s} = omega^q tau^+_{r,s} tau^{-sign}_{r,0} tau_{r+1,s},
    // with the leg factors present only where those links exist.
    for r in 1..=spec.l {
        for leg in Leg::BOTH {
            let mut factors = vec![(lay.rung(r).unwrap(), LocalOp::Tau(-leg.rung_sign()))];
            if let Some(pos) = lay.leg_link(r, leg) {
                factors.push((pos, LocalOp::Tau(-1)));
            }
            if let Some(pos) = lay.leg_link(r + 1, leg) {
                factors.push((pos, LocalOp::Tau(1)));
            }
            let phase = omega_pow(spec.n, spec.charge_at(r, leg));
            h.push_with_adjoint(re(-1.0 / c.lambda) * phase, factors);
        }
    }

    // Tunneling: legs reduce to single-link clock flips on links 2..L,
    // rungs to flips on every rung.
    for r in 1..spec.l {
        for leg in Leg::BOTH {
            h.push_with_adjoint(
                re(-c.lambda),
                vec![(lay.leg_link(r + 1, leg).unwrap(), LocalOp::Sigma(-1))],
            );
        }
    }
    for r in 1..=spec.l {
        h.push_with_adjoint(re(-c.lambda), vec![(lay.rung(r).unwrap(), LocalOp::Sigma(1))]);
    }

    if c.lambda_b > 0.0 {
        for leg in Leg::BOTH {
            h.push_with_adjoint(
                re(-c.lambda_b),
                vec![(lay.leg_link(1, leg).unwrap(), LocalOp::Sigma(-1))],
            );
        }
    }
    Ok(h)
}

/// Pure gauge theory in axial gauge, on the rung chain. Leg electric
/// fields become rung shift strings running to the right edge; static leg
/// charges reweight the strings they sit under. The optional g_b term is
/// the axial projection of the left boundary plaquette.
pub fn build_pure_axial(spec: &LadderSpec, c: &Couplings) -> Result<TermList, ModelError> {
    if spec.boundary_right == Boundary::Rough {
        return Err(ModelError::NotSupported(
            "axial gauge fixing assumes a smooth right edge".into(),
        ));
    }
    if c.g_b.is_some() && spec.boundary_left != Boundary::Rough {
        return Err(ModelError::InvalidCoupling(
            "g_b needs a rough left edge".into(),
        ));
    }
    let lay = chain_layout(spec, LayoutMode::RungChain);
    let mut h = TermList::new(spec.n, lay.chain_length());

    // Plaquettes: -(1/g)(sigma_r sigma^+_{r+1} + H.c.).
    for r in 1..spec.l {
        h.push_with_adjoint(
            re(-1.0 / c.g),
            vec![
                (lay.rung(r).unwrap(), LocalOp::Sigma(1)),
                (lay.rung(r + 1).unwrap(), LocalOp::Sigma(-1)),
            ],
        );
    }
    if let Some(gb) = c.g_b {
        h.push_with_adjoint(re(-1.0 / gb), vec![(lay.rung(1).unwrap(), LocalOp::Sigma(-1))]);
    }

    // Rung electric fields.
    for r in 1..=spec.l {
        h.push_with_adjoint(re(-c.g), vec![(lay.rung(r).unwrap(), LocalOp::Tau(1))]);
    }

    // Leg electric fields: tau_{r,up} -> conj-weighted string of tau^+,
    // tau_{r,down} -> weighted string of tau, giving per-r coefficients
    // A_r = omega^{Q_down(r)} + conj(omega^{Q_up(r)}) on the tau string,
    // where Q_s(r) is the total leg-s charge at rungs >= r. Neutral: A = 2.
    for r in spec.leg_link_rungs() {
        if r > spec.l {
            continue;
        }
        let q_up: i64 = spec
            .static_charges
            .iter()
            .filter(|ch| ch.leg == Leg::Up && ch.r >= r)
            .map(|ch| ch.q)
            .sum();
        let q_down: i64 = spec
            .static_charges
            .iter()
            .filter(|ch| ch.leg == Leg::Down && ch.r >= r)
            .map(|ch| ch.q)
            .sum();
        let a = omega_pow(spec.n, q_down) + omega_pow(spec.n, q_up).conj();
        let string: Vec<_> = (r..=spec.l)
            .map(|j| (lay.rung(j).unwrap(), LocalOp::Tau(1)))
            .collect();
        let string_dag: Vec<_> = (r..=spec.l)
            .map(|j| (lay.rung(j).unwrap(), LocalOp::Tau(-1)))
            .collect();
        h.push(re(-c.g) * a, string);
        h.push(re(-c.g) * a.conj(), string_dag);
    }
    Ok(h)
}

/// Bond-algebra dual of the axial pure theory: plaquettes become on-site
/// shifts, rung electric fields become clock hopping plus an edge field,
/// and the electric strings become on-site clock fields. Spectrum matches
/// [`build_pure_axial`] exactly; the dual of the r = 1 string commutes with
/// the Hamiltonian (the holographic edge mode).
pub fn build_pure_dual(spec: &LadderSpec, c: &Couplings) -> Result<TermList, ModelError> {
    if !spec.static_charges.is_empty() {
        return Err(ModelError::NotSupported(
            "dual form derived for the neutral sector only".into(),
        ));
    }
    if spec.boundary_right == Boundary::Rough {
        return Err(ModelError::NotSupported(
            "dual form assumes a smooth right edge".into(),
        ));
    }
    if c.g_b.is_some() && spec.boundary_left != Boundary::Rough {
        return Err(ModelError::InvalidCoupling(
            "g_b needs a rough left edge".into(),
        ));
    }
    let lay = chain_layout(spec, LayoutMode::RungChain);
    let mut h = TermList::new(spec.n, lay.chain_length());
    let pos = |i: usize| lay.rung(i).unwrap();

    // Dual of the plaquette row: -(1/g)(tau_i + tau^+_i), i = 2..L.
    for i in 2..=spec.l {
        h.push_with_adjoint(re(-1.0 / c.g), vec![(pos(i), LocalOp::Tau(1))]);
    }
    // Dual of the boundary plaquette: -(1/g_b)(tau_1 + tau^+_1).
    if let Some(gb) = c.g_b {
        h.push_with_adjoint(re(-1.0 / gb), vec![(pos(1), LocalOp::Tau(1))]);
    }
    // Dual of the rung electric fields: hopping plus the right edge field.
    for i in 1..spec.l {
        h.push_with_adjoint(
            re(-c.g),
            vec![(pos(i), LocalOp::Sigma(1)), (pos(i + 1), LocalOp::Sigma(-1))],
        );
    }
    h.push_with_adjoint(re(-c.g), vec![(pos(spec.l), LocalOp::Sigma(1))]);
    // Dual of the leg electric strings: clock fields, one per string.
    for r in spec.leg_link_rungs() {
        if r > spec.l {
            continue;
        }
        h.push_with_adjoint(re(-2.0 * c.g), vec![(pos(r), LocalOp::Sigma(1))]);
    }
    Ok(h)
}

/// Pure matter clock model, the g = 0 limit on the 2L vertices: clock
/// exchange along legs and rungs, on-site shift mass, and (rough left edge)
/// the boundary clock field that the frozen dangling links leave behind.
/// The value of couplings.g is ignored.
pub fn build_clock_limit(spec: &LadderSpec, c: &Couplings) -> Result<TermList, ModelError> {
    if c.lambda <= 0.0 {
        return Err(ModelError::InvalidCoupling(
            "clock limit needs lambda > 0".into(),
        ));
    }
    if !spec.static_charges.is_empty() {
        return Err(ModelError::NotSupported(
            "clock limit derived for the neutral sector only".into(),
        ));
    }
    if spec.boundary_right == Boundary::Rough {
        return Err(ModelError::NotSupported(
            "clock limit assumes a smooth right edge".into(),
        ));
    }
    check_boundary_couplings(spec, c)?;
    let lay = chain_layout(spec, LayoutMode::MatterOnly);
    let mut h = TermList::new(spec.n, lay.chain_length());

    for r in 1..spec.l {
        for leg in Leg::BOTH {
            h.push_with_adjoint(
                re(-c.lambda),
                vec![
                    (lay.vertex(r, leg).unwrap(), LocalOp::Zeta(-1)),
                    (lay.vertex(r + 1, leg).unwrap(), LocalOp::Zeta(1)),
                ],
            );
        }
    }
    for r in 1..=spec.l {
        h.push_with_adjoint(
            re(-c.lambda),
            vec![
                (lay.vertex(r, Leg::Up).unwrap(), LocalOp::Zeta(-1)),
                (lay.vertex(r, Leg::Down).unwrap(), LocalOp::Zeta(1)),
            ],
        );
    }
    for r in 1..=spec.l {
        for leg in Leg::BOTH {
            h.push_with_adjoint(
                re(-1.0 / c.lambda),
                vec![(lay.vertex(r, leg).unwrap(), LocalOp::Eta(1))],
            );
        }
    }
    if c.lambda_b > 0.0 {
        for leg in Leg::BOTH {
            h.push_with_adjoint(
                re(-c.lambda_b),
                vec![(lay.vertex(1, leg).unwrap(), LocalOp::Zeta(1))],
            );
        }
    }
    Ok(h)
}
