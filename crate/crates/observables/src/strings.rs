use crate::ObsError;
use clock_algebra::C64;
use model_builder::{
    gauge_invariance_violation, gauss_operators, Boundary, ChainLayout, LadderSpec, Leg, LocalOp,
    ModelKind, Site, TermList,
};

/// Leg or spin/charge channel of a string observable. `Sigma` pairs the two
/// legs with opposite orientation (quadrupole channel), `Rho` with the same
/// orientation (charge channel).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringSector {
    Up,
    Down,
    Sigma,
    Rho,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Structural gauge-invariance check of a full-Hilbert operator against
/// every Gauss generator of `spec`. Exact: a term commutes iff its digit
/// shifts leave each generator's phase unchanged mod N.
pub fn assert_gauge_invariant(op: &TermList, spec: &LadderSpec) -> Result<(), ObsError> {
    let sector = gauss_operators(spec);
    match gauge_invariance_violation(op, &sector) {
        Some(msg) => Err(ObsError::GaugeViolation(msg)),
        None => Ok(()),
    }
}

fn reject_dual(kind: ModelKind, what: &str) -> Result<(), ObsError> {
    if kind == ModelKind::PureDual {
        return Err(ObsError::Unsupported(format!(
            "{what}: dual variables do not carry the original link operators"
        )));
    }
    Ok(())
}

fn check_rung(spec: &LadderSpec, r: usize) -> Result<(), ObsError> {
    if r < 1 || r > spec.l {
        return Err(ObsError::BadArguments(format!(
            "rung {r} outside 1..={}",
            spec.l
        )));
    }
    Ok(())
}

fn check_pair(spec: &LadderSpec, x: usize, y: usize) -> Result<(), ObsError> {
    check_rung(spec, x)?;
    check_rung(spec, y)?;
    if x > y {
        return Err(ObsError::BadArguments(format!(
            "endpoints must be ordered, got x = {x} > y = {y}"
        )));
    }
    Ok(())
}

/// The identity as a term list (empty strings contract to 1).
fn constant_op(spec: &LadderSpec, lay: &ChainLayout) -> TermList {
    let mut op = TermList::new(spec.n, lay.chain_length());
    op.push(one(), vec![]);
    op
}

fn finish(
    kind: ModelKind,
    spec: &LadderSpec,
    lay: &ChainLayout,
    factors: Vec<(usize, LocalOp)>,
    what: &str,
) -> Result<TermList, ObsError> {
    if factors.is_empty() {
        return Err(ObsError::Unsupported(format!(
            "{what} has no support on the {kind:?} chain"
        )));
    }
    let mut op = TermList::new(spec.n, lay.chain_length());
    op.push(one(), factors);
    if kind == ModelKind::Full {
        assert_gauge_invariant(&op, spec)?;
    }
    Ok(op)
}

/// String order parameter: sigma^+ on every leg link from the left edge
/// through rung r, terminated by zeta on the matter vertex where matter
/// exists. In the clock limit it reduces to the bare zeta; with links it
/// needs a rough left edge so the string can end on the dangling link.
/// Nonzero expectations additionally need the boundary field lambda_b.
pub fn order_parameter_op(
    kind: ModelKind,
    spec: &LadderSpec,
    r: usize,
    leg: Leg,
) -> Result<TermList, ObsError> {
    reject_dual(kind, "order parameter")?;
    check_rung(spec, r)?;
    if kind != ModelKind::ClockLimit && spec.boundary_left != Boundary::Rough {
        return Err(ObsError::BadArguments(
            "the order-parameter string must end on a rough left edge".into(),
        ));
    }
    let lay = kind.layout(spec);
    let mut factors = Vec::new();
    for j in 1..=r {
        if let Some(p) = lay.leg_link(j, leg) {
            factors.push((p, LocalOp::Sigma(-1)));
        }
    }
    if let Some(v) = lay.vertex(r, leg) {
        factors.push((v, LocalOp::Zeta(1)));
    }
    finish(kind, spec, &lay, factors, "order parameter")
}

fn push_leg_meson(
    lay: &ChainLayout,
    leg: Leg,
    x: usize,
    y: usize,
    dir: i32,
    factors: &mut Vec<(usize, LocalOp)>,
) {
    if let Some(v) = lay.vertex(x, leg) {
        factors.push((v, LocalOp::Zeta(dir)));
    }
    for j in x + 1..=y {
        if let Some(p) = lay.leg_link(j, leg) {
            factors.push((p, LocalOp::Sigma(dir)));
        }
    }
    if let Some(v) = lay.vertex(y, leg) {
        factors.push((v, LocalOp::Zeta(-dir)));
    }
}

/// Meson string: matter endpoints at rungs x and y joined by the run of leg
/// links x+1 ..= y, the unique link range that commutes with every Gauss
/// generator under this chain labeling (leg link r sits left of vertex r).
/// `Sigma` multiplies the up string by the adjoint down string, `Rho` by the
/// down string itself. x = y contracts to the identity.
pub fn meson_op(
    kind: ModelKind,
    spec: &LadderSpec,
    sector: StringSector,
    x: usize,
    y: usize,
) -> Result<TermList, ObsError> {
    reject_dual(kind, "meson string")?;
    check_pair(spec, x, y)?;
    let lay = kind.layout(spec);
    if x == y {
        return Ok(constant_op(spec, &lay));
    }
    let mut factors = Vec::new();
    match sector {
        StringSector::Up => push_leg_meson(&lay, Leg::Up, x, y, 1, &mut factors),
        StringSector::Down => push_leg_meson(&lay, Leg::Down, x, y, 1, &mut factors),
        StringSector::Sigma => {
            push_leg_meson(&lay, Leg::Up, x, y, 1, &mut factors);
            push_leg_meson(&lay, Leg::Down, x, y, -1, &mut factors);
        }
        StringSector::Rho => {
            push_leg_meson(&lay, Leg::Up, x, y, 1, &mut factors);
            push_leg_meson(&lay, Leg::Down, x, y, 1, &mut factors);
        }
    }
    finish(kind, spec, &lay, factors, "meson string")
}

/// t'Hooft string: tau on the leg link(s) at rung r times the run of rung
/// taus from r to the right edge. The charge channel is purely local,
/// tau_up tau_down at rung r. Derived for a smooth right edge, where the
/// string leaves no dangling tail; in the clock limit it falls back to the
/// matter charge string.
pub fn thooft_op(
    kind: ModelKind,
    spec: &LadderSpec,
    sector: StringSector,
    r: usize,
) -> Result<TermList, ObsError> {
    reject_dual(kind, "t'Hooft string")?;
    check_rung(spec, r)?;
    if spec.boundary_right != Boundary::Smooth {
        return Err(ObsError::BadArguments(
            "the t'Hooft string is derived for a smooth right edge".into(),
        ));
    }
    if kind == ModelKind::ClockLimit {
        return charge_string_op(kind, spec, sector, r);
    }
    let lay = kind.layout(spec);
    let leg_tau = |leg: Leg, p: i32| -> Result<(usize, LocalOp), ObsError> {
        lay.leg_link(r, leg)
            .map(|pos| (pos, LocalOp::Tau(p)))
            .ok_or_else(|| {
                ObsError::BadArguments(format!(
                    "rung {r} has no leg link (smooth left edges start at rung 2)"
                ))
            })
    };
    let mut factors = Vec::new();
    let rung_power = match sector {
        StringSector::Up => {
            factors.push(leg_tau(Leg::Up, 1)?);
            1
        }
        StringSector::Down => {
            factors.push(leg_tau(Leg::Down, 1)?);
            -1
        }
        StringSector::Sigma => {
            factors.push(leg_tau(Leg::Up, 1)?);
            factors.push(leg_tau(Leg::Down, -1)?);
            2
        }
        StringSector::Rho => {
            factors.push(leg_tau(Leg::Up, 1)?);
            factors.push(leg_tau(Leg::Down, 1)?);
            0
        }
    };
    if rung_power != 0 {
        for j in r..=spec.l {
            factors.push((lay.rung(j).unwrap(), LocalOp::Tau(rung_power)));
        }
    }
    finish(kind, spec, &lay, factors, "t'Hooft string")
}

/// The t'Hooft string rewritten through the Gauss law (neutral sector) as
/// the exponential of the matter charge right of rung r: a run of eta^+ on
/// the vertices. Equals [`thooft_op`] on physical states; it is the native
/// form in the clock limit.
pub fn charge_string_op(
    kind: ModelKind,
    spec: &LadderSpec,
    sector: StringSector,
    r: usize,
) -> Result<TermList, ObsError> {
    reject_dual(kind, "charge string")?;
    check_rung(spec, r)?;
    if spec.boundary_right != Boundary::Smooth {
        return Err(ObsError::BadArguments(
            "the charge string is derived for a smooth right edge".into(),
        ));
    }
    if !matches!(kind, ModelKind::Full | ModelKind::ClockLimit) {
        return Err(ObsError::Unsupported(
            "charge string needs matter vertices".into(),
        ));
    }
    let lay = kind.layout(spec);
    let (up, down) = match sector {
        StringSector::Up => (-1, 0),
        StringSector::Down => (0, -1),
        StringSector::Sigma => (-1, 1),
        StringSector::Rho => (-1, -1),
    };
    let mut factors = Vec::new();
    for j in r..=spec.l {
        if up != 0 {
            factors.push((lay.vertex(j, Leg::Up).unwrap(), LocalOp::Eta(up)));
        }
        if down != 0 {
            factors.push((lay.vertex(j, Leg::Down).unwrap(), LocalOp::Eta(down)));
        }
    }
    finish(kind, spec, &lay, factors, "charge string")
}

/// Two-point function of the gauge-invariant rung tunneling operator
/// B_r = zeta^+_up sigma_rung zeta_down: returns B_x B_y^+. In the unitary
/// gauge only the rung flips survive, in the clock limit only the matter
/// exchange. x = y contracts to the identity.
pub fn rung_correlator_op(
    kind: ModelKind,
    spec: &LadderSpec,
    x: usize,
    y: usize,
) -> Result<TermList, ObsError> {
    reject_dual(kind, "rung correlator")?;
    check_pair(spec, x, y)?;
    let lay = kind.layout(spec);
    if x == y {
        return Ok(constant_op(spec, &lay));
    }
    let mut factors = Vec::new();
    let mut push_rung_op = |r: usize, dir: i32| {
        if let Some(v) = lay.vertex(r, Leg::Up) {
            factors.push((v, LocalOp::Zeta(-dir)));
        }
        if let Some(p) = lay.rung(r) {
            factors.push((p, LocalOp::Sigma(dir)));
        }
        if let Some(v) = lay.vertex(r, Leg::Down) {
            factors.push((v, LocalOp::Zeta(dir)));
        }
    };
    push_rung_op(x, 1);
    push_rung_op(y, -1);
    finish(kind, spec, &lay, factors, "rung correlator")
}

/// One symmetric-branch electric field operator per link, in chain order.
pub fn electric_ops(
    kind: ModelKind,
    spec: &LadderSpec,
) -> Result<Vec<(Site, TermList)>, ObsError> {
    reject_dual(kind, "electric profile")?;
    let lay = kind.layout(spec);
    let links = lay.links();
    if links.is_empty() {
        return Err(ObsError::Unsupported(format!(
            "no links on the {kind:?} chain"
        )));
    }
    Ok(links
        .into_iter()
        .map(|(pos, site)| {
            let mut op = TermList::new(spec.n, lay.chain_length());
            op.push(one(), vec![(pos, LocalOp::Electric)]);
            (site, op)
        })
        .collect())
}

/// The bare electric operator sum(tau + tau^+) over every link: the
/// Hamiltonian term whose coupling is g, without the coupling. Its
/// ground-state derivative in g is the tau susceptibility.
pub fn electric_sum(kind: ModelKind, spec: &LadderSpec) -> Result<TermList, ObsError> {
    if !matches!(kind, ModelKind::Full | ModelKind::UnitaryGauge) {
        return Err(ObsError::Unsupported(
            "the per-link tau sum needs the link Hilbert space".into(),
        ));
    }
    let lay = kind.layout(spec);
    let mut op = TermList::new(spec.n, lay.chain_length());
    for (pos, _) in lay.links() {
        op.push_with_adjoint(one(), vec![(pos, LocalOp::Tau(1))]);
    }
    Ok(op)
}

/// The bare tunneling sum (leg hops through their connecting link plus rung
/// hops): the Hamiltonian term whose coupling is lambda, without the
/// coupling and without the lambda_b boundary piece. Gauge fixing reduces
/// it to single-link flips (unitary gauge) or clock exchange (clock limit).
pub fn tunneling_sum(kind: ModelKind, spec: &LadderSpec) -> Result<TermList, ObsError> {
    let lay = kind.layout(spec);
    let mut op = TermList::new(spec.n, lay.chain_length());
    match kind {
        ModelKind::Full => {
            for r in 1..spec.l {
                for leg in Leg::BOTH {
                    op.push_with_adjoint(
                        one(),
                        vec![
                            (lay.vertex(r, leg).unwrap(), LocalOp::Zeta(-1)),
                            (lay.leg_link(r + 1, leg).unwrap(), LocalOp::Sigma(-1)),
                            (lay.vertex(r + 1, leg).unwrap(), LocalOp::Zeta(1)),
                        ],
                    );
                }
            }
            for r in 1..=spec.l {
                op.push_with_adjoint(
                    one(),
                    vec![
                        (lay.vertex(r, Leg::Up).unwrap(), LocalOp::Zeta(-1)),
                        (lay.rung(r).unwrap(), LocalOp::Sigma(1)),
                        (lay.vertex(r, Leg::Down).unwrap(), LocalOp::Zeta(1)),
                    ],
                );
            }
            assert_gauge_invariant(&op, spec)?;
        }
        ModelKind::UnitaryGauge => {
            for r in 1..spec.l {
                for leg in Leg::BOTH {
                    op.push_with_adjoint(
                        one(),
                        vec![(lay.leg_link(r + 1, leg).unwrap(), LocalOp::Sigma(-1))],
                    );
                }
            }
            for r in 1..=spec.l {
                op.push_with_adjoint(one(), vec![(lay.rung(r).unwrap(), LocalOp::Sigma(1))]);
            }
        }
        ModelKind::ClockLimit => {
            for r in 1..spec.l {
                for leg in Leg::BOTH {
                    op.push_with_adjoint(
                        one(),
                        vec![
                            (lay.vertex(r, leg).unwrap(), LocalOp::Zeta(-1)),
                            (lay.vertex(r + 1, leg).unwrap(), LocalOp::Zeta(1)),
                        ],
                    );
                }
            }
            for r in 1..=spec.l {
                op.push_with_adjoint(
                    one(),
                    vec![
                        (lay.vertex(r, Leg::Up).unwrap(), LocalOp::Zeta(-1)),
                        (lay.vertex(r, Leg::Down).unwrap(), LocalOp::Zeta(1)),
                    ],
                );
            }
        }
        ModelKind::PureAxial | ModelKind::PureDual => {
            return Err(ObsError::Unsupported(
                "the pure theory has no tunneling term".into(),
            ));
        }
    }
    Ok(op)
}
