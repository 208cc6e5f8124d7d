use clock_algebra::{CMat, C64};
use model_builder::{
    build, gauss_operators, Boundary, Couplings, LadderSpec, Leg, LocalOp, ModelKind, TermList,
};
use observables::{
    assert_gauge_invariant, charge_string_op, electric_ops, electric_sum, eval_dense, meson_op,
    order_parameter_op, rung_correlator_op, thooft_op, tunneling_sum, ObsError, StringSector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SECTORS: [StringSector; 4] = [
    StringSector::Up,
    StringSector::Down,
    StringSector::Sigma,
    StringSector::Rho,
];

fn rough_smooth(n: usize, l: usize) -> LadderSpec {
    LadderSpec::new(n, l, Boundary::Rough, Boundary::Smooth, vec![]).unwrap()
}

fn random_state(dim: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect()
}

fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// |[O, G]| elementwise for diagonal G: (OG - GO)_ij = O_ij (g_j - g_i).
fn commutator_norm_diag(o: &CMat, g: &[C64]) -> f64 {
    let mut worst = 0.0f64;
    for ((i, j), oij) in o.indexed_iter() {
        worst = worst.max((oij * (g[j] - g[i])).norm());
    }
    worst
}

fn diagonal_of(g: &CMat) -> Vec<C64> {
    for ((i, j), v) in g.indexed_iter() {
        assert!(i == j || v.norm() == 0.0, "generator must be diagonal");
    }
    (0..g.nrows()).map(|i| g[(i, i)]).collect()
}

/// Every string observable commutes with every Gauss generator, checked by
/// brute-force dense commutators, independently of the structural check
/// that runs at build time.
#[test]
fn dense_commutators_vanish() {
    let spec = rough_smooth(2, 2);
    let mut ops: Vec<TermList> = Vec::new();
    for r in 1..=2 {
        for leg in Leg::BOTH {
            ops.push(order_parameter_op(ModelKind::Full, &spec, r, leg).unwrap());
        }
    }
    for sector in SECTORS {
        ops.push(meson_op(ModelKind::Full, &spec, sector, 1, 2).unwrap());
        for r in 1..=2 {
            ops.push(thooft_op(ModelKind::Full, &spec, sector, r).unwrap());
            ops.push(charge_string_op(ModelKind::Full, &spec, sector, r).unwrap());
        }
    }
    ops.push(rung_correlator_op(ModelKind::Full, &spec, 1, 2).unwrap());
    ops.push(tunneling_sum(ModelKind::Full, &spec).unwrap());
    ops.push(electric_sum(ModelKind::Full, &spec).unwrap());
    for (_, op) in electric_ops(ModelKind::Full, &spec).unwrap() {
        ops.push(op);
    }

    let gens: Vec<Vec<C64>> = gauss_operators(&spec)
        .generators
        .iter()
        .map(|g| diagonal_of(&g.to_dense(1 << 12).unwrap()))
        .collect();
    for op in &ops {
        let d = op.to_dense(1 << 12).unwrap();
        for g in &gens {
            assert!(commutator_norm_diag(&d, g) < 1e-12);
        }
    }
}

/// The meson's link run is pinned by gauge invariance: shifting it by one
/// rung breaks commutation with the Gauss generators.
#[test]
fn meson_link_range_is_forced() {
    let spec = rough_smooth(3, 3);
    let lay = ModelKind::Full.layout(&spec);

    meson_op(ModelKind::Full, &spec, StringSector::Up, 1, 3).unwrap();

    let mut factors = vec![(lay.vertex(1, Leg::Up).unwrap(), LocalOp::Zeta(1))];
    for j in 1..=2 {
        factors.push((lay.leg_link(j, Leg::Up).unwrap(), LocalOp::Sigma(1)));
    }
    factors.push((lay.vertex(3, Leg::Up).unwrap(), LocalOp::Zeta(-1)));
    let mut shifted = TermList::new(spec.n, lay.chain_length());
    shifted.push(C64::new(1.0, 0.0), factors);
    assert!(matches!(
        assert_gauge_invariant(&shifted, &spec),
        Err(ObsError::GaugeViolation(_))
    ));
}

/// Coincident endpoints contract every two-point string to the identity.
#[test]
fn coincident_endpoints_are_the_identity() {
    let spec = rough_smooth(3, 2);
    for kind in [ModelKind::Full, ModelKind::UnitaryGauge, ModelKind::ClockLimit] {
        let dim = {
            let lay = kind.layout(&spec);
            spec.n.pow(lay.chain_length() as u32)
        };
        let state = random_state(dim, 11);
        for sector in SECTORS {
            let m = meson_op(kind, &spec, sector, 2, 2).unwrap();
            let v = eval_dense(&m, &state).unwrap();
            assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let r = rung_correlator_op(kind, &spec, 2, 2).unwrap();
        let v = eval_dense(&r, &state).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

/// Collect the terms of `h` whose coefficient equals `minus_coupling`,
/// rescaled to unit coefficient.
fn extract_bare(h: &TermList, minus_coupling: f64) -> TermList {
    let mut out = TermList::new(h.n, h.sites);
    for t in &h.terms {
        if (t.coeff - C64::new(minus_coupling, 0.0)).norm() < 1e-12 {
            let factors = t.factors.iter().map(|f| (f.site, f.op)).collect();
            out.push(t.coeff / minus_coupling, factors);
        }
    }
    out
}

/// The bare coupling sums match the Hamiltonian's own terms: at generic
/// couplings each coupling's coefficient is unique, so filtering the built
/// Hamiltonian by coefficient must reproduce the bare operator exactly.
#[test]
fn bare_sums_match_hamiltonian_terms() {
    let c = Couplings::new(0.29, 0.7, 0.37, None).unwrap();
    for (kind, n) in [
        (ModelKind::Full, 2),
        (ModelKind::UnitaryGauge, 3),
        (ModelKind::ClockLimit, 3),
    ] {
        let spec = rough_smooth(n, 2);
        let h = build(kind, &spec, &c).unwrap();
        let tun = tunneling_sum(kind, &spec).unwrap();
        assert!(max_abs_diff(
            &extract_bare(&h, -c.lambda).to_dense(1 << 12).unwrap(),
            &tun.to_dense(1 << 12).unwrap(),
        ) < 1e-12);
        if kind != ModelKind::ClockLimit {
            let ele = electric_sum(kind, &spec).unwrap();
            assert!(max_abs_diff(
                &extract_bare(&h, -c.g).to_dense(1 << 12).unwrap(),
                &ele.to_dense(1 << 12).unwrap(),
            ) < 1e-12);
        }
    }
}

/// Gauge fixing reduces the strings to their short forms: bare flips on
/// links in the unitary gauge, bare matter operators in the clock limit.
#[test]
fn gauge_fixed_string_content() {
    let spec = rough_smooth(3, 2);

    let lay = ModelKind::UnitaryGauge.layout(&spec);
    let mut manual = TermList::new(spec.n, lay.chain_length());
    manual.push(
        C64::new(1.0, 0.0),
        (1..=2)
            .map(|j| (lay.leg_link(j, Leg::Down).unwrap(), LocalOp::Sigma(-1)))
            .collect(),
    );
    let op = order_parameter_op(ModelKind::UnitaryGauge, &spec, 2, Leg::Down).unwrap();
    assert!(max_abs_diff(
        &op.to_dense(1 << 12).unwrap(),
        &manual.to_dense(1 << 12).unwrap(),
    ) < 1e-15);

    let lay = ModelKind::ClockLimit.layout(&spec);
    let mut manual = TermList::new(spec.n, lay.chain_length());
    manual.push(
        C64::new(1.0, 0.0),
        vec![(lay.vertex(2, Leg::Down).unwrap(), LocalOp::Zeta(1))],
    );
    let op = order_parameter_op(ModelKind::ClockLimit, &spec, 2, Leg::Down).unwrap();
    assert!(max_abs_diff(
        &op.to_dense(1 << 12).unwrap(),
        &manual.to_dense(1 << 12).unwrap(),
    ) < 1e-15);

    let lay = ModelKind::UnitaryGauge.layout(&spec);
    let mut manual = TermList::new(spec.n, lay.chain_length());
    manual.push(
        C64::new(1.0, 0.0),
        vec![(lay.leg_link(2, Leg::Up).unwrap(), LocalOp::Sigma(1))],
    );
    let op = meson_op(ModelKind::UnitaryGauge, &spec, StringSector::Up, 1, 2).unwrap();
    assert!(max_abs_diff(
        &op.to_dense(1 << 12).unwrap(),
        &manual.to_dense(1 << 12).unwrap(),
    ) < 1e-15);
}

/// In the clock limit the t'Hooft string falls back to the charge string.
#[test]
fn clock_limit_thooft_is_the_charge_string() {
    let spec = rough_smooth(3, 3);
    for sector in SECTORS {
        let a = thooft_op(ModelKind::ClockLimit, &spec, sector, 2).unwrap();
        let b = charge_string_op(ModelKind::ClockLimit, &spec, sector, 2).unwrap();
        assert!(max_abs_diff(
            &a.to_dense(1 << 15).unwrap(),
            &b.to_dense(1 << 15).unwrap(),
        ) < 1e-15);
    }
}

#[test]
fn bare_sums_are_hermitian() {
    let spec = rough_smooth(4, 2);
    for kind in [ModelKind::Full, ModelKind::UnitaryGauge] {
        assert!(tunneling_sum(kind, &spec).unwrap().is_hermitian_closed(1e-12));
        assert!(electric_sum(kind, &spec).unwrap().is_hermitian_closed(1e-12));
    }
    assert!(tunneling_sum(ModelKind::ClockLimit, &spec)
        .unwrap()
        .is_hermitian_closed(1e-12));
}

#[test]
fn argument_errors() {
    let spec = rough_smooth(3, 3);

    for kind in [ModelKind::PureDual] {
        assert!(matches!(
            meson_op(kind, &spec, StringSector::Up, 1, 2),
            Err(ObsError::Unsupported(_))
        ));
        assert!(matches!(
            order_parameter_op(kind, &spec, 1, Leg::Up),
            Err(ObsError::Unsupported(_))
        ));
        assert!(matches!(
            thooft_op(kind, &spec, StringSector::Rho, 1),
            Err(ObsError::Unsupported(_))
        ));
        assert!(matches!(
            rung_correlator_op(kind, &spec, 1, 2),
            Err(ObsError::Unsupported(_))
        ));
        assert!(matches!(
            electric_ops(kind, &spec),
            Err(ObsError::Unsupported(_))
        ));
    }

    assert!(matches!(
        meson_op(ModelKind::Full, &spec, StringSector::Up, 3, 1),
        Err(ObsError::BadArguments(_))
    ));
    assert!(matches!(
        meson_op(ModelKind::Full, &spec, StringSector::Up, 0, 2),
        Err(ObsError::BadArguments(_))
    ));
    assert!(matches!(
        thooft_op(ModelKind::Full, &spec, StringSector::Up, 4),
        Err(ObsError::BadArguments(_))
    ));

    let rough_rough =
        LadderSpec::new(3, 3, Boundary::Rough, Boundary::Rough, vec![]).unwrap();
    assert!(matches!(
        thooft_op(ModelKind::Full, &rough_rough, StringSector::Up, 1),
        Err(ObsError::BadArguments(_))
    ));
    assert!(matches!(
        charge_string_op(ModelKind::Full, &rough_rough, StringSector::Up, 1),
        Err(ObsError::BadArguments(_))
    ));

    let smooth_smooth = LadderSpec::smooth_smooth(3, 3).unwrap();
    assert!(matches!(
        order_parameter_op(ModelKind::Full, &smooth_smooth, 1, Leg::Up),
        Err(ObsError::BadArguments(_))
    ));
    assert!(matches!(
        thooft_op(ModelKind::UnitaryGauge, &smooth_smooth, StringSector::Up, 1),
        Err(ObsError::BadArguments(_))
    ));
    thooft_op(ModelKind::UnitaryGauge, &smooth_smooth, StringSector::Up, 2).unwrap();

    assert!(matches!(
        electric_sum(ModelKind::ClockLimit, &spec),
        Err(ObsError::Unsupported(_))
    ));
    assert!(matches!(
        tunneling_sum(ModelKind::PureAxial, &spec),
        Err(ObsError::Unsupported(_))
    ));
    assert!(matches!(
        charge_string_op(ModelKind::UnitaryGauge, &spec, StringSector::Up, 1),
        Err(ObsError::Unsupported(_))
    ));
}
