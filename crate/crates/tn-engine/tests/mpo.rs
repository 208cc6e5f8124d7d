use clock_algebra::C64;
use model_builder::{build, Couplings, LadderSpec, LocalOp, ModelKind, TermList};
use tn_engine::compile_mpo;

fn max_abs_diff(a: &clock_algebra::CMat, b: &clock_algebra::CMat) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        worst = worst.max((x - y).norm());
        scale = scale.max(y.norm());
    }
    worst / scale
}

#[test]
fn single_site_term_keeps_identity_rails() {
    let mut t = TermList::new(3, 5);
    t.push(C64::new(0.7, 0.0), vec![(2, LocalOp::Tau(1))]);
    let mpo = compile_mpo(&t);
    assert_eq!(mpo.bond_dims(), vec![1, 2, 2, 2, 2, 1]);
    let diff = max_abs_diff(&mpo.to_dense(300).unwrap(), &t.to_dense(300).unwrap());
    assert!(diff < 1e-14, "dense mismatch {diff}");
}

#[test]
fn empty_term_list_contracts_to_zero() {
    let t = TermList::new(2, 4);
    let mpo = compile_mpo(&t);
    let dense = mpo.to_dense(16).unwrap();
    assert!(dense.iter().all(|z| z.norm() == 0.0));
}

#[test]
fn two_site_string_with_gap() {
    // sigma at site 0, tau^2 at site 3: identity transit through the gap.
    let mut t = TermList::new(5, 4);
    t.push_with_adjoint(
        C64::new(0.3, -0.4),
        vec![(0, LocalOp::Sigma(1)), (3, LocalOp::Tau(2))],
    );
    let mpo = compile_mpo(&t);
    let diff = max_abs_diff(&mpo.to_dense(700).unwrap(), &t.to_dense(700).unwrap());
    assert!(diff < 1e-14, "dense mismatch {diff}");
    assert!(mpo.max_bond() <= 4, "bonds {:?}", mpo.bond_dims());
}

#[test]
fn dense_oracle_pure_axial() {
    let spec = LadderSpec::rough_smooth(3, 6).unwrap();
    let c = Couplings::new(1.3, 0.8, 0.4, None).unwrap();
    let h = build(ModelKind::PureAxial, &spec, &c).unwrap();
    assert_eq!(h.dim(), 729);
    let mpo = compile_mpo(&h);
    let diff = max_abs_diff(&mpo.to_dense(729).unwrap(), &h.to_dense(729).unwrap());
    assert!(diff < 1e-10, "dense mismatch {diff}");
}

#[test]
fn dense_oracle_unitary_gauge() {
    let spec = LadderSpec::rough_smooth(3, 2).unwrap();
    let c = Couplings::new(0.7, 0.9, 0.3, None).unwrap();
    let h = build(ModelKind::UnitaryGauge, &spec, &c).unwrap();
    assert_eq!(h.dim(), 729);
    let mpo = compile_mpo(&h);
    let diff = max_abs_diff(&mpo.to_dense(729).unwrap(), &h.to_dense(729).unwrap());
    assert!(diff < 1e-10, "dense mismatch {diff}");
}

#[test]
fn stochastic_agreement_every_model_kind() {
    let kinds = [
        ModelKind::Full,
        ModelKind::UnitaryGauge,
        ModelKind::PureAxial,
        ModelKind::PureDual,
        ModelKind::ClockLimit,
    ];
    let spec = LadderSpec::rough_smooth(3, 4).unwrap();
    let c = Couplings::new(0.9, 0.7, 0.5, None).unwrap();
    for kind in kinds {
        let h = build(kind, &spec, &c).unwrap();
        let mpo = compile_mpo(&h);
        let err = mpo.stochastic_check(&h, 100, 0x51AB);
        assert!(err < 1e-10, "{kind:?}: stochastic error {err}");
    }
}

#[test]
fn axial_bond_is_length_independent() {
    let c = Couplings::new(1.1, 0.6, 0.3, None).unwrap();
    let bonds: Vec<usize> = [10usize, 40]
        .iter()
        .map(|&l| {
            let spec = LadderSpec::rough_smooth(5, l).unwrap();
            let h = build(ModelKind::PureAxial, &spec, &c).unwrap();
            compile_mpo(&h).max_bond()
        })
        .collect();
    assert_eq!(bonds[0], bonds[1], "axial bond grew with length: {bonds:?}");
    assert!(bonds[0] <= 8, "axial bond {}", bonds[0]);
}

#[test]
fn unitary_gauge_bond_stays_small() {
    let c = Couplings::new(0.2, 0.75, 0.0, None).unwrap();
    let bonds: Vec<usize> = [8usize, 16]
        .iter()
        .map(|&l| {
            let spec = LadderSpec::smooth_smooth(5, l).unwrap();
            let h = build(ModelKind::UnitaryGauge, &spec, &c).unwrap();
            compile_mpo(&h).max_bond()
        })
        .collect();
    assert_eq!(bonds[0], bonds[1], "unitary bond grew with length: {bonds:?}");
    assert!(bonds[0] <= 20, "unitary gauge bond {}", bonds[0]);
}

#[test]
fn dense_mpo_is_hermitian_when_terms_are() {
    let spec = LadderSpec::rough_smooth(3, 3).unwrap();
    let c = Couplings::new(0.8, 1.2, 0.6, Some(0.4)).unwrap();
    let h = build(ModelKind::PureAxial, &spec, &c).unwrap();
    assert!(h.is_hermitian_closed(1e-12));
    let dense = compile_mpo(&h).to_dense(27).unwrap();
    let d = dense.dim().0;
    for r in 0..d {
        for cidx in 0..d {
            let diff = (dense[(r, cidx)] - dense[(cidx, r)].conj()).norm();
            assert!(diff < 1e-12, "non-hermitian at ({r},{cidx})");
        }
    }
}
