use clock_algebra::{C64, CMat};
use model_builder::*;
use ndarray::Array2;

/// Independent dense assembly: explicit Kronecker product with site 0 as
/// the least significant factor. Oracle for TermList::to_dense and the
/// compiled shift/phase application.
fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

fn dense_by_kron(tl: &TermList) -> CMat {
    let dim = tl.dim();
    let mut h = CMat::zeros((dim, dim));
    for t in &tl.terms {
        let mut acc = Array2::eye(1).mapv(|x: f64| C64::new(x, 0.0));
        for site in (0..tl.sites).rev() {
            let local = t
                .factors
                .iter()
                .find(|f| f.site == site)
                .map(|f| f.op.matrix(tl.n))
                .unwrap_or_else(|| Array2::eye(tl.n).mapv(|x: f64| C64::new(x, 0.0)));
            acc = kron(&acc, &local);
        }
        h = &h + &acc.mapv(|z| z * t.coeff);
    }
    h
}

fn fro_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn dense_assembly_matches_kronecker_oracle() {
    let mut tl = TermList::new(3, 3);
    tl.push_with_adjoint(
        C64::new(-0.7, 0.0),
        vec![(0, LocalOp::Sigma(1)), (2, LocalOp::Sigma(-1))],
    );
    tl.push_with_adjoint(C64::new(0.3, 0.4), vec![(1, LocalOp::Tau(2)), (2, LocalOp::Zeta(1))]);
    tl.push(C64::new(1.5, 0.0), vec![(0, LocalOp::Electric)]);
    tl.push_with_adjoint(C64::new(-0.2, 0.0), vec![(1, LocalOp::Eta(1))]);
    let dense = tl.to_dense(100).unwrap();
    let oracle = dense_by_kron(&tl);
    assert!(fro_diff(&dense, &oracle) < 1e-13);
}

#[test]
fn dense_assembly_matches_oracle_for_builders() {
    let spec = LadderSpec::rough_smooth(2, 2).unwrap();
    let c = Couplings::new(0.8, 1.3, 0.4, Some(0.6)).unwrap();
    for tl in [
        build_full(&spec, &c).unwrap(),
        build_unitary_gauge(&spec, &c).unwrap(),
        build_pure_axial(&spec, &c).unwrap(),
        build_pure_dual(&spec, &c).unwrap(),
        build_clock_limit(&spec, &c).unwrap(),
    ] {
        let dense = tl.to_dense(2000).unwrap();
        let oracle = dense_by_kron(&tl);
        assert!(fro_diff(&dense, &oracle) < 1e-12);
    }
}

#[test]
fn power_normalization_and_same_site_merging() {
    let n = 5;
    let mut a = TermList::new(n, 2);
    a.push(C64::new(1.0, 0.0), vec![(0, LocalOp::Sigma(6))]);
    let mut b = TermList::new(n, 2);
    b.push(C64::new(1.0, 0.0), vec![(0, LocalOp::Sigma(1))]);
    assert!(fro_diff(&a.to_dense(100).unwrap(), &b.to_dense(100).unwrap()) < 1e-15);

    // sigma^4 is stored as sigma^-1.
    let mut c = TermList::new(n, 2);
    c.push(C64::new(1.0, 0.0), vec![(0, LocalOp::Sigma(4))]);
    assert_eq!(c.terms[0].factors[0].op, LocalOp::Sigma(-1));

    // Same-site powers merge; identity factors vanish.
    let mut d = TermList::new(n, 2);
    d.push(
        C64::new(1.0, 0.0),
        vec![(1, LocalOp::Tau(2)), (1, LocalOp::Tau(3)), (0, LocalOp::Sigma(1))],
    );
    assert_eq!(d.terms[0].factors.len(), 1);
    assert_eq!(d.terms[0].factors[0].site, 0);
}

#[test]
fn hermitian_closure_check_accepts_pairs_and_rejects_orphans() {
    let mut open = TermList::new(3, 2);
    open.push(C64::new(1.0, 0.0), vec![(0, LocalOp::Sigma(1))]);
    assert!(!open.is_hermitian_closed(1e-12));

    let mut closed = TermList::new(3, 2);
    closed.push_with_adjoint(C64::new(0.3, -0.9), vec![(0, LocalOp::Sigma(1)), (1, LocalOp::Tau(1))]);
    assert!(closed.is_hermitian_closed(1e-12));

    // Self-adjoint factors close on themselves.
    let mut diag = TermList::new(4, 2);
    diag.push(C64::new(2.5, 0.0), vec![(1, LocalOp::Electric)]);
    assert!(diag.is_hermitian_closed(1e-12));
    let mut bad = TermList::new(4, 2);
    bad.push(C64::new(0.0, 2.5), vec![(1, LocalOp::Electric)]);
    assert!(!bad.is_hermitian_closed(1e-12));
}

#[test]
fn text_serialization_round_trips() {
    let spec = LadderSpec::rough_smooth(3, 3).unwrap();
    let c = Couplings::new(0.45, 0.9, 0.2, None).unwrap();
    let h = build_full(&spec, &c).unwrap();
    let text = h.to_text();
    let parsed = TermList::from_text(&text).unwrap();
    assert_eq!(parsed.to_text(), text);
    assert_eq!(parsed.terms.len(), h.terms.len());

    let small = build_unitary_gauge(&LadderSpec::rough_smooth(2, 2).unwrap(), &c).unwrap();
    let back = TermList::from_text(&small.to_text()).unwrap();
    assert!(fro_diff(&small.to_dense(100).unwrap(), &back.to_dense(100).unwrap()) < 1e-15);
}

#[test]
fn parser_rejects_malformed_input() {
    assert!(TermList::from_text("").is_err());
    assert!(TermList::from_text("termlist v2 n=3 sites=2").is_err());
    assert!(TermList::from_text("termlist v1 n=3").is_err());
    assert!(TermList::from_text("termlist v1 n=3 sites=2\n1.0 0.0 5:sigma").is_err());
    assert!(TermList::from_text("termlist v1 n=3 sites=2\n1.0 0.0 0:gamma").is_err());
    assert!(TermList::from_text("termlist v1 n=3 sites=2 terms=2\n1 0 0:sigma").is_err());
}

#[test]
fn dense_guard_refuses_large_dimensions() {
    let tl = TermList::new(5, 10);
    assert!(matches!(
        tl.to_dense(10_000),
        Err(ModelError::DimensionTooLarge { .. })
    ));
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_op() -> impl Strategy<Value = LocalOp> {
        prop_oneof![
            (-4i32..=4).prop_map(LocalOp::Sigma),
            (-4i32..=4).prop_map(LocalOp::Tau),
            (-4i32..=4).prop_map(LocalOp::Zeta),
            (-4i32..=4).prop_map(LocalOp::Eta),
            Just(LocalOp::Electric),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_term_lists_match_kron_oracle(
            n in 2usize..=4,
            ops in proptest::collection::vec((0usize..3, arb_op()), 1..6),
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
        ) {
            let mut tl = TermList::new(n, 3);
            // One site may appear twice with ops of different kinds; keep
            // only the first op seen per site to respect the builder rule.
            let mut seen: Vec<usize> = Vec::new();
            let mut fs = Vec::new();
            for (site, op) in ops {
                if !seen.contains(&site) {
                    seen.push(site);
                    fs.push((site, op));
                }
            }
            tl.push_with_adjoint(C64::new(re, im), fs);
            let dense = tl.to_dense(200).unwrap();
            let oracle = dense_by_kron(&tl);
            prop_assert!(fro_diff(&dense, &oracle) < 1e-12);
            // Hermitian closure holds by construction, so the dense matrix
            // must be Hermitian too.
            let dag = dense.t().mapv(|z| z.conj());
            prop_assert!(fro_diff(&dense, &dag) < 1e-12);
        }
    }
}
