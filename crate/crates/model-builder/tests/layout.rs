use model_builder::*;

#[test]
fn links_only_cells_follow_up_rung_down_order() {
    let spec = LadderSpec::rough_smooth(3, 2).unwrap();
    let lay = chain_layout(&spec, LayoutMode::LinksOnly);
    assert_eq!(lay.chain_length(), 6);
    assert_eq!(lay.leg_link(1, Leg::Up), Some(0));
    assert_eq!(lay.rung(1), Some(1));
    assert_eq!(lay.leg_link(1, Leg::Down), Some(2));
    assert_eq!(lay.leg_link(2, Leg::Up), Some(3));
    assert_eq!(lay.rung(2), Some(4));
    assert_eq!(lay.leg_link(2, Leg::Down), Some(5));
}

#[test]
fn first_plaquette_touches_the_documented_positions() {
    // On the links-only chain the r = 1 plaquette acts on the 2nd, 4th,
    // 5th and 6th positions (0-based {1, 3, 4, 5}).
    let spec = LadderSpec::rough_smooth(3, 2).unwrap();
    let c = Couplings::bulk(0.7, 1.1).unwrap();
    let h = build_unitary_gauge(&spec, &c).unwrap();
    let plaq: Vec<Vec<usize>> = h
        .terms
        .iter()
        .filter(|t| t.factors.len() == 4)
        .map(|t| t.factors.iter().map(|f| f.site).collect())
        .collect();
    assert!(!plaq.is_empty());
    for sites in plaq {
        assert_eq!(sites, vec![1, 3, 4, 5]);
    }
}

#[test]
fn chain_lengths_by_mode_and_boundary() {
    let l = 3;
    let rough_smooth = LadderSpec::rough_smooth(4, l).unwrap();
    let smooth_smooth = LadderSpec::smooth_smooth(4, l).unwrap();
    let rough_rough =
        LadderSpec::new(4, l, Boundary::Rough, Boundary::Rough, vec![]).unwrap();
    assert_eq!(chain_layout(&rough_smooth, LayoutMode::LinksOnly).chain_length(), 3 * l);
    assert_eq!(chain_layout(&rough_smooth, LayoutMode::FullHilbert).chain_length(), 5 * l);
    assert_eq!(chain_layout(&smooth_smooth, LayoutMode::LinksOnly).chain_length(), 3 * l - 2);
    assert_eq!(chain_layout(&rough_rough, LayoutMode::LinksOnly).chain_length(), 3 * l + 2);
    assert_eq!(chain_layout(&rough_smooth, LayoutMode::RungChain).chain_length(), l);
    assert_eq!(chain_layout(&rough_smooth, LayoutMode::MatterOnly).chain_length(), 2 * l);
}

#[test]
fn every_bulk_term_spans_at_most_six_consecutive_positions() {
    for spec in [
        LadderSpec::rough_smooth(3, 4).unwrap(),
        LadderSpec::smooth_smooth(3, 4).unwrap(),
    ] {
        let rough = spec.boundary_left == Boundary::Rough;
        let c = Couplings::new(0.7, 1.1, if rough { 0.3 } else { 0.0 }, rough.then_some(0.9))
            .unwrap();
        let full = build_full(&spec, &c).unwrap();
        for t in &full.terms {
            let lo = t.factors.first().unwrap().site;
            let hi = t.factors.last().unwrap().site;
            assert!(hi - lo <= 5, "term spans {} positions", hi - lo + 1);
        }
        let unitary = build_unitary_gauge(&spec, &c).unwrap();
        for t in &unitary.terms {
            let lo = t.factors.first().unwrap().site;
            let hi = t.factors.last().unwrap().site;
            assert!(hi - lo <= 4);
        }
    }
}

#[test]
fn positions_and_sites_are_inverse_bijections() {
    let spec = LadderSpec::new(3, 5, Boundary::Rough, Boundary::Rough, vec![]).unwrap();
    for mode in [
        LayoutMode::LinksOnly,
        LayoutMode::FullHilbert,
        LayoutMode::RungChain,
        LayoutMode::MatterOnly,
    ] {
        let lay = chain_layout(&spec, mode);
        for pos in 0..lay.chain_length() {
            assert_eq!(lay.position(lay.site(pos)), Some(pos));
        }
    }
}

#[test]
fn unit_cell_cuts_separate_rung_indices() {
    let spec = LadderSpec::rough_smooth(3, 3).unwrap();
    assert_eq!(chain_layout(&spec, LayoutMode::LinksOnly).unit_cell_cuts(), vec![3, 6]);
    assert_eq!(chain_layout(&spec, LayoutMode::FullHilbert).unit_cell_cuts(), vec![5, 10]);
    assert_eq!(chain_layout(&spec, LayoutMode::MatterOnly).unit_cell_cuts(), vec![2, 4]);
}
