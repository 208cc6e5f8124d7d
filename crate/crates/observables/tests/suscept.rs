use observables::{
    central_susceptibility, fidelity_susceptibility, ObsError, DERIVATIVE_STEP, FIDELITY_STEP,
};
use proptest::prelude::*;

/// A Gaussian overlap model F = exp(-chi links d^2 / 2) makes the stencil
/// exact at every step, so both estimates coincide with the model value.
#[test]
fn fidelity_stencil_is_exact_on_the_gaussian_model() {
    let (links, chi) = (9usize, 4.25f64);
    let est = fidelity_susceptibility(links, 0.3, FIDELITY_STEP, |a, b| {
        Ok((-chi * links as f64 * (b - a) * (b - a) / 2.0).exp())
    })
    .unwrap();
    assert!((est.value - chi).abs() < 1e-9);
    assert!((est.value_half_step - chi).abs() < 1e-9);
    assert!(est.rel_change < 1e-9);
    assert!((est.best() - chi).abs() < 1e-9);
}

/// Per-link normalization: a links-independent overlap scales the estimate
/// down by the link count.
#[test]
fn fidelity_is_normalized_per_link() {
    let c = 6.0;
    let est = fidelity_susceptibility(12, 0.0, 1e-3, |a, b| {
        Ok((-c * (b - a) * (b - a) / 2.0).exp())
    })
    .unwrap();
    assert!((est.value - c / 12.0).abs() < 1e-9);
}

#[test]
fn overlap_collapse_is_a_level_crossing() {
    let err = fidelity_susceptibility(9, 0.3, 1e-3, |_, _| Ok(1e-9)).unwrap_err();
    assert!(matches!(err, ObsError::LevelCrossing { .. }));
}

/// Central differences on a cubic: the half-step error drops by four, and
/// the reported step diagnostic sees it.
#[test]
fn central_difference_converges_on_a_cubic() {
    let f = |x: f64| 2.0 + 3.0 * x + 0.5 * x * x * x;
    let truth = 3.0 + 1.5; // f'(1)
    let est = central_susceptibility(1, 1.0, 0.1, |x| Ok(f(x))).unwrap();
    let err_full = (est.value - truth).abs();
    let err_half = (est.value_half_step - truth).abs();
    assert!(err_full > 1e-6, "cubic must expose a finite-step error");
    assert!(err_half < 0.3 * err_full);
    assert!(est.rel_change > 0.0);
    assert_eq!(est.step, 0.1);
    assert_eq!(est.links, 1);
}

#[test]
fn central_difference_is_normalized_per_link() {
    let est = central_susceptibility(6, 2.0, DERIVATIVE_STEP, |x| Ok(5.0 * x)).unwrap();
    assert!((est.value - 5.0 / 6.0).abs() < 1e-10);
    assert!(est.rel_change < 1e-10);
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(matches!(
        fidelity_susceptibility(0, 0.3, 1e-3, |_, _| Ok(0.5)),
        Err(ObsError::BadArguments(_))
    ));
    for step in [0.0, -1e-3, f64::NAN] {
        assert!(matches!(
            central_susceptibility(3, 0.3, step, |_| Ok(0.5)),
            Err(ObsError::BadArguments(_))
        ));
    }
}

#[test]
fn closure_errors_propagate() {
    let err = central_susceptibility(3, 0.3, 1e-2, |_| {
        Err(ObsError::BadArguments("solver failed".into()))
    })
    .unwrap_err();
    assert!(matches!(err, ObsError::BadArguments(_)));
}

proptest! {
    /// Gaussian overlap models are recovered exactly for any positive chi,
    /// link count, and step.
    #[test]
    fn gaussian_models_are_recovered(
        chi in 1e-3f64..1e3,
        links in 1usize..200,
        step in 1e-5f64..1e-1,
    ) {
        // Keep the overlap exponent away from both rounding (ln of a value
        // within eps of 1) and the level-crossing floor.
        let expo = chi * links as f64 * step * step / 2.0;
        prop_assume!(expo > 1e-8 && expo < 10.0);
        let est = fidelity_susceptibility(links, 0.5, step, |a, b| {
            Ok((-chi * links as f64 * (b - a) * (b - a) / 2.0).exp())
        })
        .unwrap();
        prop_assert!((est.value - chi).abs() < 1e-6 * chi);
        prop_assert!(est.rel_change < 1e-6);
    }

    /// On affine data the central difference is exact at any step.
    #[test]
    fn affine_derivatives_are_exact(
        a in -10.0f64..10.0,
        b in -10.0f64..10.0,
        at in -3.0f64..3.0,
        step in 1e-4f64..1.0,
    ) {
        let est = central_susceptibility(1, at, step, |x| Ok(a + b * x)).unwrap();
        prop_assert!((est.value - b).abs() < 1e-8 * (1.0 + b.abs()));
        prop_assert!((est.value_half_step - b).abs() < 1e-8 * (1.0 + b.abs()));
    }
}
