use observables::{
    chord_distance, compare_decay_models, extrapolate_truncation, fit_central_charge, fit_decay,
    modified_chord_distance, FitModel, ObsError,
};
use proptest::prelude::*;

#[test]
fn exponential_recovery_is_exact() {
    let pts: Vec<(f64, f64)> = (1..=10)
        .map(|r| (r as f64, 3.2 * (-(r as f64) / 2.5).exp()))
        .collect();
    let fit = fit_decay(&pts, FitModel::Exponential).unwrap();
    assert!((fit.xi() - 2.5).abs() < 1e-10);
    assert!((fit.intercept - 3.2f64.ln()).abs() < 1e-10);
    assert!(fit.residual < 1e-12);
    assert!(fit.monotone);
    assert_eq!(fit.points, 10);

    let cmp = compare_decay_models(&pts).unwrap();
    assert_eq!(cmp.preferred(), FitModel::Exponential);
}

#[test]
fn power_law_recovery_is_exact() {
    let pts: Vec<(f64, f64)> = (1..=10)
        .map(|r| (r as f64, 1.7 * (r as f64).powf(-1.35)))
        .collect();
    let fit = fit_decay(&pts, FitModel::PowerLaw).unwrap();
    assert!((fit.exponent() + 1.35).abs() < 1e-10);
    assert!((fit.intercept - 1.7f64.ln()).abs() < 1e-10);
    assert!(fit.residual < 1e-12);

    let cmp = compare_decay_models(&pts).unwrap();
    assert_eq!(cmp.preferred(), FitModel::PowerLaw);
}

#[test]
fn central_charge_recovery_is_exact() {
    let l = 32;
    let (c, ca) = (1.01, 0.37);
    let profile: Vec<(usize, f64)> = (1..l)
        .map(|cells| {
            let x = (2.0 * l as f64 / std::f64::consts::PI
                * (std::f64::consts::PI * cells as f64 / l as f64).sin())
            .ln();
            (cells, c / 6.0 * x + ca / 2.0)
        })
        .collect();
    for exclude in [None, Some(0), Some(10)] {
        let fit = fit_central_charge(&profile, l, exclude).unwrap();
        assert!((fit.central_charge() - c).abs() < 1e-10);
        assert!((fit.c_alpha() - ca).abs() < 1e-10);
    }
    assert!(matches!(
        fit_central_charge(&profile, l, Some(15)),
        Err(ObsError::TooFewPoints { needed: 4, .. })
    ));
}

#[test]
fn truncation_extrapolation_recovers_the_limit() {
    let eps: [f64; 4] = [1e-6, 1e-8, 1e-10, 0.0];
    let values: Vec<f64> = eps.iter().map(|e| -10.0 + 1.3 * e.sqrt()).collect();
    let fit = extrapolate_truncation(&values, &eps).unwrap();
    assert!((fit.extrapolated() + 10.0).abs() < 1e-9);
    assert!((fit.slope - 1.3).abs() < 1e-4);
    assert!(fit.monotone);
}

#[test]
fn chord_distances() {
    assert!(chord_distance(0.0, 16.0).abs() < 1e-15);
    assert!((chord_distance(8.0, 16.0) - 16.0 / std::f64::consts::PI).abs() < 1e-12);
    // Short distances reduce to the plain distance.
    assert!((chord_distance(1e-4, 64.0) - 1e-4).abs() < 1e-10);
    // Both endpoints matter, symmetrically.
    let a = modified_chord_distance(3.0, 11.0, 32.0);
    let b = modified_chord_distance(11.0, 3.0, 32.0);
    assert!((a - b).abs() < 1e-12);
    assert!(a > 0.0);
    assert!(modified_chord_distance(5.0, 5.0, 32.0).abs() < 1e-12);
}

#[test]
fn fit_argument_errors() {
    let short = [(1.0, 0.5), (2.0, 0.3), (3.0, 0.2), (4.0, 0.1)];
    assert!(matches!(
        fit_decay(&short, FitModel::Exponential),
        Err(ObsError::TooFewPoints { needed: 5, got: 4 })
    ));

    let with_zero = [(1.0, 0.5), (2.0, 0.3), (3.0, 0.0), (4.0, 0.1), (5.0, 0.05)];
    assert!(matches!(
        fit_decay(&with_zero, FitModel::Exponential),
        Err(ObsError::NonPositive { .. })
    ));

    let at_origin = [(0.0, 0.5), (2.0, 0.3), (3.0, 0.2), (4.0, 0.1), (5.0, 0.05)];
    assert!(matches!(
        fit_decay(&at_origin, FitModel::PowerLaw),
        Err(ObsError::NonPositive { .. })
    ));
    fit_decay(&at_origin, FitModel::Exponential).unwrap();

    assert!(matches!(
        fit_decay(&at_origin, FitModel::CardyEntropy),
        Err(ObsError::BadArguments(_))
    ));

    let flat = [(2.0, 0.5), (2.0, 0.3), (2.0, 0.2), (2.0, 0.1), (2.0, 0.05)];
    assert!(matches!(
        fit_decay(&flat, FitModel::Exponential),
        Err(ObsError::BadArguments(_))
    ));

    assert!(matches!(
        extrapolate_truncation(&[1.0, 2.0], &[0.1, 0.2]),
        Err(ObsError::TooFewPoints { needed: 3, .. })
    ));
    assert!(matches!(
        extrapolate_truncation(&[1.0, 2.0, 3.0], &[0.1, 0.2]),
        Err(ObsError::BadArguments(_))
    ));
    assert!(matches!(
        extrapolate_truncation(&[1.0, 2.0, 3.0], &[0.1, -0.2, 0.3]),
        Err(ObsError::BadArguments(_))
    ));
}

proptest! {
    /// Noise-free exponentials are recovered to rounding over any scale.
    #[test]
    fn exponential_recovery_over_random_parameters(
        amp in 1e-3f64..1e3,
        xi in 0.2f64..50.0,
    ) {
        let pts: Vec<(f64, f64)> = (1..=12)
            .map(|r| (r as f64, amp * (-(r as f64) / xi).exp()))
            .collect();
        let fit = fit_decay(&pts, FitModel::Exponential).unwrap();
        prop_assert!((fit.xi() - xi).abs() < 1e-6 * xi);
    }

    /// Noise-free power laws are recovered to rounding.
    #[test]
    fn power_law_recovery_over_random_parameters(
        amp in 1e-3f64..1e3,
        p in 0.05f64..6.0,
    ) {
        let pts: Vec<(f64, f64)> = (1..=12)
            .map(|r| (r as f64, amp * (r as f64).powf(-p)))
            .collect();
        let fit = fit_decay(&pts, FitModel::PowerLaw).unwrap();
        prop_assert!((fit.exponent() + p).abs() < 1e-6 * p.max(1.0));
    }

    /// The chord distance is symmetric about the chain middle and no larger
    /// than l / pi.
    #[test]
    fn chord_distance_symmetry(r in 0.0f64..64.0) {
        let l = 64.0;
        let d = chord_distance(r, l);
        prop_assert!((d - chord_distance(l - r, l)).abs() < 1e-10);
        prop_assert!(d <= l / std::f64::consts::PI + 1e-12);
        prop_assert!(d >= 0.0);
    }

    /// The two-endpoint correction stays positive for distinct interior
    /// endpoints and is symmetric under swapping them.
    #[test]
    fn modified_chord_distance_properties(
        x in 1.0f64..31.0,
        gap in 1.0f64..30.0,
    ) {
        let l = 64.0;
        let y = (x + gap).min(63.0);
        prop_assume!(y > x + 0.5);
        let d = modified_chord_distance(x, y, l);
        prop_assert!(d > 0.0);
        prop_assert!((d - modified_chord_distance(y, x, l)).abs() < 1e-9 * d.max(1.0));
    }
}
