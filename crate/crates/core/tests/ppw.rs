use ross_spectra::eigen::{EigenSolver, PROFILE_INTERVALS};
use ross_spectra::rearrangement::{chiti_crossing, chiti_test, ppw_pipeline, ppw_test, WeightedProfile};
use ross_spectra::SpaceSpec;

fn ch2() -> SpaceSpec {
    SpaceSpec::noncompact(2, 2).unwrap()
}

#[test]
fn annulus_second_eigenvalue_below_matching_ball() {
    for (k, n, a, b) in [(2, 2, 0.2, 1.0), (4, 2, 0.5, 1.5)] {
        let p = ppw_pipeline(&SpaceSpec::noncompact(k, n).unwrap(), a, b).unwrap();
        assert!(p.margin >= 0.0, "({k},{n}) ({a},{b}): margin {}", p.margin);
        assert!(p.chiti.pattern_ok && p.chiti.r0.is_some());
        assert!(p.equimeasurability_defect < 1e-6);
        assert!(p.rayleigh_bound >= p.annulus.lambda2_candidate - p.annulus.lambda1 - 1e-8 * p.ball.lambda2);
        assert!(p.rayleigh_bound <= p.ball.lambda2 - p.ball.lambda1 + 1e-8 * p.ball.lambda2);
    }
}

#[test]
fn punctured_ball_is_near_equality() {
    let p = ppw_pipeline(&ch2(), 1e-6, 1.0).unwrap();
    assert!(p.margin >= -1e-8 * p.ball.lambda2);
    assert!(p.margin <= 1e-3 * p.ball.lambda2);
    assert!((p.b1_radius - 1.0).abs() < 1e-4);
    assert!(ppw_test(&ch2(), 1e-6, 1.0).unwrap().passed);
}

#[test]
fn ball_against_itself_is_degenerate() {
    let ball = EigenSolver::default().ball_spectrum(&ch2(), 1.0, PROFILE_INTERVALS).unwrap();
    let z = WeightedProfile::from_ball(&ball).unwrap().normalized().unwrap();
    let c = chiti_crossing(&z, &ball).unwrap();
    assert!(c.degenerate && c.pattern_ok && c.r0.is_none());
}

#[test]
fn thick_annulus_crosses_once() {
    let rep = chiti_test(&ch2(), 0.3, 1.0).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert_eq!(rep.parameters["sign_changes"], 1);
}

#[test]
fn degenerate_annulus_is_a_domain_error() {
    assert!(ppw_pipeline(&ch2(), 1.0, 1.0).is_err());
    assert!(ppw_pipeline(&ch2(), 1.0, 0.5).is_err());
}
