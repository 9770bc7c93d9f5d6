use ross_spectra::eigen::{EigenSolver, PROFILE_INTERVALS};
use ross_spectra::gap::{radius_grid, verify_gap};
use ross_spectra::quotient::{b_prime, build_quotient_curves, verify_monotonicity};
use ross_spectra::SpaceSpec;
use std::f64::consts::FRAC_PI_4;

fn ball(k: u32, n: u32, r: f64) -> ross_spectra::BallSpectrum {
    EigenSolver::default().ball_spectrum(&SpaceSpec::noncompact(k, n).unwrap(), r, PROFILE_INTERVALS).unwrap()
}

#[test]
fn all_properties_hold_on_complex_and_octonionic_balls() {
    for (k, n, r) in [(2, 2, 1.0), (8, 2, 2.0)] {
        let reports = verify_monotonicity(&ball(k, n, r), 2000).unwrap();
        assert!(reports.len() >= 8);
        for rep in &reports {
            assert!(rep.passed, "({k},{n}) R = {r}: {} margin {}", rep.check_id, rep.worst_margin);
            assert!(rep.worst_margin >= -1e-6);
        }
    }
}

#[test]
fn b_decreasing_in_the_middle() {
    let curves = build_quotient_curves(&ball(2, 2, 1.0)).unwrap();
    assert!(b_prime(&curves, 0.5).unwrap() <= 0.0);
}

#[test]
fn compact_type_checks_g_only() {
    let s = SpaceSpec::compact(2, 2).unwrap();
    let b = EigenSolver::default().ball_spectrum(&s, FRAC_PI_4, PROFILE_INTERVALS).unwrap();
    let reports = verify_monotonicity(&b, 1000).unwrap();
    let g = reports.iter().find(|r| r.check_id == "g_prime_nonnegative").unwrap();
    assert!(g.passed);
    let bp = reports.iter().find(|r| r.check_id == "b_prime_nonpositive").unwrap();
    assert!(bp.notes.iter().any(|n| n.starts_with("not applicable")));
    assert!(EigenSolver::default().ball_spectrum(&s, 1.0, 200).is_err());
}

#[test]
fn gap_and_estimate_on_the_hyperbolic_planes() {
    let radii = radius_grid(0.1, 5.0, 0.1).unwrap();
    for (k, n) in [(2, 2), (4, 2)] {
        let (rows, gap, est) = verify_gap(&SpaceSpec::noncompact(k, n).unwrap(), &radii).unwrap();
        assert_eq!(rows.len(), 50);
        assert!(gap.passed && est.passed, "({k},{n}): {} {}", gap.worst_margin, est.worst_margin);
        assert!(rows.iter().all(|r| r.lambda2 > r.lambda1));
    }
}
