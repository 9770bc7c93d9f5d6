//! Eigenvalues against references computed independently of the shooting
//! solver: Bessel zeros in the Euclidean limit, the closed form on H^3, and
//! a finite-volume discretization.

use ross_spectra::eigen::EigenSolver;
use ross_spectra::oracle::{bessel_zero, euclidean_zero, fd_eigenvalue_extrapolated};
use ross_spectra::{ball_volume, OdeMode, SpaceSpec};
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn small_balls_match_bessel_zeros() {
    let solver = EigenSolver::default();
    for (k, n) in [(2, 2), (4, 2), (8, 2)] {
        let s = SpaceSpec::noncompact(k, n).unwrap();
        let r = 0.01;
        for (mode, index) in [(OdeMode::Radial, 1), (OdeMode::FirstHarmonic, 1), (OdeMode::Radial, 2)] {
            let j = euclidean_zero(&s, mode, index).unwrap();
            let lam = solver.ball_eigenvalue(&s, mode, index, r).unwrap();
            assert!(rel(lam * r * r, j * j) < 5e-3, "({k},{n}) {mode:?} #{index}: {} vs {}", lam * r * r, j * j);
        }
    }
}

#[test]
fn bessel_zeros_of_four_dimensional_ball() {
    // d = 4: orders 1 and 2
    assert!((bessel_zero(2, 1).unwrap().powi(2) - 14.682).abs() < 1e-3);
    assert!((bessel_zero(4, 1).unwrap().powi(2) - 26.375).abs() < 1e-3);
    assert!((bessel_zero(2, 2).unwrap().powi(2) - 49.218).abs() < 1e-3);
}

#[test]
fn three_dimensional_hyperbolic_ball_closed_form() {
    // on H^3 the substitution g = f / sinh r gives lambda_1 = 1 + pi^2 / R^2
    let s = SpaceSpec::noncompact(1, 3).unwrap();
    let solver = EigenSolver::default();
    for r in [0.3, 1.0, 2.5, 6.0] {
        let lam = solver.lambda1_ball(&s, r).unwrap();
        assert!(rel(lam, 1.0 + PI * PI / (r * r)) < 1e-9, "R = {r}: {lam}");
    }
}

#[test]
fn finite_volume_oracle_agrees() {
    let solver = EigenSolver::default();
    for (k, n, r) in [(1, 2, 1.0), (2, 2, 1.0), (4, 2, 0.5)] {
        let s = SpaceSpec::noncompact(k, n).unwrap();
        let f1 = fd_eigenvalue_extrapolated(&s, OdeMode::Radial, r, 4000, 1).unwrap();
        let f2 = fd_eigenvalue_extrapolated(&s, OdeMode::FirstHarmonic, r, 4000, 1).unwrap();
        assert!(rel(solver.lambda1_ball(&s, r).unwrap(), f1) < 1e-6);
        assert!(rel(solver.lambda2_ball(&s, r).unwrap(), f2) < 1e-6);
    }
}

#[test]
fn volumes_match_classical_formulas() {
    let plane = SpaceSpec::noncompact(1, 2).unwrap();
    for r in [0.1, 1.0, 3.0] {
        assert!(rel(ball_volume(&plane, r).unwrap(), 2.0 * PI * (r.cosh() - 1.0)) < 1e-12);
    }
    let ch2 = SpaceSpec::noncompact(2, 2).unwrap();
    assert!((ball_volume(&ch2, 1.0).unwrap() - 9.41280).abs() < 1e-4);
}
