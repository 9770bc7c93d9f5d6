use ross_spectra::hyper::rat;
use ross_spectra::inequalities::{
    f_poly_check, f_poly_value, find_root_r1, find_root_r2, series_certificate, verify_lemma_a, z1_increasing_check,
    SERIES_CATALOG,
};
use ross_spectra::eigen::EigenSolver;
use ross_spectra::suite::{y_grid, SPACES};
use ross_spectra::SpaceSpec;

#[test]
fn roots_near_stated_values() {
    let r2 = find_root_r2().unwrap();
    assert!((r2 - 1.35).abs() < 0.05, "r2 = {r2}");
    let r1 = find_root_r1(2, 2).unwrap();
    assert!((r1 - 1.57).abs() < 0.05, "r1 = {r1}");
}

#[test]
fn r1_exceeds_both_bounds_everywhere() {
    let r2 = find_root_r2().unwrap();
    for (k, n) in SPACES {
        let r1 = find_root_r1(k, n).unwrap();
        assert!(r1 > 1.4 && r1 > r2, "({k},{n}): r1 = {r1}, r2 = {r2}");
    }
}

#[test]
fn polynomial_at_one_point_four() {
    let rep = f_poly_check(1.4).unwrap();
    assert!(rep.passed, "{rep:?}");
    let k2 = rep.parameters["coef_k^2"].as_f64().unwrap();
    assert!((k2 - 0.0211709).abs() < 1e-4);
    // the printed polynomial taken literally (with kn^2) nearly cancels at (2, 2) ...
    let printed = |k: f64, n: f64| 0.03293 - 0.0423419 * k + 0.0211709 * k * k - 0.0235181 * k * n + 0.0117591 * k * n * n;
    assert!((printed(2.0, 2.0) - 0.03293).abs() < 1e-6);
    // ... but the product itself carries k^2 n^2, as the expansion shows
    let exact = |k: f64, n: f64| 0.03293 - 0.0423419 * k + 0.0211709 * k * k - 0.0235181 * k * n + 0.0117591 * k * k * n * n;
    for (k, n) in [(2, 2), (2, 5), (4, 3), (8, 2)] {
        assert!((f_poly_value(k, n, 1.4).unwrap() - exact(f64::from(k), f64::from(n))).abs() < 1e-3);
    }
    let f: Vec<f64> = (2..=8).map(|n| f_poly_value(2, n, 1.4).unwrap()).collect();
    assert!(f.windows(2).all(|w| w[1] > w[0]), "{f:?}");
    assert!(f_poly_check(-1.0).is_err());
}

#[test]
fn exact_series_claims() {
    let base = series_certificate("hh2_a1b1_cross_a3b3", 10).unwrap();
    assert_eq!(base.coefficients.coeff(1), rat(76832, 45));
    assert_eq!(base.coefficients.coeff(3), rat(-551936, 135));

    let numer = series_certificate("a5b5_derivative_numerator", 20).unwrap();
    for j in 0..3 {
        assert_eq!(numer.coefficients.coeff(j), rat(0, 1));
    }
    assert!(numer.all_nonnegative);
    let third = series_certificate("a5b5_numerator_third_derivative", 17).unwrap();
    let d3 = numer.coefficients.derivative().derivative().derivative();
    for j in 0..=17 {
        assert_eq!(d3.coeff(j), third.coefficients.coeff(j));
    }

    let zero = series_certificate("zero", 12).unwrap();
    assert!(zero.all_nonnegative && zero.coefficients.coeffs().iter().all(|c| *c == rat(0, 1)));
    assert!(series_certificate("no_such_expression", 4).is_err());
    for e in SERIES_CATALOG {
        assert!(!series_certificate(e.id, 30).unwrap().note.is_empty());
    }
}

#[test]
fn cross_products_positive_on_both_sides() {
    let r_grid: Vec<f64> = (1..=300).map(|i| 6.0 * f64::from(i) / 300.0).collect();
    for (k, n) in [(2, 2), (4, 2), (8, 2)] {
        let s = SpaceSpec::noncompact(k, n).unwrap();
        let rep = verify_lemma_a(&s, &r_grid, &y_grid()).unwrap();
        assert!(rep.passed, "({k},{n}): {}", rep.worst_margin);
    }
}

#[test]
fn z1_increasing_on_the_ball() {
    let solver = EigenSolver::default();
    for (k, n, r) in [(2, 2, 1.0), (4, 2, 2.0)] {
        let s = SpaceSpec::noncompact(k, n).unwrap();
        let (l1, l2) = (solver.lambda1_ball(&s, r).unwrap(), solver.lambda2_ball(&s, r).unwrap());
        let rep = z1_increasing_check(&s, l1, l2, r).unwrap();
        assert!(rep.passed, "({k},{n}) R = {r}: {}", rep.worst_margin);
    }
}
