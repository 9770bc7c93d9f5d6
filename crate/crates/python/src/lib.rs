//! Python bindings: eigenvalues, roots and the verification reports, with
//! structured results handed over as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use ross_spectra::eigen::EigenSolver;
use ross_spectra::{gap, inequalities as ineq, rearrangement, Error, SpaceSpec};

fn to_py(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn space(k: u32, n: u32, compact: bool) -> PyResult<SpaceSpec> {
    if compact { SpaceSpec::compact(k, n) } else { SpaceSpec::noncompact(k, n) }.map_err(to_py)
}

/// Serialize on the Rust side and let `json.loads` build the Python objects.
fn to_object<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyfunction]
#[pyo3(signature = (k, n, radius, compact = false))]
fn lambda1_ball(py: Python<'_>, k: u32, n: u32, radius: f64, compact: bool) -> PyResult<f64> {
    let s = space(k, n, compact)?;
    py.detach(|| EigenSolver::default().lambda1_ball(&s, radius)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, n, radius, compact = false))]
fn lambda2_ball(py: Python<'_>, k: u32, n: u32, radius: f64, compact: bool) -> PyResult<f64> {
    let s = space(k, n, compact)?;
    py.detach(|| EigenSolver::default().lambda2_ball(&s, radius)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, n, radius, compact = false))]
fn lambda02_ball(py: Python<'_>, k: u32, n: u32, radius: f64, compact: bool) -> PyResult<f64> {
    let s = space(k, n, compact)?;
    py.detach(|| EigenSolver::default().lambda02_ball(&s, radius)).map_err(to_py)
}

/// Radius of the noncompact ball whose first eigenvalue is `target`.
#[pyfunction]
#[pyo3(signature = (k, n, target, tol = 1e-10))]
fn radius_for_lambda1(py: Python<'_>, k: u32, n: u32, target: f64, tol: f64) -> PyResult<f64> {
    let s = space(k, n, false)?;
    py.detach(|| EigenSolver::default().radius_for_lambda1(&s, target, tol * target.abs())).map_err(to_py)
}

/// `(lambda_1, lambda_2 candidate)` of the annulus `r_in < r < r_out`.
#[pyfunction]
fn annulus_eigenvalues(py: Python<'_>, k: u32, n: u32, r_in: f64, r_out: f64) -> PyResult<(f64, f64)> {
    let s = space(k, n, false)?;
    let a = py.detach(|| EigenSolver::default().annulus_spectrum(&s, r_in, r_out)).map_err(to_py)?;
    Ok((a.lambda1, a.lambda2_candidate))
}

/// Rows `{radius, lambda1, lambda2, sphere_lambda1, margin}`.
#[pyfunction]
fn gap_table<'py>(py: Python<'py>, k: u32, n: u32, r_min: f64, r_max: f64, step: f64) -> PyResult<Bound<'py, PyAny>> {
    let s = space(k, n, false)?;
    let rows = py
        .detach(|| gap::radius_grid(r_min, r_max, step).and_then(|radii| gap::gap_rows(&s, &radii)))
        .map_err(to_py)?;
    to_object(py, &rows)
}

/// The comparison report for one annulus.
#[pyfunction]
fn ppw_annulus<'py>(py: Python<'py>, k: u32, n: u32, r_in: f64, r_out: f64) -> PyResult<Bound<'py, PyAny>> {
    let s = space(k, n, false)?;
    let report = py.detach(|| rearrangement::ppw_test(&s, r_in, r_out)).map_err(to_py)?;
    to_object(py, &report)
}

#[pyfunction]
fn find_root_r2(py: Python<'_>) -> PyResult<f64> {
    py.detach(ineq::find_root_r2).map_err(to_py)
}

#[pyfunction]
fn find_root_r1(py: Python<'_>, k: u32, n: u32) -> PyResult<f64> {
    py.detach(|| ineq::find_root_r1(k, n)).map_err(to_py)
}

/// Exact Taylor coefficients as strings `"p/q"`.
#[pyfunction]
#[pyo3(signature = (id, order = ineq::DEFAULT_SERIES_ORDER))]
fn series_coefficients(id: &str, order: usize) -> PyResult<Vec<String>> {
    let cert = ineq::series_certificate(id, order).map_err(to_py)?;
    Ok(cert.coefficients.coeffs().iter().map(|c| c.to_string()).collect())
}

/// Run the command-line tool in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("ross-spectra".to_string()).chain(args).collect();
    let out = py.detach(|| ross_spectra::cli::run(argv));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn ross_spectra_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("B2_FORM", ineq::selected_b2_form().formula())?;
    m.add_function(wrap_pyfunction!(lambda1_ball, m)?)?;
    m.add_function(wrap_pyfunction!(lambda2_ball, m)?)?;
    m.add_function(wrap_pyfunction!(lambda02_ball, m)?)?;
    m.add_function(wrap_pyfunction!(radius_for_lambda1, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(gap_table, m)?)?;
    m.add_function(wrap_pyfunction!(ppw_annulus, m)?)?;
    m.add_function(wrap_pyfunction!(find_root_r2, m)?)?;
    m.add_function(wrap_pyfunction!(find_root_r1, m)?)?;
    m.add_function(wrap_pyfunction!(series_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyDict;

    #[test]
    fn module_round_trip() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "ross_spectra_py").unwrap();
            ross_spectra_py(&m).unwrap();
            let locals = PyDict::new(py);
            locals.set_item("rs", &m).unwrap();
            let code = c"
import math
l1 = rs.lambda1_ball(1, 3, 2.0)
assert abs(l1 - (1 + math.pi ** 2 / 4)) < 1e-8, l1
rows = rs.gap_table(2, 2, 0.5, 1.5, 0.5)
assert [r['radius'] for r in rows] == [0.5, 1.0, 1.5]
assert all(r['margin'] > 0 for r in rows)
assert rs.series_coefficients('hh2_a1b1_cross_a3b3', 3)[1] == '76832/45'
code, out, err = rs.run_cli(['ball-spectrum', '--k', '2', '--n', '2', '--radius', '-1'])
assert code == 2 and out == '' and err
try:
    rs.lambda1_ball(3, 2, 1.0)
    raise AssertionError('expected ValueError')
except ValueError:
    pass
";
            py.run(code, None, Some(&locals)).unwrap();
        });
    }
}
