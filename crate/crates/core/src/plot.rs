//! Two-column `r,value` CSV files for curves.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::radial::RadialProfile;

/// Shortest decimal with 17 significant digits, the same on every platform.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text for `(r, value)` samples; header only when there are none.
pub fn samples_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("r,value\n");
    for &(r, v) in samples {
        let _ = writeln!(out, "{},{}", fmt17(r), fmt17(v));
    }
    out
}

pub fn emit_samples(samples: &[(f64, f64)], path: &Path) -> Result<()> {
    if samples.iter().any(|(r, v)| !r.is_finite() || !v.is_finite()) {
        return Err(Error::Domain(format!("{}: curve has non-finite samples", path.display())));
    }
    fs::write(path, samples_csv(samples)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Write the curve's grid values as CSV.
pub fn emit_plot_data(curve: &RadialProfile, path: &Path) -> Result<()> {
    let samples: Vec<(f64, f64)> = curve.grid.iter().copied().zip(curve.values.iter().copied()).collect();
    emit_samples(&samples, path)
}

/// `n + 1` equally spaced samples of `f` on `[a, b]`.
pub fn sample(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).map(|r| (r, f(r))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(samples_csv(&[]), "r,value\n");
    }
}
