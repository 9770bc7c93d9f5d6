//! Ball-level eigenvalue inequalities on a grid of radii: the spectral gap
//! bound `lambda_2 - lambda_1 >= lambda_1(S_R)` and the linear estimate
//! `lambda_2/(kn+2) - lambda_1/(kn) + (2kn+3k-1)/(3(kn+2)) >= 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::EigenSolver;
use crate::error::{domain, Result};
use crate::report::{num, ReportBuilder, VerificationReport};
use crate::space::{sphere_lambda1, SpaceSpec};

pub const GAP_TOL: f64 = 1e-8;
pub const ESTIMATE_TOL: f64 = 1e-8;

/// One radius of the gap table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub radius: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub sphere_lambda1: f64,
    /// `lambda_2 - lambda_1 - lambda_1(S_R)`.
    pub margin: f64,
}

impl GapRow {
    /// Left-hand side of the linear eigenvalue estimate.
    pub fn estimate_margin(&self, space: &SpaceSpec) -> f64 {
        estimate_margin(space, self.lambda1, self.lambda2)
    }
}

pub fn estimate_margin(space: &SpaceSpec, lambda1: f64, lambda2: f64) -> f64 {
    let (k, d) = (f64::from(space.k), f64::from(space.dim()));
    lambda2 / (d + 2.0) - lambda1 / d + (2.0 * d + 3.0 * k - 1.0) / (3.0 * (d + 2.0))
}

/// `r_min, r_min + step, ..., r_max` with the count fixed by rounding, so
/// that `0.1..=5.0` in steps of `0.1` gives exactly 50 radii.
pub fn radius_grid(r_min: f64, r_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_max >= r_min && step > 0.0) || !(r_min.is_finite() && r_max.is_finite()) {
        return domain(format!("bad radius grid: r_min {r_min}, r_max {r_max}, step {step}"));
    }
    let count = ((r_max - r_min) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return domain(format!("radius grid of {count} points is too large"));
    }
    Ok((0..count).map(|i| r_min + step * i as f64).map(|r| (r * 1e12).round() / 1e12).collect())
}

/// Gap table on the given radii, in input order.
pub fn gap_rows(space: &SpaceSpec, radii: &[f64]) -> Result<Vec<GapRow>> {
    gap_rows_with(&EigenSolver::default(), space, radii)
}

pub fn gap_rows_with(solver: &EigenSolver, space: &SpaceSpec, radii: &[f64]) -> Result<Vec<GapRow>> {
    radii
        .par_iter()
        .map(|&radius| {
            let lambda1 = solver.lambda1_ball(space, radius)?;
            let lambda2 = solver.lambda2_ball(space, radius)?;
            let sphere_lambda1 = sphere_lambda1(space, radius)?;
            Ok(GapRow { radius, lambda1, lambda2, sphere_lambda1, margin: lambda2 - lambda1 - sphere_lambda1 })
        })
        .collect()
}

pub fn gap_report(space: &SpaceSpec, rows: &[GapRow]) -> VerificationReport {
    let mut rb = ReportBuilder::new("gap_lower_bound", GAP_TOL)
        .space(*space)
        .grid("radii", rows.len())
        .grid("r_min", num(rows.first().map_or(f64::NAN, |r| r.radius)))
        .grid("r_max", num(rows.last().map_or(f64::NAN, |r| r.radius)));
    for row in rows {
        rb.observe(row.margin, &[("R", row.radius)]);
    }
    rb.finish()
}

pub fn estimate_report(space: &SpaceSpec, rows: &[GapRow]) -> VerificationReport {
    let rb = ReportBuilder::new("eigenvalue_estimate", ESTIMATE_TOL)
        .space(*space)
        .grid("radii", rows.len());
    if space.is_compact() {
        return rb.not_applicable("the estimate is stated for the noncompact spaces");
    }
    let mut rb = rb;
    for row in rows {
        rb.observe(row.estimate_margin(space), &[("R", row.radius)]);
    }
    rb.finish()
}

/// Gap table plus both reports.
pub fn verify_gap(space: &SpaceSpec, radii: &[f64]) -> Result<(Vec<GapRow>, VerificationReport, VerificationReport)> {
    let rows = gap_rows(space, radii)?;
    let gap = gap_report(space, &rows);
    let est = estimate_report(space, &rows);
    Ok((rows, gap, est))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_fifty_points() {
        let g = radius_grid(0.1, 5.0, 0.1).unwrap();
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[49], 5.0);
        assert_eq!(g[2], 0.3);
        assert!(radius_grid(1.0, 0.5, 0.1).is_err());
    }
}
