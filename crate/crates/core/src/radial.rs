//! Outward integration of the radial eigenvalue equations
//!
//! ```text
//! g'' + H(r) g' + (lambda - nu(r)) g = 0
//! ```
//!
//! where `nu = 0` for the purely radial family and `nu = lambda_1(S_r)` for the
//! first spherical-harmonic family. `r = 0` is a regular singular point, so
//! integration starts from a truncated Frobenius series at a small seed radius.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ode::{self, State};
use crate::space::SpaceSpec;

/// Largest radius at which [`frobenius_seed`] will evaluate its series.
pub const R_SEED_MAX: f64 = 0.05;
/// Default seed radius for balls of radius at least 1; smaller balls scale it down.
pub const R_SEED: f64 = 1e-3;
pub const TOL_ODE: f64 = 1e-11;
const RENORM_THRESHOLD: f64 = 1e8;
const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OdeMode {
    Radial,
    FirstHarmonic,
}

impl OdeMode {
    /// Exponent of the regular Frobenius solution at the origin.
    fn indicial(self) -> i32 {
        match self {
            OdeMode::Radial => 0,
            OdeMode::FirstHarmonic => 1,
        }
    }
}

/// A radial function sampled on a strictly increasing grid, with values and
/// first derivatives at every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub domain: (f64, f64),
}

impl RadialProfile {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, derivs: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        if grid.len() != values.len() || grid.len() != derivs.len() {
            return domain_err("grid, values and derivs must have equal lengths");
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return domain_err("grid must be strictly increasing");
        }
        if let (Some(first), Some(last)) = (grid.first(), grid.last()) {
            if *first < domain.0 || *last > domain.1 {
                return domain_err("grid escapes its declared domain");
            }
        }
        if values.iter().chain(derivs.iter()).any(|v| !v.is_finite()) {
            return domain_err("profile contains non-finite samples");
        }
        Ok(Self { grid, values, derivs, domain })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Index `i` with `grid[i] <= r <= grid[i + 1]`, clamped to the ends.
    fn locate(&self, r: f64) -> usize {
        let n = self.grid.len();
        match self.grid.partition_point(|&x| x <= r) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    /// Cubic Hermite interpolation of `(value, derivative)` at `r`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        if self.grid.len() == 1 {
            return (self.values[0], self.derivs[0]);
        }
        let i = self.locate(r);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i] * h, self.derivs[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1;
        let dv = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * d1)
            / h;
        (v, dv)
    }

    pub fn value_at(&self, r: f64) -> f64 {
        self.eval(r).0
    }

    pub fn scale(&mut self, factor: f64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
        self.derivs.iter_mut().for_each(|v| *v *= factor);
    }
}

fn domain_err<T>(msg: &str) -> Result<T> {
    Err(Error::Domain(msg.to_string()))
}

/// Result of one initial-value integration.
#[derive(Debug, Clone)]
pub struct Shot {
    pub boundary_value: f64,
    pub boundary_deriv: f64,
    /// Sign changes strictly inside the interval.
    pub sign_changes: usize,
    /// Sign changes on the half-open interval up to and including the end
    /// point; by Sturm oscillation this counts the eigenvalues `<= lambda`.
    pub crossings: usize,
    pub profile: RadialProfile,
}

/// Integrator settings shared by every shooting call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub tol: f64,
    /// Fixed seed radius; `None` picks `1e-3 * min(1, r_end)`.
    pub seed_radius: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { tol: TOL_ODE, seed_radius: None }
    }
}

impl IntegratorConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn seed_for(&self, r_end: f64) -> f64 {
        self.seed_radius.unwrap_or(R_SEED * r_end.min(1.0))
    }
}

/// Frobenius coefficients `a_0 = 1, a_2, a_4` of the regular solution
/// `r^m (1 + a_2 r^2 + a_4 r^4 + ...)`.
pub fn frobenius_coefficients(space: &SpaceSpec, mode: OdeMode, lambda: f64) -> [f64; 3] {
    let (h, v_full) = space.origin_series();
    let v = match mode {
        OdeMode::Radial => [0.0; 3],
        OdeMode::FirstHarmonic => v_full,
    };
    let m = f64::from(mode.indicial());
    // Coefficient of r^{s+m-2} after substituting the series; index j runs over
    // previously determined even powers.
    let mut a = [1.0, 0.0, 0.0];
    for (slot, s) in [(1usize, 2.0), (2, 4.0)] {
        let p = s + m;
        let denom = p * (p - 1.0) + h[0] * p - v[0];
        let mut sum = 0.0;
        for (jslot, aj) in a.iter().enumerate().take(slot) {
            let j = 2.0 * jslot as f64;
            let gap = slot - jslot; // (s - j) / 2
            let q = j + m;
            sum += aj * (h[gap] * q - v[gap] + if gap == 1 { lambda } else { 0.0 });
        }
        a[slot] = -sum / denom;
    }
    a
}

/// Truncated Frobenius series `(g(r), g'(r))` of the regular solution at the
/// origin, through order `r^{m+4}`.
pub fn frobenius_seed(space: &SpaceSpec, mode: OdeMode, lambda: f64, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) || r > R_SEED_MAX {
        return domain(format!("seed radius must lie in (0, {R_SEED_MAX}] (got {r})"));
    }
    let a = frobenius_coefficients(space, mode, lambda);
    let m = mode.indicial();
    let mut value = 0.0;
    let mut deriv = 0.0;
    for (i, ai) in a.iter().enumerate() {
        let p = m + 2 * i as i32;
        value += ai * r.powi(p);
        if p > 0 {
            deriv += ai * f64::from(p) * r.powi(p - 1);
        }
    }
    Ok((value, deriv))
}

fn check_end(space: &SpaceSpec, r_end: f64) -> Result<()> {
    space.check_radius(r_end)?;
    if space.is_compact() && r_end > std::f64::consts::FRAC_PI_4 + 1e-12 {
        return domain(format!("compact-type analysis is restricted to r <= pi/4 (got {r_end})"));
    }
    Ok(())
}

/// Shooting driver with a fixed [`IntegratorConfig`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RadialIntegrator {
    pub config: IntegratorConfig,
}

impl RadialIntegrator {
    pub fn new(config: IntegratorConfig) -> Self {
        Self { config }
    }

    /// Integrate from the Frobenius seed to `r_end`, recording every accepted step.
    pub fn shoot(&self, space: &SpaceSpec, mode: OdeMode, lambda: f64, r_end: f64) -> Result<Shot> {
        check_end(space, r_end)?;
        let r0 = self.config.seed_for(r_end);
        if r_end <= r0 {
            return domain(format!("r_end = {r_end} must exceed the seed radius {r0}"));
        }
        let y0 = frobenius_seed(space, mode, lambda, r0)?;
        self.run(space, mode, lambda, r0, [y0.0, y0.1], r_end, None)
    }

    /// Integrate from a seed at `grid[0]` and record exactly the given nodes.
    pub fn shoot_on_grid(&self, space: &SpaceSpec, mode: OdeMode, lambda: f64, grid: &[f64]) -> Result<Shot> {
        let (r0, r_end) = grid_ends(grid)?;
        check_end(space, r_end)?;
        let y0 = frobenius_seed(space, mode, lambda, r0)?;
        self.run(space, mode, lambda, r0, [y0.0, y0.1], r_end, Some(grid))
    }

    /// Integrate the regular problem `g(r_in) = 0, g'(r_in) = 1` out to `r_out`.
    pub fn shoot_interval(
        &self,
        space: &SpaceSpec,
        mode: OdeMode,
        lambda: f64,
        r_in: f64,
        r_out: f64,
    ) -> Result<Shot> {
        check_interval(space, r_in, r_out)?;
        let scale = interval_scale(r_in, r_out);
        Ok(rescaled(self.run(space, mode, lambda, r_in, [0.0, 1.0 / scale], r_out, None)?, scale))
    }

    pub fn shoot_interval_on_grid(&self, space: &SpaceSpec, mode: OdeMode, lambda: f64, grid: &[f64]) -> Result<Shot> {
        let (r_in, r_out) = grid_ends(grid)?;
        check_interval(space, r_in, r_out)?;
        let scale = interval_scale(r_in, r_out);
        Ok(rescaled(self.run(space, mode, lambda, r_in, [0.0, 1.0 / scale], r_out, Some(grid))?, scale))
    }

    #[allow(clippy::too_many_arguments)]
    fn run(
        &self,
        space: &SpaceSpec,
        mode: OdeMode,
        lambda: f64,
        r0: f64,
        y0: State,
        r_end: f64,
        stops: Option<&[f64]>,
    ) -> Result<Shot> {
        let harmonic = mode == OdeMode::FirstHarmonic;
        let rhs = |r: f64, y: &State| -> State {
            let (h, nu) = space.h_and_nu(r);
            let pot = if harmonic { lambda - nu } else { lambda };
            [y[1], -h * y[1] - pot * y[0]]
        };
        let tol = self.config.tol;
        let span = r_end - r0;
        let h_max = span / 50.0;
        let mut h = (0.1 * r0).min(span / 100.0);

        let mut grid = Vec::new();
        let mut values = Vec::new();
        let mut derivs = Vec::new();
        let mut next_stop = 0usize;
        let record_all = stops.is_none();
        let stops = stops.unwrap_or(&[]);

        let mut r = r0;
        let mut y = y0;
        let mut dy = rhs(r, &y);
        let mut sign_changes = 0usize;
        let mut crossings = 0usize;
        let mut last_sign = sign_of(y[0]);

        let push = |r: f64, y: &State, grid: &mut Vec<f64>, values: &mut Vec<f64>, derivs: &mut Vec<f64>| {
            grid.push(r);
            values.push(y[0]);
            derivs.push(y[1]);
        };
        if record_all || stops.first() == Some(&r0) {
            push(r, &y, &mut grid, &mut values, &mut derivs);
            next_stop = 1;
        }

        let mut steps = 0usize;
        while r < r_end {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Integration { r, reason: "step budget exhausted".into() });
            }
            h = h.min(h_max);
            let mut target = r_end;
            if !record_all {
                while next_stop < stops.len() && stops[next_stop] <= r {
                    next_stop += 1;
                }
                if next_stop < stops.len() {
                    target = stops[next_stop];
                }
            }
            let mut hits = false;
            if r + h >= target - 1e-14 * target.abs() {
                h = target - r;
                hits = true;
            }
            if h < 1e-15 * r.max(1.0) {
                return Err(Error::Integration { r, reason: "step size underflow".into() });
            }
            let s = ode::step(&rhs, r, &y, &dy, h, tol, tol);
            if !s.err.is_finite() {
                h *= 0.1;
                continue;
            }
            if s.err > 1.0 {
                h *= ode::step_factor(s.err, false);
                continue;
            }
            r = if hits { target } else { r + h };
            y = s.y;
            dy = s.dy;
            let sign = sign_of(y[0]);
            if sign == 0 && r >= r_end && last_sign != 0 {
                // an exact zero at the end point is an eigenvalue: count it
                crossings += 1;
            }
            if sign != 0 {
                if last_sign != 0 && sign != last_sign {
                    crossings += 1;
                    if r < r_end {
                        sign_changes += 1;
                    }
                }
                last_sign = sign;
            }
            if record_all || hits {
                push(r, &y, &mut grid, &mut values, &mut derivs);
            }
            let big = y[0].abs().max(y[1].abs());
            if big > RENORM_THRESHOLD {
                let f = 1.0 / big;
                y[0] *= f;
                y[1] *= f;
                dy[0] *= f;
                dy[1] *= f;
                values.iter_mut().for_each(|v| *v *= f);
                derivs.iter_mut().for_each(|v| *v *= f);
            }
            h *= ode::step_factor(s.err, true);
        }
        let profile = RadialProfile::new(grid, values, derivs, (r0, r_end))?;
        Ok(Shot { boundary_value: y[0], boundary_deriv: y[1], sign_changes, crossings, profile })
    }
}

/// Near a small inner radius the solution with unit slope only grows to
/// `O(r_in)` (and to `O(width)` in a thin shell), which would put it at the
/// level of the absolute tolerance; starting with slope `1 / scale` keeps it
/// of order one.
fn interval_scale(r_in: f64, r_out: f64) -> f64 {
    r_in.min(r_out - r_in).min(1.0)
}

fn rescaled(mut shot: Shot, scale: f64) -> Shot {
    shot.boundary_value *= scale;
    shot.boundary_deriv *= scale;
    shot.profile.scale(scale);
    shot
}

fn sign_of(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn grid_ends(grid: &[f64]) -> Result<(f64, f64)> {
    if grid.len() < 2 {
        return domain("grid needs at least two nodes");
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("grid must be strictly increasing");
    }
    Ok((grid[0], grid[grid.len() - 1]))
}

fn check_interval(space: &SpaceSpec, r_in: f64, r_out: f64) -> Result<()> {
    if !(r_in > 0.0) || !(r_out > r_in) {
        return domain(format!("need 0 < r_in < r_out (got {r_in}, {r_out})"));
    }
    check_end(space, r_out)
}

/// [`RadialIntegrator::shoot`] with default settings.
pub fn shoot(space: &SpaceSpec, mode: OdeMode, lambda: f64, r_end: f64) -> Result<Shot> {
    RadialIntegrator::default().shoot(space, mode, lambda, r_end)
}

/// [`RadialIntegrator::shoot_interval`] with default settings.
pub fn shoot_interval(space: &SpaceSpec, mode: OdeMode, lambda: f64, r_in: f64, r_out: f64) -> Result<Shot> {
    RadialIntegrator::default().shoot_interval(space, mode, lambda, r_in, r_out)
}

/// `linspace(a, b, n + 1)` with exact endpoints.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    g[n] = b;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch2() -> SpaceSpec {
        SpaceSpec::noncompact(2, 2).unwrap()
    }

    #[test]
    fn seed_matches_printed_leading_terms() {
        // 1 - lambda r^2 / (2 kn) with kn = 4, plus an O(r^4) correction
        let a = frobenius_coefficients(&ch2(), OdeMode::Radial, 5.0);
        assert!((a[1] + 5.0 / 8.0).abs() < 1e-15);
        let (v, _) = frobenius_seed(&ch2(), OdeMode::Radial, 5.0, 0.01).unwrap();
        assert!((v - 0.999_937_5).abs() < 1e-8, "{v}");
        let a = frobenius_coefficients(&ch2(), OdeMode::FirstHarmonic, 10.0);
        assert!((a[1] + 7.0 / 6.0).abs() < 1e-14, "{a:?}");
        let (v, d) = frobenius_seed(&ch2(), OdeMode::Radial, 0.0, 0.01).unwrap();
        assert_eq!((v, d), (1.0, 0.0));
    }

    #[test]
    fn compact_cubic_flips_geometric_part() {
        let c = SpaceSpec::compact(2, 2).unwrap();
        let a = frobenius_coefficients(&c, OdeMode::FirstHarmonic, 10.0);
        // -(-(2/3)kn - 2k + 8/3 + lambda) / (2kn + 4)
        assert!((a[1] + (-8.0 / 3.0 - 4.0 + 8.0 / 3.0 + 10.0) / 12.0).abs() < 1e-14);
    }

    #[test]
    fn seed_rejects_large_radius() {
        assert!(frobenius_seed(&ch2(), OdeMode::Radial, 1.0, 0.5).is_err());
    }

    #[test]
    fn zero_lambda_is_constant() {
        let s = shoot(&ch2(), OdeMode::Radial, 0.0, 1.0).unwrap();
        assert!((s.boundary_value - 1.0).abs() < 1e-12);
        assert_eq!(s.sign_changes, 0);
    }

    #[test]
    fn interval_zero_lambda_matches_quadrature() {
        let sp = ch2();
        let (r_in, r_out) = (0.5, 1.5);
        let s = shoot_interval(&sp, OdeMode::Radial, 0.0, r_in, r_out).unwrap();
        let j_in = sp.density_unchecked(r_in);
        let expect = crate::quad::integrate(|t| j_in / sp.density_unchecked(t), r_in, r_out, 1e-14, 1e-14);
        assert!((s.boundary_value - expect).abs() < 1e-9 * expect);
        assert!(shoot_interval(&sp, OdeMode::Radial, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn grid_recording_hits_nodes() {
        let grid = uniform_grid(1e-3, 1.0, 200);
        let s = RadialIntegrator::default()
            .shoot_on_grid(&ch2(), OdeMode::Radial, 20.0, &grid)
            .unwrap();
        assert_eq!(s.profile.grid, grid);
    }

    #[test]
    fn renormalization_keeps_sign_structure() {
        // Strongly negative lambda grows like exp(10 r): many rescalings.
        let s = shoot(&ch2(), OdeMode::Radial, -100.0, 12.0).unwrap();
        let max = s.profile.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max < 10.0 * RENORM_THRESHOLD, "{max}");
        assert!(s.profile.values.iter().all(|&v| v > 0.0));
        assert_eq!(s.sign_changes, 0);
    }

    #[test]
    fn hermite_reproduces_cubic() {
        let grid = vec![0.0, 0.5, 1.3, 2.0];
        let f = |x: f64| x * x * x - 2.0 * x;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let p = RadialProfile::new(
            grid.clone(),
            grid.iter().map(|&x| f(x)).collect(),
            grid.iter().map(|&x| df(x)).collect(),
            (0.0, 2.0),
        )
        .unwrap();
        for x in [0.1, 0.77, 1.9] {
            let (v, d) = p.eval(x);
            assert!((v - f(x)).abs() < 1e-12 && (d - df(x)).abs() < 1e-12);
        }
    }
}
