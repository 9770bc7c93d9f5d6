//! Dirichlet eigenvalues of geodesic balls and annuli by shooting.
//!
//! Each eigenvalue is located in two stages: bisection on the Sturm count
//! (number of zeros of the shot solution on `(r_0, R]`) until the bracket holds
//! exactly one eigenvalue, then Brent's method on the boundary value.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::oracle;
use crate::radial::{uniform_grid, IntegratorConfig, OdeMode, RadialIntegrator, RadialProfile, Shot};
use crate::roots;
use crate::space::SpaceSpec;

/// Default relative eigenvalue tolerance.
pub const EIG_TOL: f64 = 1e-12;
/// Eigenvalue and integrator tolerances used when eigenfunctions are stored:
/// absolute errors in `g1` are amplified by `1 / g1` in quotients like
/// `g2 / g1` near `R`.
pub const PROFILE_EIG_TOL: f64 = 1e-15;
pub const PROFILE_ODE_TOL: f64 = 1e-13;
/// Default number of grid intervals for stored eigenfunction profiles.
pub const PROFILE_INTERVALS: usize = 2000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallSpectrum {
    pub space: SpaceSpec,
    pub radius: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda02: f64,
    /// Ground state, normalized by `g1(0) = 1`.
    pub g1: RadialProfile,
    /// Radial part of the second eigenfunction, normalized by `g2'(0) = 1`.
    pub g2: RadialProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lambda2Source {
    RadialSecond,
    FirstHarmonicFirst,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnulusSpectrum {
    pub space: SpaceSpec,
    pub r_in: f64,
    pub r_out: f64,
    pub lambda1: f64,
    pub lambda2_candidate: f64,
    pub lambda2_source: Lambda2Source,
    pub lambda_radial_second: f64,
    pub lambda_harmonic_first: f64,
    /// Positive ground state with `u1'(r_in) = 1`.
    pub u1: RadialProfile,
}

/// Eigenvalue solver bundling integrator settings and the target tolerance.
#[derive(Debug, Clone, Copy)]
pub struct EigenSolver {
    pub integrator: RadialIntegrator,
    /// Relative tolerance: iterations stop once the bracket is below `tol * max(1, lambda)`.
    pub tol: f64,
}

impl Default for EigenSolver {
    fn default() -> Self {
        Self { integrator: RadialIntegrator::default(), tol: EIG_TOL }
    }
}

/// `index`-th eigenvalue (1-based) of the problem whose Sturm count and
/// boundary value at trial `lambda` are given by `shot`.
fn nth_eigenvalue<F>(shot: F, index: usize, guess: f64, floor: f64, tol: f64, what: &str) -> Result<f64>
where
    F: Fn(f64) -> Result<Shot>,
{
    let count = |lambda: f64| -> Result<usize> { Ok(shot(lambda)?.crossings) };

    // Bracket [lo, hi] with count(lo) < index <= count(hi), starting from the
    // guess scaled by [1/4, 4] above the floor.
    let excess = (guess - floor).max(1e-8);
    let mut lo = floor + 0.25 * excess;
    let mut hi = floor + 4.0 * excess;
    while count(lo)? >= index {
        if lo <= floor.max(0.0) + 1e-300 {
            return Err(Error::BracketNotFound { what: what.into(), last_lambda: lo });
        }
        hi = lo;
        lo = floor.max(0.0) + 0.25 * (lo - floor.max(0.0));
        if lo - floor.max(0.0) < 1e-12 * excess {
            lo = floor.max(0.0);
        }
    }
    let mut expansions = 0;
    while count(hi)? < index {
        lo = hi;
        hi = floor + 4.0 * (hi - floor);
        expansions += 1;
        if expansions > 40 || !hi.is_finite() {
            return Err(Error::BracketNotFound { what: what.into(), last_lambda: hi });
        }
    }

    // Narrow until the bracket isolates exactly this eigenvalue.
    let mut c_lo = count(lo)?;
    let mut c_hi = count(hi)?;
    let mut iter = 0;
    while !(c_lo == index - 1 && c_hi == index) {
        let mid = 0.5 * (lo + hi);
        let c = count(mid)?;
        if c >= index {
            hi = mid;
            c_hi = c;
        } else {
            lo = mid;
            c_lo = c;
        }
        iter += 1;
        if iter > 200 || hi - lo < tol * hi.abs().max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
    }

    let f_lo = shot(lo)?.boundary_value;
    let f_hi = shot(hi)?.boundary_value;
    let xtol = tol * hi.abs().max(1.0);
    roots::brent(|l| Ok(shot(l)?.boundary_value), lo, hi, f_lo, f_hi, xtol, 0.0)
}

impl EigenSolver {
    pub fn new(tol: f64, ode_tol: f64) -> Self {
        Self { integrator: RadialIntegrator::new(IntegratorConfig::with_tol(ode_tol)), tol }
    }

    fn check_tol(&self) -> Result<()> {
        if !(self.tol >= 1e-15) || !self.tol.is_finite() {
            return domain(format!("tolerance must be at least 1e-15 (got {})", self.tol));
        }
        Ok(())
    }

    fn euclid_guess(space: &SpaceSpec, mode: OdeMode, index: usize, radius: f64) -> Result<f64> {
        let j = oracle::euclidean_zero(space, mode, index)?;
        Ok(space.spectral_floor() + j * j / (radius * radius))
    }

    /// `index`-th Dirichlet eigenvalue of the ball in the given mode family.
    pub fn ball_eigenvalue(&self, space: &SpaceSpec, mode: OdeMode, index: usize, radius: f64) -> Result<f64> {
        self.check_tol()?;
        space.check_radius(radius)?;
        let guess = Self::euclid_guess(space, mode, index, radius)?;
        let what = format!("{mode:?} eigenvalue #{index} of the ball of radius {radius} in {space}");
        nth_eigenvalue(
            |l| self.integrator.shoot(space, mode, l, radius),
            index,
            guess,
            space.spectral_floor(),
            self.tol,
            &what,
        )
    }

    pub fn lambda1_ball(&self, space: &SpaceSpec, radius: f64) -> Result<f64> {
        self.ball_eigenvalue(space, OdeMode::Radial, 1, radius)
    }

    pub fn lambda2_ball(&self, space: &SpaceSpec, radius: f64) -> Result<f64> {
        self.ball_eigenvalue(space, OdeMode::FirstHarmonic, 1, radius)
    }

    pub fn lambda02_ball(&self, space: &SpaceSpec, radius: f64) -> Result<f64> {
        self.ball_eigenvalue(space, OdeMode::Radial, 2, radius)
    }

    /// Radius of the ball whose first eigenvalue equals `target`, to `|Δλ| < tol`.
    pub fn radius_for_lambda1(&self, space: &SpaceSpec, target: f64, tol: f64) -> Result<f64> {
        let floor = space.spectral_floor();
        if !target.is_finite() || target <= floor + tol {
            return Err(Error::TargetBelowSpectrum { target, floor });
        }
        let inner = EigenSolver { tol: self.tol.min(0.01 * tol / target.max(1.0)).max(1e-15), ..*self };
        let lam = |r: f64| inner.lambda1_ball(space, r);
        let j = oracle::euclidean_zero(space, OdeMode::Radial, 1)?;
        let r_max = if space.is_compact() { std::f64::consts::FRAC_PI_4 } else { 200.0 };
        let guess = (j / (target - floor).sqrt()).min(0.5 * r_max);

        let (mut lo, mut hi) = (0.5 * guess, (2.0 * guess).min(r_max));
        while lam(lo)? < target {
            lo *= 0.5;
            if lo < 1e-8 {
                return domain("target eigenvalue requires an implausibly small radius");
            }
        }
        let mut f_hi = lam(hi)? - target;
        while f_hi > 0.0 {
            if hi >= r_max {
                return domain(format!(
                    "target {target} needs a radius beyond the admissible window (0, {r_max}]"
                ));
            }
            lo = hi;
            hi = (2.0 * hi).min(r_max);
            f_hi = lam(hi)? - target;
        }
        let f_lo = lam(lo)? - target;
        roots::brent(|r| Ok(lam(r)? - target), lo, hi, f_lo, f_hi, 1e-14 * hi, 0.1 * tol)
    }

    /// Eigenvalues and eigenfunctions of the ball, profiles on a shared
    /// uniform grid of `intervals` steps starting at the seed radius.
    pub fn ball_spectrum(&self, space: &SpaceSpec, radius: f64, intervals: usize) -> Result<BallSpectrum> {
        if intervals < 4 {
            return domain("need at least 4 grid intervals");
        }
        let mut config = self.integrator.config;
        config.tol = config.tol.min(PROFILE_ODE_TOL);
        let tight = EigenSolver { tol: self.tol.min(PROFILE_EIG_TOL), integrator: RadialIntegrator::new(config) };
        let lambda1 = tight.lambda1_ball(space, radius)?;
        let lambda2 = tight.lambda2_ball(space, radius)?;
        let lambda02 = self.lambda02_ball(space, radius)?;
        let r0 = self.integrator.config.seed_for(radius);
        let grid = uniform_grid(r0, radius, intervals);
        let mut g1 = tight.integrator.shoot_on_grid(space, OdeMode::Radial, lambda1, &grid)?.profile;
        let mut g2 = tight.integrator.shoot_on_grid(space, OdeMode::FirstHarmonic, lambda2, &grid)?.profile;
        pin_endpoint(&mut g1);
        pin_endpoint(&mut g2);
        Ok(BallSpectrum { space: *space, radius, lambda1, lambda2, lambda02, g1, g2 })
    }

    /// Spectrum of the annulus `r_in < r < r_out` restricted to the radial and
    /// first-harmonic families.
    pub fn annulus_spectrum(&self, space: &SpaceSpec, r_in: f64, r_out: f64) -> Result<AnnulusSpectrum> {
        self.check_tol()?;
        if !(r_in > 0.0) || !(r_out > r_in) {
            return domain(format!("need 0 < r_in < r_out (got {r_in}, {r_out})"));
        }
        space.check_radius(r_out)?;
        let floor = space.spectral_floor();
        let width = r_out - r_in;
        let eig = |mode: OdeMode, index: usize| -> Result<f64> {
            // The smaller of the thin-shell and full-ball scales is a safe start.
            let shell = floor + (index as f64 * std::f64::consts::PI / width).powi(2);
            let ball = Self::euclid_guess(space, mode, index, r_out)?;
            let what = format!("{mode:?} eigenvalue #{index} of the annulus ({r_in}, {r_out}) in {space}");
            nth_eigenvalue(
                |l| self.integrator.shoot_interval(space, mode, l, r_in, r_out),
                index,
                shell.min(ball),
                floor,
                self.tol,
                &what,
            )
        };
        let lambda1 = eig(OdeMode::Radial, 1)?;
        let lambda_radial_second = eig(OdeMode::Radial, 2)?;
        let lambda_harmonic_first = eig(OdeMode::FirstHarmonic, 1)?;
        if lambda_harmonic_first <= lambda1 {
            return Err(Error::Degenerate(format!(
                "first-harmonic minimum {lambda_harmonic_first} does not exceed the radial ground state {lambda1}"
            )));
        }
        let (lambda2_candidate, lambda2_source) = if lambda_radial_second <= lambda_harmonic_first {
            (lambda_radial_second, Lambda2Source::RadialSecond)
        } else {
            (lambda_harmonic_first, Lambda2Source::FirstHarmonicFirst)
        };
        let grid = annulus_grid(r_in, r_out, PROFILE_INTERVALS);
        let mut u1 = self.integrator.shoot_interval_on_grid(space, OdeMode::Radial, lambda1, &grid)?.profile;
        pin_endpoint(&mut u1);
        u1.values[0] = 0.0;
        Ok(AnnulusSpectrum {
            space: *space,
            r_in,
            r_out,
            lambda1,
            lambda2_candidate,
            lambda2_source,
            lambda_radial_second,
            lambda_harmonic_first,
            u1,
        })
    }
}

/// Profile grid for an annulus. With a small hole the ground state rises
/// from zero over a layer of width `O(r_in)`, far below a uniform spacing,
/// so the nodes are then graded quadratically toward `r_in`.
pub fn annulus_grid(r_in: f64, r_out: f64, intervals: usize) -> Vec<f64> {
    let width = r_out - r_in;
    if r_in >= 0.1 * width {
        return uniform_grid(r_in, r_out, intervals);
    }
    let mut g: Vec<f64> = (0..=intervals)
        .map(|i| {
            let s = i as f64 / intervals as f64;
            r_in + width * s * s
        })
        .collect();
    g[intervals] = r_out;
    g
}

/// Replace the boundary value at the outer end, which is zero up to solver
/// tolerance, by an exact zero.
fn pin_endpoint(p: &mut RadialProfile) {
    if let Some(last) = p.values.last_mut() {
        *last = 0.0;
    }
}

pub fn lambda1_ball(space: &SpaceSpec, radius: f64, tol: f64) -> Result<f64> {
    EigenSolver { tol, ..Default::default() }.lambda1_ball(space, radius)
}

pub fn lambda2_ball(space: &SpaceSpec, radius: f64, tol: f64) -> Result<f64> {
    EigenSolver { tol, ..Default::default() }.lambda2_ball(space, radius)
}

pub fn lambda02_ball(space: &SpaceSpec, radius: f64, tol: f64) -> Result<f64> {
    EigenSolver { tol, ..Default::default() }.lambda02_ball(space, radius)
}

pub fn radius_for_lambda1(space: &SpaceSpec, target: f64, tol: f64) -> Result<f64> {
    EigenSolver::default().radius_for_lambda1(space, target, tol)
}

pub fn ball_spectrum(space: &SpaceSpec, radius: f64) -> Result<BallSpectrum> {
    EigenSolver::default().ball_spectrum(space, radius, PROFILE_INTERVALS)
}

pub fn annulus_spectrum(space: &SpaceSpec, r_in: f64, r_out: f64, tol: f64) -> Result<AnnulusSpectrum> {
    EigenSolver { tol, ..Default::default() }.annulus_spectrum(space, r_in, r_out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch2() -> SpaceSpec {
        SpaceSpec::noncompact(2, 2).unwrap()
    }

    #[test]
    fn first_eigenfunction_has_no_interior_zero() {
        let s = ch2();
        let l1 = lambda1_ball(&s, 1.0, 1e-12).unwrap();
        let shot = crate::radial::shoot(&s, OdeMode::Radial, l1, 1.0).unwrap();
        assert!(shot.boundary_value.abs() < 1e-9, "{}", shot.boundary_value);
        assert_eq!(shot.sign_changes, 0);
    }

    #[test]
    fn ordering_and_monotonicity() {
        let s = ch2();
        let l1 = lambda1_ball(&s, 1.0, 1e-12).unwrap();
        let l2 = lambda2_ball(&s, 1.0, 1e-12).unwrap();
        let l02 = lambda02_ball(&s, 1.0, 1e-12).unwrap();
        assert!(0.0 < l1 && l1 < l2 && l2 < l02, "{l1} {l2} {l02}");
        assert!(lambda1_ball(&s, 2.0, 1e-12).unwrap() < l1);
    }

    #[test]
    fn second_radial_mode_has_one_node() {
        let s = ch2();
        let l02 = lambda02_ball(&s, 1.0, 1e-12).unwrap();
        let shot = crate::radial::shoot(&s, OdeMode::Radial, l02, 1.0).unwrap();
        assert_eq!(shot.sign_changes, 1);
    }

    #[test]
    fn radius_inverse_and_floor() {
        let s = ch2();
        let l = lambda1_ball(&s, 1.3, 1e-13).unwrap();
        let r = radius_for_lambda1(&s, l, 1e-10).unwrap();
        assert!((r - 1.3).abs() < 1e-7, "{r}");
        assert!(matches!(radius_for_lambda1(&s, 4.0, 1e-10), Err(Error::TargetBelowSpectrum { .. })));
    }

    #[test]
    fn tiny_tolerance_rejected() {
        assert!(lambda1_ball(&ch2(), 1.0, 0.0).is_err());
    }
}
