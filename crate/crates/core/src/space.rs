//! Closed-form radial geometry of the rank-one symmetric spaces.
//!
//! Everything here is a function of the geodesic distance `r` from a pole:
//! the volume density `J(r)`, the mean curvature `H(r) = J'(r)/J(r)` of the
//! geodesic sphere, its first nonzero eigenvalue `lambda_1(S_r) = -H'(r)`, and
//! the volume `A(r)` of the geodesic ball.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Noncompact,
    Compact,
}

/// Which rank-one symmetric space: field dimension `k`, rank parameter `n`,
/// and curvature type. The real dimension is `k * n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub k: u32,
    pub n: u32,
    pub curvature: Curvature,
}

impl SpaceSpec {
    pub fn new(k: u32, n: u32, curvature: Curvature) -> Result<Self> {
        if ![1, 2, 4, 8].contains(&k) {
            return domain(format!("field dimension k must be 1, 2, 4 or 8 (got {k})"));
        }
        if n < 2 {
            return domain(format!("rank parameter n must be at least 2 (got {n})"));
        }
        if k == 8 && n != 2 {
            return domain("the octonionic space only exists for n = 2");
        }
        Ok(Self { k, n, curvature })
    }

    pub fn noncompact(k: u32, n: u32) -> Result<Self> {
        Self::new(k, n, Curvature::Noncompact)
    }

    pub fn compact(k: u32, n: u32) -> Result<Self> {
        Self::new(k, n, Curvature::Compact)
    }

    /// Real dimension `k n`.
    pub fn dim(&self) -> u32 {
        self.k * self.n
    }

    pub fn is_compact(&self) -> bool {
        self.curvature == Curvature::Compact
    }

    /// `kn - 1`, the multiplicity of the curvature -1 (or +1) directions plus one.
    pub(crate) fn a(&self) -> f64 {
        f64::from(self.dim()) - 1.0
    }

    /// `k - 1`, the multiplicity of the curvature -4 (or +4) directions.
    pub(crate) fn b(&self) -> f64 {
        f64::from(self.k) - 1.0
    }

    /// Bottom of the spectrum of the whole space, `(kn + k - 2)^2 / 4`, for the
    /// noncompact type; zero otherwise.
    pub fn spectral_floor(&self) -> f64 {
        match self.curvature {
            Curvature::Noncompact => {
                let rho = f64::from(self.dim() + self.k) - 2.0;
                rho * rho / 4.0
            }
            Curvature::Compact => 0.0,
        }
    }

    /// Largest radius on which the radial formulas are defined.
    pub fn max_radius(&self) -> f64 {
        match self.curvature {
            Curvature::Noncompact => f64::INFINITY,
            Curvature::Compact => FRAC_PI_2,
        }
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        if !(r > 0.0) || !r.is_finite() {
            return domain(format!("radius must be positive and finite (got {r})"));
        }
        if self.is_compact() && r >= FRAC_PI_2 {
            return domain(format!("compact-type radius must be below pi/2 (got {r})"));
        }
        Ok(())
    }

    /// Surface area of the unit Euclidean sphere `S^{kn-1}`; fixes the
    /// normalization of [`ball_volume`].
    pub fn sphere_area(&self) -> f64 {
        unit_sphere_area(self.dim())
    }

    /// `(H(r), lambda_1(S_r))` without domain checks, for hot loops.
    #[inline]
    pub(crate) fn h_and_nu(&self, r: f64) -> (f64, f64) {
        let (a, b) = (self.a(), self.b());
        match self.curvature {
            Curvature::Noncompact => {
                let t = r.tanh();
                let s = r.sinh();
                let c = r.cosh();
                (a / t + b * t, a / (s * s) - b / (c * c))
            }
            Curvature::Compact => {
                let t = r.tan();
                let s = r.sin();
                let c = r.cos();
                (a / t - b * t, a / (s * s) + b / (c * c))
            }
        }
    }

    #[inline]
    pub(crate) fn nu_prime_unchecked(&self, r: f64) -> f64 {
        let (a, b) = (self.a(), self.b());
        match self.curvature {
            Curvature::Noncompact => {
                let s = r.sinh();
                let c = r.cosh();
                -2.0 * a * c / (s * s * s) + 2.0 * b * s / (c * c * c)
            }
            Curvature::Compact => {
                let s = r.sin();
                let c = r.cos();
                -2.0 * a * c / (s * s * s) + 2.0 * b * s / (c * c * c)
            }
        }
    }

    /// Second derivative of `lambda_1(S_r)`.
    #[inline]
    pub(crate) fn nu_second_unchecked(&self, r: f64) -> f64 {
        let (a, b) = (self.a(), self.b());
        match self.curvature {
            Curvature::Noncompact => {
                let cs2 = 1.0 / r.sinh().powi(2);
                let sc2 = 1.0 / r.cosh().powi(2);
                let ct = 1.0 / r.tanh();
                let t = r.tanh();
                2.0 * a * (cs2 * cs2 + 2.0 * ct * ct * cs2) + 2.0 * b * (sc2 * sc2 - 2.0 * t * t * sc2)
            }
            Curvature::Compact => {
                let cs2 = 1.0 / r.sin().powi(2);
                let sc2 = 1.0 / r.cos().powi(2);
                let ct = 1.0 / r.tan();
                let t = r.tan();
                2.0 * a * (cs2 * cs2 + 2.0 * ct * ct * cs2) + 2.0 * b * (sc2 * sc2 + 2.0 * t * t * sc2)
            }
        }
    }

    #[inline]
    pub(crate) fn density_unchecked(&self, r: f64) -> f64 {
        let (a, b) = (self.a() as i32, self.b() as i32);
        match self.curvature {
            Curvature::Noncompact => r.sinh().powi(a) * r.cosh().powi(b),
            Curvature::Compact => r.sin().powi(a) * r.cos().powi(b),
        }
    }

    /// Laurent coefficients at `r = 0`:
    /// `H = h[0]/r + h[1] r + h[2] r^3 + ...` and
    /// `lambda_1(S_r) = v[0]/r^2 + v[1] + v[2] r^2 + ...`.
    pub(crate) fn origin_series(&self) -> ([f64; 3], [f64; 3]) {
        let (a, b) = (self.a(), self.b());
        match self.curvature {
            // coth r = 1/r + r/3 - r^3/45, tanh r = r - r^3/3,
            // csch^2 r = 1/r^2 - 1/3 + r^2/15, sech^2 r = 1 - r^2.
            Curvature::Noncompact => (
                [a, a / 3.0 + b, -a / 45.0 - b / 3.0],
                [a, -a / 3.0 - b, a / 15.0 + b],
            ),
            // cot r = 1/r - r/3 - r^3/45, tan r = r + r^3/3,
            // csc^2 r = 1/r^2 + 1/3 + r^2/15, sec^2 r = 1 + r^2.
            Curvature::Compact => (
                [a, -a / 3.0 - b, -a / 45.0 - b / 3.0],
                [a, a / 3.0 + b, a / 15.0 + b],
            ),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = match self.k {
            1 => "R",
            2 => "C",
            4 => "H",
            _ => "O",
        };
        let kind = match self.curvature {
            Curvature::Noncompact => "H",
            Curvature::Compact => "P",
        };
        write!(f, "{field}{kind}^{}", self.n)
    }
}

/// Surface area of the unit sphere `S^{d-1}` in `R^d`: `2 pi^{d/2} / Gamma(d/2)`.
pub fn unit_sphere_area(d: u32) -> f64 {
    2.0 * PI.powf(f64::from(d) / 2.0) / gamma_half_integer(d)
}

/// `Gamma(d / 2)` for a positive integer `d`.
fn gamma_half_integer(d: u32) -> f64 {
    if d % 2 == 0 {
        (1..d / 2).map(f64::from).product()
    } else {
        // Gamma(m + 1/2) = sqrt(pi) (1/2)(3/2)...(m - 1/2)
        let m = (d - 1) / 2;
        PI.sqrt() * (0..m).map(|i| f64::from(i) + 0.5).product::<f64>()
    }
}

/// Volume density `J(r)` of geodesic polar coordinates.
pub fn volume_density(space: &SpaceSpec, r: f64) -> Result<f64> {
    space.check_radius(r)?;
    Ok(space.density_unchecked(r))
}

/// Mean curvature `H(r)` of the geodesic sphere of radius `r`.
pub fn mean_curvature(space: &SpaceSpec, r: f64) -> Result<f64> {
    space.check_radius(r)?;
    Ok(space.h_and_nu(r).0)
}

/// First nonzero eigenvalue `lambda_1(S_r)` of the geodesic sphere of radius `r`.
pub fn sphere_lambda1(space: &SpaceSpec, r: f64) -> Result<f64> {
    space.check_radius(r)?;
    Ok(space.h_and_nu(r).1)
}

/// Analytic derivative of [`sphere_lambda1`] in `r`.
pub fn sphere_lambda1_derivative(space: &SpaceSpec, r: f64) -> Result<f64> {
    space.check_radius(r)?;
    Ok(space.nu_prime_unchecked(r))
}

/// Volume of the geodesic ball of radius `r`,
/// `A(r) = |S^{kn-1}| * int_0^r J(t) dt`.
pub fn ball_volume(space: &SpaceSpec, r: f64) -> Result<f64> {
    space.check_radius(r)?;
    Ok(space.sphere_area() * density_integral(space, r))
}

/// `int_0^r J(t) dt`. Closed form when the cosine-type exponent `k - 1` is odd,
/// adaptive quadrature otherwise.
pub(crate) fn density_integral(space: &SpaceSpec, r: f64) -> f64 {
    let a = space.a() as i32;
    let b = space.k as i32 - 1;
    if b % 2 == 1 {
        // cosh^b = cosh (1 + sinh^2)^m, so the integrand is a polynomial in
        // sinh times d(sinh); same with sin/cos and (1 - sin^2)^m.
        let m = (b - 1) / 2;
        let (s, sign) = match space.curvature {
            Curvature::Noncompact => (r.sinh(), 1.0),
            Curvature::Compact => (r.sin(), -1.0),
        };
        let mut binom = 1.0;
        let mut total = 0.0;
        for j in 0..=m {
            let p = a + 2 * j + 1;
            total += binom * sign_pow(sign, j) * s.powi(p) / f64::from(p);
            binom = binom * f64::from(m - j) / f64::from(j + 1);
        }
        total
    } else {
        quad::integrate(|t| space.density_unchecked(t), 0.0, r, 1e-12, 1e-14)
    }
}

fn sign_pow(sign: f64, j: i32) -> f64 {
    if sign > 0.0 || j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Inverse of [`ball_volume`]: the radius whose ball has the given volume.
pub fn radius_for_volume(space: &SpaceSpec, volume: f64) -> Result<f64> {
    if !(volume > 0.0) || !volume.is_finite() {
        return domain(format!("volume must be positive and finite (got {volume})"));
    }
    let mut hi = 1.0_f64.min(0.5 * space.max_radius());
    while ball_volume(space, hi)? < volume {
        if space.is_compact() {
            let cap = 0.5 * (hi + space.max_radius());
            if cap - hi < 1e-12 {
                return domain("volume exceeds the compact-type radius window");
            }
            hi = cap;
        } else {
            hi *= 2.0;
            if hi > 700.0 {
                return domain("volume too large");
            }
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ball_volume(space, mid)? < volume {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch2() -> SpaceSpec {
        SpaceSpec::noncompact(2, 2).unwrap()
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(SpaceSpec::noncompact(3, 2).is_err());
        assert!(SpaceSpec::noncompact(2, 1).is_err());
        assert!(SpaceSpec::noncompact(8, 3).is_err());
        assert!(SpaceSpec::noncompact(8, 2).is_ok());
        assert!(SpaceSpec::noncompact(1, 5).is_ok());
    }

    #[test]
    fn domain_errors() {
        let s = ch2();
        assert!(volume_density(&s, 0.0).is_err());
        assert!(mean_curvature(&s, -1.0).is_err());
        let c = SpaceSpec::compact(2, 2).unwrap();
        assert!(sphere_lambda1(&c, FRAC_PI_2).is_err());
        assert!(sphere_lambda1(&c, 1.0).is_ok());
    }

    #[test]
    fn real_hyperbolic_reductions() {
        let s = SpaceSpec::noncompact(1, 2).unwrap();
        for r in [0.1, 0.7, 2.3] {
            assert!((volume_density(&s, r).unwrap() - r.sinh()).abs() < 1e-14 * r.sinh());
        }
        let s5 = SpaceSpec::noncompact(1, 5).unwrap();
        let r: f64 = 1.3;
        let h = mean_curvature(&s5, r).unwrap();
        assert!((h - 4.0 / r.tanh()).abs() < 1e-13);
    }

    #[test]
    fn reference_values() {
        let s = ch2();
        // sinh^3(1) cosh(1), 3 coth 1 + tanh 1, 3/sinh^2 1 - 1/cosh^2 1,
        // evaluated independently at 20 digits
        let j = volume_density(&s, 1.0).unwrap();
        assert!((j - 2.504_524_547_679_214).abs() < 1e-13, "{j}");
        let h = mean_curvature(&s, 1.0).unwrap();
        assert!((h - 4.700_700_012_453_759).abs() < 1e-13, "{h}");
        let nu = sphere_lambda1(&s, 1.0).unwrap();
        assert!((nu - 1.752_210_641_284_905).abs() < 1e-13, "{nu}");

        let c = SpaceSpec::compact(2, 2).unwrap();
        let j = volume_density(&c, std::f64::consts::FRAC_PI_4).unwrap();
        assert!((j - 0.25).abs() < 1e-15);
    }

    #[test]
    fn large_radius_limits() {
        let s = ch2();
        assert!((mean_curvature(&s, 30.0).unwrap() - 4.0).abs() < 1e-12);
        assert!(sphere_lambda1(&s, 30.0).unwrap() < 1e-20);
    }

    #[test]
    fn ball_volume_closed_forms() {
        let s = ch2();
        let v = ball_volume(&s, 1.0).unwrap();
        let expect = 2.0 * PI * PI * 1.0_f64.sinh().powi(4) / 4.0;
        assert!((v - expect).abs() < 1e-12 * expect);
        assert!((v - 9.412_8).abs() < 1e-3);

        let h2 = SpaceSpec::noncompact(1, 2).unwrap();
        for r in [0.01, 0.5, 2.0] {
            let v = ball_volume(&h2, r).unwrap();
            let expect = 2.0 * PI * (r.cosh() - 1.0);
            assert!((v - expect).abs() < 1e-10 * expect, "{r}: {v} vs {expect}");
        }
    }

    #[test]
    fn ball_volume_euclidean_limit() {
        for (k, n) in [(1, 2), (1, 3), (2, 2), (2, 3), (4, 2), (8, 2)] {
            let s = SpaceSpec::noncompact(k, n).unwrap();
            let d = s.dim();
            let r: f64 = 1e-3;
            let euclid = unit_sphere_area(d) * r.powi(d as i32) / f64::from(d);
            let ratio = ball_volume(&s, r).unwrap() / euclid;
            assert!((ratio - 1.0).abs() < 1e-5, "{s}: {ratio}");
        }
    }

    #[test]
    fn nu_derivatives_match_differences() {
        for space in [SpaceSpec::noncompact(4, 2).unwrap(), SpaceSpec::compact(2, 3).unwrap()] {
            for r in [0.3, 0.7] {
                let h = 1e-4;
                let fd1 = (space.h_and_nu(r + h).1 - space.h_and_nu(r - h).1) / (2.0 * h);
                let fd2 = (space.nu_prime_unchecked(r + h) - space.nu_prime_unchecked(r - h)) / (2.0 * h);
                assert!((fd1 - space.nu_prime_unchecked(r)).abs() < 1e-6 * fd1.abs().max(1.0));
                assert!((fd2 - space.nu_second_unchecked(r)).abs() < 1e-6 * fd2.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn radius_for_volume_inverts() {
        let s = SpaceSpec::noncompact(4, 2).unwrap();
        let v = ball_volume(&s, 1.7).unwrap();
        let r = radius_for_volume(&s, v).unwrap();
        assert!((r - 1.7).abs() < 1e-12);
    }

    #[test]
    fn origin_series_matches_functions() {
        for space in [
            SpaceSpec::noncompact(2, 3).unwrap(),
            SpaceSpec::compact(4, 2).unwrap(),
        ] {
            let (h, v) = space.origin_series();
            let r = 1e-2;
            let (hh, nn) = space.h_and_nu(r);
            let hs = h[0] / r + h[1] * r + h[2] * r.powi(3);
            let vs = v[0] / (r * r) + v[1] + v[2] * r * r;
            assert!((hh - hs).abs() < 1e-8, "{space}: {hh} {hs}");
            assert!((nn - vs).abs() < 1e-6, "{space}: {nn} {vs}");
        }
    }
}
