//! Independent reference computations used to cross-check the shooting
//! solver: Bessel-function zeros (the small-radius Euclidean limit) and a
//! finite-volume discretization of the weighted radial problem.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::quad;
use crate::radial::OdeMode;
use crate::roots;
use crate::space::SpaceSpec;

/// `J_nu(x)` for `nu = nu2 / 2`, a nonnegative integer or half-integer.
///
/// Integer orders use Bessel's integral `(1/pi) int_0^pi cos(n t - x sin t) dt`;
/// half-integer orders use the spherical Bessel functions built from
/// `sin x / x` by upward recurrence.
pub fn bessel_j(nu2: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if nu2 == 0 { 1.0 } else { 0.0 };
    }
    if nu2 % 2 == 0 {
        let n = f64::from(nu2 / 2);
        quad::integrate(|t| (n * t - x * t.sin()).cos(), 0.0, PI, 1e-16, 1e-15) / PI
    } else {
        let l = (nu2 - 1) / 2;
        let mut jm = x.sin() / x;
        if l == 0 {
            return (2.0 * x / PI).sqrt() * jm;
        }
        let mut j = x.sin() / (x * x) - x.cos() / x;
        for i in 1..l {
            let next = f64::from(2 * i + 1) / x * j - jm;
            jm = j;
            j = next;
        }
        (2.0 * x / PI).sqrt() * j
    }
}

/// Ascending series `sum_m (-x^2/4)^m / (m! (nu+1)_m)`, i.e. `J_nu(x)`
/// divided by `(x/2)^nu / Gamma(nu + 1)`. Accurate for moderate `x` only.
pub fn bessel_j_scaled_series(nu: f64, x: f64) -> f64 {
    let z = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200 {
        let m = f64::from(m);
        term *= z / (m * (nu + m));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// The `index`-th positive zero (1-based) of `J_{nu2 / 2}`.
pub fn bessel_zero(nu2: u32, index: usize) -> Result<f64> {
    if index == 0 {
        return domain("zero index is 1-based");
    }
    let nu = f64::from(nu2) / 2.0;
    // No positive zero lies below nu; scan in steps well under the zero spacing (~pi).
    let start = nu.max(0.5);
    let step = 0.05;
    let mut x0 = start;
    let mut f0 = bessel_j(nu2, x0);
    let mut found = 0;
    for i in 1..200_000 {
        let x1 = start + step * f64::from(i);
        let f1 = bessel_j(nu2, x1);
        if f0.signum() != f1.signum() && f0 != 0.0 {
            found += 1;
            if found == index {
                return roots::brent(|x| Ok(bessel_j(nu2, x)), x0, x1, f0, f1, 1e-15, 0.0);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    domain("bessel zero scan exhausted")
}

/// Euclidean-limit eigenvalue scale `j^2` for the given mode and root index
/// (1-based) in real dimension `d = kn`: order `d/2 - 1` for the radial family,
/// `d/2` for the first spherical harmonic.
pub fn euclidean_zero(space: &SpaceSpec, mode: OdeMode, index: usize) -> Result<f64> {
    let d = space.dim();
    let nu2 = match mode {
        OdeMode::Radial => d - 2,
        OdeMode::FirstHarmonic => d,
    };
    bessel_zero(nu2, index)
}

/// Symmetric tridiagonal matrix as diagonal and off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / q };
            q = self.diag[i] - x - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut rad = 0.0;
            if i > 0 {
                rad += self.off[i - 1].abs();
            }
            if i + 1 < n {
                rad += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        (lo, hi)
    }

    /// `index`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
    fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Finite-volume discretization of `-(J g')' + nu J g = lambda J g` on
/// `(0, R)` with `g(R) = 0`, on `nodes` uniform intervals. Cell masses and
/// potential integrals are computed by adaptive quadrature; fluxes use `J` at
/// cell faces. The generalized problem is symmetrized by the diagonal mass.
fn assemble(space: &SpaceSpec, mode: OdeMode, radius: f64, nodes: usize) -> Tridiagonal {
    let h = radius / nodes as f64;
    let first = match mode {
        OdeMode::Radial => 0,
        // the harmonic solution vanishes at the pole like r
        OdeMode::FirstHarmonic => 1,
    };
    let dens = |t: f64| if t <= 0.0 { 0.0 } else { space.density_unchecked(t) };
    let mut k_diag = Vec::with_capacity(nodes);
    let mut k_off = Vec::with_capacity(nodes);
    let mut mass = Vec::with_capacity(nodes);
    for i in first..nodes {
        let r = i as f64 * h;
        let left = (r - 0.5 * h).max(0.0);
        let right = r + 0.5 * h;
        let m = quad::integrate(dens, left, right, 0.0, 1e-13);
        let pot = match mode {
            OdeMode::Radial => 0.0,
            OdeMode::FirstHarmonic => quad::integrate(
                |t| {
                    let (_, nu) = space.h_and_nu(t);
                    nu * dens(t)
                },
                left,
                right,
                0.0,
                1e-13,
            ),
        };
        let j_left = if i == 0 { 0.0 } else { dens(r - 0.5 * h) };
        let j_right = dens(right);
        k_diag.push((j_left + j_right) / h + pot);
        k_off.push(-j_right / h);
        mass.push(m);
    }
    let n = mass.len();
    let diag = (0..n).map(|i| k_diag[i] / mass[i]).collect();
    let off = (0..n.saturating_sub(1))
        .map(|i| k_off[i] / (mass[i] * mass[i + 1]).sqrt())
        .collect();
    Tridiagonal { diag, off }
}

/// `index`-th (1-based) finite-volume eigenvalue on `nodes` intervals.
pub fn fd_eigenvalue(space: &SpaceSpec, mode: OdeMode, radius: f64, nodes: usize, index: usize) -> Result<f64> {
    space.check_radius(radius)?;
    if index == 0 || nodes < 8 {
        return domain("need a 1-based index and at least 8 intervals");
    }
    Ok(assemble(space, mode, radius, nodes).eigenvalue(index - 1))
}

/// Second-order Richardson extrapolation of [`fd_eigenvalue`] from `nodes`
/// and `nodes / 2` intervals.
pub fn fd_eigenvalue_extrapolated(
    space: &SpaceSpec,
    mode: OdeMode,
    radius: f64,
    nodes: usize,
    index: usize,
) -> Result<f64> {
    let fine = fd_eigenvalue(space, mode, radius, nodes, index)?;
    let coarse = fd_eigenvalue(space, mode, radius, nodes / 2, index)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_zeros() {
        let cases = [
            (0, 1, 2.404_825_557_695_773),
            (2, 1, 3.831_705_970_207_512),
            (2, 2, 7.015_586_669_815_619),
            (4, 1, 5.135_622_301_840_683),
            (1, 1, PI),
            (3, 1, 4.493_409_457_909_064),
        ];
        for (nu2, idx, expect) in cases {
            let z = bessel_zero(nu2, idx).unwrap();
            assert!((z - expect).abs() < 1e-11, "nu2={nu2} idx={idx}: {z}");
        }
    }

    #[test]
    fn integral_and_series_agree() {
        for nu2 in [0u32, 2, 6] {
            let nu = f64::from(nu2) / 2.0;
            for x in [0.3, 2.0, 5.5] {
                let gamma: f64 = (1..=nu2 / 2).map(f64::from).product();
                let series = bessel_j_scaled_series(nu, x) * (x / 2.0).powf(nu) / gamma;
                assert!((bessel_j(nu2, x) - series).abs() < 1e-12, "{nu2} {x}");
            }
        }
    }

    #[test]
    fn fd_converges_on_hyperbolic_plane() {
        let s = SpaceSpec::noncompact(1, 2).unwrap();
        let a = fd_eigenvalue(&s, OdeMode::Radial, 1.0, 500, 1).unwrap();
        let b = fd_eigenvalue(&s, OdeMode::Radial, 1.0, 1000, 1).unwrap();
        let c = fd_eigenvalue_extrapolated(&s, OdeMode::Radial, 1.0, 1000, 1).unwrap();
        assert!((a - c).abs() > 3.0 * (b - c).abs());
    }
}
