//! Truncated power series in `r` with exact big-rational coefficients.
//!
//! A series of order `N` stores the coefficients of `r^0 .. r^N`; every ring
//! operation truncates to the smaller order of its operands.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hyper::HypExpr;

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        Self { coeffs }
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// `r^j`.
    pub fn monomial(j: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if j <= order {
            s.coeffs[j] = BigRational::one();
        }
        s
    }

    /// `sinh(m r)` (odd powers `m^k / k!`).
    pub fn sinh(m: i64, order: usize) -> Self {
        Self::exp_like(m, order, 1)
    }

    /// `cosh(m r)`.
    pub fn cosh(m: i64, order: usize) -> Self {
        Self::exp_like(m, order, 0)
    }

    fn exp_like(m: i64, order: usize, parity: usize) -> Self {
        let mut s = Self::zero(order);
        let mut term = BigRational::one(); // m^k / k!
        for k in 0..=order {
            if k > 0 {
                term = term * BigInt::from(m) / BigInt::from(k);
            }
            if k % 2 == parity {
                s.coeffs[k] = term.clone();
            }
        }
        s
    }

    /// `sinh(r) / r`.
    pub fn sinhc(order: usize) -> Self {
        Self::sinh(1, order + 1).shift_down(1)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> BigRational {
        self.coeffs.get(j).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, BigRational::zero());
        Self { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..=n).map(|j| &self.coeffs[j] + &other.coeffs[j]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    /// Multiply by `r^j`, keeping the order.
    pub fn shift(&self, j: usize) -> Self {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            if i + j <= n {
                out[i + j] = self.coeffs[i].clone();
            }
        }
        Self { coeffs: out }
    }

    /// Divide by `r^j`; the order drops by `j`. The discarded low
    /// coefficients must vanish.
    fn shift_down(&self, j: usize) -> Self {
        debug_assert!(self.coeffs[..j].iter().all(Zero::is_zero));
        Self { coeffs: self.coeffs[j..].to_vec() }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain("series inverse needs a nonzero constant term".into()));
        }
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = c0.recip();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -acc / c0;
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power (negative powers through the inverse).
    pub fn powi(&self, p: i32) -> Result<Self> {
        let base = if p < 0 { self.inverse()? } else { self.clone() };
        let mut e = p.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self { coeffs: (1..=self.order()).map(|j| &self.coeffs[j] * BigInt::from(j)).collect() }
    }

    /// Index of the first strictly negative coefficient.
    pub fn first_negative(&self) -> Option<usize> {
        self.coeffs.iter().position(Signed::is_negative)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval_f64(&self, r: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Taylor series at `r = 0` of a sum of monomials `r^a sinh^b cosh^g`,
    /// to the given order. Negative powers are allowed term by term as long
    /// as the sum is analytic at the origin; otherwise an error names the
    /// offending power.
    pub fn from_hyp(expr: &HypExpr, order: usize) -> Result<Self> {
        if expr.is_zero() {
            return Ok(Self::zero(order));
        }
        // sinh^b r = r^b (sinh r / r)^b, so each monomial is r^(a+b) times a unit.
        let low = expr.terms().map(|(&(a, b, _), _)| a + b).min().unwrap_or(0);
        let lift = usize::try_from(-low.min(0)).unwrap_or(0);
        let work = order + lift;
        let sc = Self::sinhc(work);
        let ch = Self::cosh(1, work);
        let mut acc = Self::zero(work);
        for (&(a, b, g), c) in expr.terms() {
            let shift = usize::try_from(a + b - low).expect("shift is nonnegative by construction");
            let unit = sc.powi(b)?.mul(&ch.powi(g)?);
            acc = acc.add(&unit.scale(c).shift(shift));
        }
        // acc = r^(-low) * expr when low < 0, or expr / r^low otherwise
        if low < 0 {
            if let Some(j) = acc.coeffs[..lift].iter().position(|c| !c.is_zero()) {
                return Err(Error::Domain(format!(
                    "expression has a pole of order {} at r = 0",
                    lift - j
                )));
            }
            Ok(acc.shift_down(lift))
        } else {
            Ok(acc.truncate(order).shift(low as usize))
        }
    }
}

impl Serialize for RationalSeries {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.coeffs.iter().map(ToString::to_string))
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c}) r")?,
                _ => write!(f, "({c}) r^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(r^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::rat;

    #[test]
    fn sinh_squared_identity() {
        // cosh^2 - sinh^2 = 1
        let n = 20;
        let s = RationalSeries::sinh(1, n);
        let c = RationalSeries::cosh(1, n);
        assert_eq!(c.mul(&c).sub(&s.mul(&s)), RationalSeries::one(n));
        // sinh 2r = 2 sinh r cosh r
        assert_eq!(RationalSeries::sinh(2, n), s.mul(&c).scale(&rat(2, 1)));
    }

    #[test]
    fn inverse_round_trip() {
        let c = RationalSeries::cosh(3, 25);
        assert_eq!(c.mul(&c.inverse().unwrap()), RationalSeries::one(25));
        assert!(RationalSeries::sinh(1, 5).inverse().is_err());
    }

    #[test]
    fn coth_minus_inverse_is_analytic() {
        // r cosh/sinh - 1 = r^2/3 - r^4/45 + ...
        let e = &HypExpr::mono(1, 1, 1, -1, 1) + &HypExpr::mono(-1, 1, 0, 0, 0);
        let s = RationalSeries::from_hyp(&e, 6).unwrap();
        assert_eq!(s.coeff(0), rat(0, 1));
        assert_eq!(s.coeff(2), rat(1, 3));
        assert_eq!(s.coeff(4), rat(-1, 45));
        // coth itself has a pole
        assert!(RationalSeries::from_hyp(&HypExpr::mono(1, 1, 0, -1, 1), 6).is_err());
    }
}
