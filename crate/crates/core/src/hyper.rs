//! Exact symbolic sums of monomials `c r^a sinh^b(r) cosh^g(r)` with integer
//! (possibly negative) exponents and rational coefficients.
//!
//! This is just enough algebra to write down the catalog functions, take
//! their derivatives exactly, form cross products, and hand the result to
//! the power-series engine.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exponents `(a, b, g)` of `r^a sinh^b r cosh^g r`.
pub type Monomial = (i32, i32, i32);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HypExpr {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl HypExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, (0, 0, 0))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.push(c, m);
        e
    }

    /// `n/d r^a sinh^b cosh^g`.
    pub fn mono(n: i64, d: i64, a: i32, b: i32, g: i32) -> Self {
        Self::term(rat(n, d), (a, b, g))
    }

    fn push(&mut self, c: BigRational, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.push(v * c, *m);
        }
        out
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&rat(c, 1))
    }

    /// Exact derivative in `r`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b, g), c) in &self.terms {
            if a != 0 {
                out.push(c * BigInt::from(a), (a - 1, b, g));
            }
            if b != 0 {
                out.push(c * BigInt::from(b), (a, b - 1, g + 1));
            }
            if g != 0 {
                out.push(c * BigInt::from(g), (a, b + 1, g - 1));
            }
        }
        out
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.compile().eval(r)
    }

    /// Floating-point copy for repeated evaluation.
    pub fn compile(&self) -> CompiledExpr {
        CompiledExpr {
            terms: self.terms.iter().map(|(&m, k)| (k.to_f64().unwrap_or(f64::NAN), m)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledExpr {
    terms: Vec<(f64, Monomial)>,
}

impl CompiledExpr {
    pub fn eval(&self, r: f64) -> f64 {
        let (s, c) = (r.sinh(), r.cosh());
        self.terms.iter().map(|&(k, (a, b, g))| k * r.powi(a) * s.powi(b) * c.powi(g)).sum()
    }
}

impl Add for &HypExpr {
    type Output = HypExpr;
    fn add(self, rhs: &HypExpr) -> HypExpr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.push(c.clone(), *m);
        }
        out
    }
}

impl Sub for &HypExpr {
    type Output = HypExpr;
    fn sub(self, rhs: &HypExpr) -> HypExpr {
        self + &(-rhs)
    }
}

impl Neg for &HypExpr {
    type Output = HypExpr;
    fn neg(self) -> HypExpr {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &HypExpr {
    type Output = HypExpr;
    fn mul(self, rhs: &HypExpr) -> HypExpr {
        let mut out = HypExpr::zero();
        for (&(a1, b1, g1), c1) in &self.terms {
            for (&(a2, b2, g2), c2) in &rhs.terms {
                out.push(c1 * c2, (a1 + a2, b1 + b2, g1 + g2));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for HypExpr {
            type Output = HypExpr;
            fn $f(self, rhs: HypExpr) -> HypExpr {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for HypExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(a, b, g), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (name, p) in [("r", a), ("sinh(r)", b), ("cosh(r)", g)] {
                if p != 0 {
                    write!(f, "*{name}^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// A function together with its exact first and second derivatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jet {
    pub value: HypExpr,
    pub d1: HypExpr,
    pub d2: HypExpr,
}

impl Jet {
    pub fn new(value: HypExpr) -> Self {
        let d1 = value.derivative();
        let d2 = d1.derivative();
        Self { value, d1, d2 }
    }

    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        (self.value.eval(r), self.d1.eval(r), self.d2.eval(r))
    }

    pub fn compile(&self) -> [CompiledExpr; 3] {
        [self.value.compile(), self.d1.compile(), self.d2.compile()]
    }

    /// `u x v = u' v'' - u'' v'` as an exact expression.
    pub fn cross(&self, other: &Jet) -> HypExpr {
        &(&self.d1 * &other.d2) - &(&self.d2 * &other.d1)
    }

    /// Linear combination `sum c_i jet_i` with exact rational weights.
    pub fn combine(parts: &[(BigRational, &Jet)]) -> Jet {
        let mut value = HypExpr::zero();
        let mut d1 = HypExpr::zero();
        let mut d2 = HypExpr::zero();
        for (c, j) in parts {
            value = &value + &j.value.scale(c);
            d1 = &d1 + &j.d1.scale(c);
            d2 = &d2 + &j.d2.scale(c);
        }
        Jet { value, d1, d2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_coth_squared() {
        // -coth^2 = -cosh^2 sinh^-2 ; derivative 2 coth csch^2
        let e = HypExpr::mono(-1, 1, 0, -2, 2);
        let d = e.derivative();
        for r in [0.3f64, 1.0, 2.5] {
            let expect = 2.0 * r.cosh() / r.sinh().powi(3);
            assert!((d.eval(r) - expect).abs() < 1e-12 * expect.abs());
        }
    }

    #[test]
    fn product_and_like_terms() {
        let s = HypExpr::mono(1, 1, 0, 1, 0);
        let inv = HypExpr::mono(1, 1, 0, -1, 0);
        assert_eq!(&s * &inv, HypExpr::constant(rat(1, 1)));
        assert!((&s - &s).is_zero());
    }
}
