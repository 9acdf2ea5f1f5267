//! Quotients of Laurent polynomials.
//!
//! Values are never reduced by a polynomial gcd. Monomial denominators are
//! folded into the numerator (monomials are units in the Laurent ring), and
//! equality is decided by cross-multiplication.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPoly;
use super::rational::Rational;
use super::AlgebraError;

#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RawRationalFunction")]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Deserialize)]
struct RawRationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl TryFrom<RawRationalFunction> for RationalFunction {
    type Error = AlgebraError;
    fn try_from(raw: RawRationalFunction) -> Result<Self, Self::Error> {
        RationalFunction::new(raw.num, raw.den)
    }
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    /// Exact quotient without unit folding; used to keep a witness readable.
    pub fn raw(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self { num, den })
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        if let Some((e, c)) = den.as_monomial() {
            let num = num.shift(-e).scale(&c.recip());
            return Self {
                num,
                den: LaurentPoly::one(),
            };
        }
        if num.is_zero() {
            return Self::zero();
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial, if the denominator is `1`.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        (self.den == LaurentPoly::one()).then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone()).map_err(|_| AlgebraError::DivisionByZero)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn powi(&self, k: i64) -> Result<Self, AlgebraError> {
        let mag = u32::try_from(k.unsigned_abs()).map_err(|_| AlgebraError::ExponentOverflow)?;
        let p = Self::normalized(self.num.pow(mag), self.den.pow(mag));
        if k < 0 {
            p.recip()
        } else {
            Ok(p)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    /// Exact value at `x0`; a vanishing denominator is reported as a pole.
    pub fn eval_exact(&self, x0: &Rational) -> Result<Rational, AlgebraError> {
        let d = self.den.eval_exact(x0)?;
        if d.is_zero() {
            return Err(AlgebraError::Pole);
        }
        Ok(self.num.eval_exact(x0)? / d)
    }

    pub fn eval_f64(&self, x0: f64) -> Result<f64, AlgebraError> {
        Ok(self.num.eval_f64(x0)? / self.den.eval_f64(x0)?)
    }
}

/// Cross-multiplication test `a.num·b.den − b.num·a.den = 0`.
pub fn rf_equals(a: &RationalFunction, b: &RationalFunction) -> bool {
    if a.den == b.den {
        return a.num == b.num;
    }
    &a.num * &b.den == &b.num * &a.den
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        rf_equals(self, other)
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num - &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -self.num,
            den: self.den,
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
        impl $tr<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, ratio};

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    fn rf(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalFunction {
        RationalFunction::raw(p(num), p(den)).unwrap()
    }

    #[test]
    fn common_factor_is_equal() {
        let a = rf(&[(2, 1), (0, -1)], &[(3, 1)]);
        let b = rf(&[(4, 1), (2, -1)], &[(5, 1)]);
        assert!(rf_equals(&a, &b));
    }

    #[test]
    fn odd_sum_witness_is_unequal() {
        // 1/x against (x^2+1)/(x(2x^2+1))
        let a = rf(&[(0, 1)], &[(1, 1)]);
        let b = rf(&[(2, 1), (0, 1)], &[(3, 2), (1, 1)]);
        assert!(!rf_equals(&a, &b));
    }

    #[test]
    fn zero_over_anything() {
        let a = rf(&[], &[(0, 1)]);
        let b = rf(&[], &[(2, 1), (0, -4)]);
        assert!(rf_equals(&a, &b));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalFunction::new(p(&[(0, 1)]), LaurentPoly::zero()).unwrap_err(),
            AlgebraError::ZeroDenominator
        );
        assert_eq!(
            RationalFunction::one().checked_div(&RationalFunction::zero()).unwrap_err(),
            AlgebraError::DivisionByZero
        );
    }

    #[test]
    fn monomial_denominators_fold() {
        let a = RationalFunction::new(p(&[(2, 1), (0, -1)]), p(&[(3, 2)])).unwrap();
        assert_eq!(a.as_poly().unwrap(), &LaurentPoly::from_terms([(-1, ratio(1, 2)), (-3, ratio(-1, 2))]));
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let x = RationalFunction::from_poly(LaurentPoly::x_pow(1));
        let den = RationalFunction::from_poly(p(&[(2, 2), (0, 1)]));
        let q = x.checked_div(&den).unwrap();
        assert_eq!(q.eval_exact(&int(1)).unwrap(), ratio(1, 3));
        let back = &q * &den;
        assert_eq!(back, x);
        let pole = RationalFunction::one().checked_div(&RationalFunction::from_poly(p(&[(2, 1), (0, -4)]))).unwrap();
        assert_eq!(pole.eval_exact(&int(2)), Err(AlgebraError::Pole));
        assert_eq!(q.powi(-2).unwrap(), &den * &den * RationalFunction::from_poly(LaurentPoly::x_pow(-2)));
    }

    #[test]
    fn json_shape() {
        let a = rf(&[(0, 1)], &[(2, 1), (0, 1)]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"num":[[0,"1/1"]],"den":[[2,"1/1"],[0,"1/1"]]}"#);
        let back: RationalFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<RationalFunction>(r#"{"num":[],"den":[]}"#).is_err());
    }
}
