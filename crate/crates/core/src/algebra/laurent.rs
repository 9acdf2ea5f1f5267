//! Sparse univariate Laurent polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, parse_rational, pow_i64, to_f64, Rational};
use super::AlgebraError;

/// A finite sum `Σ c_e x^e` with integer exponents of either sign.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

fn add_exp(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("Laurent exponent overflow: {a} + {b}"))
}

impl LaurentPoly {
    /// `(d, p)` with `self = p / d` and `p` integral.
    fn integer_terms(&self) -> (BigInt, Vec<(i64, BigInt)>) {
        let d = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let p = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.numer() * (&d / c.denom())))
            .collect();
        (d, p)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// `x^exp`.
    pub fn x_pow(exp: i64) -> Self {
        Self::monomial(int(1), exp)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    /// Convenience for integer coefficients.
    pub fn from_int_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, int(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> Option<&Rational> {
        self.terms.get(&exp)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.min_exp().is_some_and(|e| e < 0)
    }

    /// The single term, if this is a nonzero monomial.
    pub fn as_monomial(&self) -> Option<(i64, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exp(*e, k), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Term-wise `d/dx`.
    pub fn derivative(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (add_exp(*e, -1), c * int(*e)))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact value at `x0`.
    pub fn eval_exact(&self, x0: &Rational) -> Result<Rational, AlgebraError> {
        if x0.is_zero() && self.has_negative_exponents() {
            return Err(AlgebraError::ZeroPoint);
        }
        // Horner over the (sparse) descending exponents.
        let mut iter = self.terms();
        let Some((mut prev_exp, first)) = iter.next() else {
            return Ok(Rational::zero());
        };
        let mut acc = first.clone();
        for (e, c) in iter {
            acc = acc * pow_i64(x0, prev_exp - e) + c;
            prev_exp = e;
        }
        Ok(acc * pow_i64(x0, prev_exp))
    }

    /// Binary64 value at `x0`, accumulated in descending exponent order.
    pub fn eval_f64(&self, x0: f64) -> Result<f64, AlgebraError> {
        if x0 == 0.0 && self.has_negative_exponents() {
            return Err(AlgebraError::ZeroPoint);
        }
        Ok(self
            .terms()
            .map(|(e, c)| to_f64(c) * powi(x0, e))
            .fold(0.0, |acc, t| acc + t))
    }

    /// Renders as `(p(x))/x^k` with `p` an ordinary polynomial, e.g. `(x^2 - 1)/x^3`.
    pub fn to_fraction_string(&self) -> String {
        match self.min_exp() {
            Some(m) if m < 0 => {
                let p = self.shift(-m);
                let body = p.to_string();
                let den = if m == -1 { "x".to_string() } else { format!("x^{}", -m) };
                if p.len() == 1 {
                    format!("{body}/{den}")
                } else {
                    format!("({body})/{den}")
                }
            }
            _ => self.to_string(),
        }
    }
}

fn powi(x: f64, e: i64) -> f64 {
    match i32::try_from(e) {
        Ok(e) => x.powi(e),
        Err(_) => x.powf(e as f64),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let show_coeff = e == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
                if e != 0 {
                    write!(f, "*")?;
                }
            }
            match e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for (e, c) in self.terms() {
            seq.serialize_element(&(e, format_rational(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, String)> = Vec::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(pairs.len());
        for (e, s) in pairs {
            terms.push((e, parse_rational(&s).map_err(D::Error::custom)?));
        }
        Ok(Self::from_terms(terms))
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            let slot = self.terms.entry(*e).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                self.terms.remove(e);
            }
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            let slot = self.terms.entry(*e).or_insert_with(Rational::zero);
            *slot -= c;
            if slot.is_zero() {
                self.terms.remove(e);
            }
        }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((e, c)) = rhs.as_monomial() {
            return self.shift(e).scale(c);
        }
        if let Some((e, c)) = self.as_monomial() {
            return rhs.shift(e).scale(c);
        }
        // Clear denominators first so the inner loop is integer arithmetic.
        let (da, a) = self.integer_terms();
        let (db, b) = rhs.integer_terms();
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let prod = ca * cb;
                match acc.entry(add_exp(*ea, *eb)) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += prod;
                    }
                }
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, Rational::new(c, den.clone())))
            .collect();
        LaurentPoly { terms }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
