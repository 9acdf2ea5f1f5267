//! Exact arithmetic: rationals, Laurent polynomials, rational functions and 2×2 matrices.

pub mod laurent;
pub mod mat2;
pub mod rational;
pub mod ratfunc;

use thiserror::Error;

pub use laurent::LaurentPoly;
pub use mat2::Mat2;
pub use ratfunc::{rf_equals, RationalFunction};
pub use rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("evaluation at x = 0 of a polynomial with negative exponents")]
    ZeroPoint,
    #[error("zero polynomial used as a denominator")]
    ZeroDenominator,
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("exponent out of range")]
    ExponentOverflow,
}
