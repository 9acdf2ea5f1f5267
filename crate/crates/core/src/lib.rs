//! Exact construction of Oresme polynomials `O_n(x)`, verification of their
//! identities over the rational-function field, floating-point analytic
//! probes, and a small language for writing new identities.

pub mod algebra;
pub mod analytic;
pub mod bench;
pub mod dsl;
pub mod identities;
pub mod seq;

pub use algebra::{rf_equals, AlgebraError, LaurentPoly, Mat2, RationalFunction, Rational};
