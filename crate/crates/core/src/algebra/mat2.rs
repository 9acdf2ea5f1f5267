//! 2×2 matrices over a commutative ring.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// `[[e11, e12], [e21, e22]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub e11: T,
    pub e12: T,
    pub e21: T,
    pub e22: T,
}

impl<T> Mat2<T> {
    pub fn new(e11: T, e12: T, e21: T, e22: T) -> Self {
        Self { e11, e12, e21, e22 }
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [&T; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }
}

impl<T> Mat2<T>
where
    T: Clone + Zero + One,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            e11: &(&self.e11 * &rhs.e11) + &(&self.e12 * &rhs.e21),
            e12: &(&self.e11 * &rhs.e12) + &(&self.e12 * &rhs.e22),
            e21: &(&self.e21 * &rhs.e11) + &(&self.e22 * &rhs.e21),
            e22: &(&self.e21 * &rhs.e12) + &(&self.e22 * &rhs.e22),
        }
    }

    /// Square-and-multiply; `m^0` is the identity.
    pub fn pow(&self, n: u64) -> Self {
        let mut result = Self::identity();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn det(&self) -> T {
        &(&self.e11 * &self.e22) - &(&self.e12 * &self.e21)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::LaurentPoly;
    use crate::algebra::rational::int;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    fn companion() -> Mat2<LaurentPoly> {
        Mat2::new(p(&[(0, 1)]), p(&[(-2, -1)]), p(&[(0, 1)]), LaurentPoly::zero())
    }

    #[test]
    fn identity_is_neutral() {
        let m = companion();
        assert_eq!(m.mul(&Mat2::identity()), m);
        assert_eq!(m.pow(0), Mat2::identity());
    }

    #[test]
    fn companion_squared_by_hand() {
        let expected = Mat2::new(p(&[(0, 1), (-2, -1)]), p(&[(-2, -1)]), p(&[(0, 1)]), p(&[(-2, -1)]));
        assert_eq!(companion().mul(&companion()), expected);
        assert_eq!(companion().pow(2), expected);
    }

    #[test]
    fn determinant_is_multiplicative() {
        let a = Mat2::new(p(&[(1, 2), (0, 1)]), p(&[(-1, 3)]), p(&[(2, -1)]), p(&[(0, 5), (-3, 1)]));
        let b = companion();
        assert_eq!(a.mul(&b).det(), &a.det() * &b.det());
        assert_eq!(companion().pow(7).det(), LaurentPoly::x_pow(-14));
    }

    #[test]
    fn works_over_rationals() {
        let m = Mat2::new(int(1), int(1), int(1), int(0));
        assert_eq!(m.pow(10).e12, int(55));
    }
}
