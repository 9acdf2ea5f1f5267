//! Oresme polynomials `O_n(x)` and their relatives.
//!
//! `O_0 = 0`, `O_1 = 1/x`, `O_{n+1} = O_n - x^{-2} O_{n-1}`. Evaluated at
//! `x = k` these are the k-Oresme numbers; at `x = 2` the classical `n/2^n`.
//! Three independent generators (recurrence, closed binomial sum, matrix
//! power) are provided so that each can serve as an oracle for the others.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{int, pow_i64};
use crate::algebra::{AlgebraError, LaurentPoly, Mat2, Rational, RationalFunction};

/// `x^{-2}`, the recurrence coefficient.
fn inv_x_squared() -> LaurentPoly {
    LaurentPoly::from_int_terms(&[(-2, 1)])
}

/// `O_n(x)` by the three-term recurrence.
pub fn oresme_poly(n: u64) -> LaurentPoly {
    if n == 0 {
        return LaurentPoly::zero();
    }
    let step = inv_x_squared();
    let mut prev = LaurentPoly::zero();
    let mut cur = LaurentPoly::x_pow(-1);
    for _ in 1..n {
        let next = &cur - &(&step * &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Binomial coefficient `C(n, k)` as a big integer; zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `O_n(x) = Σ_{j=0}^{⌊(n-1)/2⌋} (-1)^j C(n-j-1, j) x^{-2j-1}`.
pub fn oresme_poly_closed(n: u64) -> LaurentPoly {
    let n = i64::try_from(n).expect("index too large");
    let top = (n - 1).div_euclid(2);
    LaurentPoly::from_terms((0..=top).map(|j| {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        (-2 * j - 1, Rational::from_integer(binomial(n - j - 1, j) * sign))
    }))
}

/// Derivative closed form
/// `O_n'(x) = Σ_{j=0}^{⌊(n-1)/2⌋} (-1)^{j+1} (2j+1) C(n-j-1, j) x^{-2j-2}`.
pub fn oresme_derivative_closed(n: u64) -> LaurentPoly {
    let n = i64::try_from(n).expect("index too large");
    let top = (n - 1).div_euclid(2);
    LaurentPoly::from_terms((0..=top).map(|j| {
        let sign = if j % 2 == 0 { -1 } else { 1 };
        let c = binomial(n - j - 1, j) * (2 * j + 1) * sign;
        (-2 * j - 2, Rational::from_integer(c))
    }))
}

/// The companion matrix `[[1, -x^{-2}], [1, 0]]`.
pub fn companion_matrix() -> Mat2<LaurentPoly> {
    Mat2::new(
        LaurentPoly::one(),
        -inv_x_squared(),
        LaurentPoly::one(),
        LaurentPoly::zero(),
    )
}

/// The companion matrix evaluated at a rational point.
pub fn companion_matrix_at(x: &Rational) -> Result<Mat2<Rational>, AlgebraError> {
    if x.is_zero() {
        return Err(AlgebraError::ZeroPoint);
    }
    Ok(Mat2::new(int(1), -pow_i64(x, -2), int(1), int(0)))
}

/// `O_n(x)` read off the lower-left entry `x O_n(x)` of the n-th companion power.
pub fn oresme_by_matrix(n: u64) -> LaurentPoly {
    companion_matrix().pow(n).e21.shift(-1)
}

/// `O_{-n}(x) = -x^{2n} O_n(x)`, the backward continuation of the recurrence.
pub fn oresme_neg_index(n: u64) -> LaurentPoly {
    let shift = i64::try_from(n).ok().and_then(|n| n.checked_mul(2)).expect("index too large");
    -oresme_poly(n).shift(shift)
}

/// `O_n(x)` for any integer index.
pub fn oresme_at(n: i64) -> LaurentPoly {
    if n >= 0 {
        oresme_poly(n as u64)
    } else {
        oresme_neg_index(n.unsigned_abs())
    }
}

/// `O_n'(x)` for any integer index.
pub fn oresme_derivative_poly(n: i64) -> LaurentPoly {
    oresme_at(n).derivative()
}

/// The k-Oresme number `A_n^{(k)} = O_n(k)`, by exact rational recurrence.
pub fn oresme_eval(n: i64, k: &Rational) -> Result<Rational, AlgebraError> {
    if k.is_zero() {
        return Err(AlgebraError::ZeroPoint);
    }
    let m = n.unsigned_abs();
    let step = pow_i64(k, -2);
    let mut prev = Rational::zero();
    let mut cur = k.recip();
    if m == 0 {
        return Ok(prev);
    }
    for _ in 1..m {
        let next = &cur - &(&step * &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    if n < 0 {
        Ok(-cur * pow_i64(k, 2 * m as i64))
    } else {
        Ok(cur)
    }
}

pub fn fibonacci(n: u64) -> BigInt {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    Plain,
    Alternating,
    OddIndex,
}

/// Prefix sums by direct summation:
/// plain `Σ_{j=0}^n O_j`, alternating `Σ (-1)^j O_j`, odd-index `Σ_{j=0}^n O_{2j+1}`.
pub fn prefix_sums(n: u64, kind: SumKind) -> RationalFunction {
    let mut acc = LaurentPoly::zero();
    for j in 0..=n {
        match kind {
            SumKind::Plain => acc += &oresme_poly(j),
            SumKind::Alternating if j % 2 == 0 => acc += &oresme_poly(j),
            SumKind::Alternating => acc -= &oresme_poly(j),
            SumKind::OddIndex => acc += &oresme_poly(2 * j + 1),
        }
    }
    RationalFunction::from_poly(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Recurrence,
    Closed,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub index: i64,
    pub poly: LaurentPoly,
}

/// Consecutive `O_n` (or `O_n'`) for `from ≤ n ≤ to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceTable {
    pub provenance: Provenance,
    pub derivative: bool,
    pub entries: Vec<SequenceEntry>,
}

impl SequenceTable {
    /// Negative indices are always produced through the backward extension
    /// of the chosen generator.
    pub fn build(from: i64, to: i64, provenance: Provenance, derivative: bool) -> Self {
        let cache = OresmeCache::new();
        let entries = (from..=to)
            .map(|n| {
                let base = match provenance {
                    Provenance::Recurrence => (*cache.poly(n)).clone(),
                    Provenance::Closed | Provenance::Matrix => {
                        let m = n.unsigned_abs();
                        let p = if provenance == Provenance::Closed {
                            oresme_poly_closed(m)
                        } else {
                            oresme_by_matrix(m)
                        };
                        if n < 0 {
                            -p.shift(2 * m as i64)
                        } else {
                            p
                        }
                    }
                };
                let poly = if derivative { base.derivative() } else { base };
                SequenceEntry { index: n, poly }
            })
            .collect();
        Self {
            provenance,
            derivative,
            entries,
        }
    }
}

/// Thread-safe memo of `O_n`, `O_n'` and companion powers.
///
/// Every accessor returns the same value a fresh computation would; the cache
/// only avoids recomputing prefixes during sweeps.
#[derive(Default)]
pub struct OresmeCache {
    forward: RwLock<Vec<Arc<LaurentPoly>>>,
    backward: RwLock<HashMap<u64, Arc<LaurentPoly>>>,
    derivatives: RwLock<HashMap<i64, Arc<LaurentPoly>>>,
    powers: RwLock<HashMap<u64, Arc<Mat2<LaurentPoly>>>>,
}

impl OresmeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn poly(&self, n: i64) -> Arc<LaurentPoly> {
        if n < 0 {
            let m = n.unsigned_abs();
            if let Some(p) = self.backward.read().unwrap().get(&m) {
                return p.clone();
            }
            let p = Arc::new(-self.poly(m as i64).shift(2 * m as i64));
            self.backward.write().unwrap().insert(m, p.clone());
            return p;
        }
        let idx = n as usize;
        if let Some(p) = self.forward.read().unwrap().get(idx) {
            return p.clone();
        }
        let mut table = self.forward.write().unwrap();
        if table.is_empty() {
            table.push(Arc::new(LaurentPoly::zero()));
            table.push(Arc::new(LaurentPoly::x_pow(-1)));
        }
        let step = inv_x_squared();
        while table.len() <= idx {
            let k = table.len();
            let next = &*table[k - 1] - &(&step * &*table[k - 2]);
            table.push(Arc::new(next));
        }
        table[idx].clone()
    }

    pub fn derivative(&self, n: i64) -> Arc<LaurentPoly> {
        if let Some(p) = self.derivatives.read().unwrap().get(&n) {
            return p.clone();
        }
        let d = Arc::new(self.poly(n).derivative());
        self.derivatives.write().unwrap().insert(n, d.clone());
        d
    }

    /// `M^n` by square-and-multiply.
    pub fn companion_power(&self, n: u64) -> Arc<Mat2<LaurentPoly>> {
        if let Some(m) = self.powers.read().unwrap().get(&n) {
            return m.clone();
        }
        let m = Arc::new(companion_matrix().pow(n));
        self.powers.write().unwrap().insert(n, m.clone());
        m
    }
}
