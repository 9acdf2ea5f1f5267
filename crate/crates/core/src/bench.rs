//! Evaluation strategies for `O_n(x)` at a rational point, and a small timing
//! harness comparing them.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::rational::{format_rational, pow_i64, to_f64};
use crate::algebra::{AlgebraError, Rational};
use crate::analytic::{binet_float, AnalyticError};
use crate::seq::companion_matrix_at;

/// Timed repetitions are never fewer than this.
pub const MIN_REPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Recurrence,
    Matrix,
    Closed,
    BinetFloat,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Recurrence, Strategy::Matrix, Strategy::Closed, Strategy::BinetFloat];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Recurrence => "recurrence",
            Strategy::Matrix => "matrix",
            Strategy::Closed => "closed",
            Strategy::BinetFloat => "binet_float",
        }
    }

    pub fn is_exact(self) -> bool {
        self != Strategy::BinetFloat
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "recurrence" => Ok(Strategy::Recurrence),
            "matrix" => Ok(Strategy::Matrix),
            "closed" => Ok(Strategy::Closed),
            "binet" | "binet_float" => Ok(Strategy::BinetFloat),
            _ => Err(format!("unknown strategy `{s}` (recurrence, matrix, closed, binet)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrategyValue {
    Exact(Rational),
    Float(f64),
}

impl StrategyValue {
    /// sha256 of the `p/q` rendering for exact values; the float itself otherwise.
    pub fn digest(&self) -> String {
        match self {
            StrategyValue::Exact(r) => hex::encode(Sha256::digest(format_rational(r).as_bytes())),
            StrategyValue::Float(v) => format!("{v:e}"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            StrategyValue::Exact(r) => to_f64(r),
            StrategyValue::Float(v) => *v,
        }
    }
}

impl fmt::Display for StrategyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyValue::Exact(r) => f.write_str(&format_rational(r)),
            StrategyValue::Float(v) => write!(f, "{v:e}"),
        }
    }
}

/// `O_n(x)` by `strategy`. Exact strategies extend to negative `n` through
/// `O_{-n} = -x^{2n} O_n`.
pub fn evaluate(strategy: Strategy, n: i64, x: &Rational) -> Result<StrategyValue, BenchError> {
    if x.is_zero() {
        return Err(AlgebraError::ZeroPoint.into());
    }
    if strategy == Strategy::BinetFloat {
        return Ok(StrategyValue::Float(binet_float(n, to_f64(x))?));
    }
    let m = n.unsigned_abs();
    let value = match strategy {
        Strategy::Recurrence => scaled_recurrence(m, x),
        Strategy::Matrix => by_matrix(m, x)?,
        _ => closed_sum(m, x),
    };
    if n < 0 {
        let scale = i64::try_from(m).ok().and_then(|m| m.checked_mul(2)).ok_or(AlgebraError::ExponentOverflow)?;
        Ok(StrategyValue::Exact(-value * pow_i64(x, scale)))
    } else {
        Ok(StrategyValue::Exact(value))
    }
}

/// With `x = p/q`: `z_{k+1} = p z_k - q^2 z_{k-1}`, `z_0 = 0`, `z_1 = 1`, and `O_k = q z_k / p^k`.
fn scaled_recurrence(n: u64, x: &Rational) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    let (p, q) = (x.numer(), x.denom());
    let q2 = q * q;
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for _ in 1..n {
        let next = p * &cur - &q2 * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Rational::new(q * cur, num_traits::pow(p.clone(), n as usize))
}

fn by_matrix(n: u64, x: &Rational) -> Result<Rational, AlgebraError> {
    let m = companion_matrix_at(x)?.pow(n);
    Ok(m.e21 / x)
}

/// `Σ_j (-1)^j C(n-j-1, j) x^{-2j-1}` over the common denominator `p^{2J+1}`,
/// with `J = ⌊(n-1)/2⌋`.
///
/// The numerator `q Σ_j C(n-j-1, j) (-q^2)^j (p^2)^{J-j}` is accumulated
/// Horner-style in `p^2`, and each binomial is stepped from the previous one.
fn closed_sum(n: u64, x: &Rational) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    let n = BigInt::from(n);
    let top = (&n - 1u32) / 2u32;
    let (p, q) = (x.numer(), x.denom());
    let p2 = p * p;
    let u = -(q * q);
    let mut u_pow = BigInt::one();
    let mut binom = BigInt::one();
    let mut acc = BigInt::zero();
    let mut j = BigInt::zero();
    loop {
        acc = acc * &p2 + &binom * &u_pow;
        if j == top {
            break;
        }
        // C(m-1, j+1) = C(m, j) (m-j)/(j+1) (m-j-1)/m with m = n-j-1
        let m = &n - &j - 1u32;
        binom = binom * (&m - &j) / (&j + 1u32);
        binom = binom * (&m - &j - 1u32) / &m;
        u_pow *= &u;
        j += 1u32;
    }
    let top = usize::try_from(top).expect("index fits in memory");
    Rational::new(acc * q, num_traits::pow(p.clone(), 2 * top + 1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub strategy: Strategy,
    pub n: i64,
    /// The evaluation point as `p/q`.
    pub x: String,
    pub reps: usize,
    /// Median wall time in nanoseconds.
    pub wall_ns: u64,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Exact strategies agree on every `n`.
    pub consistent: bool,
    /// Values of `n` where exact digests differ.
    pub mismatches: Vec<i64>,
}

/// Times every strategy at every `n`, `reps` times each (at least [`MIN_REPS`]).
/// Records are ordered by `n`, then by the order of `strategies`.
pub fn run_bench(strategies: &[Strategy], ns: &[i64], x: &Rational, reps: usize) -> Result<BenchReport, BenchError> {
    let reps = reps.max(MIN_REPS);
    let mut records = Vec::new();
    let mut mismatches = Vec::new();
    for &n in ns {
        let mut exact_digest: Option<String> = None;
        let mut agree = true;
        for &s in strategies {
            let mut times = Vec::with_capacity(reps);
            let mut value = None;
            for _ in 0..reps {
                let start = Instant::now();
                let v = evaluate(s, n, x)?;
                times.push(start.elapsed());
                value = Some(v);
            }
            let digest = value.expect("reps >= 1").digest();
            if s.is_exact() {
                match &exact_digest {
                    Some(d) if *d != digest => agree = false,
                    Some(_) => {}
                    None => exact_digest = Some(digest.clone()),
                }
            }
            records.push(BenchRecord {
                strategy: s,
                n,
                x: format_rational(x),
                reps,
                wall_ns: median(&mut times).as_nanos().min(u64::MAX as u128) as u64,
                digest,
            });
        }
        if !agree {
            mismatches.push(n);
        }
    }
    Ok(BenchReport {
        records,
        consistent: mismatches.is_empty(),
        mismatches,
    })
}

fn median(times: &mut [Duration]) -> Duration {
    times.sort();
    times[times.len() / 2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, ratio};
    use crate::seq::oresme_eval;

    #[test]
    fn exact_strategies_match_the_rational_recurrence() {
        for x in [int(3), ratio(-5, 2), ratio(1, 7), int(2)] {
            for n in -15..=40 {
                let want = oresme_eval(n, &x).unwrap();
                for s in [Strategy::Recurrence, Strategy::Matrix, Strategy::Closed] {
                    assert_eq!(evaluate(s, n, &x).unwrap(), StrategyValue::Exact(want.clone()), "{s} n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn binet_tracks_exact_value() {
        let x = int(3);
        for n in 1..30 {
            let exact = to_f64(&oresme_eval(n, &x).unwrap());
            let f = evaluate(Strategy::BinetFloat, n, &x).unwrap().to_f64();
            assert!(((f - exact) / exact).abs() < 1e-12, "n={n}");
        }
        assert!(evaluate(Strategy::BinetFloat, 3, &int(1)).is_err());
    }

    #[test]
    fn zero_point_is_rejected() {
        assert_eq!(evaluate(Strategy::Closed, 3, &int(0)), Err(BenchError::Algebra(AlgebraError::ZeroPoint)));
    }

    #[test]
    fn digests_are_sha256_of_the_rendering() {
        let d = StrategyValue::Exact(ratio(1, 3)).digest();
        assert_eq!(d.len(), 64);
        assert_eq!(d, hex::encode(Sha256::digest(b"1/3")));
    }

    #[test]
    fn bench_cross_checks_exact_digests() {
        let r = run_bench(&Strategy::ALL, &[0, 5, 100], &int(3), 1).unwrap();
        assert!(r.consistent);
        assert_eq!(r.records.len(), 12);
        assert!(r.records.iter().all(|rec| rec.reps == MIN_REPS));
        let digests: Vec<&str> = r.records[4..7].iter().map(|rec| rec.digest.as_str()).collect();
        assert!(digests.iter().all(|d| *d == digests[0]));
    }

    #[test]
    fn strategy_names_parse() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert_eq!("binet".parse::<Strategy>().unwrap(), Strategy::BinetFloat);
        assert!("fast".parse::<Strategy>().is_err());
    }
}
