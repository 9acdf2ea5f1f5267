//! Floating-point view of the sequence: characteristic roots, Binet and
//! hyperbolic evaluation, ratio-limit probes and the cosine product formula.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::rational::{format_rational, from_f64, int, to_f64};
use crate::algebra::Rational;
use crate::seq::oresme_poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum AnalyticError {
    #[error("real characteristic roots need x^2 > 4")]
    DomainError,
    #[error("x must be nonzero")]
    ZeroPoint,
    #[error("x must be finite")]
    NotFinite,
}

/// Roots of `t^2 - t + 1/x^2`, larger first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootPair {
    pub x: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

pub fn lambda_roots(x: f64) -> Result<RootPair, AnalyticError> {
    if !x.is_finite() {
        return Err(AnalyticError::NotFinite);
    }
    if x * x <= 4.0 {
        return Err(AnalyticError::DomainError);
    }
    // (x ± sqrt(x^2-4)) / 2x, written so that the larger root comes first for
    // either sign of x; the smaller one comes from the product 1/x^2 to avoid
    // cancellation when |x| is large.
    let lambda1 = 0.5 * (1.0 + (1.0 - 4.0 / (x * x)).sqrt());
    let lambda2 = 1.0 / (x * x * lambda1);
    Ok(RootPair { x, lambda1, lambda2 })
}

/// `(λ1^n - λ2^n) / sqrt(x^2 - 4)`, with the sign of `x` carried by the root.
pub fn binet_float(n: i64, x: f64) -> Result<f64, AnalyticError> {
    let roots = lambda_roots(x)?;
    let n = i32::try_from(n).map_err(|_| AnalyticError::DomainError)?;
    let disc = (x * x - 4.0).sqrt() * x.signum();
    Ok((roots.lambda1.powi(n) - roots.lambda2.powi(n)) / disc)
}

/// `x^{-n} sinh(nz)/sinh(z)` with `cosh z = x/2`.
pub fn hyperbolic_eval(n: i64, x: f64) -> Result<f64, AnalyticError> {
    if !x.is_finite() {
        return Err(AnalyticError::NotFinite);
    }
    if x <= 2.0 || n < 1 {
        return Err(AnalyticError::DomainError);
    }
    let z = (x / 2.0).acosh();
    let nf = n as f64;
    Ok(x.powf(-nf) * (nf * z).sinh() / z.sinh())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceVerdict {
    Converged,
    Oscillating,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeStep {
    pub n: u64,
    /// `O_{n+1}(x)/O_n(x)`; absent when `O_n(x) = 0`.
    pub ratio: Option<f64>,
    /// Distance to the dominant root, when one exists.
    pub error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub x: f64,
    pub steps: Vec<ProbeStep>,
    pub verdict: ConvergenceVerdict,
    /// Dominant root `λ1(x)` when `x^2 > 4`, the double root `1/2` at `x = ±2`.
    pub limit: Option<f64>,
    /// Limit estimated from the tail of the trace.
    pub observed_limit: Option<f64>,
    /// First step after which the error never increases.
    pub burn_in: Option<u64>,
    /// Set at `x = ±2`, where the ratio tends to 1/2 rather than magnitude 1.
    pub remark_discrepancy: bool,
}

impl ConvergenceTrace {
    pub fn step(&self, n: u64) -> Option<&ProbeStep> {
        self.steps.iter().find(|s| s.n == n)
    }
}

/// Tail window and spread used to classify a trace.
pub const TAIL_WINDOW: usize = 20;
pub const TAIL_SPREAD: f64 = 1e-3;

/// Follows `O_{n+1}(x)/O_n(x)` for `n = 1..=max_steps`.
///
/// `x` is taken at its exact binary value and every `O_n(x)` is computed in
/// exact rational arithmetic. For `x^2 > 4` the error is obtained from the
/// residual `r^2 - r + 1/x^2 = (r - λ1)(r - λ2)`, which keeps full relative
/// precision far below the spacing of binary64 values near `λ1`.
pub fn ratio_limit_probe(x: f64, max_steps: u64) -> Result<ConvergenceTrace, AnalyticError> {
    if !x.is_finite() {
        return Err(AnalyticError::NotFinite);
    }
    if x == 0.0 {
        return Err(AnalyticError::ZeroPoint);
    }
    let xr = from_f64(x).ok_or(AnalyticError::NotFinite)?;
    let inv_x2 = (&xr * &xr).recip();
    let roots = lambda_roots(x).ok();
    let degenerate = xr.abs() == int(2);

    let mut prev = Rational::zero();
    let mut cur = xr.recip();
    let mut steps = Vec::with_capacity(max_steps as usize);
    for n in 1..=max_steps {
        let next = &cur - &(&inv_x2 * &prev);
        let exact_ratio = (!cur.is_zero()).then(|| &next / &cur);
        let ratio = exact_ratio.as_ref().map(to_f64);
        let error = match (&exact_ratio, roots) {
            (Some(r), Some(roots)) => {
                let residual = r * r - r + &inv_x2;
                Some((to_f64(&residual) / (to_f64(r) - roots.lambda2)).abs())
            }
            (Some(r), None) if degenerate => Some((to_f64(r) - 0.5).abs()),
            _ => None,
        };
        steps.push(ProbeStep { n, ratio, error });
        prev = std::mem::replace(&mut cur, next);
    }

    let tail: Vec<Option<f64>> = steps
        .iter()
        .rev()
        .take(TAIL_WINDOW)
        .map(|s| s.ratio)
        .collect();
    let oscillating = tail.iter().any(Option::is_none) || {
        let vals: Vec<f64> = tail.iter().flatten().copied().collect();
        let sign_change = vals.windows(2).any(|w| w[0].signum() != w[1].signum());
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        sign_change || max - min > TAIL_SPREAD
    };

    let verdict = if degenerate {
        ConvergenceVerdict::Degenerate
    } else if oscillating {
        ConvergenceVerdict::Oscillating
    } else {
        ConvergenceVerdict::Converged
    };

    let observed_limit = match verdict {
        ConvergenceVerdict::Oscillating => None,
        ConvergenceVerdict::Converged => steps.last().and_then(|s| s.ratio),
        // The ratio is (n+1)/(2n) = 1/2 + 1/(2n); one Richardson step removes the 1/n term.
        ConvergenceVerdict::Degenerate => match steps.as_slice() {
            [.., a, b] => match (a.ratio, b.ratio) {
                (Some(ra), Some(rb)) => Some(b.n as f64 * rb - a.n as f64 * ra),
                _ => None,
            },
            [only] => only.ratio,
            [] => None,
        },
    };

    let burn_in = if verdict == ConvergenceVerdict::Oscillating {
        None
    } else {
        let errors: Vec<Option<f64>> = steps.iter().map(|s| s.error).collect();
        let mut start = errors.len();
        while start > 0 {
            let ok = match (errors[start - 1], errors.get(start).copied().flatten()) {
                (Some(e), Some(next)) => next <= e,
                (Some(_), None) => start == errors.len(),
                _ => false,
            };
            if !ok {
                break;
            }
            start -= 1;
        }
        steps.get(start).map(|s| s.n)
    };

    let remark_discrepancy = degenerate && observed_limit.is_some_and(|l| (l.abs() - 1.0).abs() > TAIL_SPREAD);

    Ok(ConvergenceTrace {
        x,
        steps,
        verdict,
        limit: roots.map(|r| r.lambda1).or(degenerate.then_some(0.5)),
        observed_limit,
        burn_in,
        remark_discrepancy,
    })
}

/// The `n - 1` values `2cos(kπ/n)`, ascending.
pub fn product_roots(n: u64) -> Vec<f64> {
    let nf = n as f64;
    (1..n)
        .rev()
        .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / nf).cos())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub n: u64,
    pub roots: Vec<f64>,
    /// Coefficients of the expanded product, highest degree first.
    pub reconstructed: Vec<f64>,
    /// Exact coefficients of `x^n O_n(x)`, highest degree first, as `p/q`.
    pub exact: Vec<String>,
    pub max_error: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Expands `∏ (x - 2cos(kπ/n))` in binary64 and compares it coefficient-wise
/// with the exact integer polynomial `x^n O_n(x)`.
pub fn product_reconstruct(n: u64, tol: f64) -> ProductReport {
    let roots = product_roots(n);
    // coefficients highest degree first
    let mut coeffs = vec![1.0_f64];
    for r in &roots {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        coeffs = next;
    }
    let shifted = oresme_poly(n).shift(n as i64);
    let degree = coeffs.len() as i64 - 1;
    let exact: Vec<Rational> = (0..=degree)
        .rev()
        .map(|e| shifted.coeff(e).cloned().unwrap_or_else(Rational::zero))
        .collect();
    let max_error = coeffs
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - to_f64(b)).abs())
        .fold(0.0, f64::max);
    ProductReport {
        n,
        roots,
        reconstructed: coeffs,
        exact: exact.iter().map(format_rational).collect(),
        max_error,
        tol,
        pass: max_error < tol,
    }
}
