//! Registry of Oresme polynomial identities and the exact sweep checker.
//!
//! Every side is built as a [`RationalFunction`] and compared by
//! cross-multiplication, so each check is an identity in `Q(x)` rather than a
//! pointwise test. Entries whose printed form is known to be wrong are kept in
//! the registry with [`Expectation::FailsAsTranscribed`] next to their
//! corrected versions.

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::rational::{format_rational, int, to_f64};
use crate::algebra::{AlgebraError, LaurentPoly, Rational, RationalFunction};
use crate::analytic;
use crate::seq::{
    binomial, oresme_derivative_closed, oresme_eval, oresme_poly_closed, OresmeCache,
};

/// At most this many failing assignments are kept per report.
pub const WITNESS_CAP: usize = 10;

/// Relative tolerance of the float Binet comparison in numeric checks.
pub const BINET_REL_TOL: f64 = 1e-9;

/// Id of the numeric-only Binet entry understood by [`kores_numeric_check`].
pub const BINET_ID: &str = "BINET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    FailsAsTranscribed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    #[default]
    Quick,
    Full,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentityError {
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("invalid sweep for {id}: {reason}")]
    InvalidSweep { id: String, reason: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("Binet comparison needs k^2 > 4")]
    DomainError,
}

/// Inclusive integer range for one named parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamRange {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

impl ParamRange {
    pub fn new(name: &str, lo: i64, hi: i64) -> Self {
        Self {
            name: name.to_string(),
            lo,
            hi,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

/// Cartesian product of parameter ranges, enumerated lexicographically with
/// the first parameter outermost.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Sweep {
    pub ranges: Vec<ParamRange>,
}

impl Sweep {
    pub fn new(ranges: Vec<ParamRange>) -> Self {
        Self { ranges }
    }

    pub fn single(name: &str, lo: i64, hi: i64) -> Self {
        Self::new(vec![ParamRange::new(name, lo, hi)])
    }

    /// Every parameter over the same range.
    pub fn cube(names: &[&str], lo: i64, hi: i64) -> Self {
        Self::new(names.iter().map(|n| ParamRange::new(n, lo, hi)).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.iter().any(ParamRange::is_empty)
    }

    pub fn range(&self, name: &str) -> Option<&ParamRange> {
        self.ranges.iter().find(|r| r.name == name)
    }

    /// Replaces (or appends) the range for `r.name`.
    pub fn with_range(mut self, r: ParamRange) -> Self {
        match self.ranges.iter_mut().find(|x| x.name == r.name) {
            Some(slot) => *slot = r,
            None => self.ranges.push(r),
        }
        self
    }

    /// All tuples, lexicographic. Empty if any range is empty.
    pub fn assignments(&self) -> Vec<Vec<i64>> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Vec::with_capacity(self.ranges.len())];
        for r in &self.ranges {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (r.lo..=r.hi).map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v);
                        next
                    })
                })
                .collect();
        }
        out
    }

    /// Parses `n=1..10, m=0..5`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut ranges = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            ranges.push(parse_range(part)?);
        }
        Ok(Self { ranges })
    }
}

/// Parses `name=lo..hi` (or `name=v` for a single value).
pub fn parse_range(s: &str) -> Result<ParamRange, String> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=lo..hi, got `{s}`"))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("invalid parameter name `{name}`"));
    }
    let num = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| format!("invalid bound `{}` in `{s}`", t.trim()))
    };
    let (lo, hi) = match rest.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi)?),
        None => {
            let v = num(rest)?;
            (v, v)
        }
    };
    Ok(ParamRange::new(name, lo, hi))
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.ranges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}..{}", r.name, r.lo, r.hi)?;
        }
        Ok(())
    }
}

/// Named parameter values, serialized as a JSON object in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Params(pub Vec<(String, i64)>);

impl Params {
    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn values(&self) -> Vec<i64> {
        self.0.iter().map(|(_, v)| *v).collect()
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Params {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ParamsVisitor;
        impl<'de> Visitor<'de> for ParamsVisitor {
            type Value = Params;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a map of parameter names to integers")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Params, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, i64>()? {
                    out.push((k, v));
                }
                Ok(Params(out))
            }
        }
        deserializer.deserialize_map(ParamsVisitor)
    }
}

/// One side of a failing assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Function(RationalFunction),
    /// Exact rational rendered as `p/q`.
    Number(String),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub params: Params,
    pub lhs: WitnessValue,
    pub rhs: WitnessValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub sweep: String,
    pub verdict: Verdict,
    pub expected: Expectation,
    pub unexpected: bool,
    pub vacuous: bool,
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<Witness>,
}

impl IdentityReport {
    pub fn new(
        id: &str,
        sweep: &Sweep,
        expected: Expectation,
        checked: u64,
        failures: u64,
        witnesses: Vec<Witness>,
    ) -> Self {
        let verdict = if witnesses.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        let unexpected = match expected {
            Expectation::Holds => verdict != Verdict::Holds,
            Expectation::FailsAsTranscribed => verdict != Verdict::Fails,
        };
        Self {
            id: id.to_string(),
            sweep: sweep.to_string(),
            verdict,
            expected,
            unexpected,
            vacuous: checked == 0,
            checked,
            failures,
            witnesses,
        }
    }

    /// Short human label: `holds`, `fails (expected)`, `UNEXPECTED holds`, ...
    pub fn outcome(&self) -> String {
        let v = match self.verdict {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        };
        match (self.unexpected, self.expected) {
            (true, _) => format!("UNEXPECTED {v}"),
            (false, Expectation::FailsAsTranscribed) => format!("{v} (expected)"),
            (false, Expectation::Holds) if self.vacuous => format!("{v} (vacuous)"),
            (false, Expectation::Holds) => v.to_string(),
        }
    }

    pub fn has_witness(&self, name: &str, value: i64) -> bool {
        self.witnesses.iter().any(|w| w.params.get(name) == Some(value))
    }
}

pub type SideBuilder = fn(&OresmeCache, &[i64]) -> RationalFunction;

/// One cataloged identity.
pub struct IdentityEntry {
    pub id: &'static str,
    pub params: &'static [&'static str],
    pub summary: &'static str,
    pub expected: Expectation,
    /// Smallest admissible value of each parameter (parallel to `params`).
    pub lower: &'static [i64],
    /// Inter-parameter constraint applied as a filter before evaluation.
    pub constraint: Option<fn(&[i64]) -> bool>,
    pub lhs: SideBuilder,
    pub rhs: SideBuilder,
    pub sweep: fn(Profile) -> Sweep,
}

impl fmt::Debug for IdentityEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityEntry")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("expected", &self.expected)
            .finish()
    }
}

impl IdentityEntry {
    pub fn admits(&self, values: &[i64]) -> bool {
        self.constraint.is_none_or(|c| c(values))
    }

    pub fn default_sweep(&self, profile: Profile) -> Sweep {
        (self.sweep)(profile)
    }

    pub fn eval_sides(&self, cache: &OresmeCache, values: &[i64]) -> (RationalFunction, RationalFunction) {
        ((self.lhs)(cache, values), (self.rhs)(cache, values))
    }

    /// Reorders `sweep` to parameter order and validates it.
    fn normalize_sweep(&self, sweep: &Sweep) -> Result<Sweep, IdentityError> {
        let invalid = |reason: String| IdentityError::InvalidSweep {
            id: self.id.to_string(),
            reason,
        };
        if let Some(extra) = sweep.ranges.iter().find(|r| !self.params.contains(&r.name.as_str())) {
            return Err(invalid(format!("unknown parameter `{}`", extra.name)));
        }
        let mut ranges = Vec::with_capacity(self.params.len());
        for (name, lower) in self.params.iter().zip(self.lower) {
            let mut matching = sweep.ranges.iter().filter(|r| r.name == *name);
            let r = matching
                .next()
                .ok_or_else(|| invalid(format!("missing range for `{name}`")))?;
            if matching.next().is_some() {
                return Err(invalid(format!("parameter `{name}` given twice")));
            }
            if !r.is_empty() && r.lo < *lower {
                return Err(invalid(format!("`{name}` must be at least {lower}, got {}", r.lo)));
            }
            ranges.push(r.clone());
        }
        Ok(Sweep::new(ranges))
    }
}

fn poly(cache: &OresmeCache, n: i64) -> LaurentPoly {
    (*cache.poly(n)).clone()
}

fn deriv(cache: &OresmeCache, n: i64) -> LaurentPoly {
    (*cache.derivative(n)).clone()
}

fn xp(e: i64) -> LaurentPoly {
    LaurentPoly::x_pow(e)
}

fn ints(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_int_terms(terms)
}

fn rf(p: LaurentPoly) -> RationalFunction {
    RationalFunction::from_poly(p)
}

fn quot(num: LaurentPoly, den: LaurentPoly) -> RationalFunction {
    RationalFunction::new(num, den).expect("nonzero denominator")
}

fn c(n: i64) -> Rational {
    int(n)
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn indices(profile: Profile) -> i64 {
    match profile {
        Profile::Quick => 20,
        Profile::Full => 100,
    }
}

fn multi_cap(profile: Profile) -> i64 {
    match profile {
        Profile::Quick => 6,
        Profile::Full => 12,
    }
}

fn from_one(p: Profile) -> Sweep {
    Sweep::single("n", 1, indices(p))
}

fn from_two(p: Profile) -> Sweep {
    Sweep::single("n", 2, indices(p))
}

fn from_zero(p: Profile) -> Sweep {
    Sweep::single("n", 0, indices(p))
}

fn odd_sum_sweep(p: Profile) -> Sweep {
    // O_{2n+2} appears, so keep the largest index near the profile bound.
    Sweep::single("n", 0, indices(p) / 2)
}

/// `Σ_{j=0}^n O_{2j+1}` by direct summation.
fn odd_index_sum(cache: &OresmeCache, n: i64) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for j in 0..=n {
        acc += &*cache.poly(2 * j + 1);
    }
    acc
}

fn convolution(cache: &OresmeCache, n: i64) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for j in 1..n {
        acc += &(&*cache.poly(j) * &*cache.poly(n - j));
    }
    acc
}

/// `O_n' + (n/x) O_n`.
fn derivative_plus(cache: &OresmeCache, n: i64) -> LaurentPoly {
    &deriv(cache, n) + &poly(cache, n).shift(-1).scale(&c(n))
}

/// `x^2 - 4` times `x^3`, the common denominator of the derivative identities.
fn g1_denominator() -> LaurentPoly {
    ints(&[(5, 1), (3, -4)])
}

/// The printed binomial form `Σ (-1)^j C(n-j-1, j) x^{-2j}`.
pub fn transcribed_closed_form(n: i64) -> LaurentPoly {
    let top = (n - 1).div_euclid(2);
    LaurentPoly::from_terms(
        (0..=top).map(|j| (-2 * j, Rational::from_integer(binomial(n - j - 1, j) * sign(j)))),
    )
}

/// The printed derivative form `Σ_{j=0}^{⌊(n-2)/2⌋} (-1)^{j+1} (2j) C(n-j-1, j) x^{-2j-1}`.
pub fn transcribed_derivative_closed_form(n: i64) -> LaurentPoly {
    let top = (n - 2).div_euclid(2);
    LaurentPoly::from_terms((0..=top).map(|j| {
        let coeff = binomial(n - j - 1, j) * (2 * j) * -sign(j);
        (-2 * j - 1, Rational::from_integer(coeff))
    }))
}

fn build_catalog() -> Vec<IdentityEntry> {
    use Expectation::*;
    let mut entries = vec![
        IdentityEntry {
            id: "CASSINI",
            params: &["n"],
            summary: "O_{n+1} O_{n-1} - O_n^2 = -x^{-2n}",
            expected: Holds,
            lower: &[1],
            constraint: None,
            lhs: |o, a| {
                let n = a[0];
                rf(&(&*o.poly(n + 1) * &*o.poly(n - 1)) - &(&*o.poly(n) * &*o.poly(n)))
            },
            rhs: |_, a| rf(-xp(-2 * a[0])),
            sweep: from_one,
        },
        IdentityEntry {
            id: "THREE_TERM",
            params: &["n"],
            summary: "O_{n+2} = ((x^2-1)/x^2) O_{n+1} - x^{-4} O_{n-1}",
            expected: Holds,
            lower: &[1],
            constraint: None,
            lhs: |o, a| rf(poly(o, a[0] + 2)),
            rhs: |o, a| {
                let n = a[0];
                rf(&(&ints(&[(0, 1), (-2, -1)]) * &*o.poly(n + 1)) - &o.poly(n - 1).shift(-4))
            },
            sweep: from_one,
        },
        IdentityEntry {
            id: "ADD",
            params: &["n", "m"],
            summary: "O_{n+m} = x O_n O_{m+1} - (1/x) O_{n-1} O_m",
            expected: Holds,
            lower: &[i64::MIN, i64::MIN],
            constraint: None,
            lhs: |o, a| rf(poly(o, a[0] + a[1])),
            rhs: |o, a| {
                let (n, m) = (a[0], a[1]);
                rf(&(&*o.poly(n) * &*o.poly(m + 1)).shift(1) - &(&*o.poly(n - 1) * &*o.poly(m)).shift(-1))
            },
            sweep: |_| Sweep::cube(&["n", "m"], -12, 12),
        },
        IdentityEntry {
            id: "GB1",
            params: &["a", "b", "c", "d", "t"],
            summary: "O_a O_b - O_c O_d = x^{-2t} (O_{a-t} O_{b-t} - O_{c-t} O_{d-t}) for a+b = c+d",
            expected: Holds,
            lower: &[i64::MIN; 5],
            constraint: Some(|a| a[0] + a[1] == a[2] + a[3]),
            lhs: |o, v| {
                let (a, b, cc, d) = (v[0], v[1], v[2], v[3]);
                rf(&(&*o.poly(a) * &*o.poly(b)) - &(&*o.poly(cc) * &*o.poly(d)))
            },
            rhs: |o, v| {
                let (a, b, cc, d, t) = (v[0], v[1], v[2], v[3], v[4]);
                let inner = &(&*o.poly(a - t) * &*o.poly(b - t)) - &(&*o.poly(cc - t) * &*o.poly(d - t));
                rf(inner.shift(-2 * t))
            },
            sweep: |p| {
                let cap = multi_cap(p);
                Sweep::cube(&["a", "b", "c", "d", "t"], -cap, cap)
            },
        },
        IdentityEntry {
            id: "COR",
            params: &["n", "m"],
            summary: "O_{n+1} O_m - O_n O_{m+1} = x^{-(2n+1)} O_{m-n} for m >= n",
            expected: Holds,
            lower: &[i64::MIN, i64::MIN],
            constraint: Some(|a| a[1] >= a[0]),
            lhs: |o, a| {
                let (n, m) = (a[0], a[1]);
                rf(&(&*o.poly(n + 1) * &*o.poly(m)) - &(&*o.poly(n) * &*o.poly(m + 1)))
            },
            rhs: |o, a| rf(o.poly(a[1] - a[0]).shift(-(2 * a[0] + 1))),
            sweep: |p| match p {
                Profile::Quick => Sweep::cube(&["n", "m"], -6, 20),
                Profile::Full => Sweep::cube(&["n", "m"], -12, 60),
            },
        },
        IdentityEntry {
            id: "SUM",
            params: &["n"],
            summary: "sum_{j=0}^n O_j = x^2 (1/x - O_{n+2})",
            expected: Holds,
            lower: &[0],
            constraint: None,
            lhs: |o, a| {
                let mut acc = LaurentPoly::zero();
                for j in 0..=a[0] {
                    acc += &*o.poly(j);
                }
                rf(acc)
            },
            rhs: |o, a| rf((&xp(-1) - &*o.poly(a[0] + 2)).shift(2)),
            sweep: from_zero,
        },
        IdentityEntry {
            id: "ALT_SUM",
            params: &["n"],
            summary: "sum_{j=0}^n (-1)^j O_j = (x^2/(2x^2+1)) (-1/x + (-1)^{n+1} (O_{n+2} - 2 O_{n+1}))",
            expected: Holds,
            lower: &[0],
            constraint: None,
            lhs: |o, a| {
                let mut acc = LaurentPoly::zero();
                for j in 0..=a[0] {
                    acc += &o.poly(j).scale(&c(sign(j)));
                }
                rf(acc)
            },
            rhs: |o, a| {
                let n = a[0];
                let tail = (&*o.poly(n + 2) - &o.poly(n + 1).scale(&c(2))).scale(&c(sign(n + 1)));
                let inner = &-xp(-1) + &tail;
                quot(inner.shift(2), ints(&[(2, 2), (0, 1)]))
            },
            sweep: from_zero,
        },
        IdentityEntry {
            id: "ODD_SUM_T",
            params: &["n"],
            summary: "sum_{j=0}^n O_{2j+1} = (x^2/(2x^2+1)) ((x^2+1)/x + ((x^2+1)/x^2)(O_{2n+1} - x^2 O_{2n+2})) as printed",
            expected: FailsAsTranscribed,
            lower: &[0],
            constraint: None,
            lhs: |o, a| rf(odd_index_sum(o, a[0])),
            rhs: |o, a| {
                let n = a[0];
                let x2p1 = ints(&[(2, 1), (0, 1)]);
                let diff = &*o.poly(2 * n + 1) - &o.poly(2 * n + 2).shift(2);
                let inner = &x2p1.shift(-1) + &(&x2p1 * &diff).shift(-2);
                quot(inner.shift(2), ints(&[(2, 2), (0, 1)]))
            },
            sweep: odd_sum_sweep,
        },
        IdentityEntry {
            id: "ODD_SUM_C",
            params: &["n"],
            summary: "sum_{j=0}^n O_{2j+1} = (x(x^2+1) + (x^2+1) O_{2n+1} - x^4 O_{2n+2})/(2x^2+1)",
            expected: Holds,
            lower: &[0],
            constraint: None,
            lhs: |o, a| rf(odd_index_sum(o, a[0])),
            rhs: |o, a| {
                let n = a[0];
                let x2p1 = ints(&[(2, 1), (0, 1)]);
                let num = &(&x2p1.shift(1) + &(&x2p1 * &*o.poly(2 * n + 1))) - &o.poly(2 * n + 2).shift(4);
                quot(num, ints(&[(2, 2), (0, 1)]))
            },
            sweep: odd_sum_sweep,
        },
        IdentityEntry {
            id: "G1",
            params: &["n"],
            summary: "O_n' = (x^2 (2n - x^2) O_n - 2n O_{n-2}) / (x^3 (x^2 - 4))",
            expected: Holds,
            lower: &[2],
            constraint: None,
            lhs: |o, a| rf(deriv(o, a[0])),
            rhs: |o, a| {
                let n = a[0];
                let num = &(&ints(&[(2, 2 * n), (4, -1)]) * &*o.poly(n)) - &o.poly(n - 2).scale(&c(2 * n));
                quot(num, g1_denominator())
            },
            sweep: from_two,
        },
        IdentityEntry {
            id: "N2",
            params: &["n"],
            summary: "O_n' + (n/x) O_n = sum_{j=1}^{n-1} O_j O_{n-j}",
            expected: Holds,
            lower: &[2],
            constraint: None,
            lhs: |o, a| rf(derivative_plus(o, a[0])),
            rhs: |o, a| rf(convolution(o, a[0])),
            sweep: from_two,
        },
        IdentityEntry {
            id: "G2",
            params: &["n"],
            summary: "O_n' + (n/x) O_n = sum_{j=0}^{floor((n-2)/2)} ((n-1-2j)/x^{2j+1}) O_{n-1-2j}",
            expected: Holds,
            lower: &[2],
            constraint: None,
            lhs: |o, a| rf(derivative_plus(o, a[0])),
            rhs: |o, a| {
                let n = a[0];
                let mut acc = LaurentPoly::zero();
                for j in 0..=(n - 2).div_euclid(2) {
                    acc += &o.poly(n - 1 - 2 * j).shift(-2 * j - 1).scale(&c(n - 1 - 2 * j));
                }
                rf(acc)
            },
            sweep: from_two,
        },
        IdentityEntry {
            id: "G3_T",
            params: &["n"],
            summary: "(n-1) O_n - 2n O_{n+1} = x O_{n+1}' - (1/x) O_{n-1}' as printed",
            expected: FailsAsTranscribed,
            lower: &[1],
            constraint: None,
            lhs: |o, a| {
                let n = a[0];
                rf(&o.poly(n).scale(&c(n - 1)) - &o.poly(n + 1).scale(&c(2 * n)))
            },
            rhs: |o, a| rf(&o.derivative(a[0] + 1).shift(1) - &o.derivative(a[0] - 1).shift(-1)),
            sweep: from_one,
        },
        IdentityEntry {
            id: "G3_C",
            params: &["n"],
            summary: "(2n-1) O_n - 2n O_{n+1} = x O_{n+1}' - (1/x) O_{n-1}'",
            expected: Holds,
            lower: &[1],
            constraint: None,
            lhs: |o, a| {
                let n = a[0];
                rf(&o.poly(n).scale(&c(2 * n - 1)) - &o.poly(n + 1).scale(&c(2 * n)))
            },
            rhs: |o, a| rf(&o.derivative(a[0] + 1).shift(1) - &o.derivative(a[0] - 1).shift(-1)),
            sweep: from_one,
        },
        IdentityEntry {
            id: "REMARK_COMBINED",
            params: &["n"],
            summary: "(x^2((n-1)x^2 - 2n) O_n - 2n O_{n-2}) / (x^3 (x^2 - 4)) = sum_{j=1}^{n-1} O_j O_{n-j}",
            expected: Holds,
            lower: &[2],
            constraint: None,
            lhs: |o, a| {
                let n = a[0];
                let num = &(&ints(&[(4, n - 1), (2, -2 * n)]) * &*o.poly(n)) - &o.poly(n - 2).scale(&c(2 * n));
                quot(num, g1_denominator())
            },
            rhs: |o, a| rf(convolution(o, a[0])),
            sweep: from_two,
        },
        IdentityEntry {
            id: "BN_T",
            params: &["n"],
            summary: "O_n = sum_{j=0}^{floor((n-1)/2)} (-1)^j C(n-j-1, j) x^{-2j} as printed",
            expected: FailsAsTranscribed,
            lower: &[1],
            constraint: None,
            lhs: |o, a| rf(poly(o, a[0])),
            rhs: |_, a| rf(transcribed_closed_form(a[0])),
            sweep: from_one,
        },
        IdentityEntry {
            id: "BN_C",
            params: &["n"],
            summary: "O_n = sum_{j=0}^{floor((n-1)/2)} (-1)^j C(n-j-1, j) x^{-2j-1}",
            expected: Holds,
            lower: &[1],
            constraint: None,
            lhs: |o, a| rf(poly(o, a[0])),
            rhs: |_, a| rf(oresme_poly_closed(a[0] as u64)),
            sweep: from_one,
        },
        IdentityEntry {
            id: "BN1_T",
            params: &["n"],
            summary: "O_n' = sum_{j=0}^{floor((n-2)/2)} (-1)^{j+1} (2j) C(n-j-1, j) x^{-2j-1} as printed",
            expected: FailsAsTranscribed,
            lower: &[1],
            constraint: None,
            lhs: |o, a| rf(deriv(o, a[0])),
            rhs: |_, a| rf(transcribed_derivative_closed_form(a[0])),
            sweep: from_one,
        },
        IdentityEntry {
            id: "BN1_C",
            params: &["n"],
            summary: "O_n' = sum_{j=0}^{floor((n-1)/2)} (-1)^{j+1} (2j+1) C(n-j-1, j) x^{-2j-2}",
            expected: Holds,
            lower: &[1],
            constraint: None,
            lhs: |o, a| rf(deriv(o, a[0])),
            rhs: |_, a| rf(oresme_derivative_closed(a[0] as u64)),
            sweep: from_one,
        },
        IdentityEntry {
            id: "MAT_ENTRY",
            params: &["n", "entry"],
            summary: "M^n = [[x O_{n+1}, -(1/x) O_n], [x O_n, -(1/x) O_{n-1}]], entries row-major 0..3",
            expected: Holds,
            lower: &[1, 0],
            constraint: Some(|a| a[1] <= 3),
            lhs: |o, a| rf(o.companion_power(a[0] as u64).entries()[a[1] as usize].clone()),
            rhs: |o, a| {
                let n = a[0];
                rf(match a[1] {
                    0 => o.poly(n + 1).shift(1),
                    1 => -o.poly(n).shift(-1),
                    2 => o.poly(n).shift(1),
                    _ => -o.poly(n - 1).shift(-1),
                })
            },
            sweep: |p| Sweep::new(vec![ParamRange::new("n", 1, indices(p)), ParamRange::new("entry", 0, 3)]),
        },
        IdentityEntry {
            id: "DET",
            params: &["n"],
            summary: "det(M^n) = x^{-2n}",
            expected: Holds,
            lower: &[1],
            constraint: None,
            lhs: |o, a| rf(o.companion_power(a[0] as u64).det()),
            rhs: |_, a| rf(xp(-2 * a[0])),
            sweep: from_one,
        },
    ];
    entries.sort_by_key(|e| e.id);
    entries
}

/// All cataloged identities, sorted by id.
pub fn catalog() -> &'static [IdentityEntry] {
    static CATALOG: OnceLock<Vec<IdentityEntry>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

pub fn lookup(id: &str) -> Result<&'static IdentityEntry, IdentityError> {
    catalog()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| IdentityError::UnknownIdentity(id.to_string()))
}

fn params_of(entry: &IdentityEntry, values: &[i64]) -> Params {
    Params(
        entry
            .params
            .iter()
            .zip(values)
            .map(|(n, v)| (n.to_string(), *v))
            .collect(),
    )
}

/// Admissible assignments of a validated sweep.
fn admitted(entry: &IdentityEntry, sweep: &Sweep) -> Result<Vec<Vec<i64>>, IdentityError> {
    let all = sweep.assignments();
    let total = all.len();
    let kept: Vec<Vec<i64>> = all.into_iter().filter(|a| entry.admits(a)).collect();
    if total > 0 && kept.is_empty() {
        return Err(IdentityError::InvalidSweep {
            id: entry.id.to_string(),
            reason: "no assignment satisfies the parameter constraint".to_string(),
        });
    }
    Ok(kept)
}

/// Checks one catalog entry exactly over `sweep`.
pub fn check_identity(id: &str, sweep: &Sweep) -> Result<IdentityReport, IdentityError> {
    check_identity_with(lookup(id)?, sweep, &OresmeCache::new())
}

pub fn check_identity_with(
    entry: &IdentityEntry,
    sweep: &Sweep,
    cache: &OresmeCache,
) -> Result<IdentityReport, IdentityError> {
    let sweep = entry.normalize_sweep(sweep)?;
    let assignments = admitted(entry, &sweep)?;
    let failing: Vec<Witness> = assignments
        .par_iter()
        .filter_map(|values| {
            let (lhs, rhs) = entry.eval_sides(cache, values);
            (lhs != rhs).then(|| Witness {
                params: params_of(entry, values),
                lhs: WitnessValue::Function(lhs),
                rhs: WitnessValue::Function(rhs),
            })
        })
        .collect();
    let failures = failing.len() as u64;
    let witnesses = failing.into_iter().take(WITNESS_CAP).collect();
    Ok(IdentityReport::new(
        entry.id,
        &sweep,
        entry.expected,
        assignments.len() as u64,
        failures,
        witnesses,
    ))
}

/// Runs every entry over its default sweep for `profile`; reports sorted by id.
pub fn run_catalog(profile: Profile) -> Vec<IdentityReport> {
    let cache = OresmeCache::new();
    catalog()
        .iter()
        .map(|entry| {
            check_identity_with(entry, &entry.default_sweep(profile), &cache)
                .expect("default sweeps are valid")
        })
        .collect()
}

/// Checks an identity with `x` fixed at the rational `k`.
///
/// Catalog ids are evaluated exactly. [`BINET_ID`] compares the float Binet
/// formula against the exact k-Oresme number within [`BINET_REL_TOL`].
pub fn kores_numeric_check(id: &str, k: &Rational, sweep: &Sweep) -> Result<IdentityReport, IdentityError> {
    use num_traits::Zero;
    if k.is_zero() {
        return Err(AlgebraError::ZeroPoint.into());
    }
    if id == BINET_ID {
        return binet_check(k, sweep);
    }
    let entry = lookup(id)?;
    let sweep = entry.normalize_sweep(sweep)?;
    let assignments = admitted(entry, &sweep)?;
    let cache = OresmeCache::new();
    let mut failing = Vec::new();
    for values in &assignments {
        let (lhs, rhs) = entry.eval_sides(&cache, values);
        let (l, r) = (lhs.eval_exact(k)?, rhs.eval_exact(k)?);
        if l != r {
            failing.push(Witness {
                params: params_of(entry, values),
                lhs: WitnessValue::Number(format_rational(&l)),
                rhs: WitnessValue::Number(format_rational(&r)),
            });
        }
    }
    let failures = failing.len() as u64;
    failing.truncate(WITNESS_CAP);
    Ok(IdentityReport::new(
        &format!("{id}@{}", format_rational(k)),
        &sweep,
        entry.expected,
        assignments.len() as u64,
        failures,
        failing,
    ))
}

fn binet_check(k: &Rational, sweep: &Sweep) -> Result<IdentityReport, IdentityError> {
    let kf = to_f64(k);
    if kf * kf <= 4.0 {
        return Err(IdentityError::DomainError);
    }
    let invalid = |reason: &str| IdentityError::InvalidSweep {
        id: BINET_ID.to_string(),
        reason: reason.to_string(),
    };
    if sweep.ranges.len() != 1 || sweep.ranges[0].name != "n" {
        return Err(invalid("expected a single range for `n`"));
    }
    let mut checked = 0;
    let mut failing = Vec::new();
    for values in sweep.assignments() {
        let n = values[0];
        checked += 1;
        let exact = oresme_eval(n, k)?;
        let exact_f = to_f64(&exact);
        let approx = analytic::binet_float(n, kf).map_err(|_| IdentityError::DomainError)?;
        let ok = if exact_f == 0.0 {
            approx.abs() <= BINET_REL_TOL
        } else {
            ((approx - exact_f) / exact_f).abs() < BINET_REL_TOL
        };
        if !ok {
            failing.push(Witness {
                params: Params(vec![("n".to_string(), n)]),
                lhs: WitnessValue::Float(approx),
                rhs: WitnessValue::Number(format_rational(&exact)),
            });
        }
    }
    let failures = failing.len() as u64;
    failing.truncate(WITNESS_CAP);
    Ok(IdentityReport::new(
        &format!("{BINET_ID}@{}", format_rational(k)),
        sweep,
        Expectation::Holds,
        checked,
        failures,
        failing,
    ))
}
