use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::algebra::Rational;
use crate::identities::ParamRange;

/// `constant + Σ coeff·var` with integer coefficients; zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Affine {
    pub constant: i64,
    pub terms: BTreeMap<String, i64>,
}

impl Affine {
    pub fn constant(c: i64) -> Self {
        Self {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(name: &str) -> Self {
        Self {
            constant: 0,
            terms: BTreeMap::from([(name.to_string(), 1)]),
        }
    }

    pub fn as_constant(&self) -> Option<i64> {
        self.terms.is_empty().then_some(self.constant)
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        out.constant = out.constant.checked_add(other.constant)?;
        for (v, c) in &other.terms {
            let slot = out.terms.entry(v.clone()).or_insert(0);
            *slot = slot.checked_add(*c)?;
            if *slot == 0 {
                out.terms.remove(v);
            }
        }
        Some(out)
    }

    pub fn checked_scale(&self, k: i64) -> Option<Self> {
        if k == 0 {
            return Some(Self::constant(0));
        }
        let mut terms = BTreeMap::new();
        for (v, c) in &self.terms {
            terms.insert(v.clone(), c.checked_mul(k)?);
        }
        Some(Self {
            constant: self.constant.checked_mul(k)?,
            terms,
        })
    }

    pub fn checked_neg(&self) -> Option<Self> {
        self.checked_scale(-1)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    /// Value under `lookup`; `None` on an unbound variable or overflow.
    pub fn eval(&self, lookup: impl Fn(&str) -> Option<i64>) -> Option<i64> {
        let mut acc = self.constant;
        for (v, c) in &self.terms {
            acc = acc.checked_add(c.checked_mul(lookup(v)?)?)?;
        }
        Some(acc)
    }

    fn is_simple(&self) -> bool {
        match (self.terms.len(), self.constant) {
            (0, c) => c >= 0,
            (1, 0) => self.terms.values().all(|c| *c == 1),
            _ => false,
        }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            let mag = c.unsigned_abs();
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if *c < 0 { "-" } else { "+" })?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant > 0 {
            write!(f, "+{}", self.constant)
        } else if self.constant < 0 {
            write!(f, "-{}", self.constant.unsigned_abs())
        } else {
            Ok(())
        }
    }
}

/// Sum bound: an affine form, optionally floor-divided by a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Affine(Affine),
    Floor(Affine, i64),
}

impl Bound {
    pub fn affine(&self) -> &Affine {
        match self {
            Bound::Affine(a) | Bound::Floor(a, _) => a,
        }
    }

    pub fn eval(&self, lookup: impl Fn(&str) -> Option<i64>) -> Option<i64> {
        match self {
            Bound::Affine(a) => a.eval(lookup),
            Bound::Floor(a, d) => Some(a.eval(lookup)?.div_euclid(*d)),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Affine(a) => write!(f, "{a}"),
            Bound::Floor(a, d) if a.is_simple() => write!(f, "floor({a}/{d})"),
            Bound::Floor(a, d) => write!(f, "floor(({a})/{d})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqKind {
    /// `O[k]`
    Value,
    /// `O'[k]`
    Derivative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Lit(Rational),
    X,
    /// Integer-valued free or summation variable.
    Var(String),
    Seq(SeqKind, Affine),
    /// Binomial coefficient `C(n, k)`.
    Binom(Affine, Affine),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Affine),
    Sum {
        var: String,
        lo: Bound,
        hi: Bound,
        body: Box<Expr>,
    },
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Lit(r) if r.is_negative() => 0,
            // `p/q` reads back as a literal only where a quotient would fit.
            Expr::Lit(r) if !r.is_integer() => 2,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_bare(f)?;
            return write!(f, ")");
        }
        self.write_bare(f)
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Expr::Lit(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Expr::X => write!(f, "x"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Seq(SeqKind::Value, a) => write!(f, "O[{a}]"),
            Expr::Seq(SeqKind::Derivative, a) => write!(f, "O'[{a}]"),
            Expr::Binom(n, k) => write!(f, "C({n}, {k})"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.write_at(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)
            }
            // An integer divisor is bracketed so `1/2` is not read back as a literal.
            Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "/")?;
                match **b {
                    Expr::Lit(ref r) if r.is_integer() => write!(f, "({b})"),
                    _ => b.write_at(f, 3),
                }
            }
            Expr::Pow(b, e) => {
                b.write_at(f, 5)?;
                if e.is_simple() {
                    write!(f, "^{e}")
                } else {
                    write!(f, "^({e})")
                }
            }
            Expr::Sum { var, lo, hi, body } => {
                write!(f, "Sum({var}={lo}..{hi}, ")?;
                body.write_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Ge,
    Le,
    Gt,
    Lt,
    Eq,
}

impl Cmp {
    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Cmp::Ge => a >= b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Lt => a < b,
            Cmp::Eq => a == b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Ge => ">=",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Lt => "<",
            Cmp::Eq => "==",
        }
    }
}

/// `lhs op rhs` between affine forms in the free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: Affine,
    pub op: Cmp,
    pub rhs: Affine,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

/// `lhs == rhs where ranges, constraints`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityAst {
    pub lhs: Expr,
    pub rhs: Expr,
    /// Free variables with their inclusive ranges, in declaration order.
    pub ranges: Vec<ParamRange>,
    pub constraints: Vec<Constraint>,
}

impl IdentityAst {
    pub fn free_vars(&self) -> Vec<&str> {
        self.ranges.iter().map(|r| r.name.as_str()).collect()
    }
}

impl fmt::Display for IdentityAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} == {} where ", self.lhs, self.rhs)?;
        let mut first = true;
        for r in &self.ranges {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{}={}..{}", r.name, r.lo, r.hi)?;
            first = false;
        }
        for c in &self.constraints {
            write!(f, ", {c}")?;
        }
        Ok(())
    }
}
