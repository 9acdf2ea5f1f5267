use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraError, LaurentPoly, RationalFunction, Rational};
use crate::identities::{
    lookup, Expectation, IdentityReport, Params, ParamRange, Sweep, Witness, WitnessValue, WITNESS_CAP,
};
use crate::seq::{binomial, OresmeCache};

use super::ast::{Expr, IdentityAst, SeqKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvaluationError {
    #[error("division by zero at {params}")]
    DivisionByZero { params: String },
    #[error("{source} at {params}")]
    Algebra { source: AlgebraError, params: String },
    #[error("integer overflow in an index at {params}")]
    Overflow { params: String },
    #[error("range override for undeclared variable `{0}`")]
    UnknownVariable(String),
}

/// Catalog expectation for `name`, or `Holds` when the name is not cataloged.
pub fn expectation_for(name: &str) -> Expectation {
    lookup(name).map(|e| e.expected).unwrap_or(Expectation::Holds)
}

/// Checks `ast` over its declared ranges.
pub fn check_ast(ast: &IdentityAst) -> Result<IdentityReport, EvaluationError> {
    check_ast_with("dsl", ast, &Sweep::default(), Expectation::Holds)
}

/// Checks `ast` under `name`, with ranges in `overrides` replacing declared ones.
pub fn check_ast_with(
    name: &str,
    ast: &IdentityAst,
    overrides: &Sweep,
    expected: Expectation,
) -> Result<IdentityReport, EvaluationError> {
    let mut ranges: Vec<ParamRange> = ast.ranges.clone();
    for r in &overrides.ranges {
        let slot = ranges
            .iter_mut()
            .find(|d| d.name == r.name)
            .ok_or_else(|| EvaluationError::UnknownVariable(r.name.clone()))?;
        *slot = r.clone();
    }
    let sweep = Sweep::new(ranges);
    let names: Vec<&str> = ast.free_vars();
    let assignments: Vec<Vec<i64>> = sweep
        .assignments()
        .into_iter()
        .filter(|values| {
            let env = |v: &str| names.iter().position(|n| *n == v).map(|i| values[i]);
            ast.constraints
                .iter()
                .all(|c| matches!((c.lhs.eval(env), c.rhs.eval(env)), (Some(a), Some(b)) if c.op.holds(a, b)))
        })
        .collect();
    let cache = OresmeCache::new();
    let outcomes: Vec<Result<Option<Witness>, EvaluationError>> = assignments
        .par_iter()
        .map(|values| {
            let params = Params(names.iter().zip(values).map(|(n, v)| (n.to_string(), *v)).collect());
            let mut env: HashMap<String, i64> = params.0.iter().cloned().collect();
            let ctx = Ctx {
                cache: &cache,
                params: &params,
            };
            let lhs = ctx.eval(&ast.lhs, &mut env)?;
            let rhs = ctx.eval(&ast.rhs, &mut env)?;
            Ok((lhs != rhs).then_some(Witness {
                params,
                lhs: WitnessValue::Function(lhs),
                rhs: WitnessValue::Function(rhs),
            }))
        })
        .collect();
    let mut failing = Vec::new();
    for o in outcomes {
        if let Some(w) = o? {
            failing.push(w);
        }
    }
    let failures = failing.len() as u64;
    failing.truncate(WITNESS_CAP);
    Ok(IdentityReport::new(
        name,
        &sweep,
        expected,
        assignments.len() as u64,
        failures,
        failing,
    ))
}

struct Ctx<'a> {
    cache: &'a OresmeCache,
    params: &'a Params,
}

impl Ctx<'_> {
    fn where_(&self) -> String {
        let parts: Vec<String> = self.params.0.iter().map(|(n, v)| format!("{n}={v}")).collect();
        parts.join(", ")
    }

    fn overflow(&self) -> EvaluationError {
        EvaluationError::Overflow { params: self.where_() }
    }

    fn algebra(&self, source: AlgebraError) -> EvaluationError {
        match source {
            AlgebraError::DivisionByZero => EvaluationError::DivisionByZero { params: self.where_() },
            source => EvaluationError::Algebra {
                source,
                params: self.where_(),
            },
        }
    }

    fn eval(&self, e: &Expr, env: &mut HashMap<String, i64>) -> Result<RationalFunction, EvaluationError> {
        let int = |a: &super::Affine, env: &HashMap<String, i64>| a.eval(|v| env.get(v).copied()).ok_or_else(|| self.overflow());
        Ok(match e {
            Expr::Lit(r) => RationalFunction::constant(r.clone()),
            Expr::X => RationalFunction::from_poly(LaurentPoly::x_pow(1)),
            Expr::Var(v) => {
                let value = *env.get(v).expect("parser checks declarations");
                RationalFunction::constant(Rational::from_integer(value.into()))
            }
            Expr::Seq(kind, index) => {
                let k = int(index, env)?;
                let p = match kind {
                    SeqKind::Value => self.cache.poly(k),
                    SeqKind::Derivative => self.cache.derivative(k),
                };
                RationalFunction::from_poly((*p).clone())
            }
            Expr::Binom(n, k) => {
                RationalFunction::constant(Rational::from_integer(binomial(int(n, env)?, int(k, env)?)))
            }
            Expr::Neg(a) => -self.eval(a, env)?,
            Expr::Add(a, b) => &self.eval(a, env)? + &self.eval(b, env)?,
            Expr::Sub(a, b) => &self.eval(a, env)? - &self.eval(b, env)?,
            Expr::Mul(a, b) => &self.eval(a, env)? * &self.eval(b, env)?,
            Expr::Div(a, b) => {
                let (a, b) = (self.eval(a, env)?, self.eval(b, env)?);
                a.checked_div(&b).map_err(|e| self.algebra(e))?
            }
            Expr::Pow(base, exponent) => {
                let k = int(exponent, env)?;
                let base = self.eval(base, env)?;
                if base.is_zero() && k < 0 {
                    return Err(self.algebra(AlgebraError::DivisionByZero));
                }
                base.powi(k).map_err(|e| self.algebra(e))?
            }
            Expr::Sum { var, lo, hi, body } => {
                let lookup = |v: &str| env.get(v).copied();
                let lo = lo.eval(lookup).ok_or_else(|| self.overflow())?;
                let hi = hi.eval(lookup).ok_or_else(|| self.overflow())?;
                let mut acc = RationalFunction::zero();
                for j in lo..=hi {
                    env.insert(var.clone(), j);
                    let term = self.eval(body, env);
                    env.remove(var);
                    acc = &acc + &term?;
                }
                acc
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::identities::Verdict;

    #[test]
    fn cassini_holds() {
        let ast = parse("O[n+1]*O[n-1] - O[n]^2 == -x^(-2*n) where n=1..50").unwrap();
        let r = check_ast(&ast).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.checked, 50);
    }

    #[test]
    fn printed_g3_fails_at_two() {
        let ast = parse("(n-1)*O[n] - 2*n*O[n+1] == x*O'[n+1] - (1/x)*O'[n-1] where n=1..10").unwrap();
        let r = check_ast(&ast).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.has_witness("n", 2));
    }

    #[test]
    fn reflexive() {
        let r = check_ast(&parse("O[n] == O[n] where n=0..3").unwrap()).unwrap();
        assert_eq!((r.verdict, r.checked), (Verdict::Holds, 4));
    }

    #[test]
    fn division_by_identically_zero_side() {
        let ast = parse("x/O[n] == x where n=0..2").unwrap();
        let e = check_ast(&ast).unwrap_err();
        assert_eq!(e, EvaluationError::DivisionByZero { params: "n=0".into() });
        assert!(check_ast(&parse("x^(-n)*(x-x)^(n-1) == 0 where n=0..0").unwrap()).is_err());
    }

    #[test]
    fn rational_function_sides_are_exact() {
        let ast = parse("1/(x^2 - 4) - 1/(x^2 - 4) == 0 where n=0..0").unwrap();
        assert_eq!(check_ast(&ast).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn constraints_filter_assignments() {
        let ast = parse("O[n] == O[n] where n=0..4, m=0..4, m >= n").unwrap();
        assert_eq!(check_ast(&ast).unwrap().checked, 15);
    }

    #[test]
    fn overrides_replace_declared_ranges() {
        let ast = parse("O[n] == O[n] where n=0..4").unwrap();
        let r = check_ast_with("T", &ast, &Sweep::single("n", 2, 9), Expectation::Holds).unwrap();
        assert_eq!(r.checked, 8);
        assert_eq!(r.sweep, "n=2..9");
        let e = check_ast_with("T", &ast, &Sweep::single("k", 0, 1), Expectation::Holds).unwrap_err();
        assert_eq!(e, EvaluationError::UnknownVariable("k".into()));
    }

    #[test]
    fn expectation_comes_from_the_catalog() {
        assert_eq!(expectation_for("G3_T"), Expectation::FailsAsTranscribed);
        assert_eq!(expectation_for("CASSINI"), Expectation::Holds);
        assert_eq!(expectation_for("MINE"), Expectation::Holds);
    }
}
