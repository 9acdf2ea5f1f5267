use std::collections::HashSet;

use crate::algebra::rational::{int, ratio};
use crate::identities::ParamRange;

use super::ast::{Affine, Bound, Cmp, Constraint, Expr, IdentityAst, SeqKind};
use super::lexer::{tokenize, Pos, Tok, Token};
use super::ParseError;

/// Nesting limit for parenthesised and unary forms.
pub const MAX_DEPTH: usize = 200;

/// Parses one identity.
pub fn parse(source: &str) -> Result<IdentityAst, ParseError> {
    let tokens = tokenize(source)?;
    Parser {
        tokens,
        at: 0,
        depth: 0,
        sum_scope: Vec::new(),
        free_uses: Vec::new(),
        sum_binders: Vec::new(),
    }
    .identity()
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    depth: usize,
    /// Summation variables currently bound, innermost last.
    sum_scope: Vec<String>,
    /// Variable uses not bound by an enclosing sum.
    free_uses: Vec<(String, Pos)>,
    sum_binders: Vec<(String, Pos)>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.tokens[self.at];
        ParseError::new(message, t.pos, &t.tok.describe())
    }

    fn expected(&self, what: &str) -> ParseError {
        self.error_here(format!("expected {what}, found `{}`", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.expected(&format!("`{}`", tok.describe())))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error_here("expression nested too deeply"));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn identity(mut self) -> PResult<IdentityAst> {
        let lhs = self.expr()?;
        self.expect(Tok::EqEq)?;
        let rhs = self.expr()?;
        self.expect(Tok::Where)?;
        let mut ranges: Vec<ParamRange> = Vec::new();
        let mut constraints = Vec::new();
        let mut constraint_uses = Vec::new();
        loop {
            if matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::Assign {
                let pos = self.pos();
                let Tok::Ident(name) = self.bump().tok else { unreachable!() };
                if ranges.iter().any(|r| r.name == name) {
                    return Err(ParseError::new(format!("variable `{name}` declared twice"), pos, &name));
                }
                self.bump();
                let lo = self.signed_int()?;
                self.expect(Tok::DotDot)?;
                let hi = self.signed_int()?;
                ranges.push(ParamRange::new(&name, lo, hi));
            } else {
                let pos = self.pos();
                let uses_before = self.free_uses.len();
                let lhs = self.affine()?;
                let op = match self.peek() {
                    Tok::Ge => Cmp::Ge,
                    Tok::Le => Cmp::Le,
                    Tok::Gt => Cmp::Gt,
                    Tok::Lt => Cmp::Lt,
                    Tok::EqEq => Cmp::Eq,
                    _ => return Err(self.expected("a range `name = lo..hi` or a comparison")),
                };
                self.bump();
                let rhs = self.affine()?;
                constraint_uses.extend(self.free_uses.drain(uses_before..));
                constraints.push((Constraint { lhs, op, rhs }, pos));
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if *self.peek() != Tok::Eof {
            return Err(self.expected("`,` or end of input"));
        }
        let declared: HashSet<&str> = ranges.iter().map(|r| r.name.as_str()).collect();
        for (name, pos) in self.free_uses.iter().chain(&constraint_uses) {
            if !declared.contains(name.as_str()) {
                return Err(ParseError::new(format!("undeclared variable `{name}`"), *pos, name));
            }
        }
        for (name, pos) in &self.sum_binders {
            if declared.contains(name.as_str()) {
                return Err(ParseError::new(
                    format!("summation variable `{name}` reuses a free variable"),
                    *pos,
                    name,
                ));
            }
        }
        Ok(IdentityAst {
            lhs,
            rhs,
            ranges,
            constraints: constraints.into_iter().map(|(c, _)| c).collect(),
        })
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let negative = self.eat(&Tok::Minus);
        match *self.peek() {
            Tok::Int(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.expected("an integer")),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.leave();
        Ok(acc)
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Minus) {
            self.enter()?;
            let inner = self.unary()?;
            self.leave();
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let exponent = match self.peek() {
            Tok::LParen => {
                self.bump();
                let a = self.affine()?;
                self.expect(Tok::RParen)?;
                a
            }
            Tok::Ident(_) => self.affine_atom()?,
            _ => Affine::constant(self.signed_int()?),
        };
        if *self.peek() == Tok::Caret {
            return Err(self.error_here("chained powers need parentheses"));
        }
        Ok(Expr::Pow(Box::new(base), exponent))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(p) => {
                self.bump();
                // `p/q` with two integer literals is a rational literal.
                if *self.peek() == Tok::Slash {
                    if let Tok::Int(q) = *self.peek2() {
                        if q == 0 {
                            self.bump();
                            return Err(self.error_here("zero denominator in rational literal"));
                        }
                        self.bump();
                        self.bump();
                        return Ok(Expr::Lit(ratio(p, q)));
                    }
                }
                Ok(Expr::Lit(int(p)))
            }
            Tok::X => {
                self.bump();
                Ok(Expr::X)
            }
            Tok::Ident(name) => {
                self.bump();
                self.note_use(&name, pos);
                Ok(Expr::Var(name))
            }
            Tok::O | Tok::ODeriv => {
                let kind = if *self.peek() == Tok::O {
                    SeqKind::Value
                } else {
                    SeqKind::Derivative
                };
                self.bump();
                self.expect(Tok::LBracket)?;
                let index = self.affine()?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::Seq(kind, index))
            }
            Tok::Binom => {
                self.bump();
                self.expect(Tok::LParen)?;
                let n = self.affine()?;
                self.expect(Tok::Comma)?;
                let k = self.affine()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Binom(n, k))
            }
            Tok::Sum => self.sum(),
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.expected("an expression")),
        }
    }

    fn sum(&mut self) -> PResult<Expr> {
        self.bump();
        self.expect(Tok::LParen)?;
        let pos = self.pos();
        let var = match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                name
            }
            _ => return Err(self.expected("a summation variable")),
        };
        if self.sum_scope.contains(&var) {
            return Err(ParseError::new(
                format!("summation variable `{var}` shadows an enclosing sum"),
                pos,
                &var,
            ));
        }
        self.expect(Tok::Assign)?;
        let lo = self.bound()?;
        self.expect(Tok::DotDot)?;
        let hi = self.bound()?;
        self.expect(Tok::Comma)?;
        self.sum_binders.push((var.clone(), pos));
        self.sum_scope.push(var.clone());
        let body = self.expr();
        self.sum_scope.pop();
        let body = body?;
        self.expect(Tok::RParen)?;
        Ok(Expr::Sum {
            var,
            lo,
            hi,
            body: Box::new(body),
        })
    }

    fn bound(&mut self) -> PResult<Bound> {
        if !self.eat(&Tok::Floor) {
            return Ok(Bound::Affine(self.affine()?));
        }
        self.expect(Tok::LParen)?;
        let a = self.affine()?;
        self.expect(Tok::Slash)?;
        let d = match *self.peek() {
            Tok::Int(d) if d > 0 => d,
            _ => return Err(self.expected("a positive integer divisor")),
        };
        self.bump();
        self.expect(Tok::RParen)?;
        Ok(Bound::Floor(a, d))
    }

    fn note_use(&mut self, name: &str, pos: Pos) {
        if !self.sum_scope.iter().any(|v| v == name) {
            self.free_uses.push((name.to_string(), pos));
        }
    }

    fn overflow(&self, pos: Pos) -> ParseError {
        ParseError::new("integer overflow in affine form", pos, &self.tokens[self.at].tok.describe())
    }

    /// `affine := aterm (("+" | "-") aterm)*`
    fn affine(&mut self) -> PResult<Affine> {
        self.enter()?;
        let mut acc = self.affine_term()?;
        loop {
            let pos = self.pos();
            let negate = if self.eat(&Tok::Plus) {
                false
            } else if self.eat(&Tok::Minus) {
                true
            } else {
                break;
            };
            let mut t = self.affine_term()?;
            if negate {
                t = t.checked_neg().ok_or_else(|| self.overflow(pos))?;
            }
            acc = acc.checked_add(&t).ok_or_else(|| self.overflow(pos))?;
        }
        self.leave();
        Ok(acc)
    }

    /// Products are allowed while at most one factor mentions a variable.
    fn affine_term(&mut self) -> PResult<Affine> {
        let mut acc = self.affine_factor()?;
        while *self.peek() == Tok::Star {
            let pos = self.pos();
            self.bump();
            let rhs = self.affine_factor()?;
            acc = match (acc.as_constant(), rhs.as_constant()) {
                (Some(k), _) => rhs.checked_scale(k),
                (_, Some(k)) => acc.checked_scale(k),
                _ => return Err(ParseError::new("index expression is not affine", pos, "*")),
            }
            .ok_or_else(|| self.overflow(pos))?;
        }
        Ok(acc)
    }

    fn affine_factor(&mut self) -> PResult<Affine> {
        let pos = self.pos();
        if self.eat(&Tok::Minus) {
            self.enter()?;
            let inner = self.affine_factor()?;
            self.leave();
            return inner.checked_neg().ok_or_else(|| self.overflow(pos));
        }
        self.affine_atom()
    }

    fn affine_atom(&mut self) -> PResult<Affine> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Affine::constant(v))
            }
            Tok::Ident(name) => {
                self.bump();
                self.note_use(&name, pos);
                Ok(Affine::var(&name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.affine()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.expected("an integer or variable")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unclosed_index_points_past_the_input() {
        let e = parse("O[n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert!(e.message.contains("`]`"), "{}", e.message);
        assert_eq!(e.token, "end of input");
    }

    #[test]
    fn cassini_has_one_free_variable() {
        let ast = parse("O[n+1]*O[n-1] - O[n]^2 == -x^(-2*n) where n=1..50").unwrap();
        assert_eq!(ast.free_vars(), vec!["n"]);
        assert_eq!(ast.ranges[0], ParamRange::new("n", 1, 50));
        let Expr::Neg(inner) = &ast.rhs else { panic!("{:?}", ast.rhs) };
        let Expr::Pow(base, e) = &**inner else { panic!() };
        assert_eq!(**base, Expr::X);
        assert_eq!(e.terms.get("n"), Some(&-2));
    }

    #[test]
    fn sum_node() {
        let ast = parse("Sum(j=0..n, O[j]) == x^2*(1/x - O[n+2]) where n=0..30").unwrap();
        assert!(matches!(ast.lhs, Expr::Sum { ref var, .. } if var == "j"));
    }

    #[test]
    fn precedence_of_power_over_negation() {
        let ast = parse("-x^2 == -(x^2) where n=0..0").unwrap();
        assert_eq!(ast.lhs, ast.rhs);
    }

    #[test]
    fn rational_literal() {
        let ast = parse("3/4*x == x*(3/4) where n=0..0").unwrap();
        assert_eq!(ast.lhs, Expr::Mul(Box::new(Expr::Lit(ratio(3, 4))), Box::new(Expr::X)));
    }

    #[test]
    fn constraints_and_ranges() {
        let ast = parse("O[n] == O[m] where n=-2..3, m=0..4, m >= n, 2*m == n+1").unwrap();
        assert_eq!(ast.free_vars(), vec!["n", "m"]);
        assert_eq!(ast.constraints.len(), 2);
        assert_eq!(ast.constraints[0].op, Cmp::Ge);
    }

    #[test]
    fn undeclared_variable_is_located() {
        let e = parse("O[n] == O[m] where n=0..3").unwrap_err();
        assert_eq!((e.line, e.column), (1, 11));
        assert_eq!(e.token, "m");
    }

    #[test]
    fn sum_variables_may_not_shadow() {
        let e = parse("Sum(n=0..3, O[n]) == 0 where n=0..3").unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse("Sum(j=0..3, Sum(j=0..2, O[j])) == 0 where n=0..3").unwrap_err();
        assert_eq!(e.column, 17);
    }

    #[test]
    fn nonlinear_index_is_rejected() {
        assert!(parse("O[n*n] == 0 where n=0..3").is_err());
    }

    #[test]
    fn duplicate_declaration() {
        assert!(parse("O[n] == 0 where n=0..3, n=1..2").is_err());
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let src = format!("{}x{} == x where n=0..1", "(".repeat(5000), ")".repeat(5000));
        assert!(parse(&src).unwrap_err().message.contains("deeply"));
        let src = format!("{}x == x where n=0..1", "-".repeat(5000));
        assert!(parse(&src).is_err());
    }

    #[test]
    fn trailing_garbage() {
        let e = parse("O[n] == O[n] where n=0..3 ]").unwrap_err();
        assert_eq!(e.column, 27);
    }
}
