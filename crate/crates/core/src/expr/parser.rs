//! Recursive-descent parser for rational expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (("+" | "-") product)*
//! product := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" integer)?
//! atom    := integer | identifier | "(" sum ")"
//! ```

use std::fmt;

use num_bigint::BigInt;

use crate::algebra::{RatFn, Rational, Symbol};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(BigInt),
    Symbol(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Group(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(Error::Parse {
                offset: i,
                expected: vec!["an expression token".into()],
                found: format!("`{ch}`"),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn error(&self, expected: &[&str]) -> Error {
        Error::Parse {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.product()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                let e = u32::try_from(&n).map_err(|_| self.error(&["an exponent below 2^32"]))?;
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(self.error(&["non-negative integer exponent"])),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Number(n))
            }
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(Expr::Symbol(s))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error(&["`)`", "operator"]));
                }
                Ok(Expr::Group(Box::new(inner)))
            }
            _ => Err(self.error(&["number", "identifier", "`(`", "`-`"])),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expression(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    if *p.peek() == Tok::End {
        return Err(p.error(&["expression"]));
    }
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

impl Expr {
    /// Every identifier in the tree, in order of first appearance.
    pub fn identifiers(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Number(_) => {}
                Expr::Symbol(s) => {
                    if !out.contains(s) {
                        out.push(s.clone());
                    }
                }
                Expr::Neg(x) | Expr::Pow(x, _) | Expr::Group(x) => walk(x, out),
                Expr::Binary(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Lowers to a rational function. `declared` decides which identifiers
    /// are allowed.
    pub fn lower(&self, declared: &dyn Fn(&str) -> bool) -> Result<RatFn> {
        match self {
            Expr::Number(n) => Ok(RatFn::constant(Rational::from_integer(n.clone()))),
            Expr::Symbol(s) => {
                if !declared(s) {
                    return Err(Error::UndeclaredSymbol(s.clone()));
                }
                Ok(RatFn::var(Symbol::intern(s)))
            }
            Expr::Neg(x) => Ok(x.lower(declared)?.neg()),
            Expr::Group(x) => x.lower(declared),
            Expr::Pow(x, e) => Ok(x.lower(declared)?.pow(*e)),
            Expr::Binary(op, l, r) => {
                let (l, r) = (l.lower(declared)?, r.lower(declared)?);
                match op {
                    BinOp::Add => Ok(l.add(&r)),
                    BinOp::Sub => Ok(l.sub(&r)),
                    BinOp::Mul => Ok(l.mul(&r)),
                    BinOp::Div => l.div(&r),
                }
            }
        }
    }

    /// Lowers, accepting reserved names and `declared`.
    pub fn lower_with(&self, declared: &[String]) -> Result<RatFn> {
        self.lower(&|s: &str| Symbol::is_reserved(s) || declared.iter().any(|d| d == s))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Pow(_, _) => 4,
            Expr::Number(_) | Expr::Symbol(_) | Expr::Group(_) => 5,
        }
    }
}

impl fmt::Display for Expr {
    /// Prints with the fewest parentheses that re-parse to the same tree
    /// shape (groups are kept).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(n) => write!(f, "{n}"),
            Expr::Symbol(s) => f.write_str(s),
            Expr::Group(x) => write!(f, "({x})"),
            Expr::Neg(x) => {
                if x.precedence() < 3 {
                    write!(f, "-({x})")
                } else {
                    write!(f, "-{x}")
                }
            }
            Expr::Pow(x, e) => {
                if x.precedence() < 5 {
                    write!(f, "({x})^{e}")
                } else {
                    write!(f, "{x}^{e}")
                }
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                if l.precedence() < p {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, " {} ", op.symbol())?;
                // Left associativity: an equal-precedence right operand needs brackets.
                if r.precedence() <= p {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ybmaps::{family_kernel, FamilyId};

    fn lower(s: &str) -> RatFn {
        parse_expression(s).unwrap().lower_with(&[]).unwrap()
    }

    #[test]
    fn kernels_lower_to_builtins() {
        assert!(lower("(a*X - b*Y)/(X - Y)").equals(&family_kernel(FamilyId::F3).unwrap()));
        assert!(lower("1 + (b - a)/(X - Y)").equals(&family_kernel(FamilyId::F4).unwrap()));
    }

    #[test]
    fn symbol_node() {
        assert_eq!(parse_expression("X").unwrap(), Expr::Symbol("X".into()));
    }

    #[test]
    fn precedence_and_associativity() {
        // -a^2 is -(a^2); a - b - c is (a - b) - c; a/b/c is (a/b)/c
        assert!(lower("-a^2").equals(&lower("0 - a*a")));
        assert!(lower("a - b - c").equals(&lower("a - (b + c)")));
        assert!(lower("a/b/c").equals(&lower("a/(b*c)")));
        assert!(lower("2*-X").equals(&lower("-2*X")));
        assert!(lower("-5/7").equals(&RatFn::constant(crate::algebra::rational(-5, 7))));
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_expression("a + * b") {
            Err(Error::Parse { offset, expected, .. }) => {
                assert_eq!(offset, 4);
                assert!(expected.iter().any(|e| e == "identifier"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expression("(a"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_expression("a^b"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_expression(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_expression("a $ b"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(
            parse_expression("t*X").unwrap().lower_with(&[]),
            Err(Error::UndeclaredSymbol(s)) if s == "t"
        ));
        assert!(matches!(
            parse_expression("X/(a - a)").unwrap().lower_with(&[]),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn printing_round_trips() {
        for s in ["a - (b - c)", "-(a + b)^2", "(a/b)/c", "a/(b/c)", "-a^3*X", "2 - -X", "(X)"] {
            let e = parse_expression(s).unwrap();
            let again = parse_expression(&e.to_string()).unwrap();
            assert_eq!(e, again, "{s} printed as {e}");
        }
    }

    #[test]
    fn ratfn_display_parses_back() {
        let r = lower("(3*a*X - b*Y/2)/(X^2 - mu)");
        assert!(lower(&r.to_string()).equals(&r));
    }
}
