//! Arithmetic expressions over geometry symbols.
//!
//! Coordinates in model and plan files are written as small expressions such
//! as `"D12+D13"` or `"-L7/2"`. They are parsed once and either evaluated at a
//! precision level or lifted into exact rational functions by the symbolic
//! engine.

use std::collections::BTreeSet;
use std::fmt;

use rug::Rational;

use crate::model::GeomParams;
use crate::precision::{parse_decimal_rational, PScalar, PrecisionLevel};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, Error> {
        let mut p = Parser { src, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, env: &GeomParams, level: PrecisionLevel) -> Result<PScalar, Error> {
        Ok(match self {
            Expr::Num(r) => PScalar::from_rational(r, level),
            Expr::Sym(s) => match env.get(s) {
                Some(r) => PScalar::from_rational(r, level),
                None if s == "pi" && !env.contains(s) => PScalar::pi(level),
                None => return Err(Error::UnboundSymbol(s.clone())),
            },
            Expr::Neg(a) => -a.eval(env, level)?,
            Expr::Add(a, b) => a.eval(env, level)? + b.eval(env, level)?,
            Expr::Sub(a, b) => a.eval(env, level)? - b.eval(env, level)?,
            Expr::Mul(a, b) => a.eval(env, level)? * b.eval(env, level)?,
            Expr::Div(a, b) => {
                let den = b.eval(env, level)?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero(b.to_string()));
                }
                a.eval(env, level)? / den
            }
            Expr::Pow(a, n) => {
                let base = a.eval(env, level)?;
                if *n < 0 && base.is_zero() {
                    return Err(Error::DivisionByZero(a.to_string()));
                }
                base.powi(*n)
            }
            Expr::Call(f, a) => {
                let x = a.eval(env, level)?;
                match f {
                    Func::Sqrt => {
                        if x.is_sign_negative() {
                            return Err(Error::Parse(format!("sqrt of negative value in '{self}'")));
                        }
                        x.sqrt()
                    }
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                }
            }
        })
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// True if the expression is the literal zero (after parsing).
    pub fn is_literal_zero(&self) -> bool {
        matches!(self, Expr::Num(r) if *r == 0)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => {
                if *r.denom() == 1 {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "({}/{})", r.numer(), r.denom())
                }
            }
            Expr::Sym(s) => f.write_str(s),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Pow(a, n) => write!(f, "{a}^{n}"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("expression '{}': {what} at offset {}", self.src, self.pos))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let neg = self.eat('-');
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            let n: i32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.err("integer exponent expected"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                // exponent part, only when followed by a digit or sign+digit
                let rest = &self.src[self.pos..];
                if rest.starts_with(['e', 'E']) {
                    let tail = &rest[1..];
                    let digits_at = if tail.starts_with(['+', '-']) { 1 } else { 0 };
                    if tail[digits_at..].starts_with(|c: char| c.is_ascii_digit()) {
                        self.pos += 1 + digits_at;
                        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                            self.pos += 1;
                        }
                    }
                }
                Ok(Expr::Num(parse_decimal_rational(&self.src[start..self.pos])?))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                    self.pos += c_len(self.peek());
                }
                let name = &self.src[start..self.pos];
                self.skip_ws();
                if self.peek() == Some('(') {
                    let func = match name {
                        "sqrt" => Func::Sqrt,
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        _ => return Err(self.err(&format!("unknown function '{name}'"))),
                    };
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.err("expected ')'"));
                    }
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                Ok(Expr::Sym(name.to_string()))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

fn c_len(c: Option<char>) -> usize {
    c.map_or(0, char::len_utf8)
}
