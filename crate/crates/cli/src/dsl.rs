//! Expression language for jets and vector fields.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['-'] factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := number | 'i' | 'x' | 'y' | 'z' | '(' expr ')'
//! number := uint ('/' uint)? | decimal
//! ```
//!
//! A single top-level `/` between two expressions forms a quotient. Vector
//! fields are written `[A, B]` for `A ∂x + B ∂y`, or as catalog references.

use std::fmt;

use germforge::catalog::{make_normal_form, make_pair, Family, NormalFormId, Param};
use germforge::germ::RationalFn;
use germforge::{GermError, Jet1, Jet2, Scalar, VectorFieldGerm};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}' at {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("variable '{name}' is not allowed here")]
    WrongVariable { name: char },
    #[error(transparent)]
    Germ(#[from] GermError),
}

pub type Result<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Unsigned literal as written: `3`, `3/2`, `0.25`.
    Num(String),
    Imag,
    Var(char),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
    /// Only at the top level.
    Quot(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_ascii_digit() || chars[k].1 == '.') {
                k += 1;
            }
            let s: String = chars[start..k].iter().map(|p| p.1).collect();
            if s.matches('.').count() > 1 || s == "." {
                return Err(ParseError::Syntax { pos, msg: format!("malformed number '{s}'") });
            }
            out.push((pos, Tok::Num(s)));
        } else if c.is_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].1.is_alphanumeric() {
                k += 1;
            }
            out.push((pos, Tok::Ident(chars[start..k].iter().map(|p| p.1).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            k += 1;
        } else {
            return Err(ParseError::Syntax { pos, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    k: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.k).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.k += 1;
            true
        } else {
            false
        }
    }

    fn top(&mut self) -> Result<Expr> {
        let e = self.expr()?;
        let e = if self.eat('/') { Expr::Quot(Box::new(e), Box::new(self.expr()?)) } else { e };
        if self.k < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.term()?)));
        }
        let mut e = self.factor()?;
        while self.eat('*') {
            e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        let b = self.base()?;
        let e = if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(s)) if !s.contains('.') => {
                    self.k += 1;
                    let k = s.parse().or_else(|_| self.err("exponent too large"))?;
                    Expr::Pow(Box::new(b), k)
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        } else {
            b
        };
        if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_))) || self.peek() == Some(&Tok::Sym('(')) {
            return self.err("implicit multiplication; write '*'");
        }
        Ok(e)
    }

    fn base(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.k += 1;
                if !s.contains('.')
                    && self.peek() == Some(&Tok::Sym('/'))
                    && matches!(self.toks.get(self.k + 1), Some((_, Tok::Num(d))) if !d.contains('.'))
                {
                    let Some((_, Tok::Num(d))) = self.toks.get(self.k + 1).cloned() else { unreachable!() };
                    self.k += 2;
                    if d.trim_start_matches('0').is_empty() {
                        return Err(ParseError::Syntax { pos, msg: "zero denominator".into() });
                    }
                    return Ok(Expr::Num(format!("{s}/{d}")));
                }
                Ok(Expr::Num(s))
            }
            Some(Tok::Ident(name)) => {
                self.k += 1;
                match name.as_str() {
                    "i" => Ok(Expr::Imag),
                    "x" | "y" | "z" => Ok(Expr::Var(name.chars().next().unwrap())),
                    _ => Err(ParseError::UnknownVariable { pos, name }),
                }
            }
            Some(Tok::Sym('(')) => {
                self.k += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    Parser { toks, k: 0, end: text.len() }.top()
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Quot(..) => 0,
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Neg(_) => 2,
        Expr::Mul(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(s) if s.contains('/') => 3,
        _ => 5,
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn ends_with_integer(e: &Expr) -> bool {
    match e {
        Expr::Num(s) => !s.contains(['/', '.']),
        Expr::Mul(_, b) => prec(b) >= 4 && ends_with_integer(b),
        _ => false,
    }
}

/// Canonical text with minimal parentheses.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(s) => write!(f, "{s}"),
            Expr::Imag => write!(f, "i"),
            Expr::Var(c) => write!(f, "{c}"),
            Expr::Add(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " + ")?;
                wrap(f, b, 2)
            }
            Expr::Sub(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " - ")?;
                wrap(f, b, 2)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 3)?;
                write!(f, "*")?;
                wrap(f, b, 4)
            }
            Expr::Pow(a, k) => {
                wrap(f, a, 5)?;
                write!(f, "^{k}")
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 2)
            }
            Expr::Quot(a, b) => {
                // a trailing integer would merge with '/' into a rational literal
                if ends_with_integer(a) {
                    write!(f, "({a})")?;
                } else {
                    wrap(f, a, 3)?;
                }
                write!(f, "/")?;
                wrap(f, b, 5)
            }
        }
    }
}

/// `parse` followed by canonical printing.
pub fn normalize(text: &str) -> Result<String> {
    Ok(parse_expression(text)?.to_string())
}

fn number<S: Scalar>(s: &str) -> Result<S> {
    let bad = || ParseError::Syntax { pos: 0, msg: format!("number '{s}' out of range") };
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        return Ok(S::from_ratio(n, d));
    }
    S::parse_decimal(s).ok_or_else(bad)
}

/// Evaluation target: the variables allowed and the jet arithmetic.
trait Ring<S: Scalar>: Sized + Clone {
    fn constant(c: S, degree: u32) -> Self;
    fn var(v: char, degree: u32) -> Result<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self, degree: u32) -> Self;
}

impl<S: Scalar> Ring<S> for Jet2<S> {
    fn constant(c: S, degree: u32) -> Self {
        Jet2::constant(c, degree)
    }
    fn var(v: char, degree: u32) -> Result<Self> {
        match v {
            'x' => Ok(Jet2::x(degree)),
            'y' => Ok(Jet2::y(degree)),
            _ => Err(ParseError::WrongVariable { name: v }),
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self, degree: u32) -> Self {
        self.mul_trunc(o, degree)
    }
}

impl<S: Scalar> Ring<S> for Jet1<S> {
    fn constant(c: S, degree: u32) -> Self {
        Jet1::constant(c, degree)
    }
    fn var(v: char, degree: u32) -> Result<Self> {
        match v {
            'z' => Ok(Jet1::var(degree)),
            _ => Err(ParseError::WrongVariable { name: v }),
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self, degree: u32) -> Self {
        self.mul_trunc(o, degree)
    }
}

fn eval<S: Scalar, R: Ring<S>>(e: &Expr, degree: u32) -> Result<R> {
    Ok(match e {
        Expr::Num(s) => R::constant(number(s)?, degree),
        Expr::Imag => R::constant(S::imag_unit(), degree),
        Expr::Var(v) => R::var(*v, degree)?,
        Expr::Add(a, b) => eval::<S, R>(a, degree)?.add(&eval(b, degree)?),
        Expr::Sub(a, b) => eval::<S, R>(a, degree)?.sub(&eval(b, degree)?),
        Expr::Mul(a, b) => eval::<S, R>(a, degree)?.mul(&eval(b, degree)?, degree),
        Expr::Pow(a, k) => {
            let base: R = eval(a, degree)?;
            let mut acc = R::constant(S::one(), degree);
            for _ in 0..*k {
                acc = acc.mul(&base, degree);
            }
            acc
        }
        Expr::Neg(a) => R::constant(S::zero(), degree).sub(&eval(a, degree)?),
        Expr::Quot(..) => return Err(ParseError::Syntax { pos: 0, msg: "quotient is only allowed for functions".into() }),
    })
}

impl Expr {
    pub fn to_jet2<S: Scalar>(&self, degree: u32) -> Result<Jet2<S>> {
        eval::<S, Jet2<S>>(self, degree)
    }

    pub fn to_jet1<S: Scalar>(&self, degree: u32) -> Result<Jet1<S>> {
        eval::<S, Jet1<S>>(self, degree)
    }

    pub fn to_rational<S: Scalar>(&self, degree: u32) -> Result<RationalFn<S>> {
        match self {
            Expr::Quot(a, b) => Ok(RationalFn::new(a.to_jet2(degree)?, b.to_jet2(degree)?)?),
            e => Ok(RationalFn::from_jet(e.to_jet2(degree)?)),
        }
    }

    /// Value of a variable-free expression.
    pub fn to_constant<S: Scalar>(&self) -> Result<S> {
        let e = match self {
            Expr::Quot(a, b) => {
                return Ok(a.to_constant::<S>()? / b.to_constant::<S>()?);
            }
            e => e,
        };
        let j: Jet1<S> = eval(e, 0)?;
        Ok(j.coeff(0))
    }
}

pub fn parse_jet2<S: Scalar>(text: &str, degree: u32) -> Result<Jet2<S>> {
    parse_expression(text)?.to_jet2(degree)
}

pub fn parse_jet1<S: Scalar>(text: &str, degree: u32) -> Result<Jet1<S>> {
    parse_expression(text)?.to_jet1(degree)
}

pub fn parse_constant<S: Scalar>(text: &str) -> Result<S> {
    parse_expression(text)?.to_constant()
}

/// Which half of a commuting pair a reference selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairPart {
    X,
    Y,
}

/// A catalog identifier whose series parameters are read with this grammar:
/// `f` in `x, y`, all others in `z`.
pub fn parse_catalog_id<S: Scalar>(text: &str, degree: u32) -> Result<NormalFormId<S>> {
    let mut inner: Option<ParseError> = None;
    let id = NormalFormId::parse_with(text, |key, value| {
        let parsed = if key == "f" {
            parse_jet2(value, degree).map(Param::bi)
        } else {
            parse_jet1(value, degree).map(Param::uni)
        };
        parsed.map_err(|e| {
            let msg = format!("parameter {key}: {e}");
            inner = Some(e);
            GermError::BadParams(msg)
        })
    });
    match (id, inner) {
        (Ok(id), _) => Ok(id),
        (Err(_), Some(e)) => Err(e),
        (Err(e), None) => Err(e.into()),
    }
}

pub fn is_catalog_ref(text: &str) -> bool {
    let t = text.trim_start();
    t.starts_with("table:") || t.starts_with("mt:")
}

/// Splits an optional `.x` / `.y` selector off a pair reference.
fn split_part(text: &str) -> (&str, Option<PairPart>) {
    let t = text.trim();
    if let Some(rest) = t.strip_suffix(".x") {
        (rest, Some(PairPart::X))
    } else if let Some(rest) = t.strip_suffix(".y") {
        (rest, Some(PairPart::Y))
    } else {
        (t, None)
    }
}

/// Both fields of a pair reference, when `text` is one.
pub fn parse_pair<S: Scalar>(text: &str, degree: u32) -> Result<Option<(VectorFieldGerm<S>, VectorFieldGerm<S>)>> {
    let (body, part) = split_part(text);
    if !is_catalog_ref(body) || part.is_some() {
        return Ok(None);
    }
    let id = parse_catalog_id::<S>(body, degree)?;
    match id.family {
        Family::Pair(_) => Ok(Some(make_pair(&id, degree)?)),
        Family::Row(_) => Ok(None),
    }
}

/// `[A, B]` or a catalog reference (`mt:…` selects `.x` by default).
pub fn parse_vector_field<S: Scalar>(text: &str, degree: u32) -> Result<VectorFieldGerm<S>> {
    let t = text.trim();
    if is_catalog_ref(t) {
        let (body, part) = split_part(t);
        let id = parse_catalog_id::<S>(body, degree)?;
        return Ok(match id.family {
            Family::Row(_) => make_normal_form(&id, degree)?,
            Family::Pair(_) => {
                let (x, y) = make_pair(&id, degree)?;
                if part == Some(PairPart::Y) {
                    y
                } else {
                    x
                }
            }
        });
    }
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or(ParseError::Syntax { pos: 0, msg: "a vector field is written [A, B]".into() })?;
    let mut depth = 0i32;
    let mut split = None;
    for (k, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if split.is_some() {
                    return Err(ParseError::Syntax { pos: k + 1, msg: "expected exactly two components".into() });
                }
                split = Some(k);
            }
            _ => {}
        }
    }
    let k = split.ok_or(ParseError::Syntax { pos: t.len(), msg: "expected ',' between components".into() })?;
    let offset = |e: ParseError, by: usize| match e {
        ParseError::Syntax { pos, msg } => ParseError::Syntax { pos: pos + by, msg },
        ParseError::UnknownVariable { pos, name } => ParseError::UnknownVariable { pos: pos + by, name },
        e => e,
    };
    let start = t.len() - t.trim_start_matches('[').len();
    let a = parse_jet2(&inner[..k], degree).map_err(|e| offset(e, start))?;
    let b = parse_jet2(&inner[k + 1..], degree).map_err(|e| offset(e, start + k + 1))?;
    Ok(VectorFieldGerm::new(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use germforge::GaussRat as Q;

    #[test]
    fn polynomial_values() {
        let j: Jet2<Q> = parse_jet2("x*(x-2*y)", 6).unwrap();
        assert_eq!(j, Jet2::from_int_terms(6, &[(2, 0, 1), (1, 1, -2)]));
        let j: Jet2<Q> = parse_jet2("3/2*x^2 - (y + 1)^2", 6).unwrap();
        let want = Jet2::from_terms(6, [(2, 0, Q::from_ratio(3, 2)), (0, 2, Q::from_i64(-1)), (0, 1, Q::from_i64(-2)), (0, 0, Q::from_i64(-1))]);
        assert_eq!(j, want);
        let c: Q = parse_constant("0.25 - 2*i").unwrap();
        assert_eq!(c, Q::from_ratio(1, 4) - Q::imag_unit() * Q::from_i64(2));
    }

    #[test]
    fn quotient() {
        let r = parse_expression("y^2/(y-x^2)").unwrap().to_rational::<Q>(8).unwrap();
        assert_eq!(r.num, Jet2::from_int_terms(8, &[(0, 2, 1)]));
        assert_eq!(r.den, Jet2::from_int_terms(8, &[(0, 1, 1), (2, 0, -1)]));
    }

    #[test]
    fn implicit_multiplication_is_rejected_at_the_variable() {
        match parse_expression("x*(x-2y)") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("x*w"), Err(ParseError::UnknownVariable { pos: 2, .. })));
        assert!(parse_expression("x^").is_err());
        assert!(parse_expression("(x").is_err());
    }

    #[test]
    fn vector_fields() {
        let x: VectorFieldGerm<Q> = parse_vector_field("[y - 2*x^2, -2*x*y]", 8).unwrap();
        assert_eq!(x, VectorFieldGerm::from_int_terms(8, &[(0, 1, 1), (2, 0, -2)], &[(1, 1, -2)]));
        let row: VectorFieldGerm<Q> = parse_vector_field("table:2[n=1]", 8).unwrap();
        assert_eq!(row, VectorFieldGerm::from_int_terms(8, &[(2, 0, 1)], &[(1, 1, -1), (0, 2, 2)]));
        let y: VectorFieldGerm<Q> = parse_vector_field("mt:vi.y", 8).unwrap();
        assert_eq!(y, VectorFieldGerm::from_int_terms(8, &[(1, 1, 1)], &[(0, 2, 1)]));
        let unit: VectorFieldGerm<Q> = parse_vector_field("table:11[n=2,f=1+x]", 6).unwrap();
        assert_eq!(unit.a().coeff(2, 0), Q::from_i64(1));
        assert!(parse_vector_field::<Q>("[x, y, 0]", 4).is_err());
        assert!(parse_vector_field::<Q>("[x, z]", 4).is_err());
    }

    #[test]
    fn printing() {
        for (text, want) in [
            ("x*(x-2*y)", "x*(x - 2*y)"),
            ("-(x+y)^2", "-(x + y)^2"),
            ("x-(y-1)", "x - (y - 1)"),
            ("y^2/(y-x^2)", "y^2/(y - x^2)"),
            ("3/2*x", "3/2*x"),
            ("(3/2)^2", "(3/2)^2"),
        ] {
            assert_eq!(normalize(text).unwrap(), want);
        }
    }
}
