//! Expression syntax for elements and matrices over the algebra.
//!
//! ```text
//! input  := expr | '[' row (';' row)* ']'
//! row    := expr (',' expr)*
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' '-'? int)?
//! atom   := ('z' digits | 'q' | 'i' | rational | '(' expr ')') '\''*
//! ```
//!
//! A prime denotes the adjoint. Negative exponents are accepted only for
//! invertible scalar monomials such as `q^-2`.

use std::fmt;

use qball::numerics::MatPoly;
use qball::{GaussianRational, NCPoly, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax(String),
    IndexOutOfRange { index: usize, n: usize },
    NonIntegerExponent,
    NegativeExponent,
    Matrix(String),
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ErrorKind::IndexOutOfRange { index, n } => {
                write!(f, "generator z{index} is out of range for n = {n}")
            }
            ErrorKind::NonIntegerExponent => write!(f, "exponent must be an integer"),
            ErrorKind::NegativeExponent => {
                write!(f, "negative exponents are only allowed on scalar monomials such as q")
            }
            ErrorKind::Matrix(msg) => write!(f, "invalid matrix: {msg}"),
        }
    }
}

/// An error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ErrorKind,
}

impl ParseError {
    fn syntax(position: usize, msg: impl Into<String>) -> Self {
        ParseError { position, kind: ErrorKind::Syntax(msg.into()) }
    }

    /// The input line with a caret under the offending position.
    pub fn caret(&self, input: &str) -> String {
        let line = input.replace(['\n', '\r', '\t'], " ");
        format!("{line}\n{}^", " ".repeat(self.position.min(line.len())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow { base: Box<Expr>, exp: i64, pos: usize },
    Adjoint(Box<Expr>),
    Generator { index: usize, pos: usize },
    Q,
    I,
    Rational { num: i64, den: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Scalar(Expr),
    Matrix(Vec<Vec<Expr>>),
}

/// A lowered input: a single element or a square matrix of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Poly(NCPoly),
    Matrix(MatPoly),
}

impl Parsed {
    pub fn into_matrix(self) -> MatPoly {
        match self {
            Parsed::Poly(p) => MatPoly::scalar(p),
            Parsed::Matrix(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Gen(usize),
    Num(i64),
    Decimal,
    Q,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Prime,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'z' => {
                let end = digits(i + 1);
                if end == i + 1 {
                    return Err(ParseError::syntax(i, "expected a generator index after 'z'"));
                }
                let index = text[i + 1..end]
                    .parse()
                    .map_err(|_| ParseError::syntax(i, "generator index is too large"))?;
                i = end;
                Tok::Gen(index)
            }
            b'0'..=b'9' => {
                let end = digits(i);
                if end < bytes.len() && bytes[end] == b'.' {
                    i = digits(end + 1);
                    out.push((Tok::Decimal, start));
                    continue;
                }
                let v = text[i..end].parse().map_err(|_| ParseError::syntax(i, "number is too large"))?;
                i = end;
                Tok::Num(v)
            }
            _ => {
                i += 1;
                match c {
                    b'q' => Tok::Q,
                    b'i' => Tok::I,
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'\'' => Tok::Prime,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'[' => Tok::LBracket,
                    b']' => Tok::RBracket,
                    b',' => Tok::Comma,
                    b';' => Tok::Semi,
                    _ => {
                        let ch = text[start..].chars().next().unwrap_or('?');
                        return Err(ParseError::syntax(start, format!("unexpected character '{ch}'")));
                    }
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at];
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn input(&mut self) -> Result<Ast, ParseError> {
        let ast = if self.peek() == Tok::LBracket {
            self.bump();
            let mut rows = vec![self.row()?];
            while self.peek() == Tok::Semi {
                self.bump();
                rows.push(self.row()?);
            }
            self.expect(Tok::RBracket, "',', ';' or ']'")?;
            Ast::Matrix(rows)
        } else {
            Ast::Scalar(self.expr()?)
        };
        if self.peek() != Tok::End {
            return Err(ParseError::syntax(self.pos(), "unexpected trailing input"));
        }
        Ok(ast)
    }

    fn row(&mut self) -> Result<Vec<Expr>, ParseError> {
        let mut row = vec![self.expr()?];
        while self.peek() == Tok::Comma {
            self.bump();
            row.push(self.expr()?);
        }
        Ok(row)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if self.peek() == Tok::Minus {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Tok::Star {
            self.bump();
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let negative = self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        match self.bump() {
            (Tok::Num(v), _) => {
                if self.peek() == Tok::Slash {
                    return Err(ParseError { position: pos, kind: ErrorKind::NonIntegerExponent });
                }
                let exp = if negative { -v } else { v };
                Ok(Expr::Pow { base: Box::new(base), exp, pos })
            }
            (Tok::Decimal | Tok::Q | Tok::I | Tok::Gen(_) | Tok::LParen, _) => {
                Err(ParseError { position: pos, kind: ErrorKind::NonIntegerExponent })
            }
            _ => Err(ParseError::syntax(pos, "expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        let mut e = match tok {
            Tok::Gen(index) => Expr::Generator { index, pos },
            Tok::Q => Expr::Q,
            Tok::I => Expr::I,
            Tok::Num(num) => {
                if self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        (Tok::Num(0), p) => return Err(ParseError::syntax(p, "zero denominator")),
                        (Tok::Num(den), _) => Expr::Rational { num, den },
                        (_, p) => return Err(ParseError::syntax(p, "expected a denominator")),
                    }
                } else {
                    Expr::Rational { num, den: 1 }
                }
            }
            Tok::Decimal => {
                return Err(ParseError::syntax(pos, "decimal literals are not supported, write a fraction"))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                inner
            }
            Tok::End => return Err(ParseError::syntax(pos, "unexpected end of input")),
            _ => return Err(ParseError::syntax(pos, "expected a generator, number, 'q', 'i' or '('")),
        };
        while self.peek() == Tok::Prime {
            self.bump();
            e = Expr::Adjoint(Box::new(e));
        }
        Ok(e)
    }
}

/// Parses text into an abstract syntax tree without checking indices.
pub fn parse_ast(text: &str) -> Result<Ast, ParseError> {
    Parser { toks: lex(text)?, at: 0 }.input()
}

/// Lowers an expression into the algebra with `n` generators.
pub fn lower(e: &Expr, n: usize) -> Result<NCPoly, ParseError> {
    Ok(match e {
        Expr::Add(a, b) => &lower(a, n)? + &lower(b, n)?,
        Expr::Sub(a, b) => &lower(a, n)? - &lower(b, n)?,
        Expr::Neg(a) => -&lower(a, n)?,
        Expr::Mul(a, b) => &lower(a, n)? * &lower(b, n)?,
        Expr::Adjoint(a) => lower(a, n)?.adjoint(),
        Expr::Pow { base, exp, pos } => {
            let b = lower(base, n)?;
            if *exp >= 0 {
                let e = u32::try_from(*exp).map_err(|_| ParseError::syntax(*pos, "exponent is too large"))?;
                b.pow(e)
            } else {
                let inv = b
                    .as_constant()
                    .and_then(|c| c.monomial_inverse())
                    .ok_or(ParseError { position: *pos, kind: ErrorKind::NegativeExponent })?;
                let e = u32::try_from(-*exp).map_err(|_| ParseError::syntax(*pos, "exponent is too large"))?;
                NCPoly::constant(n, inv.pow(e))
            }
        }
        Expr::Generator { index, pos } => NCPoly::generator(n, *index, false)
            .map_err(|_| ParseError { position: *pos, kind: ErrorKind::IndexOutOfRange { index: *index, n } })?,
        Expr::Q => NCPoly::constant(n, Scalar::q_pow(1)),
        Expr::I => NCPoly::constant(n, Scalar::imaginary_unit()),
        Expr::Rational { num, den } => NCPoly::constant(n, Scalar::constant(GaussianRational::from_ratio(*num, *den))),
    })
}

/// Parses and lowers an element or a square matrix.
pub fn parse_input(text: &str, n: usize) -> Result<Parsed, ParseError> {
    match parse_ast(text)? {
        Ast::Scalar(e) => Ok(Parsed::Poly(lower(&e, n)?)),
        Ast::Matrix(rows) => {
            let size = rows.len();
            if let Some(bad) = rows.iter().position(|r| r.len() != size) {
                return Err(ParseError {
                    position: 0,
                    kind: ErrorKind::Matrix(format!("row {} has {} entries, expected {size}", bad + 1, rows[bad].len())),
                });
            }
            let lowered = rows
                .iter()
                .map(|r| r.iter().map(|e| lower(e, n)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            MatPoly::new(lowered)
                .map(Parsed::Matrix)
                .map_err(|e| ParseError { position: 0, kind: ErrorKind::Matrix(e.to_string()) })
        }
    }
}

/// Parses a single element; matrices are rejected.
pub fn parse_poly(text: &str, n: usize) -> Result<NCPoly, ParseError> {
    match parse_input(text, n)? {
        Parsed::Poly(p) => Ok(p),
        Parsed::Matrix(_) => Err(ParseError { position: 0, kind: ErrorKind::Matrix("expected a single element".into()) }),
    }
}

/// Prints a matrix in the bracket syntax accepted by [`parse_input`].
pub fn format_matrix(m: &MatPoly) -> String {
    let rows: Vec<String> = (0..m.size())
        .map(|i| (0..m.size()).map(|j| m.entry(i, j).to_string()).collect::<Vec<_>>().join(", "))
        .collect();
    format!("[{}]", rows.join("; "))
}
