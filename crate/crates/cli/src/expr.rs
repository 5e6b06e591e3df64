//! Expression language: lexer, recursive-descent parser and printer.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | atom
//! atom   := number ['r'] | 'r' | partition | name ['(' args ')'] | '(' expr ')'
//! number := digits ['/' digits]
//! ```

use std::fmt;

use partlin::partition::parse_partition_at;
use partlin::{Partition, Rational, Scalar};

use crate::error::ExprError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn to(self, other: Span) -> Span {
        Span {
            start: self.start,
            end: other.end,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Const {
    Pi,
    Tau,
    Id,
    Pair,
    Up,
}

impl Const {
    fn name(self) -> &'static str {
        match self {
            Const::Pi => "pi",
            Const::Tau => "tau",
            Const::Id => "id",
            Const::Pair => "pair",
            Const::Up => "up",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Tensor,
    Compose,
    Star,
    Rotl,
    Rotr,
    Cyc,
    Vplus,
    Vminus,
    Psb,
    Tsb,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Tensor => "tensor",
            Func::Compose => "compose",
            Func::Star => "star",
            Func::Rotl => "rotl",
            Func::Rotr => "rotr",
            Func::Cyc => "cyc",
            Func::Vplus => "Vplus",
            Func::Vminus => "Vminus",
            Func::Psb => "Psb",
            Func::Tsb => "Tsb",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Tensor | Func::Compose => 2,
            _ => 1,
        }
    }

    pub const ALL: [Func; 10] = [
        Func::Tensor,
        Func::Compose,
        Func::Star,
        Func::Rotl,
        Func::Rotr,
        Func::Cyc,
        Func::Vplus,
        Func::Vminus,
        Func::Psb,
        Func::Tsb,
    ];
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    /// A rational literal, times `√N` when `radical` is set.
    Num {
        value: Rational,
        radical: bool,
    },
    Partition(Partition),
    Const(Const),
    Block(usize),
    CutSum(usize, usize),
    Zero(usize, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// Structural equality, ignoring source positions.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (
                Num {
                    value: a,
                    radical: r,
                },
                Num {
                    value: b,
                    radical: s,
                },
            ) => a == b && r == s,
            (Partition(a), Partition(b)) => a == b,
            (Const(a), Const(b)) => a == b,
            (Block(a), Block(b)) => a == b,
            (CutSum(a, b), CutSum(c, d)) | (Zero(a, b), Zero(c, d)) => a == c && b == d,
            (Neg(a), Neg(b)) => a == b,
            (Add(a, b), Add(c, d)) | (Sub(a, b), Sub(c, d)) | (Mul(a, b), Mul(c, d)) => {
                a == c && b == d
            }
            (Call(f, a), Call(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) => 2,
            ExprKind::Neg(..) => 3,
            _ => 4,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        match &self.kind {
            ExprKind::Num { value, radical } => match (*value == Rational::from_int(1), radical) {
                (true, true) => write!(f, "r"),
                (false, true) => write!(f, "{value} r"),
                (_, false) => write!(f, "{value}"),
            },
            ExprKind::Partition(p) => write!(f, "{p}"),
            ExprKind::Const(c) => f.write_str(c.name()),
            ExprKind::Block(k) => write!(f, "block({k})"),
            ExprKind::CutSum(k, i) => write!(f, "cutsum({k},{i})"),
            ExprKind::Zero(k, l) => write!(f, "zero({k},{l})"),
            ExprKind::Neg(e) => {
                write!(f, "-")?;
                write_operand(f, e, e.precedence() < prec)
            }
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => {
                let op = match self.kind {
                    ExprKind::Add(..) => "+",
                    ExprKind::Sub(..) => "-",
                    _ => "*",
                };
                write_operand(f, a, a.precedence() < prec)?;
                write!(f, " {op} ")?;
                write_operand(f, b, b.precedence() <= prec)
            }
            ExprKind::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Partition(Partition),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Partition(p) => write!(f, "`{p}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let n = src[start..pos]
                    .parse()
                    .map_err(|_| ExprError::new(start, "integer literal is too large"))?;
                out.push((Tok::Int(n), Span { start, end: pos }));
                continue;
            }
            b'P' if next_non_ws(bytes, pos + 1) == Some(b'(') => {
                let (p, end) = parse_partition_at(src, pos).map_err(|e| match e {
                    partlin::Error::Parse { pos, msg } => ExprError::new(pos, msg),
                    other => ExprError::new(start, other.to_string()),
                })?;
                pos = end;
                out.push((Tok::Partition(p), Span { start, end }));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                out.push((
                    Tok::Ident(src[start..pos].to_string()),
                    Span { start, end: pos },
                ));
                continue;
            }
            _ => {
                let ch = src[pos..].chars().next().unwrap_or('?');
                return Err(ExprError::new(pos, format!("unexpected character `{ch}`")));
            }
        };
        pos += 1;
        out.push((tok, Span { start, end: pos }));
    }
    out.push((
        Tok::End,
        Span {
            start: pos,
            end: pos,
        },
    ));
    Ok(out)
}

fn next_non_ws(bytes: &[u8], mut pos: usize) -> Option<u8> {
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    bytes.get(pos).copied()
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn span(&self) -> Span {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Span, ExprError> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(ExprError::new(
                self.span().start,
                format!("expected {want}, found {}", self.peek()),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let make: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr {
                kind: make(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr {
                kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            let start = self.bump().1;
            let inner = self.unary()?;
            let span = start.to(inner.span);
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span,
            });
        }
        self.atom()
    }

    fn is_radical(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "r")
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Int(num) => {
                let mut value = Rational::from_int(num as i64);
                let mut span = span;
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let (den_tok, den_span) = self.bump();
                    let Tok::Int(den) = den_tok else {
                        return Err(ExprError::new(den_span.start, "expected a denominator"));
                    };
                    if den == 0 {
                        return Err(ExprError::new(den_span.start, "zero denominator"));
                    }
                    value = Rational::from_frac(num as i64, den as i64);
                    span = span.to(den_span);
                }
                let radical = self.is_radical();
                if radical {
                    span = span.to(self.bump().1);
                }
                Ok(Expr {
                    kind: ExprKind::Num { value, radical },
                    span,
                })
            }
            Tok::Partition(p) => Ok(Expr {
                kind: ExprKind::Partition(p),
                span,
            }),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => self.named(&name, span),
            other => Err(ExprError::new(
                span.start,
                format!("expected an operand, found {other}"),
            )),
        }
    }

    fn int_args(&mut self, n: usize) -> Result<(Vec<usize>, Span), ExprError> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        for i in 0..n {
            if i > 0 {
                self.expect(Tok::Comma)?;
            }
            let (tok, span) = self.bump();
            match tok {
                Tok::Int(v) => out.push(v as usize),
                other => {
                    return Err(ExprError::new(
                        span.start,
                        format!("expected an integer, found {other}"),
                    ))
                }
            }
        }
        let end = self.expect(Tok::RParen)?;
        Ok((out, end))
    }

    fn named(&mut self, name: &str, span: Span) -> Result<Expr, ExprError> {
        let konst = match name {
            "r" => {
                return Ok(Expr {
                    kind: ExprKind::Num {
                        value: Rational::from_int(1),
                        radical: true,
                    },
                    span,
                })
            }
            "pi" => Some(Const::Pi),
            "tau" => Some(Const::Tau),
            "id" => Some(Const::Id),
            "pair" => Some(Const::Pair),
            "up" => Some(Const::Up),
            _ => None,
        };
        if let Some(c) = konst {
            return Ok(Expr {
                kind: ExprKind::Const(c),
                span,
            });
        }
        match name {
            "block" => {
                let (args, end) = self.int_args(1)?;
                return Ok(Expr {
                    kind: ExprKind::Block(args[0]),
                    span: span.to(end),
                });
            }
            "cutsum" | "zero" => {
                let (args, end) = self.int_args(2)?;
                let kind = if name == "cutsum" {
                    ExprKind::CutSum(args[0], args[1])
                } else {
                    ExprKind::Zero(args[0], args[1])
                };
                return Ok(Expr {
                    kind,
                    span: span.to(end),
                });
            }
            _ => {}
        }
        let Some(func) = Func::ALL.into_iter().find(|f| f.name() == name) else {
            return Err(ExprError::new(span.start, format!("unknown name `{name}`")));
        };
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        for i in 0..func.arity() {
            if i > 0 {
                self.expect(Tok::Comma)?;
            }
            args.push(self.expr()?);
        }
        let end = self.expect(Tok::RParen)?;
        Ok(Expr {
            kind: ExprKind::Call(func, args),
            span: span.to(end),
        })
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut parser = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(ExprError::new(
            parser.span().start,
            format!("unexpected {} after expression", parser.peek()),
        ));
    }
    Ok(e)
}
