//! Exact scalars: arbitrary-precision rationals and the quadratic field ℚ(√d).
//!
//! Everything in the crate is generic over [`Scalar`]. Two implementations are
//! provided: [`Rational`] for computations whose coefficients never leave ℚ, and
//! [`FieldElem`] for the leg-cutting transforms which need `1/√N`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("radicand mismatch: elements of Q(sqrt({0})) and Q(sqrt({1})) cannot be combined")]
    ContextMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt({n}) is not expressible in Q(sqrt({radicand}))")]
    NotRepresentable { n: u64, radicand: u64 },
    #[error("coefficient literal, position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An exact field usable as coefficient ring.
///
/// The by-reference methods exist because the hot loops (composition of linear
/// combinations, elimination) would otherwise clone big integers on every step.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_rational(r: Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn try_inv(&self) -> Result<Self, FieldError>;

    /// `√n` inside the field whose designated radicand is `radicand`.
    fn sqrt_int(n: u64, radicand: u64) -> Result<Self, FieldError>;

    /// Coefficient conjugation used by the antilinear involution. All fields
    /// here are real, so this is the identity.
    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_f64(&self) -> f64;

    /// Parses the coefficient literal grammar, `r` standing for `√radicand`.
    fn parse_scalar(text: &str, radicand: u64) -> Result<Self, FieldError>;

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        let lhs = std::mem::replace(self, Self::zero());
        *self = lhs + other.clone();
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        let lhs = std::mem::replace(self, Self::zero());
        *self = lhs - other.clone();
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

pub(crate) fn is_perfect_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn sqrt_int(n: u64, radicand: u64) -> Result<Self, FieldError> {
        if is_perfect_square(n) {
            Ok(int(n.sqrt()))
        } else {
            Err(FieldError::NotRepresentable { n, radicand })
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_scalar(text: &str, radicand: u64) -> Result<Self, FieldError> {
        let x = FieldElem::parse_literal(text, radicand)?;
        if x.is_rational() {
            Ok(x.rat)
        } else {
            Err(FieldError::NotRepresentable {
                n: radicand,
                radicand: 0,
            })
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
}

/// `rat + rad·√radicand`, an element of ℚ(√radicand).
///
/// Purely rational elements carry radicand 0 so that they combine with every
/// context; an element with a nonzero radical part remembers its radicand and
/// refuses to mix with a different one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    rat: Rational,
    rad: Rational,
    radicand: u64,
}

impl FieldElem {
    pub fn new(rat: Rational, rad: Rational, radicand: u64) -> Self {
        if rad.is_zero() || radicand == 0 {
            return Self::rational(rat);
        }
        if is_perfect_square(radicand) {
            let root = int(radicand.sqrt());
            return Self::rational(rat + rad * root);
        }
        Self { rat, rad, radicand }
    }

    pub fn rational(rat: Rational) -> Self {
        Self {
            rat,
            rad: Rational::zero(),
            radicand: 0,
        }
    }

    /// `√radicand` itself.
    pub fn sqrt(radicand: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), radicand)
    }

    pub fn rat_part(&self) -> &Rational {
        &self.rat
    }

    pub fn rad_part(&self) -> &Rational {
        &self.rad
    }

    /// Radicand of the radical part, 0 when the element is rational.
    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> Result<u64, FieldError> {
        match (self.radicand, other.radicand) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(FieldError::ContextMismatch(a, b)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        Ok(Self::new(&self.rat + &other.rat, &self.rad + &other.rad, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        Ok(Self::new(&self.rat - &other.rat, &self.rad - &other.rad, d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        if self.rad.is_zero() && other.rad.is_zero() {
            return Ok(Self::rational(&self.rat * &other.rat));
        }
        // (a + b√d)(c + e√d) = (ac + be·d) + (ae + bc)√d
        let rat = &self.rat * &other.rat + &self.rad * &other.rad * int(d);
        let rad = &self.rat * &other.rad + &self.rad * &other.rat;
        Ok(Self::new(rat, rad, d))
    }

    /// Inverse via the conjugate: (a − b√d)/(a² − b²d). For non-square `d` the
    /// norm vanishes only at zero.
    pub fn try_inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.rad.is_zero() {
            return Ok(Self::rational(self.rat.recip()));
        }
        let norm = &self.rat * &self.rat - &self.rad * &self.rad * int(self.radicand);
        Ok(Self::new(
            &self.rat / &norm,
            -(&self.rad / &norm),
            self.radicand,
        ))
    }

    /// Parses the literal grammar `a/b` and `a/b r` terms joined by `+`/`-`,
    /// where `r` stands for `√radicand`.
    pub fn parse_literal(text: &str, radicand: u64) -> Result<Self, FieldError> {
        LiteralParser::new(text, radicand).parse()
    }

    fn expect(&self, other: &Self) -> u64 {
        match self.common_radicand(other) {
            Ok(d) => d,
            Err(e) => panic!("{e}"),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rad.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return write!(f, "{} r", self.rad);
        }
        if self.rad.is_negative() {
            write!(f, "{} - {} r", self.rat, -self.rad.clone())
        } else {
            write!(f, "{} + {} r", self.rat, self.rad)
        }
    }
}

impl Zero for FieldElem {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad.is_zero()
    }
}

impl One for FieldElem {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Neg for FieldElem {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            rat: -self.rat,
            rad: -self.rad,
            radicand: self.radicand,
        }
    }
}

// The operator impls panic on a radicand mismatch; the `try_*` methods report it.
impl Add for FieldElem {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        let d = self.expect(&other);
        Self::new(self.rat + other.rat, self.rad + other.rad, d)
    }
}

impl Sub for FieldElem {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        let d = self.expect(&other);
        Self::new(self.rat - other.rat, self.rad - other.rad, d)
    }
}

impl Mul for FieldElem {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        self.mul_ref(&other)
    }
}

impl Scalar for FieldElem {
    fn from_rational(r: Rational) -> Self {
        Self::rational(r)
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        self.try_inverse()
    }

    fn sqrt_int(n: u64, radicand: u64) -> Result<Self, FieldError> {
        if is_perfect_square(n) {
            return Ok(Self::rational(int(n.sqrt())));
        }
        if radicand != 0 && !is_perfect_square(radicand) {
            let prod = u128::from(n) * u128::from(radicand);
            let root = prod.sqrt();
            if root * root == prod {
                // √n = √(n·d)/d · √d
                let coeff = Rational::new(BigInt::from(root), BigInt::from(radicand));
                return Ok(Self::new(Rational::zero(), coeff, radicand));
            }
        }
        Err(FieldError::NotRepresentable { n, radicand })
    }

    fn to_f64(&self) -> f64 {
        let a = ToPrimitive::to_f64(&self.rat).unwrap_or(f64::NAN);
        if self.rad.is_zero() {
            return a;
        }
        let b = ToPrimitive::to_f64(&self.rad).unwrap_or(f64::NAN);
        a + b * (self.radicand as f64).sqrt()
    }

    fn parse_scalar(text: &str, radicand: u64) -> Result<Self, FieldError> {
        Self::parse_literal(text, radicand)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        match self.try_mul(other) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    fn add_assign_ref(&mut self, other: &Self) {
        let d = self.expect(other);
        self.rat += &other.rat;
        self.rad += &other.rad;
        if self.rad.is_zero() {
            self.radicand = 0;
        } else {
            self.radicand = d;
        }
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        let d = self.expect(other);
        self.rat -= &other.rat;
        self.rad -= &other.rad;
        if self.rad.is_zero() {
            self.radicand = 0;
        } else {
            self.radicand = d;
        }
    }
}

struct LiteralParser<'a> {
    text: &'a str,
    pos: usize,
    radicand: u64,
}

impl<'a> LiteralParser<'a> {
    fn new(text: &'a str, radicand: u64) -> Self {
        Self {
            text,
            pos: 0,
            radicand,
        }
    }

    fn err(&self, msg: impl Into<String>) -> FieldError {
        FieldError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.bump();
                Some(false)
            }
            Some('-') | Some('−') => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            None
        } else {
            self.text[start..self.pos].parse().ok()
        }
    }

    fn term(&mut self, negative: bool) -> Result<FieldElem, FieldError> {
        self.skip_ws();
        let value = if let Some(num) = self.integer() {
            let mut q = Rational::from_integer(num);
            if self.peek() == Some('/') {
                self.bump();
                let den = self
                    .integer()
                    .ok_or_else(|| self.err("expected denominator"))?;
                if den.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                q /= Rational::from_integer(den);
            }
            self.skip_ws();
            if self.peek() == Some('r') {
                self.bump();
                self.radical(q)?
            } else {
                FieldElem::rational(q)
            }
        } else if self.peek() == Some('r') {
            self.bump();
            self.radical(Rational::one())?
        } else {
            return Err(self.err("expected a number or `r`"));
        };
        Ok(if negative { -value } else { value })
    }

    fn radical(&self, coeff: Rational) -> Result<FieldElem, FieldError> {
        if self.radicand == 0 {
            return Err(self.err("`r` used without a radicand"));
        }
        Ok(FieldElem::new(Rational::zero(), coeff, self.radicand))
    }

    fn parse(mut self) -> Result<FieldElem, FieldError> {
        self.skip_ws();
        let negative = self.sign() == Some(true);
        let mut acc = self.term(negative)?;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(acc);
            }
            let negative = self.sign().ok_or_else(|| self.err("expected `+` or `-`"))?;
            let t = self.term(negative)?;
            acc = acc.try_add(&t)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn fe(a: (i64, i64), b: (i64, i64), d: u64) -> FieldElem {
        FieldElem::new(q(a.0, a.1), q(b.0, b.1), d)
    }

    #[test]
    fn add_examples() {
        let x = fe((1, 2), (0, 1), 5);
        let y = fe((1, 2), (1, 1), 5);
        assert_eq!(x.try_add(&y).unwrap(), fe((1, 1), (1, 1), 5));
        assert_eq!(y.clone() + FieldElem::zero(), y);
        // √4 folds to 2
        let z = fe((1, 1), (-1, 1), 4);
        assert!(z.is_rational());
        assert_eq!(z + FieldElem::zero(), FieldElem::from_int(-1));
    }

    #[test]
    fn mul_examples() {
        let half = FieldElem::sqrt(4).try_inverse().unwrap();
        assert_eq!(half.clone() * half, FieldElem::from_frac(1, 4));
        assert_eq!(
            FieldElem::sqrt(5) * FieldElem::sqrt(5),
            FieldElem::from_int(5)
        );
        let a = fe((1, 1), (1, 1), 5);
        let b = fe((1, 1), (-1, 1), 5);
        assert_eq!(a * b, FieldElem::from_int(-4));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            FieldElem::from_int(2).try_inverse().unwrap(),
            FieldElem::from_frac(1, 2)
        );
        assert_eq!(
            FieldElem::sqrt(5).try_inverse().unwrap(),
            fe((0, 1), (1, 5), 5)
        );
        assert_eq!(
            fe((1, 1), (1, 1), 5).try_inverse().unwrap(),
            fe((-1, 4), (1, 4), 5)
        );
        assert_eq!(
            FieldElem::zero().try_inverse(),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_radicands() {
        let a = FieldElem::sqrt(5);
        let b = FieldElem::sqrt(7);
        assert_eq!(a.try_add(&b), Err(FieldError::ContextMismatch(5, 7)));
        assert_eq!(a.try_mul(&b), Err(FieldError::ContextMismatch(5, 7)));
        // rational elements are context free
        assert!(a.try_add(&FieldElem::from_int(3)).is_ok());
    }

    #[test]
    fn sqrt_embedding() {
        assert_eq!(FieldElem::sqrt_int(9, 5).unwrap(), FieldElem::from_int(3));
        assert_eq!(FieldElem::sqrt_int(5, 5).unwrap(), FieldElem::sqrt(5));
        // √20 = 2√5
        assert_eq!(FieldElem::sqrt_int(20, 5).unwrap(), fe((0, 1), (2, 1), 5));
        assert!(FieldElem::sqrt_int(3, 5).is_err());
        assert!(Rational::sqrt_int(5, 0).is_err());
        assert_eq!(Rational::sqrt_int(16, 0).unwrap(), q(4, 1));
    }

    #[test]
    fn literal_print_and_parse() {
        let x = fe((-1, 3), (1, 3), 5);
        assert_eq!(x.to_string(), "-1/3 + 1/3 r");
        assert_eq!(FieldElem::parse_literal("-1/3 + 1/3 r", 5).unwrap(), x);
        assert_eq!(FieldElem::parse_literal("−1/3 + 1/3r", 5).unwrap(), x);
        assert_eq!(
            FieldElem::parse_literal("r", 5).unwrap(),
            FieldElem::sqrt(5)
        );
        assert_eq!(
            FieldElem::parse_literal("2 - r - 1", 5).unwrap(),
            fe((1, 1), (-1, 1), 5)
        );
        assert_eq!(fe((0, 1), (-2, 7), 3).to_string(), "-2/7 r");
        assert!(FieldElem::parse_literal("1/0", 5).is_err());
        assert!(FieldElem::parse_literal("1 +", 5).is_err());
        assert!(FieldElem::parse_literal("r", 0).is_err());
        match FieldElem::parse_literal("1 x", 5) {
            Err(FieldError::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
