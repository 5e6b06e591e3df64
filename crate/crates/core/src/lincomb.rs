//! Formal linear combinations of partitions of a fixed grade.
//!
//! A [`LinComb`] also carries the dimension `N` it is interpreted at: the
//! factor picked up by each closed loop during composition.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::partition::Partition;

#[derive(Clone, PartialEq)]
pub struct LinComb<S> {
    upper: usize,
    lower: usize,
    dim: u64,
    terms: BTreeMap<Partition, S>,
}

impl<S: Scalar> LinComb<S> {
    pub fn zero(k: usize, l: usize, dim: u64) -> Self {
        Self {
            upper: k,
            lower: l,
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_partition(p: Partition, dim: u64) -> Self {
        Self::term(S::one(), p, dim)
    }

    pub fn term(coeff: S, p: Partition, dim: u64) -> Self {
        let (k, l) = p.grade();
        let mut out = Self::zero(k, l, dim);
        if !coeff.is_zero() {
            out.terms.insert(p, coeff);
        }
        out
    }

    /// Sums `(coeff, partition)` pairs; every partition must have grade `(k,l)`.
    pub fn from_terms<I>(k: usize, l: usize, dim: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Partition)>,
    {
        let mut out = Self::zero(k, l, dim);
        for (c, p) in terms {
            if p.grade() != (k, l) {
                return Err(Error::Grade {
                    op: "from_terms",
                    left: (k, l),
                    right: p.grade(),
                });
            }
            out.add_term(p, &c);
        }
        Ok(out)
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn grade(&self) -> (usize, usize) {
        (self.upper, self.lower)
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    /// Reinterprets the same combination at another dimension.
    pub fn with_dim(mut self, dim: u64) -> Self {
        self.dim = dim;
        self
    }

    pub fn terms(&self) -> &BTreeMap<Partition, S> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, p: &Partition) -> S {
        self.terms.get(p).cloned().unwrap_or_else(S::zero)
    }

    /// The smallest partition with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&Partition, &S)> {
        self.terms.iter().next()
    }

    /// The single partition this combination equals up to a scalar, if any.
    pub fn as_single(&self) -> Option<&Partition> {
        if self.terms.len() == 1 {
            self.terms.keys().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, p: Partition, c: &S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self -= c · other`, ignoring grades and dimensions.
    pub(crate) fn sub_scaled(&mut self, c: &S, other: &Self) {
        for (p, x) in &other.terms {
            let delta = c.mul_ref(x);
            match self.terms.entry(p.clone()) {
                Entry::Vacant(v) => {
                    v.insert(-delta);
                }
                Entry::Occupied(mut o) => {
                    o.get_mut().sub_assign_ref(&delta);
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }

    fn check_same(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.grade() != other.grade() {
            return Err(Error::Grade {
                op,
                left: self.grade(),
                right: other.grade(),
            });
        }
        self.check_dim(other)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "add")?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "sub")?;
        let mut out = self.clone();
        out.sub_scaled(&S::one(), other);
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.upper, self.lower, self.dim);
        if c.is_zero() {
            return out;
        }
        for (p, x) in &self.terms {
            let y = c.mul_ref(x);
            if !y.is_zero() {
                out.terms.insert(p.clone(), y);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.upper + other.upper, self.lower + other.lower, self.dim);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.tensor(q), &a.mul_ref(b));
            }
        }
        Ok(out)
    }

    /// `self · p`, where `p` is applied first. Every closed loop contributes a
    /// factor `N`.
    pub fn compose(&self, p: &Self) -> Result<Self> {
        self.check_dim(p)?;
        if p.lower != self.upper {
            return Err(Error::Grade {
                op: "compose",
                left: self.grade(),
                right: p.grade(),
            });
        }
        let n = S::from_int(self.dim as i64);
        let mut powers = vec![S::one()];
        let mut out = Self::zero(p.upper, self.lower, self.dim);
        for (q, a) in &self.terms {
            for (r, b) in &p.terms {
                let (comp, loops) = q.compose(r)?;
                while powers.len() <= loops {
                    let next = powers.last().unwrap().mul_ref(&n);
                    powers.push(next);
                }
                let c = a.mul_ref(b).mul_ref(&powers[loops]);
                out.add_term(comp, &c);
            }
        }
        Ok(out)
    }

    /// Antilinear involution; coefficients go through [`Scalar::conj`].
    pub fn involute(&self) -> Self {
        let mut out = Self::zero(self.lower, self.upper, self.dim);
        for (p, c) in &self.terms {
            out.terms.insert(p.involute(), c.conj());
        }
        out
    }

    /// Applies a grade-changing bijection of partitions termwise.
    pub fn map_partitions<F>(&self, k: usize, l: usize, f: F) -> Result<Self>
    where
        F: Fn(&Partition) -> Result<Partition>,
    {
        let mut out = Self::zero(k, l, self.dim);
        for (p, c) in &self.terms {
            out.add_term(f(p)?, c);
        }
        Ok(out)
    }

    pub fn rotate_left(&self) -> Result<Self> {
        if self.upper == 0 {
            return Err(Error::Rotation("upper"));
        }
        self.map_partitions(self.upper - 1, self.lower + 1, Partition::rotate_left)
    }

    pub fn rotate_right(&self) -> Result<Self> {
        if self.lower == 0 {
            return Err(Error::Rotation("lower"));
        }
        self.map_partitions(self.upper + 1, self.lower - 1, Partition::rotate_right)
    }

    pub fn rotate_left_inv(&self) -> Result<Self> {
        if self.lower == 0 {
            return Err(Error::Rotation("lower"));
        }
        self.map_partitions(self.upper + 1, self.lower - 1, Partition::rotate_left_inv)
    }

    pub fn rotate_right_inv(&self) -> Result<Self> {
        if self.upper == 0 {
            return Err(Error::Rotation("upper"));
        }
        self.map_partitions(self.upper - 1, self.lower + 1, Partition::rotate_right_inv)
    }

    pub fn rotate_cycle(&self) -> Result<Self> {
        if self.upper != 0 {
            return Err(Error::Parameter(
                "cyclic rotation is defined on combinations without upper points".into(),
            ));
        }
        self.map_partitions(0, self.lower, Partition::rotate_cycle)
    }

    /// Divides by the leading coefficient so the leading term becomes 1.
    pub fn normalized(&self) -> Result<Self> {
        match self.leading() {
            None => Ok(self.clone()),
            Some((_, c)) => Ok(self.scale(&c.try_inv()?)),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(p, c)| json!({ "blocks": p.blocks(), "coeff": c.to_string() }))
            .collect();
        json!({ "k": self.upper, "l": self.lower, "dim": self.dim, "terms": terms })
    }

    /// Reads the JSON produced by [`to_json`](Self::to_json). `dim` is taken
    /// from the document when present.
    pub fn from_json(value: &Value, dim: u64, radicand: u64) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: msg.to_string(),
        };
        let field = |name: &str| {
            value
                .get(name)
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(&format!("missing integer field `{name}`")))
        };
        let k = field("k")? as usize;
        let l = field("l")? as usize;
        let dim = value.get("dim").and_then(Value::as_u64).unwrap_or(dim);
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array field `terms`"))?;
        let mut out = Self::zero(k, l, dim);
        for t in terms {
            let blocks: Vec<Vec<usize>> = t
                .get("blocks")
                .cloned()
                .and_then(|b| serde_json::from_value(b).ok())
                .ok_or_else(|| bad("term without `blocks`"))?;
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("term without `coeff`"))?;
            let c = S::parse_scalar(coeff, radicand)?;
            out.add_term(Partition::from_blocks(k, l, &blocks)?, &c);
        }
        Ok(out)
    }
}

/// Splits a printed coefficient into (negative, magnitude, needs parentheses).
fn coeff_parts(text: &str) -> (bool, &str, bool) {
    let mixed = text.contains(" + ") || text.contains(" - ");
    if mixed {
        (false, text, true)
    } else if let Some(rest) = text.strip_prefix('-') {
        (true, rest, false)
    } else {
        (false, text, false)
    }
}

impl<S: Scalar> fmt::Display for LinComb<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "zero({},{})", self.upper, self.lower);
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (negative, mag, paren) = coeff_parts(&text);
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if paren {
                write!(f, "({mag}) * ")?;
            } else if mag != "1" {
                write!(f, "{mag} * ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for LinComb<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[N={}] {}", self.dim, self)
    }
}

/// Reduced row-echelon basis of a subspace of one grade.
///
/// Each row's pivot is its smallest partition, with coefficient 1, and no
/// other row mentions that partition. Rows are kept in increasing pivot order.
#[derive(Clone, PartialEq)]
pub struct SpanBasis<S> {
    upper: usize,
    lower: usize,
    dim: u64,
    rows: Vec<LinComb<S>>,
}

impl<S: Scalar> fmt::Debug for SpanBasis<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpanBasis")
            .field("grade", &self.grade())
            .field("dim", &self.dim)
            .field("rows", &self.rows)
            .finish()
    }
}

impl<S: Scalar> SpanBasis<S> {
    pub fn new(k: usize, l: usize, dim: u64) -> Self {
        Self {
            upper: k,
            lower: l,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn grade(&self) -> (usize, usize) {
        (self.upper, self.lower)
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    /// Dimension of the spanned subspace.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[LinComb<S>] {
        &self.rows
    }

    fn pivot(row: &LinComb<S>) -> &Partition {
        row.leading().expect("basis rows are nonzero").0
    }

    fn check(&self, x: &LinComb<S>) -> Result<()> {
        if x.grade() != self.grade() {
            return Err(Error::Grade {
                op: "span",
                left: self.grade(),
                right: x.grade(),
            });
        }
        if x.dim() != self.dim {
            return Err(Error::Dimension(self.dim, x.dim()));
        }
        Ok(())
    }

    /// Remainder of `x` after eliminating every pivot.
    pub fn reduce(&self, x: &LinComb<S>) -> Result<LinComb<S>> {
        self.check(x)?;
        let mut r = x.clone();
        for row in &self.rows {
            let c = r.coeff(Self::pivot(row));
            if !c.is_zero() {
                r.sub_scaled(&c, row);
            }
        }
        Ok(r)
    }

    pub fn contains(&self, x: &LinComb<S>) -> Result<bool> {
        Ok(self.reduce(x)?.is_zero())
    }

    /// Adds `x` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, x: &LinComb<S>) -> Result<bool> {
        let r = self.reduce(x)?;
        if r.is_zero() {
            return Ok(false);
        }
        let r = r.normalized()?;
        let pivot = Self::pivot(&r).clone();
        for row in &mut self.rows {
            let c = row.coeff(&pivot);
            if !c.is_zero() {
                row.sub_scaled(&c, &r);
            }
        }
        let at = self.rows.partition_point(|row| Self::pivot(row) < &pivot);
        self.rows.insert(at, r);
        Ok(true)
    }

    pub fn contains_span(&self, other: &Self) -> Result<bool> {
        for row in &other.rows {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldElem, Rational};
    use num_traits::{One, Zero};

    type Q = LinComb<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    fn lc(p: Partition, n: u64) -> Q {
        Q::from_partition(p, n)
    }

    #[test]
    fn loop_factor() {
        let r = lc(Partition::copair(), 7)
            .compose(&lc(Partition::pair(), 7))
            .unwrap();
        assert_eq!(r, Q::term(q(7, 1), Partition::empty(), 7));
    }

    #[test]
    fn singleton_pair_from_projection() {
        // ↑⊗↑ = N·(⊓ − Lrot π)
        let n = 5;
        let pi = lc(Partition::identity(1), n)
            .sub(&Q::term(q(1, 5), Partition::disconnected(), n))
            .unwrap();
        let lhs = lc(Partition::pair(), n)
            .sub(&pi.rotate_left().unwrap())
            .unwrap()
            .scale(&q(5, 1));
        assert_eq!(lhs, lc(Partition::singletons(2), n));
    }

    #[test]
    fn nonfunctor_inner_composite() {
        let n = 4;
        let top = lc(Partition::down().tensor(&Partition::identity(2)), n);
        let bottom = lc(Partition::up().tensor(&Partition::pair()), n);
        // ↓ meets ↑ and closes one loop
        assert_eq!(
            top.compose(&bottom).unwrap(),
            Q::term(q(4, 1), Partition::pair(), n)
        );
    }

    #[test]
    fn grade_and_dim_errors() {
        let a = lc(Partition::pair(), 3);
        assert!(matches!(
            a.add(&lc(Partition::copair(), 3)),
            Err(Error::Grade { .. })
        ));
        assert!(matches!(
            a.add(&lc(Partition::pair(), 4)),
            Err(Error::Dimension(3, 4))
        ));
        assert!(matches!(a.compose(&a), Err(Error::Grade { .. })));
    }

    #[test]
    fn span_examples() {
        let n = 5;
        let mut b = SpanBasis::new(0, 2, n);
        assert!(b.insert(&lc(Partition::pair(), n)).unwrap());
        assert!(b.insert(&lc(Partition::singletons(2), n)).unwrap());
        assert_eq!(b.rank(), 2);
        let x = lc(Partition::pair(), n)
            .sub(&Q::term(q(1, 5), Partition::singletons(2), n))
            .unwrap();
        assert!(b.contains(&x).unwrap());
        assert!(!b.insert(&x).unwrap());
    }

    #[test]
    fn span_is_reduced() {
        let n = 3;
        let ps = crate::partition::enumerate(0, 3).unwrap();
        let mut b = SpanBasis::new(0, 3, n);
        let x = Q::from_terms(
            0,
            3,
            n,
            [(q(2, 1), ps[4].clone()), (q(1, 1), ps[1].clone())],
        )
        .unwrap();
        let y = Q::from_terms(
            0,
            3,
            n,
            [(q(1, 1), ps[1].clone()), (q(-1, 1), ps[0].clone())],
        )
        .unwrap();
        b.insert(&x).unwrap();
        b.insert(&y).unwrap();
        assert_eq!(b.rank(), 2);
        let pivots: Vec<_> = b
            .rows()
            .iter()
            .map(|r| r.leading().unwrap().0.clone())
            .collect();
        assert_eq!(pivots, vec![ps[0].clone(), ps[1].clone()]);
        for (i, r) in b.rows().iter().enumerate() {
            assert_eq!(r.coeff(&pivots[i]), q(1, 1));
            assert!(r.coeff(&pivots[1 - i]).is_zero());
        }
        // x + y lies in the span
        assert!(b.contains(&x.add(&y).unwrap()).unwrap());
    }

    #[test]
    fn literal_and_json() {
        let n = 5;
        let x = LinComb::<FieldElem>::from_terms(
            0,
            2,
            n,
            [
                (FieldElem::one(), Partition::pair()),
                (
                    FieldElem::parse_literal("-1/3 + 1/3 r", 5).unwrap(),
                    Partition::singletons(2),
                ),
            ],
        )
        .unwrap();
        assert_eq!(x.to_string(), "P(0,2){1,2} + (-1/3 + 1/3 r) * P(0,2){1}{2}");
        let neg = x.neg();
        assert_eq!(
            neg.to_string(),
            "-P(0,2){1,2} + (1/3 - 1/3 r) * P(0,2){1}{2}"
        );
        let back = LinComb::<FieldElem>::from_json(&x.to_json(), n, 5).unwrap();
        assert_eq!(back, x);
        assert_eq!(Q::zero(1, 2, 3).to_string(), "zero(1,2)");
        let y = Q::from_terms(
            0,
            2,
            3,
            [
                (q(-2, 3), Partition::pair()),
                (q(-1, 1), Partition::singletons(2)),
            ],
        )
        .unwrap();
        assert_eq!(y.to_string(), "-2/3 * P(0,2){1,2} - P(0,2){1}{2}");
    }
}
