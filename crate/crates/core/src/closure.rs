//! Graded span closure of generator sets under the category operations.
//!
//! Every grade `(k,l)` is identified with `(0,k+l)` by rotating all upper
//! points down (`Rrot^{-k}`). Since the spans are closed under rotation, the
//! engine only stores the flat grades `(0,n)`, `n ≤ L`, and works with
//!
//! * tensor products `x ⊗ y` of combined length at most `L`,
//! * gluing: composing `x` and `y` along `c` legs, which is ordinary
//!   composition of suitable rotations of `x` and `y`,
//! * the cyclic rotation and the involution.
//!
//! New vectors are processed from a worklist (semi-naive iteration), each
//! against every vector processed before it. Candidate products may be built
//! in parallel but are inserted in a fixed order, so the result does not
//! depend on scheduling.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lincomb::{LinComb, SpanBasis};
use crate::partition::{enumerate, Partition};
use crate::transforms::{self, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ordinary,
    Reduced,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ordinary => "ordinary",
            Mode::Reduced => "reduced",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordinary" => Ok(Mode::Ordinary),
            "reduced" => Ok(Mode::Reduced),
            other => Err(Error::Parameter(format!("unknown closure mode `{other}`"))),
        }
    }
}

/// Rotates a combination to `(0, k+l)`.
pub fn flatten<S: Scalar>(x: &LinComb<S>) -> Result<LinComb<S>> {
    let mut out = x.clone();
    for _ in 0..x.upper() {
        out = out.rotate_right_inv()?;
    }
    Ok(out)
}

/// Inverse of [`flatten`] for the target grade `(k, n−k)`.
pub fn unflatten<S: Scalar>(x: &LinComb<S>, k: usize) -> Result<LinComb<S>> {
    if x.upper() != 0 || k > x.lower() {
        return Err(Error::Parameter(format!(
            "cannot move {k} points of a ({}, {}) combination up",
            x.upper(),
            x.lower()
        )));
    }
    let mut out = x.clone();
    for _ in 0..k {
        out = out.rotate_right()?;
    }
    Ok(out)
}

/// Composes flat `x ∈ (0,m)` and `y ∈ (0,n)` along `c` legs: the first `c`
/// points of `x` meet the last `c` points of `y` in reverse order. The
/// result is flat of length `m + n − 2c`.
pub fn glue<S: Scalar>(x: &LinComb<S>, y: &LinComb<S>, c: usize) -> Result<LinComb<S>> {
    let p = unflatten(x, x.lower() - c)?;
    let q = unflatten(y, c)?;
    flatten(&q.compose(&p)?)
}

/// The involution followed by flattening: reverses the point order.
pub fn flat_involute<S: Scalar>(x: &LinComb<S>) -> Result<LinComb<S>> {
    flatten(&x.involute())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogEntry {
    pub length: usize,
    pub source: String,
}

#[derive(Clone, Debug)]
pub struct ClosureResult<S: Scalar> {
    bound: usize,
    dim: u64,
    mode: Mode,
    flat: Vec<SpanBasis<S>>,
    grades: BTreeMap<(usize, usize), SpanBasis<S>>,
    log: Vec<LogEntry>,
}

enum Op {
    Tensor,
    Glue(usize),
}

/// A candidate with the member indices of its left and right factors.
type Product<S> = (LinComb<S>, Op, (usize, usize));

struct Engine<S> {
    bound: usize,
    flat: Vec<SpanBasis<S>>,
    members: Vec<LinComb<S>>,
    queue: VecDeque<usize>,
    log: Vec<LogEntry>,
}

impl<S: Scalar> Engine<S> {
    fn insert(&mut self, x: LinComb<S>, source: impl FnOnce() -> String) -> Result<()> {
        let n = x.lower();
        debug_assert_eq!(x.upper(), 0);
        if n > self.bound {
            return Ok(());
        }
        let r = self.flat[n].reduce(&x)?;
        if r.is_zero() {
            return Ok(());
        }
        let r = r.normalized()?;
        self.flat[n].insert(&r)?;
        self.log.push(LogEntry {
            length: n,
            source: source(),
        });
        self.members.push(r);
        self.queue.push_back(self.members.len() - 1);
        Ok(())
    }

    fn products(&self, x: &LinComb<S>, y: &LinComb<S>) -> Result<Vec<(LinComb<S>, Op)>> {
        let (m, n) = (x.lower(), y.lower());
        let mut out = Vec::new();
        if m + n <= self.bound {
            out.push((x.tensor(y)?, Op::Tensor));
        }
        for c in 1..=m.min(n) {
            if m + n - 2 * c <= self.bound {
                out.push((glue(x, y, c)?, Op::Glue(c)));
            }
        }
        Ok(out)
    }

    fn run(&mut self) -> Result<()> {
        while let Some(idx) = self.queue.pop_front() {
            let x = self.members[idx].clone();
            if x.lower() > 0 {
                self.insert(x.rotate_cycle()?, || format!("rotation of #{idx}"))?;
            }
            self.insert(flat_involute(&x)?, || format!("involution of #{idx}"))?;
            let batch: Vec<Vec<Product<S>>> = (0..=idx)
                .into_par_iter()
                .map(|j| {
                    let y = &self.members[j];
                    let mut out = Vec::new();
                    for (z, op) in self.products(&x, y)? {
                        out.push((z, op, (idx, j)));
                    }
                    if j != idx {
                        for (z, op) in self.products(y, &x)? {
                            out.push((z, op, (j, idx)));
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;
            for (z, op, (a, b)) in batch.into_iter().flatten() {
                self.insert(z, || match op {
                    Op::Tensor => format!("#{a} ⊗ #{b}"),
                    Op::Glue(c) => format!("#{a} glued to #{b} along {c}"),
                })?;
            }
        }
        Ok(())
    }
}

/// Closes `generators` at dimension `n` up to total length `bound`.
///
/// Ordinary mode starts from `⊓`; reduced mode starts from `Lrot π` and
/// requires every generator to satisfy `𝒫g = g`.
pub fn closure<S: Scalar>(
    generators: &[LinComb<S>],
    n: u64,
    bound: usize,
    mode: Mode,
) -> Result<ClosureResult<S>> {
    let cap = crate::limits::Limits::global().enum_cap;
    if bound > cap {
        return Err(Error::SizeCap {
            what: "closure bound",
            size: bound,
            cap,
        });
    }
    for (i, g) in generators.iter().enumerate() {
        if g.dim() != n {
            return Err(Error::Dimension(g.dim(), n));
        }
        if g.upper() + g.lower() > bound {
            return Err(Error::Bound {
                grade: g.grade(),
                bound,
            });
        }
        if mode == Mode::Reduced && !transforms::is_p_invariant(g)? {
            return Err(Error::Precondition(format!(
                "generator #{i} is not invariant under the projection sandwich"
            )));
        }
    }
    let mut engine = Engine {
        bound,
        flat: (0..=bound).map(|len| SpanBasis::new(0, len, n)).collect(),
        members: Vec::new(),
        queue: VecDeque::new(),
        log: Vec::new(),
    };
    engine.insert(LinComb::from_partition(Partition::empty(), n), || {
        "unit".into()
    })?;
    let pair = match mode {
        Mode::Ordinary => LinComb::from_partition(Partition::pair(), n),
        Mode::Reduced => flatten(&transforms::pi(n)?)?,
    };
    engine.insert(pair, || "pair".into())?;
    for (i, g) in generators.iter().enumerate() {
        engine.insert(flatten(g)?, || format!("generator {i}"))?;
    }
    engine.run()?;

    let mut grades = BTreeMap::new();
    for len in 0..=bound {
        for k in 0..=len {
            let mut span = SpanBasis::new(k, len - k, n);
            for row in engine.flat[len].rows() {
                span.insert(&unflatten(row, k)?)?;
            }
            grades.insert((k, len - k), span);
        }
    }
    Ok(ClosureResult {
        bound,
        dim: n,
        mode,
        flat: engine.flat,
        grades,
        log: engine.log,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Yes,
    NotAtThisBound,
}

#[derive(Clone, Debug)]
pub enum GradeVerdict<S: Scalar> {
    Easy,
    /// A vector of the grade outside the span of its member partitions.
    NonEasy(LinComb<S>),
}

#[derive(Clone, Debug)]
pub struct EasinessReport<S: Scalar> {
    pub grades: BTreeMap<(usize, usize), GradeVerdict<S>>,
}

impl<S: Scalar> EasinessReport<S> {
    /// Easy at every grade up to the bound. Both answers are relative to the
    /// bound: a larger one may add partitions or non-partition vectors.
    pub fn easy_at_bound(&self) -> bool {
        self.grades
            .values()
            .all(|v| matches!(v, GradeVerdict::Easy))
    }

    pub fn first_witness(&self) -> Option<(&(usize, usize), &LinComb<S>)> {
        self.grades.iter().find_map(|(g, v)| match v {
            GradeVerdict::NonEasy(w) => Some((g, w)),
            GradeVerdict::Easy => None,
        })
    }
}

impl<S: Scalar> ClosureResult<S> {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn span(&self, k: usize, l: usize) -> Result<&SpanBasis<S>> {
        self.grades.get(&(k, l)).ok_or(Error::Bound {
            grade: (k, l),
            bound: self.bound,
        })
    }

    pub fn grades(&self) -> impl Iterator<Item = (&(usize, usize), &SpanBasis<S>)> {
        self.grades.iter()
    }

    /// Rank per grade `(k, l)`.
    pub fn dimensions(&self) -> BTreeMap<(usize, usize), usize> {
        self.grades.iter().map(|(g, s)| (*g, s.rank())).collect()
    }

    /// Rank of the flat grade `(0, n)` for `n = 0..=L`.
    pub fn flat_dimensions(&self) -> Vec<usize> {
        self.flat.iter().map(SpanBasis::rank).collect()
    }

    pub fn member(&self, x: &LinComb<S>) -> Result<Membership> {
        let (k, l) = x.grade();
        let span = self.span(k, l)?;
        Ok(if span.contains(x)? {
            Membership::Yes
        } else {
            Membership::NotAtThisBound
        })
    }

    pub fn easiness_report(&self) -> Result<EasinessReport<S>> {
        let mut grades = BTreeMap::new();
        for (&(k, l), span) in &self.grades {
            let mut singles = SpanBasis::new(k, l, self.dim);
            for p in enumerate(k, l)? {
                let x = LinComb::from_partition(p, self.dim);
                if span.contains(&x)? {
                    singles.insert(&x)?;
                }
            }
            let verdict = if singles.rank() == span.rank() {
                GradeVerdict::Easy
            } else {
                let mut witness = None;
                for row in span.rows() {
                    if !singles.contains(row)? {
                        witness = Some(row.clone());
                        break;
                    }
                }
                GradeVerdict::NonEasy(witness.expect("rank deficit implies a witness"))
            };
            grades.insert((k, l), verdict);
        }
        Ok(EasinessReport { grades })
    }

    /// Whether every grade of `other` lies in the matching grade here.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        for (g, span) in &other.grades {
            if !self.span(g.0, g.1)?.contains_span(span)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeGrade {
    pub grade: (usize, usize),
    pub image_rank: usize,
    pub closure_rank: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub dim: u64,
    pub sign: String,
    pub bound: usize,
    pub grades: Vec<BridgeGrade>,
}

impl BridgeReport {
    pub fn all_equal(&self) -> bool {
        self.grades.iter().all(|g| g.equal)
    }
}

/// Compares, grade by grade, the image under `𝒱_{(N,±)}` of the reduced
/// closure of `{𝒫g}` with the ordinary closure of `{𝒱g}` at `N − 1`.
pub fn verify_bridge<S: Scalar>(
    generators: &[LinComb<S>],
    n: u64,
    sign: Sign,
    bound: usize,
    radicand: u64,
) -> Result<BridgeReport> {
    let projected: Vec<LinComb<S>> = generators
        .iter()
        .map(transforms::p_transform)
        .collect::<Result<_>>()?;
    let reduced = closure(&projected, n, bound, Mode::Reduced)?;
    let images: Vec<LinComb<S>> = generators
        .iter()
        .map(|g| transforms::v_transform(g, sign, radicand))
        .collect::<Result<_>>()?;
    let target = closure(&images, n - 1, bound, Mode::Ordinary)?;
    let mut grades = Vec::new();
    for (&(k, l), span) in reduced.grades() {
        let mut image = SpanBasis::new(k, l, n - 1);
        for row in span.rows() {
            image.insert(&transforms::v_transform(row, sign, radicand)?)?;
        }
        let other = target.span(k, l)?;
        grades.push(BridgeGrade {
            grade: (k, l),
            image_rank: image.rank(),
            closure_rank: other.rank(),
            equal: image == *other,
        });
    }
    Ok(BridgeReport {
        dim: n,
        sign: sign.to_string(),
        bound,
        grades,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type Q = LinComb<Rational>;

    #[test]
    fn glue_is_composition() {
        let n = 3;
        let pair = Q::from_partition(Partition::pair(), n);
        // ⊓ glued to ⊓ along both legs closes a loop
        assert_eq!(
            glue(&pair, &pair, 2).unwrap(),
            Q::term(Rational::from_int(3), Partition::empty(), n)
        );
        // along one leg it is the identity, flattened
        assert_eq!(glue(&pair, &pair, 1).unwrap(), pair);
    }

    #[test]
    fn pair_category_dimensions() {
        let c = closure::<Rational>(&[], 5, 6, Mode::Ordinary).unwrap();
        // noncrossing pairings: Catalan numbers in even length
        assert_eq!(c.flat_dimensions(), vec![1, 0, 1, 0, 2, 0, 5]);
        assert_eq!(c.span(2, 2).unwrap().rank(), 2);
    }

    #[test]
    fn singleton_pair_generator() {
        let g = Q::from_partition(Partition::singletons(2), 5);
        let c = closure(&[g], 5, 4, Mode::Ordinary).unwrap();
        assert_eq!(c.span(0, 2).unwrap().rank(), 2);
    }

    #[test]
    fn membership_is_bound_relative() {
        let c = closure::<Rational>(&[], 4, 2, Mode::Ordinary).unwrap();
        let x = Q::from_partition(Partition::singletons(2), 4);
        assert_eq!(c.member(&x).unwrap(), Membership::NotAtThisBound);
        let far = Q::from_partition(Partition::block(3), 4);
        assert!(matches!(c.member(&far), Err(Error::Bound { .. })));
    }

    #[test]
    fn reduced_mode_checks_generators() {
        let b3 = Q::from_partition(Partition::block(3), 5);
        assert!(matches!(
            closure(std::slice::from_ref(&b3), 5, 4, Mode::Reduced),
            Err(Error::Precondition(_))
        ));
        let pb3 = transforms::p_transform(&b3).unwrap();
        assert!(closure(&[pb3], 5, 4, Mode::Reduced).is_ok());
    }
}
