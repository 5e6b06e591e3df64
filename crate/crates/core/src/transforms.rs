//! Named elements and leg-cutting transforms.
//!
//! `pi` and `tau` are the (1,1) elements `| − (c/N)·↓⊗↑` with `c = 1, 2`.
//! [`p_transform`] and [`t_transform`] sandwich a combination between tensor
//! powers of them. [`v_transform`] cuts legs from every block with the
//! coefficients of the restriction to the (N−1)-dimensional subrepresentation;
//! its result lives at dimension `N − 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lincomb::LinComb;
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_scalar<S: Scalar>(self) -> S {
        match self {
            Sign::Plus => S::one(),
            Sign::Minus => -S::one(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            other => Err(Error::Parameter(format!("unknown sign `{other}`"))),
        }
    }
}

fn check_dim(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::Parameter("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn id_minus_disconnected<S: Scalar>(n: u64, c: i64) -> Result<LinComb<S>> {
    check_dim(n)?;
    LinComb::from_terms(
        1,
        1,
        n,
        [
            (S::one(), Partition::identity(1)),
            (-S::from_frac(c, n as i64), Partition::disconnected()),
        ],
    )
}

/// `π = | − (1/N)·↓⊗↑`.
pub fn pi<S: Scalar>(n: u64) -> Result<LinComb<S>> {
    id_minus_disconnected(n, 1)
}

/// `τ = | − (2/N)·↓⊗↑`.
pub fn tau<S: Scalar>(n: u64) -> Result<LinComb<S>> {
    id_minus_disconnected(n, 2)
}

/// `x^{⊗k}`; the empty partition for `k = 0`.
pub fn tensor_power<S: Scalar>(x: &LinComb<S>, k: usize) -> Result<LinComb<S>> {
    let mut acc = LinComb::from_partition(Partition::empty(), x.dim());
    for _ in 0..k {
        acc = acc.tensor(x)?;
    }
    Ok(acc)
}

/// `e^{⊗l} · x · e^{⊗k}` for a (1,1) element `e`.
pub fn sandwich<S: Scalar>(e: &LinComb<S>, x: &LinComb<S>) -> Result<LinComb<S>> {
    let (k, l) = x.grade();
    let right = tensor_power(e, k)?;
    let left = tensor_power(e, l)?;
    left.compose(&x.compose(&right)?)
}

pub fn p_transform<S: Scalar>(x: &LinComb<S>) -> Result<LinComb<S>> {
    sandwich(&pi(x.dim())?, x)
}

pub fn t_transform<S: Scalar>(x: &LinComb<S>) -> Result<LinComb<S>> {
    sandwich(&tau(x.dim())?, x)
}

pub fn is_p_invariant<S: Scalar>(x: &LinComb<S>) -> Result<bool> {
    Ok(&p_transform(x)? == x)
}

/// The block partition `b_k` on (0,k).
pub fn block(k: usize) -> Partition {
    Partition::block(k)
}

/// `b_{k,I}`: `b_k` with the 1-based points of `cut` turned into singletons.
pub fn block_cut(k: usize, cut: &[usize]) -> Result<Partition> {
    let mut labels: Vec<usize> = vec![0; k];
    for (i, &pt) in cut.iter().enumerate() {
        if pt == 0 || pt > k {
            return Err(Error::Parameter(format!("point {pt} outside 1..={k}")));
        }
        if labels[pt - 1] != 0 {
            return Err(Error::Parameter(format!("point {pt} listed twice")));
        }
        labels[pt - 1] = i + 1;
    }
    Ok(Partition::from_labels(0, k, labels))
}

/// `b_{k,i}`: the sum of `b_{k,I}` over `|I| = i` for `i < k`, and
/// `(N−1)·↑^{⊗k}` for `i = k`.
pub fn block_cut_sum<S: Scalar>(k: usize, i: usize, n: u64) -> Result<LinComb<S>> {
    if i > k {
        return Err(Error::Parameter(format!(
            "cut size {i} exceeds block size {k}"
        )));
    }
    if i == k {
        let c = S::from_int(n as i64 - 1);
        return Ok(LinComb::term(c, Partition::singletons(k), n));
    }
    let mut out = LinComb::zero(0, k, n);
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize != i {
            continue;
        }
        let cut: Vec<usize> = (0..k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| b + 1)
            .collect();
        out.add_term(block_cut(k, &cut)?, &S::one());
    }
    Ok(out)
}

/// Per-block substitution data: `coeffs[j]` multiplies the term where `j`
/// points of a block were cut, except that cutting all `s` points of a block
/// uses `full[s]` instead.
struct CutRule<S> {
    coeffs: Vec<S>,
    full: Vec<S>,
}

impl<S: Scalar> CutRule<S> {
    fn expand(&self, p: &Partition, dim: u64) -> LinComb<S> {
        let n = p.len();
        let blocks = p.blocks();
        let mut out = LinComb::zero(0, n, dim);
        let mut labels = vec![0usize; n];
        self.expand_blocks(&blocks, 0, n, S::one(), &mut labels, &mut out);
        out
    }

    fn expand_blocks(
        &self,
        blocks: &[Vec<usize>],
        idx: usize,
        fresh: usize,
        coeff: S,
        labels: &mut [usize],
        out: &mut LinComb<S>,
    ) {
        if coeff.is_zero() {
            return;
        }
        let Some(block) = blocks.get(idx) else {
            out.add_term(
                Partition::from_labels(0, labels.len(), labels.iter().copied()),
                &coeff,
            );
            return;
        };
        let s = block.len();
        let all = (1u32 << s) - 1;
        for mask in 0..=all {
            let cut = mask.count_ones() as usize;
            let c = if mask == all {
                &self.full[s]
            } else {
                &self.coeffs[cut]
            };
            let mut next = fresh;
            for (b, &pt) in block.iter().enumerate() {
                labels[pt - 1] = if mask >> b & 1 == 1 {
                    next += 1;
                    next
                } else {
                    idx
                };
            }
            self.expand_blocks(blocks, idx + 1, next, coeff.mul_ref(c), labels, out);
        }
    }
}

/// `𝒱_{(N,±)}`: blockwise leg cutting. `radicand` is the session's field
/// radicand, which must be able to express `√N`.
pub fn v_transform<S: Scalar>(x: &LinComb<S>, sign: Sign, radicand: u64) -> Result<LinComb<S>> {
    let n = x.dim();
    if n < 2 {
        return Err(Error::Parameter(
            "the leg-cutting transform needs N >= 2".into(),
        ));
    }
    let (k, l) = x.grade();
    let len = k + l;
    let root = S::sqrt_int(n, radicand)?;
    let t = sign.as_scalar::<S>().mul_ref(&root.try_inv()?);
    let c = -(S::one() + t.clone()).mul_ref(&S::from_int(n as i64 - 1).try_inv()?);
    let coeffs: Vec<S> = (0..=len).map(|j| c.pow(j as u32)).collect();
    // cutting a whole block gives b_{s,s} = (N−1)·↑^{⊗s}, plus the t^s term
    let n_minus_one = S::from_int(n as i64 - 1);
    let full: Vec<S> = (0..=len)
        .map(|s| coeffs[s].mul_ref(&n_minus_one) + t.pow(s as u32))
        .collect();
    let rule = CutRule { coeffs, full };
    let mut out = LinComb::zero(k, l, n - 1);
    for (p, a) in x.iter() {
        let mut flat = p.clone();
        for _ in 0..k {
            flat = flat.rotate_right_inv()?;
        }
        let expanded = rule.expand(&flat, n - 1);
        for (q, b) in expanded.iter() {
            let mut back = q.clone();
            for _ in 0..k {
                back = back.rotate_right()?;
            }
            out.add_term(back, &a.mul_ref(b));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldElem, Rational};
    use crate::partition::enumerate;

    type F = LinComb<FieldElem>;

    fn f(p: Partition, n: u64) -> F {
        F::from_partition(p, n)
    }

    #[test]
    fn pi_tau_identities() {
        for n in [2u64, 3, 5, 7] {
            let p = pi::<Rational>(n).unwrap();
            assert_eq!(p.compose(&p).unwrap(), p);
            let t = tau::<Rational>(n).unwrap();
            assert_eq!(
                t.compose(&t).unwrap(),
                LinComb::from_partition(Partition::identity(1), n)
            );
            let up = LinComb::from_partition(Partition::up(), n);
            assert!(p.compose(&up).unwrap().is_zero());
        }
        assert!(pi::<Rational>(0).is_err());
    }

    #[test]
    fn cut_examples() {
        assert_eq!(
            block_cut(4, &[2, 4]).unwrap(),
            "P(0,4){1,3}{2}{4}".parse().unwrap()
        );
        let b31 = block_cut_sum::<Rational>(3, 1, 5).unwrap();
        let expect = LinComb::from_terms(
            0,
            3,
            5,
            (1..=3).map(|i| (Rational::from_int(1), block_cut(3, &[i]).unwrap())),
        )
        .unwrap();
        assert_eq!(b31, expect);
        assert_eq!(
            block_cut_sum::<Rational>(3, 2, 5).unwrap(),
            LinComb::term(Rational::from_int(3), Partition::singletons(3), 5)
        );
        assert_eq!(
            block_cut_sum::<Rational>(3, 3, 5).unwrap(),
            LinComb::term(Rational::from_int(4), Partition::singletons(3), 5)
        );
        assert!(block_cut_sum::<Rational>(3, 4, 5).is_err());
    }

    #[test]
    fn v_small_blocks() {
        for n in [3u64, 5] {
            for s in [Sign::Plus, Sign::Minus] {
                assert!(v_transform(&f(Partition::up(), n), s, n).unwrap().is_zero());
                assert_eq!(
                    v_transform(&f(Partition::pair(), n), s, n).unwrap(),
                    f(Partition::pair(), n - 1)
                );
            }
        }
    }

    #[test]
    fn v_b3_at_four() {
        // N = 4, plus: b3 − ½·b_{3,1} + ½·↑⊗3
        let got = v_transform(&f(block(3), 4), Sign::Plus, 4).unwrap();
        let half = FieldElem::from_frac(1, 2);
        let mut expect = f(block(3), 3);
        for i in 1..=3 {
            expect.add_term(block_cut(3, &[i]).unwrap(), &-half.clone());
        }
        expect.add_term(Partition::singletons(3), &half);
        assert_eq!(got, expect);
        // also over plain rationals, since √4 is rational
        let q = v_transform(
            &LinComb::<Rational>::from_partition(block(3), 4),
            Sign::Plus,
            0,
        )
        .unwrap();
        assert_eq!(
            q.coeff(&Partition::singletons(3)),
            Rational::from_frac(1, 2)
        );
    }

    #[test]
    fn v_rejects_unrepresentable_root() {
        let x = f(block(3), 5);
        assert!(matches!(
            v_transform(&x, Sign::Plus, 7),
            Err(Error::Field(_))
        ));
        assert!(v_transform(
            &LinComb::<Rational>::from_partition(block(3), 5),
            Sign::Plus,
            0
        )
        .is_err());
        assert!(v_transform(&f(block(3), 1), Sign::Plus, 1).is_err());
    }

    #[test]
    fn v_kills_singletons() {
        let n = 5;
        for p in enumerate(1, 3).unwrap() {
            let v = v_transform(&f(p.clone(), n), Sign::Minus, n).unwrap();
            assert_eq!(v.is_zero(), p.has_singleton(), "{p}");
        }
    }

    #[test]
    fn p_examples() {
        let n = 6u64;
        let pair = LinComb::<Rational>::from_partition(Partition::pair(), n);
        let mut expect = pair.clone();
        expect.add_term(Partition::singletons(2), &Rational::from_frac(-1, 6));
        assert_eq!(p_transform(&pair).unwrap(), expect);
        assert_eq!(expect, pi::<Rational>(n).unwrap().rotate_left().unwrap());
        assert!(
            p_transform(&LinComb::<Rational>::from_partition(Partition::up(), n))
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn rotations_commute_with_v() {
        let n = 5;
        for p in enumerate(2, 2).unwrap() {
            let x = f(p, n);
            let a = v_transform(&x.rotate_left().unwrap(), Sign::Plus, n).unwrap();
            let b = v_transform(&x, Sign::Plus, n)
                .unwrap()
                .rotate_left()
                .unwrap();
            assert_eq!(a, b);
        }
    }
}
