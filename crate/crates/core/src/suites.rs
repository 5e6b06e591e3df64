//! Built-in verification batteries. Each suite returns a report of named
//! checks rather than panicking, so callers can print or serialize it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closure::{closure, verify_bridge, GradeVerdict, Membership, Mode};
use crate::error::{Error, Result};
use crate::field::{FieldElem, Rational, Scalar};
use crate::lincomb::LinComb;
use crate::matrix::{self, ExactMatrix};
use crate::partition::{enumerate, Partition};
use crate::transforms::{self, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Examples,
    Tvk,
    Functor,
    ClosureEasy,
    Bridge,
    Rank,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Examples,
        Suite::Tvk,
        Suite::Functor,
        Suite::ClosureEasy,
        Suite::Bridge,
        Suite::Rank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Examples => "examples",
            Suite::Tvk => "tvk",
            Suite::Functor => "functor",
            Suite::ClosureEasy => "closure-easy",
            Suite::Bridge => "bridge",
            Suite::Rank => "rank",
        }
    }

    /// Dimensions used when none is given.
    pub fn default_dims(self) -> &'static [u64] {
        match self {
            Suite::Examples => &[2, 3, 4, 5, 10],
            Suite::Tvk => &[3, 4, 5],
            Suite::Functor => &[2, 3, 4],
            Suite::ClosureEasy => &[5],
            Suite::Bridge => &[4],
            Suite::Rank => &[2, 3, 4],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub dims: Vec<u64>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    fn eq<T: PartialEq + fmt::Debug>(&mut self, name: impl Into<String>, got: &T, want: &T) {
        let detail = (got != want).then(|| format!("got {got:?}, expected {want:?}"));
        self.push(name, got == want, detail);
    }

    fn holds(&mut self, name: impl Into<String>, ok: bool) {
        self.push(name, ok, None);
    }

    fn attempt(&mut self, name: &str, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.push(name, false, Some(e.to_string()));
        }
    }
}

/// Runs one suite at the given dimension, or at the suite's default
/// dimensions when `dim` is `None`.
pub fn run_suite(suite: Suite, dim: Option<u64>) -> Result<SuiteReport> {
    let dims: Vec<u64> = match dim {
        Some(n) => vec![n],
        None => suite.default_dims().to_vec(),
    };
    let mut checks = Checks::default();
    for &n in &dims {
        match suite {
            Suite::Examples => examples(n, &mut checks),
            Suite::Tvk => tvk(n, &mut checks)?,
            Suite::Functor => functor(n, &mut checks),
            Suite::ClosureEasy => closure_easy(n, &mut checks),
            Suite::Bridge => bridge(n, &mut checks),
            Suite::Rank => rank(n, &mut checks),
        }
    }
    let checks = checks.0;
    Ok(SuiteReport {
        suite: suite.name().into(),
        passed: checks.iter().all(|c| c.passed),
        dims,
        checks,
    })
}

fn frac<S: Scalar>(num: i64, den: i64) -> S {
    S::from_frac(num, den)
}

fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for p in start..=k {
            cur.push(p);
            go(p + 1, k, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, k, size, &mut Vec::new(), &mut out);
    out
}

/// The one-row partition on `k` points whose points in `cut` are singletons
/// and whose other points form a single block.
pub fn cut_partition(k: usize, cut: &[usize]) -> Partition {
    let rest: Vec<usize> = (1..=k).filter(|p| !cut.contains(p)).collect();
    let mut blocks: Vec<Vec<usize>> = cut.iter().map(|&p| vec![p]).collect();
    if !rest.is_empty() {
        blocks.push(rest);
    }
    Partition::from_blocks(0, k, &blocks).expect("cut of a block is a partition")
}

/// `Σ_i layers[i]·(sum of b_k with i legs cut) + top·↑^{⊗k}`, where the
/// layers stop before the cuts that leave only singletons.
pub fn layered<S: Scalar>(k: usize, dim: u64, layers: &[S], top: S) -> LinComb<S> {
    let mut out = LinComb::zero(0, k, dim);
    for (i, c) in layers.iter().enumerate() {
        for cut in subsets(k, i) {
            out.add_term(cut_partition(k, &cut), c);
        }
    }
    out.add_term(Partition::singletons(k), &top);
    out
}

/// `𝒫_{(N)}` of a pair partition: each block independently stays or is cut
/// into singletons with a factor `−1/N`.
fn blockwise_projection<S: Scalar>(p: &Partition, dim: u64) -> LinComb<S> {
    let (k, l) = p.grade();
    let blocks = p.blocks();
    let mut out = LinComb::zero(k, l, dim);
    let minus_inv = -S::from_frac(1, dim as i64);
    for mask in 0u32..(1 << blocks.len()) {
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut coeff = S::one();
        for (b, block) in blocks.iter().enumerate() {
            if mask >> b & 1 == 1 {
                parts.extend(block.iter().map(|&pt| vec![pt]));
                coeff = coeff.mul_ref(&minus_inv);
            } else {
                parts.push(block.clone());
            }
        }
        let q = Partition::from_blocks(k, l, &parts).expect("refinement is a partition");
        out.add_term(q, &coeff);
    }
    out
}

pub fn crossing_row() -> Partition {
    Partition::from_blocks(0, 4, &[[1, 3], [2, 4]]).expect("crossing")
}

pub fn half_liberation() -> Partition {
    Partition::from_blocks(3, 3, &[[1, 6], [2, 5], [3, 4]]).expect("half-liberation")
}

/// Expected `𝒱_{(N,±)} b_k` for k ≤ 4, coefficients written out in closed form.
pub fn golden_v_block(k: usize, n: u64, sign: Sign) -> LinComb<FieldElem> {
    let nn = n as i64;
    let s = FieldElem::new(
        Rational::zero(),
        sign.as_scalar::<Rational>() / Rational::from_int(nn),
        n,
    );
    let q = |a: i64, b: i64| FieldElem::from_frac(a, b);
    let inv_m = q(1, nn - 1);
    let a = -(FieldElem::one() + s.clone()) * inv_m.clone();
    match k {
        1 => LinComb::zero(0, 1, n - 1),
        2 => layered(2, n - 1, &[FieldElem::one()], FieldElem::zero()),
        3 => layered(
            3,
            n - 1,
            &[FieldElem::one(), a],
            (q(2, 1) + q(nn + 1, 1) * s) * inv_m.pow(2),
        ),
        4 => layered(
            4,
            n - 1,
            &[
                FieldElem::one(),
                a,
                (q(nn + 1, nn) + q(2, 1) * s.clone()) * inv_m.pow(2),
            ],
            (q(nn * nn - 6 * nn - 3, nn) - q(8, 1) * s) * inv_m.pow(3),
        ),
        _ => panic!("closed forms are tabulated for k <= 4"),
    }
}

/// Expected `𝒫_{(N)} b_k` for k ≤ 4.
pub fn golden_p_block<S: Scalar>(k: usize, n: u64) -> LinComb<S> {
    let nn = n as i64;
    match k {
        1 => LinComb::zero(0, 1, n),
        2 => layered(2, n, &[S::one()], frac(-1, nn)),
        3 => layered(3, n, &[S::one(), frac(-1, nn)], frac(2, nn * nn)),
        4 => layered(
            4,
            n,
            &[S::one(), frac(-1, nn), frac(1, nn * nn)],
            frac(-3, nn * nn * nn),
        ),
        _ => panic!("closed forms are tabulated for k <= 4"),
    }
}

/// Expected `𝒯_{(N)} b_4`.
pub fn golden_t_four<S: Scalar>(n: u64) -> LinComb<S> {
    let nn = n as i64;
    layered(
        4,
        n,
        &[S::one(), frac(-2, nn), frac(4, nn * nn)],
        frac(-16, nn * nn * nn),
    )
}

/// Expected `𝒫_{(N)}` of the crossing on one row.
pub fn golden_p_crossing<S: Scalar>(n: u64) -> LinComb<S> {
    let nn = n as i64;
    let mut out = LinComb::from_partition(crossing_row(), n);
    for blocks in [
        [vec![1, 3], vec![2], vec![4]],
        [vec![1], vec![3], vec![2, 4]],
    ] {
        let p = Partition::from_blocks(0, 4, &blocks).expect("cut crossing");
        out.add_term(p, &frac(-1, nn));
    }
    out.add_term(Partition::singletons(4), &frac(1, nn * nn));
    out
}

fn examples(n: u64, checks: &mut Checks) {
    type F = LinComb<FieldElem>;
    for sign in [Sign::Plus, Sign::Minus] {
        for k in 1..=4 {
            let name = format!("V(N={n},{sign}) b{k}");
            checks.attempt(&name.clone(), |c| {
                let got =
                    transforms::v_transform(&F::from_partition(Partition::block(k), n), sign, n)?;
                c.eq(name, &got, &golden_v_block(k, n, sign));
                Ok(())
            });
        }
        for (label, p) in [
            ("crossing", crossing_row()),
            ("half-liberation", half_liberation()),
        ] {
            let name = format!("V(N={n},{sign}) P {label}");
            checks.attempt(&name.clone(), |c| {
                let x = F::from_partition(p.clone(), n);
                let got = transforms::v_transform(&transforms::p_transform(&x)?, sign, n)?;
                c.eq(name, &got, &F::from_partition(p.clone(), n - 1));
                Ok(())
            });
        }
    }
    type Q = LinComb<Rational>;
    for k in 1..=4 {
        let name = format!("P(N={n}) b{k}");
        checks.attempt(&name.clone(), |c| {
            let got = transforms::p_transform(&Q::from_partition(Partition::block(k), n))?;
            c.eq(name, &got, &golden_p_block(k, n));
            Ok(())
        });
    }
    let items: [(&str, Partition, Q); 3] = [
        ("T(N={n}) b4", Partition::block(4), golden_t_four(n)),
        ("P(N={n}) crossing", crossing_row(), golden_p_crossing(n)),
        (
            "P(N={n}) half-liberation",
            half_liberation(),
            blockwise_projection(&half_liberation(), n),
        ),
    ];
    for (i, (label, p, want)) in items.into_iter().enumerate() {
        let name = label.replace("{n}", &n.to_string());
        checks.attempt(&name.clone(), |c| {
            let x = Q::from_partition(p, n);
            let got = if i == 0 {
                transforms::t_transform(&x)?
            } else {
                transforms::p_transform(&x)?
            };
            c.eq(name, &got, &want);
            Ok(())
        });
    }
}

fn tvk(n: u64, checks: &mut Checks) -> Result<()> {
    for sign in [Sign::Plus, Sign::Minus] {
        let mut failed = Vec::new();
        let mut count = 0usize;
        for len in 0..=5 {
            for k in 0..=len {
                for p in enumerate(k, len - k)? {
                    count += 1;
                    if !matrix::check_tvk::<FieldElem>(&p, n, sign, n)? {
                        failed.push(p.to_string());
                    }
                }
            }
        }
        let detail = if failed.is_empty() {
            Some(format!("{count} partitions"))
        } else {
            Some(format!(
                "{} of {count} failed, first {}",
                failed.len(),
                failed[0]
            ))
        };
        checks.push(
            format!("T.V(N={n},{sign}) length <= 5"),
            failed.is_empty(),
            detail,
        );
    }
    Ok(())
}

fn random_partition(rng: &mut ChaCha8Rng, k: usize, l: usize) -> Partition {
    let mut labels = Vec::with_capacity(k + l);
    let mut next = 0usize;
    for _ in 0..k + l {
        let lab = rng.gen_range(0..=next);
        if lab == next {
            next += 1;
        }
        labels.push(lab);
    }
    Partition::from_labels(k, l, labels)
}

fn random_comb(rng: &mut ChaCha8Rng, k: usize, l: usize, n: u64) -> LinComb<Rational> {
    let mut out = LinComb::zero(k, l, n);
    for _ in 0..rng.gen_range(1..=2) {
        let c = Rational::from_int(rng.gen_range(-3..=3));
        out.add_term(random_partition(rng, k, l), &c);
    }
    out
}

/// Checks `T(y·x) = T(y)T(x)`, `T(x⊗y) = T(x)⊗T(y)` and `T(x*) = T(x)*` on
/// `pairs` pseudo-random pairs from a fixed seed.
pub fn functor_checks(n: u64, pairs: usize, seed: u64) -> Result<(usize, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n);
    let mut failures = Vec::new();
    let t = |x: &LinComb<Rational>| matrix::t_matrix(x, n);
    for _ in 0..pairs {
        let k = rng.gen_range(0..=3);
        let l = rng.gen_range(0..=3);
        let m = rng.gen_range(0..=3);
        let x = random_comb(&mut rng, k, l, n);
        let y = random_comb(&mut rng, l, m, n);
        if t(&y.compose(&x)?)? != t(&y)?.mul(&t(&x)?)? {
            failures.push(format!("compose {y} after {x}"));
        }
        // keep the tensor product within the dense matrix cap at N = 4
        let a = rng.gen_range(0..=(6 - k - l).min(3));
        let b = rng.gen_range(0..=(6 - k - l - a).min(3));
        let z = random_comb(&mut rng, a, b, n);
        if t(&x.tensor(&z)?)? != t(&x)?.kron(&t(&z)?) {
            failures.push(format!("tensor {x} with {z}"));
        }
        if t(&x.involute())? != t(&x)?.adjoint() {
            failures.push(format!("involute {x}"));
        }
    }
    Ok((pairs, failures))
}

fn functor(n: u64, checks: &mut Checks) {
    let name = format!("functor(N={n}) random pairs");
    checks.attempt(&name.clone(), |c| {
        let (count, failures) = functor_checks(n, 200, 0x5eed)?;
        let detail = match failures.first() {
            None => format!("{count} pairs"),
            Some(f) => format!("{} failures, first: {f}", failures.len()),
        };
        c.push(name, failures.is_empty(), Some(detail));
        Ok(())
    });
    let name = format!("functor(N={n}) loop factor");
    checks.attempt(&name.clone(), |c| {
        let cup = LinComb::<Rational>::from_partition(Partition::copair(), n);
        let cap = LinComb::from_partition(Partition::pair(), n);
        let loop_value = cup.compose(&cap)?;
        let want = LinComb::term(Rational::from_int(n as i64), Partition::empty(), n);
        let matrices = matrix::t_matrix(&loop_value, n)?
            == matrix::t_matrix(&cup, n)?.mul(&matrix::t_matrix(&cap, n)?)?;
        c.holds(name, loop_value == want && matrices);
        Ok(())
    });
}

/// Rows are the flattened `T_p` over all partitions `p` of `(0, len)`.
pub fn rank_of_grade(len: usize, n: u64) -> Result<usize> {
    let rows: Vec<Vec<Rational>> = enumerate(0, len)?
        .iter()
        .map(|p| {
            let m = matrix::t_partition::<Rational>(p, n)?;
            Ok((0..m.rows()).map(|i| m.get(i, 0).clone()).collect())
        })
        .collect::<Result<_>>()?;
    ExactMatrix::from_rows(rows)?.rank()
}

/// `T(↑⊗3) − Σ T(b_{3,{i}}) + 2·T(b3)`, which vanishes exactly at `N = 2`.
pub fn two_dim_dependency(n: u64) -> Result<ExactMatrix<Rational>> {
    let mut x = LinComb::<Rational>::from_partition(Partition::singletons(3), n);
    for cut in subsets(3, 1) {
        x.add_term(cut_partition(3, &cut), &Rational::from_int(-1));
    }
    x.add_term(Partition::block(3), &Rational::from_int(2));
    matrix::t_matrix(&x, n)
}

fn rank(n: u64, checks: &mut Checks) {
    let name = format!("rank(N={n}) grade (0,3)");
    checks.attempt(&name.clone(), |c| {
        let want = if n == 2 { 4 } else { 5 };
        c.eq(name, &rank_of_grade(3, n)?, &want);
        Ok(())
    });
    let name = format!("rank(N={n}) grade (0,4)");
    checks.attempt(&name.clone(), |c| {
        let want = enumerate(0, 4)?
            .iter()
            .filter(|p| p.block_count() as u64 <= n)
            .count();
        c.eq(name, &rank_of_grade(4, n)?, &want);
        Ok(())
    });
    let name = format!("rank(N={n}) two-dimensional dependency");
    checks.attempt(&name.clone(), |c| {
        let vanishes = two_dim_dependency(n)?.is_zero();
        c.eq(name, &vanishes, &(n == 2));
        Ok(())
    });
}

fn count_by_grade(
    bound: usize,
    keep: impl Fn(&Partition) -> bool,
) -> Result<BTreeMap<(usize, usize), usize>> {
    let mut out = BTreeMap::new();
    for len in 0..=bound {
        for k in 0..=len {
            let count = enumerate(k, len - k)?.iter().filter(|p| keep(p)).count();
            out.insert((k, len - k), count);
        }
    }
    Ok(out)
}

fn closure_easy(n: u64, checks: &mut Checks) {
    type Q = LinComb<Rational>;
    let block = |k| Q::from_partition(Partition::block(k), n);

    let name = format!("closure(N={n}) pairings at L=4");
    checks.attempt(&name.clone(), |c| {
        let res = closure::<Rational>(&[], n, 4, Mode::Ordinary)?;
        let got = res.dimensions();
        c.eq(
            name,
            &got,
            &count_by_grade(4, |p| p.is_pairing() && p.is_noncrossing())?,
        );
        Ok(())
    });

    let name = format!("closure(N={n}) <b3> at L=5 is noncrossing");
    checks.attempt(&name.clone(), |c| {
        let res = closure(&[block(3)], n, 5, Mode::Ordinary)?;
        let got = res.dimensions();
        c.eq(name, &got, &count_by_grade(5, |p| p.is_noncrossing())?);
        let member = res.member(&block(4))?;
        c.eq(
            format!("closure(N={n}) b4 in <b3>"),
            &member,
            &Membership::Yes,
        );
        Ok(())
    });

    let name = format!("closure(N={n}) <b4> easy at L=4");
    checks.attempt(&name.clone(), |c| {
        let res = closure(&[block(4)], n, 4, Mode::Ordinary)?;
        let report = res.easiness_report()?;
        c.holds(name, report.easy_at_bound());
        let got = res.dimensions();
        let want = count_by_grade(4, |p| p.is_noncrossing() && p.has_only_even_blocks())?;
        c.eq(format!("closure(N={n}) <b4> dimensions"), &got, &want);
        let t4 = transforms::t_transform(&block(4))?;
        c.eq(
            format!("closure(N={n}) T b4 outside <b4>"),
            &res.member(&t4)?,
            &Membership::NotAtThisBound,
        );
        Ok(())
    });

    let name = format!("closure(N={n}) <T b4> non-easy at (0,4), bound-relative");
    checks.attempt(&name.clone(), |c| {
        let res = closure(&[transforms::t_transform(&block(4))?], n, 4, Mode::Ordinary)?;
        let report = res.easiness_report()?;
        let witness = matches!(report.grades.get(&(0, 4)), Some(GradeVerdict::NonEasy(_)));
        c.holds(name, witness && !report.easy_at_bound());
        Ok(())
    });

    let name = format!("closure(N={n}) <P b3, up up> non-easy at this bound");
    checks.attempt(&name.clone(), |c| {
        let upup = Q::from_partition(Partition::singletons(2), n);
        let res = closure(
            &[transforms::p_transform(&block(3))?, upup],
            n,
            4,
            Mode::Ordinary,
        )?;
        let report = res.easiness_report()?;
        let at_three = matches!(report.grades.get(&(0, 3)), Some(GradeVerdict::NonEasy(_)));
        c.holds(name, at_three);
        Ok(())
    });

    let name = format!("closure(N={n}) P b6 in reduced <P b4> at L=6");
    checks.attempt(&name.clone(), |c| {
        let gen = transforms::p_transform(&block(4))?;
        let res = closure(&[gen], n, 6, Mode::Reduced)?;
        let target = transforms::p_transform(&block(6))?;
        c.eq(name, &res.member(&target)?, &Membership::Yes);
        Ok(())
    });
}

fn bridge(n: u64, checks: &mut Checks) {
    type F = LinComb<FieldElem>;
    let sets: [(&str, Vec<F>); 3] = [
        ("b3", vec![F::from_partition(Partition::block(3), n)]),
        ("pairings", vec![]),
        ("crossing", vec![F::from_partition(crossing_row(), n)]),
    ];
    for (label, gens) in &sets {
        for sign in [Sign::Plus, Sign::Minus] {
            let name = format!("bridge(N={n},{sign}) {label} at L=4");
            checks.attempt(&name.clone(), |c| {
                let report = verify_bridge(gens, n, sign, 4, n)?;
                let detail = report.grades.iter().find(|g| !g.equal).map(|g| {
                    format!(
                        "grade {:?}: {} vs {}",
                        g.grade, g.image_rank, g.closure_rank
                    )
                });
                c.push(name, report.all_equal(), detail);
                Ok(())
            });
        }
    }
}
