//! Dense exact matrices and the functor `x ↦ T_x`.
//!
//! Tensor indices are flattened row-major with the leftmost factor most
//! significant: `(i_1, …, i_k) ↦ Σ i_a · N^{k−a}` with 0-based `i_a`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::limits::Limits;
use crate::lincomb::LinComb;
use crate::partition::Partition;
use crate::transforms::{self, Sign};

#[derive(Clone, PartialEq)]
pub struct ExactMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> ExactMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parameter("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::MatrixShape {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.add_assign_ref(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.sub_assign_ref(b);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c.mul_ref(x)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::MatrixShape {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(t, j);
                    if !b.is_zero() {
                        out.entry_mut(i, j).add_assign_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            let a = self.get(i / other.rows, j / other.cols);
            a.mul_ref(other.get(i % other.rows, j % other.cols))
        })
    }

    pub fn kron_power(&self, k: usize) -> Self {
        let mut acc = Self::identity(1);
        for _ in 0..k {
            acc = acc.kron(self);
        }
        acc
    }

    /// Rank by Gauss–Jordan elimination, pivoting on the first nonzero entry.
    pub fn rank(&self) -> Result<usize> {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, rank * m.cols + j);
                }
            }
            let inv = m.get(rank, col).try_inv()?;
            for j in col..m.cols {
                let v = m.get(rank, j).mul_ref(&inv);
                m.set(rank, j, v);
            }
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let d = f.mul_ref(m.get(rank, j));
                    m.entry_mut(r, j).sub_assign_ref(&d);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        Ok(rank)
    }

    /// Applies `a` (m × n) to every one of the `legs` tensor factors of the
    /// row index, turning `n^legs` rows into `m^legs` rows.
    pub fn apply_rows(&self, a: &Self, legs: usize) -> Result<Self> {
        let (m, n) = a.shape();
        if n.pow(legs as u32) != self.rows {
            return Err(Error::MatrixShape {
                op: "apply_rows",
                left: a.shape(),
                right: self.shape(),
            });
        }
        let mut cur = self.clone();
        for t in 0..legs {
            // row index = (head, x, tail) with head over m^t, x over n, tail over n^{legs-t-1}
            let head = m.pow(t as u32);
            let tail = n.pow((legs - t - 1) as u32);
            let mut next = Self::zeros(head * m * tail, cur.cols);
            for h in 0..head {
                for x in 0..n {
                    for y in 0..m {
                        let coeff = a.get(y, x);
                        if coeff.is_zero() {
                            continue;
                        }
                        for z in 0..tail {
                            let src = (h * n + x) * tail + z;
                            let dst = (h * m + y) * tail + z;
                            for c in 0..cur.cols {
                                let v = cur.get(src, c);
                                if !v.is_zero() {
                                    next.entry_mut(dst, c).add_assign_ref(&coeff.mul_ref(v));
                                }
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// `a^{⊗l} · self · b^{⊗k}` computed leg by leg.
    pub fn sandwich(&self, a: &Self, l: usize, b: &Self, k: usize) -> Result<Self> {
        let left = self.apply_rows(a, l)?;
        Ok(left.adjoint().apply_rows(&b.adjoint(), k)?.adjoint())
    }
}

impl<S: Scalar> fmt::Debug for ExactMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `δ_p(i, j)` with arbitrary index values.
pub fn delta_eval(p: &Partition, upper: &[usize], lower: &[usize]) -> bool {
    p.delta(upper, lower)
}

fn checked_size(n: u64, points: usize) -> Result<usize> {
    let cap = Limits::global().matrix_cap;
    let size = (n as usize)
        .checked_pow(points as u32)
        .filter(|&s| s <= cap)
        .ok_or(Error::SizeCap {
            what: "dense T-matrix",
            size: (n as usize).saturating_pow(points as u32),
            cap,
        })?;
    Ok(size)
}

/// `T_x` at dimension `n`, an `n^l × n^k` matrix.
pub fn t_matrix<S: Scalar>(x: &LinComb<S>, n: u64) -> Result<ExactMatrix<S>> {
    if x.dim() != n {
        return Err(Error::Dimension(x.dim(), n));
    }
    if n == 0 {
        return Err(Error::Parameter("dimension must be at least 1".into()));
    }
    let (k, l) = x.grade();
    checked_size(n, k + l)?;
    let nu = n as usize;
    let rows = nu.pow(l as u32);
    let cols = nu.pow(k as u32);
    let mut out = ExactMatrix::<S>::zeros(rows, cols);
    for (p, c) in x.iter() {
        let b = p.block_count();
        let mut values = vec![0usize; b];
        // walk all n^b block assignments
        loop {
            let mut col = 0;
            for &lab in p.upper_labels() {
                col = col * nu + values[lab as usize];
            }
            let mut row = 0;
            for &lab in p.lower_labels() {
                row = row * nu + values[lab as usize];
            }
            out.entry_mut(row, col).add_assign_ref(c);
            let mut pos = 0;
            while pos < b {
                values[pos] += 1;
                if values[pos] < nu {
                    break;
                }
                values[pos] = 0;
                pos += 1;
            }
            if pos == b {
                break;
            }
        }
    }
    Ok(out)
}

pub fn t_partition<S: Scalar>(p: &Partition, n: u64) -> Result<ExactMatrix<S>> {
    t_matrix(&LinComb::from_partition(p.clone(), n), n)
}

/// `U_{(N,±)}`.
pub fn u_matrix<S: Scalar>(n: u64, sign: Sign, radicand: u64) -> Result<ExactMatrix<S>> {
    if n < 2 {
        return Err(Error::Parameter("U needs N >= 2".into()));
    }
    let border = sign
        .as_scalar::<S>()
        .mul_ref(&S::sqrt_int(n, radicand)?.try_inv()?);
    let shift = (S::one() + border.clone()).mul_ref(&S::from_int(n as i64 - 1).try_inv()?);
    let last = n as usize - 1;
    Ok(ExactMatrix::from_fn(n as usize, n as usize, |i, j| {
        if i == last || j == last {
            border.clone()
        } else if i == j {
            S::one() - shift.clone()
        } else {
            -shift.clone()
        }
    }))
}

/// `V_{(N,±)}`: the first `N − 1` rows of `U_{(N,±)}`.
pub fn v_matrix<S: Scalar>(n: u64, sign: Sign, radicand: u64) -> Result<ExactMatrix<S>> {
    let u = u_matrix::<S>(n, sign, radicand)?;
    let m = n as usize - 1;
    Ok(ExactMatrix::from_fn(m, n as usize, |i, j| {
        u.get(i, j).clone()
    }))
}

/// `P_{(N)} = I − (1/N)·ξξ*`.
pub fn p_matrix<S: Scalar>(n: u64) -> Result<ExactMatrix<S>> {
    if n == 0 {
        return Err(Error::Parameter("dimension must be at least 1".into()));
    }
    let f = S::from_frac(1, n as i64);
    Ok(ExactMatrix::from_fn(n as usize, n as usize, |i, j| {
        if i == j {
            S::one() - f.clone()
        } else {
            -f.clone()
        }
    }))
}

/// All-ones column vector `ξ`.
pub fn xi<S: Scalar>(n: usize) -> ExactMatrix<S> {
    ExactMatrix::from_fn(n, 1, |_, _| S::one())
}

/// Permutation matrix `A_{ij} = δ_{i σ(j)}` for a 0-based permutation.
pub fn permutation_matrix<S: Scalar>(sigma: &[usize]) -> ExactMatrix<S> {
    let n = sigma.len();
    ExactMatrix::from_fn(
        n,
        n,
        |i, j| if sigma[j] == i { S::one() } else { S::zero() },
    )
}

/// Whether `T_{𝒱p}` at `N − 1` equals `V^{⊗l} T_p V^{*⊗k}`.
pub fn check_tvk<S: Scalar>(p: &Partition, n: u64, sign: Sign, radicand: u64) -> Result<bool> {
    let x = LinComb::<S>::from_partition(p.clone(), n);
    let (k, l) = p.grade();
    let lhs = t_matrix(&transforms::v_transform(&x, sign, radicand)?, n - 1)?;
    let v = v_matrix::<S>(n, sign, radicand)?;
    let rhs = t_matrix(&x, n)?.sandwich(&v, l, &v.adjoint(), k)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldElem, Rational};
    use crate::partition::enumerate;
    use num_traits::Zero;

    type QM = ExactMatrix<Rational>;
    type FM = ExactMatrix<FieldElem>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn pair_vector() {
        let t = t_partition::<Rational>(&Partition::pair(), 2).unwrap();
        let expect = QM::from_rows(vec![
            vec![q(1, 1)],
            vec![q(0, 1)],
            vec![q(0, 1)],
            vec![q(1, 1)],
        ])
        .unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn dependency_at_two() {
        // T(↑⊗3) = Σ T(b_{3,{i}}) − 2·T(b3) at N = 2
        let n = 2;
        let mut x = transforms::block_cut_sum::<Rational>(3, 1, n).unwrap();
        x.add_term(Partition::block(3), &q(-2, 1));
        x.add_term(Partition::singletons(3), &q(-1, 1));
        assert!(t_matrix(&x, n).unwrap().is_zero());
        // the same combination is nonzero at N = 3
        assert!(!t_matrix(&x.with_dim(3), 3).unwrap().is_zero());
    }

    #[test]
    fn projection_matrix() {
        let t = t_matrix(&transforms::pi::<Rational>(3).unwrap(), 3).unwrap();
        let expect = QM::from_fn(3, 3, |i, j| if i == j { q(2, 3) } else { q(-1, 3) });
        assert_eq!(t, expect);
        assert_eq!(t, p_matrix(3).unwrap());
    }

    #[test]
    fn u_at_four() {
        let u = u_matrix::<Rational>(4, Sign::Plus, 0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { q(1, 2) } else { q(-1, 2) };
                assert_eq!(u.get(i, j), &e);
            }
            assert_eq!(u.get(i, 3), &q(1, 2));
            assert_eq!(u.get(3, i), &q(1, 2));
        }
        assert_eq!(u.mul(&u.adjoint()).unwrap(), QM::identity(4));
    }

    #[test]
    fn u_maps_xi() {
        for n in [3u64, 5] {
            for s in [Sign::Plus, Sign::Minus] {
                let u = u_matrix::<FieldElem>(n, s, n).unwrap();
                let got = u.mul(&xi(n as usize)).unwrap();
                let root = s.as_scalar::<FieldElem>() * FieldElem::sqrt(n);
                let expect = FM::from_fn(n as usize, 1, |i, _| {
                    if i == n as usize - 1 {
                        root.clone()
                    } else {
                        FieldElem::zero()
                    }
                });
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn rank_examples() {
        let flatten = |n: u64, k: usize, l: usize| {
            let rows: Vec<Vec<Rational>> = enumerate(k, l)
                .unwrap()
                .iter()
                .map(|p| t_partition::<Rational>(p, n).unwrap().data)
                .collect();
            QM::from_rows(rows).unwrap().rank().unwrap()
        };
        assert_eq!(flatten(2, 0, 3), 4);
        assert_eq!(flatten(3, 0, 3), 5);
        let i2 = QM::identity(2);
        assert_eq!(i2.kron(&i2), QM::identity(4));
        assert_eq!(QM::zeros(3, 3).rank().unwrap(), 0);
    }

    #[test]
    fn leg_application_matches_kron() {
        let a = QM::from_fn(2, 3, |i, j| q(i as i64 + 2 * j as i64 - 1, 1 + j as i64));
        let m = QM::from_fn(9, 9, |i, j| q((i * 7 + j * 3) as i64 % 5 - 2, 1));
        let b = QM::from_fn(2, 3, |i, j| q(j as i64 - i as i64, 2));
        let direct = a
            .kron_power(2)
            .mul(&m)
            .unwrap()
            .mul(&b.adjoint().kron_power(2))
            .unwrap();
        assert_eq!(m.sandwich(&a, 2, &b.adjoint(), 2).unwrap(), direct);
    }

    #[test]
    fn tvk_small() {
        assert!(check_tvk::<FieldElem>(&Partition::pair(), 4, Sign::Plus, 4).unwrap());
        for s in [Sign::Plus, Sign::Minus] {
            assert!(check_tvk::<FieldElem>(&Partition::block(3), 4, s, 4).unwrap());
            assert!(check_tvk::<FieldElem>(&Partition::block(3), 5, s, 5).unwrap());
        }
        let p: Partition = "P(1,2){1,2}{3}".parse().unwrap();
        assert!(check_tvk::<FieldElem>(&p, 3, Sign::Minus, 3).unwrap());
    }

    #[test]
    fn size_cap() {
        let x = LinComb::<Rational>::from_partition(Partition::block(7), 4);
        assert!(matches!(t_matrix(&x, 4), Err(Error::SizeCap { .. })));
        assert!(matches!(t_matrix(&x, 5), Err(Error::Dimension(4, 5))));
    }
}
