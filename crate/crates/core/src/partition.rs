//! Set partitions of `k` upper and `l` lower points.
//!
//! A partition is stored as a label sequence over its points: the `k` upper
//! points left to right, then the `l` lower points left to right. Labels are
//! numbered by first occurrence, so equal partitions have equal label
//! sequences and the derived ordering is lexicographic within a grade.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::limits::Limits;

pub type Labels = SmallVec<[u8; 16]>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    upper: usize,
    lower: usize,
    labels: Labels,
}

/// Renumbers arbitrary labels by first occurrence.
fn canonical_labels<I: IntoIterator<Item = usize>>(raw: I) -> Labels {
    let mut map: SmallVec<[(usize, u8); 16]> = SmallVec::new();
    raw.into_iter()
        .map(|x| match map.iter().find(|(k, _)| *k == x) {
            Some(&(_, v)) => v,
            None => {
                let v = map.len() as u8;
                map.push((x, v));
                v
            }
        })
        .collect()
}

impl Partition {
    /// Builds a partition from blocks of 1-based points.
    pub fn from_blocks<B: AsRef<[usize]>>(k: usize, l: usize, blocks: &[B]) -> Result<Self> {
        let n = k + l;
        if n > u8::MAX as usize {
            return Err(Error::MalformedPartition(format!("{n} points is too many")));
        }
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            let block = block.as_ref();
            if block.is_empty() {
                return Err(Error::MalformedPartition("empty block".into()));
            }
            for &pt in block {
                if pt == 0 || pt > n {
                    return Err(Error::MalformedPartition(format!(
                        "point {pt} outside 1..={n}"
                    )));
                }
                if owner[pt - 1] != usize::MAX {
                    return Err(Error::MalformedPartition(format!(
                        "point {pt} appears twice"
                    )));
                }
                owner[pt - 1] = b;
            }
        }
        if let Some(missing) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::MalformedPartition(format!(
                "point {} is in no block",
                missing + 1
            )));
        }
        Ok(Self::from_labels(k, l, owner))
    }

    /// Builds a partition from any labelling of the `k + l` points.
    pub fn from_labels<I: IntoIterator<Item = usize>>(k: usize, l: usize, labels: I) -> Self {
        let labels = canonical_labels(labels);
        assert_eq!(labels.len(), k + l, "label count must equal k + l");
        Self {
            upper: k,
            lower: l,
            labels,
        }
    }

    pub fn empty() -> Self {
        Self {
            upper: 0,
            lower: 0,
            labels: Labels::new(),
        }
    }

    /// `|^{⊗n}`, the identity on `n` points.
    pub fn identity(n: usize) -> Self {
        Self::from_labels(n, n, (0..n).chain(0..n))
    }

    /// The lower pair ⊓ on (0,2).
    pub fn pair() -> Self {
        Self::block(2)
    }

    /// The upper pair ⊔ on (2,0).
    pub fn copair() -> Self {
        Self::from_labels(2, 0, [0, 0])
    }

    /// The singleton ↑ on (0,1).
    pub fn up() -> Self {
        Self::block(1)
    }

    /// The singleton ↓ on (1,0).
    pub fn down() -> Self {
        Self::from_labels(1, 0, [0])
    }

    /// ↓⊗↑ on (1,1).
    pub fn disconnected() -> Self {
        Self::from_labels(1, 1, [0, 1])
    }

    /// All `k` lower points in one block.
    pub fn block(k: usize) -> Self {
        Self::from_labels(0, k, std::iter::repeat_n(0, k))
    }

    /// `↑^{⊗k}`.
    pub fn singletons(k: usize) -> Self {
        Self::from_labels(0, k, 0..k)
    }

    /// The crossing on (2,2).
    pub fn crossing() -> Self {
        Self::from_labels(2, 2, [0, 1, 1, 0])
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

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn upper_labels(&self) -> &[u8] {
        &self.labels[..self.upper]
    }

    pub fn lower_labels(&self) -> &[u8] {
        &self.labels[self.upper..]
    }

    pub fn block_count(&self) -> usize {
        self.labels
            .iter()
            .map(|&x| x as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Blocks as sorted 1-based point lists, ordered by their minimum.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.labels.iter().enumerate() {
            out[b as usize].push(i + 1);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count()];
        for &b in &self.labels {
            sizes[b as usize] += 1;
        }
        sizes
    }

    pub fn has_singleton(&self) -> bool {
        self.block_sizes().contains(&1)
    }

    pub fn is_pairing(&self) -> bool {
        self.block_sizes().iter().all(|&s| s == 2)
    }

    pub fn has_only_even_blocks(&self) -> bool {
        self.block_sizes().iter().all(|&s| s % 2 == 0)
    }

    /// Labels read along the boundary: upper row left to right, then the
    /// lower row right to left.
    fn cyclic_labels(&self) -> Labels {
        let mut out: Labels = self.upper_labels().iter().copied().collect();
        out.extend(self.lower_labels().iter().rev().copied());
        out
    }

    pub fn is_noncrossing(&self) -> bool {
        let seq = self.cyclic_labels();
        let b = self.block_count();
        let mut last = vec![0usize; b];
        for (i, &x) in seq.iter().enumerate() {
            last[x as usize] = i;
        }
        let mut seen = vec![false; b];
        let mut open: Vec<u8> = Vec::new();
        for (i, &x) in seq.iter().enumerate() {
            let xi = x as usize;
            if !seen[xi] {
                seen[xi] = true;
                if last[xi] != i {
                    open.push(x);
                }
            } else {
                if open.last() != Some(&x) {
                    return false;
                }
                if last[xi] == i {
                    open.pop();
                }
            }
        }
        true
    }

    /// Side by side: `self` on the left.
    pub fn tensor(&self, other: &Self) -> Self {
        let shift = self.block_count();
        let relabel = |x: &u8| *x as usize + shift;
        let raw = self
            .upper_labels()
            .iter()
            .map(|&x| x as usize)
            .chain(other.upper_labels().iter().map(relabel))
            .chain(self.lower_labels().iter().map(|&x| x as usize))
            .chain(other.lower_labels().iter().map(relabel));
        Self::from_labels(self.upper + other.upper, self.lower + other.lower, raw)
    }

    /// `self · p`: `p` below, `self` stacked on top. Returns the composite and
    /// the number of closed loops formed in the middle row.
    pub fn compose(&self, p: &Self) -> Result<(Self, usize)> {
        if p.lower != self.upper {
            return Err(Error::Arity {
                lower: p.lower,
                upper: self.upper,
            });
        }
        let (k, l, m) = (p.upper, p.lower, self.lower);
        // nodes: p's upper row, the shared middle row, self's lower row
        let mut uf = UnionFind::new(k + l + m);
        let mut first = [usize::MAX; 256];
        for (i, &x) in p.labels.iter().enumerate() {
            let x = x as usize;
            if first[x] == usize::MAX {
                first[x] = i;
            } else {
                uf.union(first[x], i);
            }
        }
        first.fill(usize::MAX);
        for (i, &x) in self.labels.iter().enumerate() {
            let node = k + i;
            let x = x as usize;
            if first[x] == usize::MAX {
                first[x] = node;
            } else {
                uf.union(first[x], node);
            }
        }
        let mut outer_root = vec![false; k + l + m];
        let outer: Vec<usize> = (0..k).chain(k + l..k + l + m).collect();
        for &node in &outer {
            let r = uf.find(node);
            outer_root[r] = true;
        }
        let loops = (k..k + l)
            .filter(|&node| uf.find(node) == node && !outer_root[node])
            .count();
        let raw: Vec<usize> = outer.iter().map(|&n| uf.find(n)).collect();
        Ok((Self::from_labels(k, m, raw), loops))
    }

    /// Mirror across the horizontal axis.
    pub fn involute(&self) -> Self {
        let raw = self
            .lower_labels()
            .iter()
            .chain(self.upper_labels())
            .map(|&x| x as usize);
        Self::from_labels(self.lower, self.upper, raw)
    }

    fn reorder(&self, k: usize, l: usize, order: impl Iterator<Item = usize>) -> Self {
        Self::from_labels(k, l, order.map(|i| self.labels[i] as usize))
    }

    /// Moves the leftmost upper point to the front of the lower row.
    pub fn rotate_left(&self) -> Result<Self> {
        let (k, l) = self.grade();
        if k == 0 {
            return Err(Error::Rotation("upper"));
        }
        Ok(self.reorder(k - 1, l + 1, (1..k).chain([0]).chain(k..k + l)))
    }

    /// Moves the rightmost lower point to the end of the upper row.
    pub fn rotate_right(&self) -> Result<Self> {
        let (k, l) = self.grade();
        if l == 0 {
            return Err(Error::Rotation("lower"));
        }
        let n = k + l;
        Ok(self.reorder(k + 1, l - 1, (0..k).chain([n - 1]).chain(k..n - 1)))
    }

    /// Inverse of [`rotate_left`](Self::rotate_left).
    pub fn rotate_left_inv(&self) -> Result<Self> {
        let (k, l) = self.grade();
        if l == 0 {
            return Err(Error::Rotation("lower"));
        }
        Ok(self.reorder(
            k + 1,
            l - 1,
            [k].into_iter().chain(0..k).chain(k + 1..k + l),
        ))
    }

    /// Inverse of [`rotate_right`](Self::rotate_right).
    pub fn rotate_right_inv(&self) -> Result<Self> {
        let (k, l) = self.grade();
        if k == 0 {
            return Err(Error::Rotation("upper"));
        }
        let n = k + l;
        Ok(self.reorder(k - 1, l + 1, (0..k - 1).chain(k..n).chain([k - 1])))
    }

    /// On a (0,n) partition, moves the last point to the front.
    pub fn rotate_cycle(&self) -> Result<Self> {
        if self.upper != 0 {
            return Err(Error::Parameter(
                "cyclic rotation is defined on partitions without upper points".into(),
            ));
        }
        self.rotate_right()?.rotate_left()
    }

    /// Whether the points assigned `upper_idx` and `lower_idx` are constant on
    /// every block.
    pub fn delta(&self, upper_idx: &[usize], lower_idx: &[usize]) -> bool {
        debug_assert_eq!(upper_idx.len(), self.upper);
        debug_assert_eq!(lower_idx.len(), self.lower);
        let mut value = [usize::MAX; 256];
        for (&b, &v) in self.labels.iter().zip(upper_idx.iter().chain(lower_idx)) {
            let slot = &mut value[b as usize];
            if *slot == usize::MAX {
                *slot = v;
            } else if *slot != v {
                return false;
            }
        }
        true
    }
}

/// All partitions of `k + l` points in lexicographic label order, subject to
/// the process-wide enumeration cap.
pub fn enumerate(k: usize, l: usize) -> Result<Vec<Partition>> {
    enumerate_capped(k, l, Limits::global().enum_cap)
}

pub fn enumerate_capped(k: usize, l: usize, cap: usize) -> Result<Vec<Partition>> {
    let n = k + l;
    if n > cap {
        return Err(Error::SizeCap {
            what: "partition enumeration",
            size: n,
            cap,
        });
    }
    let mut out = Vec::with_capacity(bell(n) as usize);
    let mut labels = Labels::from_elem(0, n);
    fill_rgs(&mut labels, 0, 0, &mut |labels| {
        out.push(Partition {
            upper: k,
            lower: l,
            labels: labels.clone(),
        })
    });
    Ok(out)
}

fn fill_rgs(labels: &mut Labels, pos: usize, blocks: u8, emit: &mut impl FnMut(&Labels)) {
    if pos == labels.len() {
        emit(labels);
        return;
    }
    for x in 0..=blocks {
        labels[pos] = x;
        fill_rgs(labels, pos + 1, blocks.max(x + 1), emit);
    }
}

/// Bell numbers via the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

struct UnionFind {
    parent: SmallVec<[usize; 32]>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{})", self.upper, self.lower)?;
        for block in self.blocks() {
            write!(f, "{{")?;
            for (i, pt) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{pt}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a partition literal starting at byte `start` of `text`, returning
/// the partition and the byte offset just past it.
pub fn parse_partition_at(text: &str, start: usize) -> Result<(Partition, usize)> {
    let bytes = text.as_bytes();
    let mut pos = start;
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let expect = |pos: &mut usize, c: u8| -> Result<()> {
        skip_ws(pos);
        if bytes.get(*pos) == Some(&c) {
            *pos += 1;
            Ok(())
        } else {
            Err(err(*pos, &format!("expected `{}`", c as char)))
        }
    };
    let number = |pos: &mut usize| -> Result<usize> {
        skip_ws(pos);
        let begin = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        text[begin..*pos]
            .parse()
            .map_err(|_| err(begin, "expected a number"))
    };
    skip_ws(&mut pos);
    expect(&mut pos, b'P')?;
    expect(&mut pos, b'(')?;
    let k = number(&mut pos)?;
    expect(&mut pos, b',')?;
    let l = number(&mut pos)?;
    expect(&mut pos, b')')?;
    let literal_start = start;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    loop {
        let save = pos;
        skip_ws(&mut pos);
        if bytes.get(pos) != Some(&b'{') {
            pos = save;
            break;
        }
        pos += 1;
        let mut block = vec![number(&mut pos)?];
        loop {
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b',') => {
                    pos += 1;
                    block.push(number(&mut pos)?);
                }
                Some(b'}') => {
                    pos += 1;
                    break;
                }
                _ => return Err(err(pos, "expected `,` or `}`")),
            }
        }
        blocks.push(block);
    }
    let p = Partition::from_blocks(k, l, &blocks).map_err(|e| Error::Parse {
        pos: literal_start,
        msg: e.to_string(),
    })?;
    Ok((p, pos))
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, end) = parse_partition_at(s, 0)?;
        if !s[end..].trim().is_empty() {
            return Err(Error::Parse {
                pos: end,
                msg: "trailing input".into(),
            });
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Partition {
        text.parse().unwrap()
    }

    fn sample_p() -> Partition {
        p("P(3,4){1,2,3,5,6}{4}{7}")
    }

    fn sample_q() -> Partition {
        p("P(4,4){2,7,8}{3,6}{1}{4}{5}")
    }

    #[test]
    fn canonical_examples() {
        let pair = Partition::from_blocks(0, 2, &[vec![1, 2]]).unwrap();
        assert_eq!(pair.labels(), &[0, 0]);
        assert_eq!(pair, Partition::pair());
        let disc = Partition::from_blocks(1, 1, &[vec![1], vec![2]]).unwrap();
        assert_eq!(disc.labels(), &[0, 1]);
        let q = Partition::from_blocks(3, 4, &[vec![4], vec![1, 2, 3, 5, 6], vec![7]]).unwrap();
        assert_eq!(q.labels(), &[0, 0, 0, 1, 0, 0, 2]);
        assert_eq!(
            Partition::from_labels(3, 4, q.labels().iter().map(|&x| x as usize)),
            q
        );
    }

    #[test]
    fn malformed_blocks() {
        assert!(Partition::from_blocks(0, 2, &[vec![1]]).is_err());
        assert!(Partition::from_blocks(0, 2, &[vec![1, 2], vec![2]]).is_err());
        assert!(Partition::from_blocks(0, 2, &[vec![1, 3]]).is_err());
        assert!(Partition::from_blocks(0, 1, &[vec![1], vec![]]).is_err());
    }

    #[test]
    fn enumerate_counts() {
        let e02 = enumerate(0, 2).unwrap();
        assert_eq!(e02, vec![Partition::pair(), Partition::singletons(2)]);
        assert_eq!(enumerate(0, 4).unwrap().len(), 15);
        assert_eq!(enumerate(2, 2).unwrap().len(), 15);
        for n in 0..=8 {
            assert_eq!(enumerate(0, n).unwrap().len() as u64, bell(n));
        }
        assert_eq!(bell(10), 115_975);
        let e = enumerate(1, 3).unwrap();
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(
            enumerate_capped(3, 3, 5),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let pp = Partition::pair().tensor(&Partition::pair());
        assert_eq!(pp, p("P(0,4){1,2}{3,4}"));
        assert_eq!(Partition::empty().tensor(&sample_p()), sample_p());
        assert_eq!(
            sample_p().tensor(&sample_q()),
            p("P(7,8){1,2,3,9,10}{4}{5,14,15}{6,13}{7}{8}{11}{12}")
        );
    }

    #[test]
    fn compose_examples() {
        let (r, loops) = sample_q().compose(&sample_p()).unwrap();
        assert_eq!(r, p("P(3,4){1,2,3,5,6,7}{4}"));
        assert_eq!(loops, 2);
        let (r, loops) = Partition::identity(4).compose(&sample_p()).unwrap();
        assert_eq!((r, loops), (sample_p(), 0));
        let (r, loops) = Partition::copair().compose(&Partition::pair()).unwrap();
        assert_eq!((r, loops), (Partition::empty(), 1));
        assert!(matches!(
            sample_p().compose(&sample_p()),
            Err(Error::Arity { lower: 4, upper: 3 })
        ));
    }

    #[test]
    fn involution_examples() {
        assert_eq!(Partition::pair().involute(), Partition::copair());
        assert_eq!(sample_p().involute(), p("P(4,3){1}{2,3,5,6,7}{4}"));
        assert_eq!(Partition::identity(3).involute(), Partition::identity(3));
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(
            Partition::pair().rotate_right().unwrap(),
            Partition::identity(1)
        );
        assert_eq!(
            Partition::identity(1).rotate_left().unwrap(),
            Partition::pair()
        );
        assert_eq!(
            p("P(0,3){1,2}{3}").rotate_cycle().unwrap(),
            p("P(0,3){1}{2,3}")
        );
        assert!(matches!(
            Partition::pair().rotate_left(),
            Err(Error::Rotation(_))
        ));
        assert!(matches!(
            Partition::copair().rotate_right(),
            Err(Error::Rotation(_))
        ));
    }

    #[test]
    fn predicates() {
        assert!(sample_p().is_noncrossing());
        assert!(sample_p().has_singleton());
        assert!(!sample_q().is_noncrossing());
        assert!(Partition::pair().is_pairing());
        assert!(!Partition::pair().has_singleton());
        assert!(!Partition::crossing().is_noncrossing());
        assert!(Partition::identity(3).is_noncrossing());
        assert_eq!(sample_p().block_count(), 3);
        // the 14 noncrossing partitions of 4 points
        let nc = enumerate(0, 4)
            .unwrap()
            .into_iter()
            .filter(|p| p.is_noncrossing())
            .count();
        assert_eq!(nc, 14);
    }

    #[test]
    fn delta_examples() {
        let pp = sample_p();
        assert!(pp.delta(&[2, 2, 2], &[1, 2, 2, 3]));
        assert!(!pp.delta(&[2, 2, 1], &[1, 2, 2, 3]));
        assert!(Partition::identity(1).delta(&[3], &[3]));
        assert!(!Partition::identity(1).delta(&[3], &[2]));
        assert!(Partition::singletons(2).delta(&[], &[1, 2]));
    }

    #[test]
    fn literal_round_trip() {
        for q in enumerate(2, 3).unwrap() {
            assert_eq!(q.to_string().parse::<Partition>().unwrap(), q);
        }
        assert_eq!(Partition::empty().to_string(), "P(0,0)");
        assert_eq!("P(0,0)".parse::<Partition>().unwrap(), Partition::empty());
        assert!("P(1,1){1}".parse::<Partition>().is_err());
        assert!("P(1,1){1}{2".parse::<Partition>().is_err());
    }
}
