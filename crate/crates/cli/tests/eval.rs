use partlin::{enumerate, FLinComb, FieldElem, Partition, Rational, Scalar};
use partlin_cli::eval_str;

fn q(a: i64, b: i64) -> FieldElem {
    FieldElem::rational(Rational::from_frac(a, b))
}

fn block_sizes(p: &Partition) -> Vec<usize> {
    let mut sizes: Vec<usize> = p.blocks().iter().map(Vec::len).collect();
    sizes.sort_unstable();
    sizes
}

/// Sums `coeff(shape) * p` over every partition of grade (0, len).
fn by_shape(len: usize, n: u64, coeff: impl Fn(&[usize]) -> FieldElem) -> FLinComb {
    let mut x = FLinComb::zero(0, len, n);
    for p in enumerate(0, len).unwrap() {
        let c = coeff(&block_sizes(&p));
        x.add_term(p, &c);
    }
    x
}

#[test]
fn closed_loop_gives_dimension() {
    let x = eval_str("compose(star(pair), pair)", 3).unwrap();
    assert_eq!(x, FLinComb::term(q(3, 1), Partition::empty(), 3));
}

#[test]
fn projected_three_block() {
    for n in [2u64, 3, 4, 7] {
        let n_i = n as i64;
        let want = by_shape(3, n, |s| match s.len() {
            1 => q(1, 1),
            2 => q(-1, n_i),
            _ => q(2, n_i * n_i),
        });
        assert_eq!(eval_str("Psb(block(3))", n).unwrap(), want, "N={n}");
    }
}

#[test]
fn twisted_four_block_at_five() {
    let want = by_shape(4, 5, |s| match s {
        [4] => q(1, 1),
        [1, 3] => q(-2, 5),
        [1, 1, 2] => q(4, 25),
        [1, 1, 1, 1] => q(-16, 125),
        _ => q(0, 1),
    });
    let got = eval_str("Tsb(block(4))", 5).unwrap();
    assert_eq!(got, want);
    assert_eq!(got.len(), 12);
}

#[test]
fn radicals_and_scalars() {
    let x = eval_str("r * r", 7).unwrap();
    assert_eq!(x, FLinComb::term(q(7, 1), Partition::empty(), 7));
    let x = eval_str("(1 + r) * pair - pair", 3).unwrap();
    assert_eq!(x, FLinComb::term(FieldElem::sqrt(3), Partition::pair(), 3));
    // √4 is rational
    assert_eq!(eval_str("r", 4).unwrap(), eval_str("2", 4).unwrap());
}

#[test]
fn cutting_a_pair_changes_dimension() {
    let x = eval_str("Vminus(pair)", 5).unwrap();
    assert_eq!(x, FLinComb::from_partition(Partition::pair(), 4));
}

#[test]
fn operations_agree_with_library() {
    let n = 4;
    let b3 = FLinComb::from_partition(Partition::block(3), n);
    let up = FLinComb::from_partition(Partition::up(), n);
    assert_eq!(
        eval_str("tensor(block(3), up)", n).unwrap(),
        b3.tensor(&up).unwrap()
    );
    assert_eq!(eval_str("rotr(rotr(block(3)))", n).unwrap().grade(), (2, 1));
    assert_eq!(
        eval_str("cyc(block(3))", n).unwrap(),
        b3.rotate_cycle().unwrap()
    );
    assert_eq!(eval_str("zero(1,2)", n).unwrap(), FLinComb::zero(1, 2, n));
}
