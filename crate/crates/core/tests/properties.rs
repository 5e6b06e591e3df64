use num_traits::{One, Zero};
use partlin::matrix::t_matrix;
use partlin::{bell, enumerate, FieldElem, Partition, QLinComb, QSpan, Rational, Scalar};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(a, b)| Rational::from_frac(a, b))
}

fn field_triple() -> impl Strategy<Value = (FieldElem, FieldElem, FieldElem)> {
    prop::sample::select(vec![2u64, 3, 5, 6, 7, 10]).prop_flat_map(|d| {
        let elem = move || (rational(), rational()).prop_map(move |(a, b)| FieldElem::new(a, b, d));
        (elem(), elem(), elem())
    })
}

fn partition(k: usize, l: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..(k + l).max(1), k + l)
        .prop_map(move |labels| Partition::from_labels(k, l, labels))
}

fn any_partition(max_len: usize) -> impl Strategy<Value = Partition> {
    (0..=max_len)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, k)| partition(k, n - k))
}

fn chain3() -> impl Strategy<Value = (Partition, Partition, Partition)> {
    (0usize..=3, 0usize..=3, 0usize..=3, 0usize..=3)
        .prop_flat_map(|(k, l, m, r)| (partition(k, l), partition(l, m), partition(m, r)))
}

fn comb(k: usize, l: usize, n: u64) -> impl Strategy<Value = QLinComb> {
    prop::collection::vec((partition(k, l), rational()), 1..4).prop_map(move |terms| {
        let mut x = QLinComb::zero(k, l, n);
        for (p, c) in terms {
            x.add_term(p, &c);
        }
        x
    })
}

fn comb_chain3(n: u64) -> impl Strategy<Value = (QLinComb, QLinComb, QLinComb)> {
    (0usize..=2, 0usize..=2, 0usize..=2, 0usize..=2)
        .prop_flat_map(move |(k, l, m, r)| (comb(k, l, n), comb(l, m, n), comb(m, r, n)))
}

proptest! {
    #[test]
    fn field_ring_axioms((x, y, z) in field_triple()) {
        prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y.clone() + z.clone()));
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
        prop_assert_eq!(
            x.clone() * (y.clone() + z.clone()),
            x.clone() * y.clone() + x.clone() * z.clone()
        );
        prop_assert_eq!(x.clone() - x.clone(), FieldElem::zero());
    }

    #[test]
    fn field_inverse((x, _, _) in field_triple()) {
        prop_assume!(!x.is_zero());
        let inv = x.try_inverse().unwrap();
        prop_assert_eq!(x * inv, FieldElem::one());
    }

    #[test]
    fn field_literal_round_trip((x, _, _) in field_triple()) {
        let d = x.radicand().max(2);
        let back = FieldElem::parse_literal(&x.to_string(), d).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn field_float_embedding((x, _, _) in field_triple()) {
        let d = x.radicand() as f64;
        let a = Scalar::to_f64(x.rat_part());
        let b = Scalar::to_f64(x.rad_part());
        let expect = a + b * d.sqrt();
        prop_assert!((x.to_f64() - expect).abs() < 1e-12);
    }

    #[test]
    fn tensor_associative(p in any_partition(3), q in any_partition(3), s in any_partition(3)) {
        prop_assert_eq!(p.tensor(&q).tensor(&s), p.tensor(&q.tensor(&s)));
    }

    #[test]
    fn compose_associative_with_loops((p, q, s) in chain3()) {
        let (qp, a) = q.compose(&p).unwrap();
        let (left, b) = s.compose(&qp).unwrap();
        let (sq, c) = s.compose(&q).unwrap();
        let (right, d) = sq.compose(&p).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a + b, c + d);
    }

    #[test]
    fn involution_reverses_composition((p, q, _) in chain3()) {
        let (qp, loops) = q.compose(&p).unwrap();
        let (back, back_loops) = p.involute().compose(&q.involute()).unwrap();
        prop_assert_eq!(qp.involute(), back);
        prop_assert_eq!(loops, back_loops);
        prop_assert_eq!(p.involute().involute(), p);
    }

    #[test]
    fn rotations_invert(p in any_partition(6)) {
        let (k, l) = p.grade();
        if k > 0 {
            prop_assert_eq!(p.rotate_left().unwrap().rotate_left_inv().unwrap(), p.clone());
            prop_assert_eq!(p.rotate_right_inv().unwrap().rotate_right().unwrap(), p.clone());
        }
        if l > 0 {
            prop_assert_eq!(p.rotate_right().unwrap().rotate_right_inv().unwrap(), p.clone());
            prop_assert_eq!(p.rotate_left_inv().unwrap().rotate_left().unwrap(), p.clone());
        }
    }

    #[test]
    fn cycle_has_order_length(n in 1usize..=6, labels in prop::collection::vec(0usize..6, 6)) {
        let p = Partition::from_labels(0, n, labels[..n].iter().copied());
        let mut r = p.clone();
        for _ in 0..n {
            r = r.rotate_cycle().unwrap();
        }
        prop_assert_eq!(r, p.clone());
        prop_assert_eq!(p.is_noncrossing(), p.rotate_cycle().unwrap().is_noncrossing());
    }

    #[test]
    fn lincomb_compose_associative((x, y, z) in comb_chain3(3)) {
        let left = z.compose(&y.compose(&x).unwrap()).unwrap();
        let right = z.compose(&y).unwrap().compose(&x).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn lincomb_involution((x, y, _) in comb_chain3(4), z in comb(1, 2, 4)) {
        prop_assert_eq!(
            y.compose(&x).unwrap().involute(),
            x.involute().compose(&y.involute()).unwrap()
        );
        prop_assert_eq!(x.tensor(&z).unwrap().involute(), x.involute().tensor(&z.involute()).unwrap());
    }

    #[test]
    fn span_insert_monotone(xs in prop::collection::vec(comb(1, 2, 3), 1..8)) {
        let mut span = QSpan::new(1, 2, 3);
        for x in &xs {
            let before = span.rank();
            let grew = span.insert(x).unwrap();
            prop_assert_eq!(span.rank(), before + usize::from(grew));
            prop_assert!(span.contains(x).unwrap());
            prop_assert!(!span.insert(x).unwrap());
            prop_assert!(span.rank() as u64 <= bell(3));
        }
    }

    #[test]
    fn functor_on_random_pairs(n in 2u64..=4, (x, y, _) in comb_chain3(4), z in comb(1, 1, 4)) {
        let (x, y, z) = (x.with_dim(n), y.with_dim(n), z.with_dim(n));
        let t = |v: &QLinComb| t_matrix(v, n).unwrap();
        prop_assert_eq!(t(&y.compose(&x).unwrap()), t(&y).mul(&t(&x)).unwrap());
        prop_assert_eq!(t(&x.tensor(&z).unwrap()), t(&x).kron(&t(&z)));
        prop_assert_eq!(t(&x.involute()), t(&x).adjoint());
    }
}

#[test]
fn enumeration_counts_are_bell_numbers() {
    let bell_numbers = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
    for (n, &b) in bell_numbers.iter().enumerate() {
        assert_eq!(bell(n), b);
        for k in 0..=n {
            let parts = enumerate(k, n - k).unwrap();
            assert_eq!(parts.len() as u64, b, "grade ({k},{})", n - k);
            assert!(parts.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn noncrossing_counts_are_catalan() {
    let catalan = [1, 1, 2, 5, 14, 42, 132];
    for (n, &c) in catalan.iter().enumerate() {
        for k in 0..=n {
            let count = enumerate(k, n - k)
                .unwrap()
                .into_iter()
                .filter(Partition::is_noncrossing)
                .count();
            assert_eq!(count, c);
        }
    }
}
