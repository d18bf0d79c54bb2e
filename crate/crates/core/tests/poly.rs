use ballmap::{rat, GaussianRational as Q, HermPoly, HoloPoly, Scalar};
use proptest::prelude::*;

type H = HoloPoly<Q>;
type E = HermPoly<Q>;

fn coeff() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| Q::complex((a, b), (c, d)))
}

fn holo(nz: usize) -> impl Strategy<Value = H> {
    proptest::collection::vec((proptest::collection::vec(0u8..3, nz + 1), coeff()), 0..5)
        .prop_map(move |ts| ts.into_iter().fold(H::zero(nz), |acc, (e, c)| acc.add(&H::monomial(nz, &e, c))))
}

fn herm(nz: usize) -> impl Strategy<Value = E> {
    proptest::collection::vec((proptest::collection::vec(0u8..3, 2 * nz + 1), coeff()), 0..5)
        .prop_map(move |ts| ts.into_iter().fold(E::zero(nz), |acc, (e, c)| acc.add(&E::monomial(nz, &e, c))))
}

#[test]
fn arithmetic_examples() {
    let z1 = H::z(2, 0);
    assert_eq!(z1.mul(&z1), H::monomial(2, &[2, 0, 0], rat(1, 1)));
    let iz = E::z(2, 0).scale(&Q::i());
    assert_eq!(iz.conj(), E::zbar(2, 0).scale(&-Q::i()));
    let p = H::parse("2*z1 + w", 1).unwrap();
    assert_eq!(p.eval(&[rat(1, 2)], &Q::i()), Q::complex((1, 1), (1, 1)));
    let s = Q::complex((3, 4), (-2, 5));
    assert!(s.norm_sq().is_real());
    assert_eq!(s.conj().conj(), s);
}

#[test]
fn boundary_restriction_examples() {
    let nz = 2;
    let w = H::w(nz);
    let n2 = E::norm_sq(nz);
    let u = E::u(nz);
    assert_eq!(w.restrict_to_boundary(), u.add(&n2.scale(&Q::i())));
    let expect = u.mul(&u).add(&u.mul(&n2).scale(&Q::complex((0, 1), (2, 1)))).sub(&n2.mul(&n2));
    assert_eq!(w.pow(2).restrict_to_boundary(), expect);
    assert_eq!(H::z(nz, 0).restrict_to_boundary(), E::z(nz, 0));
}

#[test]
fn weighted_decomposition_examples() {
    let nz = 2;
    let d = H::parse("z1^2*w", nz).unwrap().weighted_decompose();
    assert_eq!(d.keys().copied().collect::<Vec<_>>(), vec![4]);
    assert_eq!((d[&4][0].0, d[&4][0].1), (2, 1));
    let d = H::parse("z1 + z2*w^2", nz).unwrap().weighted_decompose();
    let shape: Vec<(usize, usize, usize)> = d.iter().flat_map(|(wt, v)| v.iter().map(move |b| (*wt, b.0, b.1))).collect();
    assert_eq!(shape, vec![(1, 1, 0), (5, 1, 2)]);
    // a Whitney component z2·z1 in the ball layout
    let d = H::parse("z2*z1", nz).unwrap().weighted_decompose();
    assert_eq!((d[&2][0].0, d[&2][0].1), (2, 0));
}

#[test]
fn class_extraction_examples() {
    let nz = 2;
    let h = E::parse("z1*~z2*u + z1^2", nz).unwrap();
    assert_eq!(h.extract_class(1, 1, 1), E::parse("z1*~z2*u", nz).unwrap());
    let w = H::w(nz).restrict_to_boundary();
    let ww = w.mul(&w.conj());
    let n2 = E::norm_sq(nz);
    assert_eq!(ww.extract_class(2, 2, 0), n2.mul(&n2));
    assert!(ww.extract_class(1, 1, 0).is_zero());
}

#[test]
fn divisibility_examples() {
    let nz = 3;
    let n2 = E::norm_sq(nz);
    assert_eq!(n2.mul(&n2).divide_by_norm_sq(0.0), Some(n2.clone()));
    assert_eq!(E::parse("z1*~z2", nz).unwrap().divide_by_norm_sq(0.0), None);
    assert_eq!(E::zero(nz).divide_by_norm_sq(0.0), Some(E::zero(nz)));
    assert_eq!(E::parse("z1*~z1 - 1", nz).unwrap().divide_by_sphere(0.0), None);
    // Whitney n = 3: |z'|² + |z3|²|z|² − 1 = (|z|² − 1)(1 + |z3|²)
    let zz = |j| E::z(nz, j).mul(&E::zbar(nz, j));
    let h = zz(0).add(&zz(1)).add(&zz(2).mul(&n2)).sub(&E::one(nz));
    assert_eq!(h.divide_by_sphere(0.0), Some(E::one(nz).add(&zz(2))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in holo(2), b in holo(2), c in holo(2)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn herm_ring_axioms(a in herm(2), b in herm(2), c in herm(2)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn boundary_restriction_is_a_ring_homomorphism(a in holo(2), b in holo(2)) {
        prop_assert_eq!(a.mul(&b).restrict_to_boundary(), a.restrict_to_boundary().mul(&b.restrict_to_boundary()));
        prop_assert_eq!(a.add(&b).restrict_to_boundary(), a.restrict_to_boundary().add(&b.restrict_to_boundary()));
    }

    #[test]
    fn norm_sq_quotients_are_exact(h in herm(3), a in herm(3)) {
        let planted = a.mul(&E::norm_sq(3));
        prop_assert_eq!(planted.divide_by_norm_sq(0.0), Some(a.clone()));
        if let Some(q) = h.divide_by_norm_sq(0.0) {
            prop_assert!(q.mul(&E::norm_sq(3)).sub(&h).is_zero());
        }
        if let Some(q) = h.divide_by_sphere(0.0) {
            prop_assert!(q.mul(&E::sphere(3)).sub(&h).is_zero());
        }
    }

    #[test]
    fn classes_partition(h in herm(2)) {
        let sum = h.classes().values().fold(E::zero(2), |acc, c| acc.add(c));
        prop_assert_eq!(sum, h);
    }

    #[test]
    fn real_valued_is_closed(a in herm(2), b in herm(2)) {
        let ra = a.add(&a.conj());
        let rb = b.mul(&b.conj());
        prop_assert!(ra.is_real_valued(0.0) && rb.is_real_valued(0.0));
        prop_assert!(ra.add(&rb).is_real_valued(0.0));
        prop_assert!(ra.mul(&rb).is_real_valued(0.0));
    }

    #[test]
    fn text_round_trip(a in holo(3), h in herm(2)) {
        prop_assert_eq!(H::parse(&a.to_string(), 3).unwrap(), a);
        prop_assert_eq!(E::parse(&h.to_string(), 2).unwrap(), h);
    }

    #[test]
    fn decomposition_reassembles(a in holo(2)) {
        let back = a.weighted_decompose().values().flatten().fold(H::zero(2), |acc, (_, l, b)| acc.add(&b.times_w_pow(*l as u8)));
        prop_assert_eq!(back, a);
    }
}
