mod common;

use ballmap::maps::{Model, RationalMap};
use ballmap::spans::{
    full_jet_span_dim, gap_profile, in_gap, jet_span, jet_span_of_jet, tangential_apply, tangential_power, thm11_applies,
    BoundaryExpr,
};
use ballmap::{catalog, lft, normalize, rat, GaussianRational as Q, HermPoly, HoloPoly};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type H = HoloPoly<Q>;

#[test]
fn gap_profile_for_eight_and_ten() {
    let p = gap_profile(8);
    assert_eq!(p.k, 3);
    let spans: Vec<_> = p.intervals.iter().map(|i| (i.lo, i.hi, i.empty)).collect();
    assert_eq!(spans, vec![(9, 14, false), (17, 20, false), (25, 25, false)]);
    let i3 = *gap_profile(10).interval(3);
    assert_eq!((i3.lo, i3.hi), (31, 33));
    assert!(thm11_applies(10, 32));
    assert!(!thm11_applies(8, 24));
    assert!(thm11_applies(8, 25));
    assert!(!thm11_applies(7, 22));
    assert!(in_gap(8, 25) && in_gap(8, 12) && !in_gap(8, 16) && !in_gap(8, 26));
}

proptest! {
    #[test]
    fn gap_intervals_are_disjoint_and_bounded(n in 2usize..=100) {
        let p = gap_profile(n);
        prop_assert!(p.k * (p.k + 1) / 2 < n);
        prop_assert!((p.k + 1) * (p.k + 2) / 2 >= n);
        for (a, i) in p.intervals.iter().enumerate() {
            prop_assert_eq!(i.empty, n < 2 + i.k * (i.k + 1) / 2);
            for j in &p.intervals[a + 1..] {
                prop_assert!(i.empty || j.empty || i.hi < j.lo);
            }
        }
        let k = p.k;
        let formula = (k + 1) * n - k * (k + 1) / 2 - 1;
        if p.interval(k).empty {
            // n = K(K+1)/2 + 1: the top interval is empty and the maximum drops to I_{K-1}
            prop_assert_eq!(n, k * (k + 1) / 2 + 1);
            prop_assert_eq!(p.max_gap(), p.intervals.get(k.wrapping_sub(2)).map(|i| i.hi).filter(|_| k >= 2));
        } else {
            prop_assert_eq!(p.max_gap(), Some(formula));
        }
    }
}

#[test]
fn tangential_examples() {
    let nz = 2;
    let lw = tangential_apply(&BoundaryExpr::from_holo(&H::w(nz)), 0);
    assert_eq!(lw.restrict_to_boundary(), HermPoly::zbar(nz, 0).scale(&(rat::<Q>(-2, 1) * Q::i())));
    assert!(tangential_apply(&BoundaryExpr::from_holo(&H::z(nz, 1)), 0).is_zero());
    let z1z2 = H::z(nz, 0).mul(&H::z(nz, 1));
    assert_eq!(tangential_power(&z1z2, &[1, 1]).at_origin(), rat(1, 1));
}

#[test]
fn tangential_fields_kill_the_defining_function() {
    // L_j is tangent: it annihilates Im w − |z|², i.e. L_j w = 2i L_j(|z|²) on the boundary.
    let nz = 3;
    for j in 0..nz {
        let lw = tangential_apply(&BoundaryExpr::from_holo(&H::w(nz)), j).restrict_to_boundary();
        let lnorm = HermPoly::zbar(nz, j).scale(&(rat::<Q>(-2, 1) * Q::i()));
        assert_eq!(lw, lnorm);
    }
}

fn random_holo(seed: u64, nz: usize) -> H {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = H::zero(nz);
    for _ in 0..5 {
        let e: Vec<u8> = (0..=nz).map(|_| rng.gen_range(0..3)).collect();
        p = p.add(&H::monomial(nz, &e, Q::complex((rng.gen_range(-5..=5), 1), (rng.gen_range(-5..=5), 2))));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn tangential_derivatives_at_origin_are_z_derivatives(seed in any::<u64>(), b0 in 0u8..3, b1 in 0u8..3) {
        let nz = 2;
        let h = random_holo(seed, nz);
        let via_l = tangential_power(&h, &[b0, b1]).at_origin();
        let mut d = h.clone();
        for _ in 0..b0 { d = d.derivative(0); }
        for _ in 0..b1 { d = d.derivative(1); }
        prop_assert_eq!(via_l, d.constant_term());
    }

    #[test]
    fn tangential_fields_commute(seed in any::<u64>()) {
        let h = random_holo(seed, 3);
        let e = BoundaryExpr::from_holo(&h);
        let ab = tangential_apply(&tangential_apply(&e, 0), 2);
        let ba = tangential_apply(&tangential_apply(&e, 2), 0);
        prop_assert_eq!(ab.restrict_to_boundary(), ba.restrict_to_boundary());
    }
}

#[test]
fn linear_embedding_span_is_the_tangential_directions() {
    let n = 5;
    let f = RationalMap::<Q>::linear_embedding(Model::Siegel, n, 9);
    let (z0, w0) = common::siegel_point(n);
    let r = jet_span(&f, &z0, &w0, 4).unwrap();
    assert_eq!(r.dims, vec![n - 1; 4]);
    assert_eq!(r.stabilization, Some(1));
    assert_eq!(full_jet_span_dim(&f, 0.0).unwrap(), n);
}

#[test]
fn full_span_matches_hull_for_catalog_maps() {
    for (f, expect) in [(common::example11(4), 12), (catalog::whitney(4), 7), (catalog::whitney(6), 11)] {
        let s = normalize::siegel_form(&f).unwrap();
        assert_eq!(full_jet_span_dim(&s, 0.0).unwrap(), expect);
        assert_eq!(s.affine_hull_dim(0.0), f.affine_hull_dim(0.0));
    }
}

#[test]
fn span_dims_are_unitary_invariant() {
    let n = 4;
    let f = normalize::siegel_form(&common::example11(n)).unwrap();
    let (z0, w0) = common::siegel_point(n);
    let base = jet_span(&f, &z0, &w0, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let nt = f.target_dim;
    let u = lft::random_exact_unitary(nt - 1, &mut rng);
    let mut num: Vec<H> = (0..nt - 1)
        .map(|r| (0..nt - 1).fold(H::zero(n - 1), |acc, c| acc.add(&f.num[c].scale(&u[r][c]))))
        .collect();
    num.push(f.num[nt - 1].clone());
    let g = RationalMap::new(Model::Siegel, n, num, f.den.clone()).unwrap();
    let rotated = jet_span(&g, &z0, &w0, 3).unwrap();
    assert_eq!(base.dims, rotated.dims);
    for w in base.dims.windows(2) {
        assert!(w[0] <= w[1]);
    }
    assert!(*base.dims.last().unwrap() <= nt);
}

#[test]
fn normalized_example_span_stabilizes_at_three() {
    let n = 8;
    let r = common::normal_form_at(&common::example11(n), 5);
    let rep = jet_span_of_jet(&r.normalized.jet, 4).unwrap();
    assert_eq!(rep.dim(3), 3 * n - 3);
    assert_eq!(rep.dim(4), 3 * n - 3);
}
