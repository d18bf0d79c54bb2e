mod common;

use ballmap::lft::{self, cayley, cayley_inverse, heisenberg_translation, Lft};
use ballmap::maps::{boundary_point, sample_boundary_points, Model, RationalMap};
use ballmap::{catalog, rat, GaussianRational as Q, HoloPoly, Scalar};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type H = HoloPoly<Q>;

fn q(a: i64, b: i64) -> Q {
    rat(a, b)
}

#[test]
fn cayley_examples() {
    let rho: Lft<Q> = cayley(2);
    assert_eq!(rho.apply(&[Q::zero(), Q::i()]).unwrap(), vec![Q::zero(), Q::zero()]);
    assert_eq!(rho.apply(&[Q::zero(), Q::zero()]).unwrap(), vec![Q::zero(), q(1, 1)]);
    let p = rho.apply(&[Q::zero(), Q::complex((1, 1), (1, 1))]).unwrap();
    assert_eq!(p[1], Q::complex((-1, 5), (2, 5)));
    assert!(cayley::<Q>(4).after(&cayley_inverse(4)).projectively_eq(&Lft::identity(4), 0.0));
}

#[test]
fn model_transport_examples() {
    let id = RationalMap::<Q>::identity(Model::Ball, 3);
    assert_eq!(id.conjugate_model().unwrap(), RationalMap::identity(Model::Siegel, 3));
    let w = catalog::whitney(2);
    assert_eq!(w.conjugate_model().unwrap().conjugate_model().unwrap().canonical().unwrap(), w.canonical().unwrap());
    // (z', 0, z_n) in the ball is (z, 0, w) in the Siegel picture
    let n = 3;
    let mut num: Vec<H> = (0..n - 1).map(|j| H::z(n, j)).collect();
    num.push(H::zero(n));
    num.push(H::z(n, n - 1));
    let s = RationalMap::polynomial(Model::Ball, n, num).unwrap().conjugate_model().unwrap();
    assert_eq!(s.num[n - 1], H::zero(n - 1));
    assert_eq!(s.num[n], H::w(n - 1));
    assert_eq!(s.den, H::one(n - 1));
}

#[test]
fn properness_examples() {
    let v = catalog::whitney(3).is_proper(0.0);
    assert!(v.proper);
    assert_eq!(v.certificate.unwrap().to_string(), "z3*~z3 + 1");
    assert!(catalog::example11(4, &q(3, 5), &q(4, 5)).unwrap().is_proper(0.0).proper);
    let mut w = catalog::whitney(3);
    w.num[0] = w.num[0].scale(&q(1001, 1000));
    let v = w.is_proper(0.0);
    assert!(!v.proper);
    assert!(!v.witness.unwrap().is_zero());
}

#[test]
fn base_point_examples() {
    let f = ballmap::normalize::siegel_form(&catalog::whitney(3)).unwrap();
    let zero = vec![Q::zero(); 2];
    assert_eq!(f.translate_basepoint(&zero, &Q::zero()).unwrap(), f.canonical().unwrap());
    let sigma = heisenberg_translation(&[q(1, 2), Q::zero()], &Q::complex((0, 1), (1, 4)));
    assert_eq!(sigma.apply(&[Q::zero(), Q::zero(), Q::zero()]).unwrap(), vec![q(1, 2), Q::zero(), Q::complex((0, 1), (1, 4))]);
    let fp = f.translate_basepoint(&[q(1, 2), Q::zero()], &Q::complex((0, 1), (1, 4))).unwrap();
    assert!(fp.eval(&[Q::zero(), Q::zero(), Q::zero()]).unwrap().iter().all(Q::is_zero));
}

#[test]
fn hull_examples() {
    assert_eq!(RationalMap::<Q>::linear_embedding(Model::Ball, 4, 6).affine_hull_dim(0.0), 4);
    assert_eq!(common::example11(8).affine_hull_dim(0.0), 24);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 3;
    let tau = lft::random_exact_ball_automorphism(8, &mut rng);
    let g = catalog::whitney(n).zero_pad(8).postcompose(&tau, Model::Ball).unwrap();
    assert_eq!(g.affine_hull_dim(0.0), 2 * n - 1);
    assert!(g.is_proper(0.0).proper);
}

#[test]
fn whitney_lift_examples() {
    for n in 2..=4 {
        let lifted = RationalMap::<Q>::identity(Model::Ball, n).whitney_lift().unwrap();
        assert_eq!(lifted.num, catalog::whitney(n).num);
    }
    let l = RationalMap::<Q>::linear_embedding(Model::Ball, 3, 4).whitney_lift().unwrap();
    assert_eq!(l.target_dim, 6);
    assert!(l.is_proper(0.0).proper && l.affine_hull_dim(0.0) <= 6);
    let ww = catalog::whitney(2).whitney_lift().unwrap();
    assert_eq!((ww.degree(), ww.target_dim, ww.affine_hull_dim(0.0)), (3, 4, 4));
    assert!(ww.is_proper(0.0).proper);
}

#[test]
fn whitney_lift_obeys_the_hull_inequality() {
    for e in catalog::catalog() {
        let h = &e.map;
        let f = h.whitney_lift().unwrap();
        assert!(f.is_proper(0.0).proper, "{}", e.name);
        assert!(f.affine_hull_dim(0.0) <= h.affine_hull_dim(0.0) + h.n, "{}", e.name);
    }
}

#[test]
fn map_files_round_trip() {
    for e in catalog::catalog() {
        let text = e.map.to_string();
        assert_eq!(RationalMap::<Q>::parse_file(&text).unwrap(), e.map);
    }
    assert!(RationalMap::<Q>::parse_file("model=ball n=2 N=2\nz1\ndenominator: 1").is_err());
}

fn small_maps() -> Vec<RationalMap<Q>> {
    vec![catalog::whitney(3), catalog::dangelo(3, &q(3, 5)).unwrap(), catalog::fhjz(3, &q(3, 5)).unwrap(), common::example11(3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn properness_and_hull_survive_automorphisms(seed in any::<u64>(), which in 0usize..4) {
        let f = small_maps().remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = lft::random_exact_ball_automorphism(f.target_dim, &mut rng);
        let sigma = lft::random_exact_ball_automorphism(f.n, &mut rng);
        let g = f.postcompose(&tau, Model::Ball).unwrap().precompose(&sigma, Model::Ball).unwrap();
        prop_assert!(g.is_proper(0.0).proper);
        prop_assert_eq!(g.affine_hull_dim(0.0), f.affine_hull_dim(0.0));
    }

    #[test]
    fn translation_recentres_and_keeps_properness(seed in any::<u64>(), which in 0usize..4) {
        let f = ballmap::normalize::siegel_form(&small_maps().remove(which)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (z0, w0) in sample_boundary_points(f.n, 2, &mut rng) {
            let Ok(fp) = f.translate_basepoint(&z0, &w0) else { continue };
            prop_assert!(fp.is_proper(0.0).proper);
            let origin = vec![Q::zero(); f.n];
            prop_assert!(fp.eval(&origin).unwrap().iter().all(Q::is_zero));
        }
    }

    #[test]
    fn boundary_points_lie_on_the_boundary(a in -5i64..5, b in 1i64..6, c in -5i64..5) {
        let (z, w) = boundary_point(&[q(a, b), Q::complex((c, 3), (1, b))], &q(c, 7));
        let n2 = z.iter().fold(Q::zero(), |s, x| s + x.norm_sq());
        prop_assert_eq!(Q::complex((0, 1), (0, 1)) + w.clone() - w.conj(), n2.clone() * Q::from_i64(2) * Q::i());
    }
}
