mod common;

use ballmap::jet::{jet_of, MapJet};
use ballmap::lft::{self, Isotropy};
use ballmap::maps::{boundary_point, sample_boundary_points, Model, RationalMap};
use ballmap::normal_form::{hermitian_eigen, summarize, thm21_clauses};
use ballmap::normalize::{geometric_rank, geometric_rank_at, geometric_rank_exact, normalize_lemma21, rank_of_a, siegel_form};
use ballmap::{catalog, linalg, rat, Complex64, GaussianRational as Q, HoloPoly, Scalar};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type H = HoloPoly<Q>;

#[test]
fn jets_of_simple_maps() {
    let l = RationalMap::<Q>::linear_embedding(Model::Siegel, 3, 5);
    let j = jet_of(&l, 6).unwrap();
    assert_eq!(j.comps, l.num);
    // 1/(1 − w) → 1 + w + w² + … through weighted order 6
    let nz = 1;
    let f = RationalMap::new(Model::Siegel, 2, vec![H::z(nz, 0), H::w(nz)], H::one(nz).sub(&H::w(nz))).unwrap();
    let j = jet_of(&f, 6).unwrap();
    let series = (0..3).fold(H::zero(nz), |acc, k| acc.add(&H::w(nz).pow(k)));
    assert_eq!(j.comps[0], H::z(nz, 0).mul(&series).truncate(6));
    assert_eq!(j.comps[1], H::w(nz).mul(&series).truncate(6));
}

#[test]
fn jet_matches_term_by_term_division() {
    let f = siegel_form(&catalog::whitney(3)).unwrap().canonical().unwrap();
    let j = jet_of(&f, 5).unwrap();
    // q·jet ≡ P through weighted order 5
    for (p, c) in f.num.iter().zip(&j.comps) {
        assert_eq!(f.den.mul(c).truncate(5), p.truncate(5));
    }
    for c in &j.comps {
        assert!(c.constant_term().is_zero());
    }
}

#[test]
fn second_order_normalization_of_linear_and_whitney() {
    let l = RationalMap::<Q>::linear_embedding(Model::Siegel, 4, 7);
    let (z0, w0) = common::siegel_point(4);
    let norm = normalize_lemma21(&l, &z0, &w0, 5, 0.0).unwrap();
    assert!(norm.a1.iter().all(H::is_zero) && norm.phi2.iter().all(H::is_zero));
    assert_eq!(rank_of_a(&norm.matrix_a(), 0.0), 0);
    let w = catalog::whitney(3);
    let norm = normalize_lemma21(&w, &[Q::zero(), Q::zero()], &Q::zero(), 5, 0.0).unwrap();
    assert!(norm.compatibility_residual().is_zero());
}

#[test]
fn second_order_normalization_at_five_points() {
    let f = common::example11(4);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (z0, w0) in sample_boundary_points(4, 5, &mut rng) {
        let norm = normalize_lemma21(&f, &z0, &w0, 5, 0.0).unwrap();
        assert!(norm.compatibility_residual().is_zero());
        assert!(norm.shape_residuals().iter().all(|(_, r)| r.is_zero()));
        assert_eq!(rank_of_a(&norm.matrix_a(), 0.0), 2);
    }
}

#[test]
fn ranks_of_catalog_maps() {
    let (z0, w0) = common::siegel_point(4);
    let lin = RationalMap::<Q>::linear_embedding(Model::Ball, 4, 6);
    assert_eq!(geometric_rank_at(&lin, &z0, &w0, 0.0).unwrap(), 0);
    assert_eq!(geometric_rank_at(&catalog::whitney(4), &z0, &w0, 0.0).unwrap(), 1);
    assert_eq!(geometric_rank_at(&common::example11(4), &z0, &w0, 0.0).unwrap(), 2);
    let r = geometric_rank_exact(&catalog::fhjz(4, &rat(3, 5)).unwrap(), 4, 0).unwrap();
    assert_eq!(r.rank, 1);
    assert!(r.constant);
    let r = geometric_rank_exact(&catalog::dangelo(4, &rat(3, 5)).unwrap(), 4, 0).unwrap();
    assert!(r.rank >= 1 && r.constant);
    let fl = geometric_rank(&common::example11(4).convert(Complex64::from_gaussian), 4, 0, 1e-9).unwrap();
    assert_eq!(fl.rank, 2);
}

#[test]
fn matrix_a_is_hermitian_with_nonnegative_spectrum() {
    for e in catalog::catalog().into_iter().filter(|e| e.map.n <= 4) {
        let (z0, w0) = common::siegel_point(e.map.n);
        let norm = normalize_lemma21(&e.map, &z0, &w0, 4, 0.0).unwrap();
        let a = norm.matrix_a();
        assert_eq!(a, linalg::adjoint(&a), "{}", e.name);
        let af: Vec<Vec<Complex64>> = a.iter().map(|r| r.iter().map(Complex64::from_gaussian).collect()).collect();
        let (ev, _) = hermitian_eigen(&af);
        assert!(ev.iter().all(|&x| x > -1e-12), "{}: {ev:?}", e.name);
    }
}

#[test]
fn float_normal_forms_reverify() {
    for f in [catalog::whitney(4), common::example11(5)] {
        let r = common::normal_form_at(&f, 5);
        let nj = &r.normalized;
        let scale = nj.jet.comps.iter().fold(1.0f64, |m, p| m.max(p.max_abs_coeff()));
        assert!(summarize(&thm21_clauses(nj), 1e-9 * scale).iter().all(|s| s.passed));
        // independent re-run of the clause checker on the bare jet
        let again = ballmap::normal_form::verify_thm21_form(&nj.jet, nj.kappa0, &nj.mu).unwrap();
        assert!(summarize(&again, 1e-9 * scale).iter().all(|s| s.passed));
    }
}

fn isotropy(seed: u64, nz: usize) -> Isotropy<Q> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Isotropy {
        lambda: rat(rng.gen_range(1..=4), rng.gen_range(1..=3)),
        r: rat(rng.gen_range(-3..=3), rng.gen_range(1..=4)),
        a: (0..nz).map(|_| Q::complex((rng.gen_range(-2..=2), 3), (rng.gen_range(-2..=2), 5))).collect(),
        u: lft::random_exact_unitary(nz, &mut rng),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rank_is_invariant_under_isotropies(seed in any::<u64>(), which in 0usize..3) {
        let f = match which {
            0 => catalog::whitney(3),
            1 => common::example11(3),
            _ => catalog::fhjz(3, &rat(3, 5)).unwrap(),
        };
        let fs = siegel_form(&f).unwrap();
        let (z0, w0) = boundary_point(&[rat(1, 3), rat(-2, 7)], &rat(1, 4));
        let fp = fs.translate_basepoint(&z0, &w0).unwrap();
        let zero = vec![Q::zero(); 2];
        let base = geometric_rank_at(&fp, &zero, &Q::zero(), 0.0).unwrap();
        let sigma = isotropy(seed, 2).to_lft();
        let tau = isotropy(seed ^ 0x9e37, fp.target_dim - 1).to_lft();
        let g = fp.precompose(&sigma, Model::Siegel).unwrap().postcompose(&tau, Model::Siegel).unwrap();
        prop_assert!(g.is_proper(0.0).proper);
        prop_assert_eq!(geometric_rank_at(&g, &zero, &Q::zero(), 0.0).unwrap(), base);
    }
}

#[test]
fn thin_jets_agree_with_full_jets() {
    let f = siegel_form(&common::example11(4)).unwrap();
    let (z0, w0) = common::siegel_point(4);
    let full = ballmap::jet::jet_at(&f, &z0, &w0, 4, usize::MAX).unwrap();
    let thin: MapJet<Q> = ballmap::jet::jet_at(&f, &z0, &w0, 4, 1).unwrap();
    for (a, b) in full.comps.iter().zip(&thin.comps) {
        assert_eq!(a.cap_z(1), *b);
    }
}
