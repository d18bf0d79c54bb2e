mod common;

use ballmap::jet::MapJet;
use ballmap::maps::{Model, RationalMap};
use ballmap::normal_form::{summarize, thm21_clauses, verify_thm21_form, NormalizedJet};
use ballmap::{catalog, rat, Complex64, GaussianRational as Q, HoloPoly, Scalar};

/// `(f, Φ₀, Φ₁, g)` written straight from the normal form with κ₀ = 2 in `C^4`.
fn literal_jet<S: Scalar>(mu: [S; 2], mu12: S, extra_g: Option<HoloPoly<S>>) -> MapJet<S> {
    let nz = 3;
    let z = |j| HoloPoly::<S>::z(nz, j);
    let w = HoloPoly::<S>::w(nz);
    let half_i = S::imag_unit() / S::from_i64(2);
    let mut comps = Vec::new();
    for l in 0..2 {
        // f_l = z_l + (i/2)μ_l z_l w + z_1 z_2 w  (the last a free b_lj term)
        let b = z(0).mul(&z(1)).mul(&w).scale(&S::from_ratio(1, 3 + l as i64));
        comps.push(z(l).add(&z(l).mul(&w).scale(&(half_i.clone() * mu[l].clone()))).add(&b));
    }
    comps.push(z(2));
    let sq = |x: &S| x.sqrt_real().unwrap();
    let lead = [
        (0, 0, sq(&mu[0])),
        (0, 1, mu12.clone()),
        (0, 2, sq(&mu[0])),
        (1, 1, sq(&mu[1])),
        (1, 2, sq(&mu[1])),
    ];
    for (j, l, c) in lead {
        // leading term plus a free term in the ideal (z_1, z_2)
        comps.push(z(j).mul(&z(l)).scale(&c).add(&z(0).mul(&w).scale(&S::from_ratio(1, 5))));
    }
    // two Φ₁ components, O(3) and in the ideal
    comps.push(z(0).mul(&z(1)).mul(&z(2)));
    comps.push(z(1).mul(&w).scale(&S::from_ratio(2, 7)));
    comps.push(w.add(&extra_g.unwrap_or_else(|| HoloPoly::zero(nz))));
    MapJet::from_comps(4, 5, comps)
}

#[test]
fn literal_exact_jet_passes_every_clause() {
    let jet = literal_jet([rat::<Q>(9, 1), rat(16, 1)], rat(5, 1), None);
    let rs = verify_thm21_form(&jet, 2, &[rat(9, 1), rat(16, 1)]).unwrap();
    for s in summarize(&rs, 0.0) {
        assert!(s.passed, "{}: {}", s.clause, s.residual);
    }
}

#[test]
fn literal_float_jet_with_irrational_mu_passes() {
    // μ = (1, 2) puts √2, √3 in Φ₀: representable only in float mode
    let c = |x: f64| Complex64::new(x, 0.0);
    let jet = literal_jet([c(1.0), c(2.0)], c(3f64.sqrt()), None);
    let rs = verify_thm21_form(&jet, 2, &[c(1.0), c(2.0)]).unwrap();
    assert!(summarize(&rs, 1e-12).iter().all(|s| s.passed));
    let exact = literal_jet([rat::<Q>(9, 1), rat(16, 1)], rat(5, 1), None);
    assert!(verify_thm21_form(&exact, 2, &[rat(1, 1), rat(2, 1)]).is_err());
}

#[test]
fn g_defect_fails_only_the_g_clause() {
    let w2 = HoloPoly::<Q>::w(3).pow(2);
    let jet = literal_jet([rat::<Q>(9, 1), rat(16, 1)], rat(5, 1), Some(w2.clone()));
    let rs = verify_thm21_form(&jet, 2, &[rat(9, 1), rat(16, 1)]).unwrap();
    for r in &rs {
        if r.clause == "g = w" {
            assert_eq!(r.residual, w2);
        } else {
            assert!(r.residual.is_zero(), "{}", r.clause);
        }
    }
}

#[test]
fn linear_map_with_rank_zero_passes_vacuously() {
    let n = 4;
    let mut comps: Vec<HoloPoly<Q>> = (0..n - 1).map(|j| HoloPoly::z(n - 1, j)).collect();
    comps.push(HoloPoly::zero(n - 1));
    comps.push(HoloPoly::w(n - 1));
    let jet = MapJet::from_comps(n, 5, comps);
    let rs = verify_thm21_form(&jet, 0, &[]).unwrap();
    assert!(rs.iter().all(|r| r.residual.is_zero()));
}

#[test]
fn example11_normal_form_has_rank_two_and_phi33() {
    let r = common::normal_form_at(&common::example11(7), 5);
    let nj = &r.normalized;
    assert_eq!(nj.kappa0, 2);
    assert!(nj.mu.iter().all(|m| m.re > 0.0));
    let scale = nj.jet.comps.iter().fold(1.0f64, |m, p| m.max(p.max_abs_coeff()));
    assert!(summarize(&thm21_clauses(nj), 1e-9 * scale).iter().all(|s| s.passed));
    let phi1_30: Vec<_> = NormalizedJet::blocks(nj.phi1(), 3, 0);
    assert!(phi1_30[0].max_abs_coeff() > 1e-3);
    assert!(phi1_30[1..].iter().all(|p| p.is_negligible(1e-9)));
}

#[test]
fn whitney_normal_form_has_rank_one() {
    let r = common::normal_form_at(&catalog::whitney(4), 5);
    assert_eq!(r.normalized.kappa0, 1);
    assert!(r.normalized.mu[0].re > 0.0);
    assert!(summarize(&thm21_clauses(&r.normalized), 1e-9).iter().all(|s| s.passed));
}

#[test]
fn linear_map_is_outside_the_theorem() {
    let n = 4;
    let mut num: Vec<HoloPoly<Q>> = (0..n).map(|j| HoloPoly::z(n, j)).collect();
    num.insert(n - 1, HoloPoly::zero(n));
    let f = RationalMap::polynomial(Model::Ball, n, num).unwrap();
    let (z0, w0) = common::siegel_point(n);
    let cz: Vec<Complex64> = z0.iter().map(Complex64::from_gaussian).collect();
    let res = ballmap::normal_form::normalize_thm21(&common::to_float(&f), &cz, &Complex64::from_gaussian(&w0), 5, 1e-9);
    assert!(res.is_err());
}
