//! Weighted jets of Siegel-model maps at the origin.

use crate::error::{Error, Result};
use crate::lft::Lft;
use crate::maps::{Model, RationalMap};
use crate::poly::{HermPoly, HoloPoly, Mono, WeightedBlocks};
use crate::scalar::Scalar;

/// Taylor expansion of `F = (f̃, g)` through weighted order `order`.
///
/// `weights` scale the Hermitian form of the target: the defining
/// expression is `−Im g + Σ_k weights[k]·|f̃_k|²`. Frames built without
/// square roots carry non-unit weights on the `φ` block.
#[derive(Clone, Debug, PartialEq)]
pub struct MapJet<S: Scalar> {
    pub n: usize,
    pub target_dim: usize,
    pub order: usize,
    pub comps: Vec<HoloPoly<S>>,
    pub weights: Vec<S>,
    /// Highest z-degree kept (`usize::MAX` for a full jet). Thin jets carry
    /// exact low z-degree blocks only.
    pub zcap: usize,
}

/// `1/q` through weighted order `order` (`q(0) ≠ 0`).
pub fn series_inverse<S: Scalar>(q: &HoloPoly<S>, order: usize) -> HoloPoly<S> {
    series_inverse_capped(q, order, usize::MAX)
}

/// `series_inverse` keeping only terms of z-degree ≤ `zcap`.
pub fn series_inverse_capped<S: Scalar>(q: &HoloPoly<S>, order: usize, zcap: usize) -> HoloPoly<S> {
    let q = &q.cap_z(zcap);
    let nz = q.nz();
    let parts: Vec<HoloPoly<S>> = (0..=order).map(|d| q.weighted_part(d)).collect();
    let q0 = q.constant_term();
    assert!(!q0.is_zero(), "series inverse of a polynomial vanishing at 0");
    let inv0 = S::one() / q0;
    let mut inv = vec![HoloPoly::constant(nz, inv0.clone())];
    for d in 1..=order {
        let mut acc = HoloPoly::zero(nz);
        for e in 1..=d {
            if !parts[e].is_zero() && !inv[d - e].is_zero() {
                acc = acc.add(&parts[e].mul_trunc_capped(&inv[d - e], order, zcap));
            }
        }
        inv.push(acc.scale(&-inv0.clone()));
    }
    inv.into_iter().fold(HoloPoly::zero(nz), |a, p| a.add(&p))
}

impl<S: Scalar> MapJet<S> {
    pub fn nz(&self) -> usize {
        self.n - 1
    }

    pub fn from_comps(n: usize, order: usize, comps: Vec<HoloPoly<S>>) -> Self {
        let target_dim = comps.len();
        let comps = comps.into_iter().map(|c| c.truncate(order)).collect();
        MapJet { n, target_dim, order, comps, weights: vec![S::one(); target_dim - 1], zcap: usize::MAX }
    }

    /// Components `f`, then `φ`, then `g`.
    pub fn f(&self) -> &[HoloPoly<S>] {
        &self.comps[..self.n - 1]
    }

    pub fn phi(&self) -> &[HoloPoly<S>] {
        &self.comps[self.n - 1..self.target_dim - 1]
    }

    pub fn g(&self) -> &HoloPoly<S> {
        &self.comps[self.target_dim - 1]
    }

    pub fn block(&self, comp: usize, k: usize, l: usize) -> HoloPoly<S> {
        self.comps[comp].block(k, l)
    }

    pub fn decompose(&self, comp: usize) -> WeightedBlocks<S> {
        self.comps[comp].weighted_decompose()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut j = self.clone();
        j.order = order.min(self.order);
        j.comps = self.comps.iter().map(|c| c.truncate(j.order)).collect();
        j
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> MapJet<T> {
        MapJet {
            n: self.n,
            target_dim: self.target_dim,
            order: self.order,
            comps: self.comps.iter().map(|c| c.convert(f)).collect(),
            weights: self.weights.iter().map(f).collect(),
            zcap: self.zcap,
        }
    }

    /// `τ ∘ F` for a target transformation fixing the origin.
    pub fn postcompose(&self, tau: &Lft<S>) -> Result<Self> {
        let nn = self.target_dim;
        if tau.dim_in() != nn {
            return Err(Error::Dimension("jet postcomposition".into()));
        }
        let nz = self.nz();
        let row_apply = |row: &Vec<S>| -> HoloPoly<S> {
            let mut acc = HoloPoly::constant(nz, row[nn].clone());
            for (k, c) in row[..nn].iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&self.comps[k].scale(c));
                }
            }
            acc
        };
        let den = row_apply(tau.m.last().unwrap());
        if den.constant_term().is_negligible(1e-300) {
            return Err(Error::Precondition("transformation has a pole at F(0)".into()));
        }
        let inv = series_inverse_capped(&den, self.order, self.zcap);
        let comps: Vec<HoloPoly<S>> = tau.m[..tau.dim_out()]
            .iter()
            .map(|r| row_apply(r).mul_trunc_capped(&inv, self.order, self.zcap))
            .collect();
        Ok(MapJet {
            n: self.n,
            target_dim: tau.dim_out(),
            order: self.order,
            weights: vec![S::one(); tau.dim_out() - 1],
            comps,
            zcap: self.zcap,
        })
    }

    /// `F ∘ σ` for a source transformation fixing the origin whose `z`-part has
    /// weighted order ≥ 1 and `w`-part weighted order ≥ 2 (isotropy elements).
    pub fn precompose(&self, sigma: &Lft<S>) -> Result<Self> {
        let n = self.n;
        let nz = self.nz();
        if self.zcap != usize::MAX {
            return Err(Error::Precondition("source transformations need a full jet".into()));
        }
        if sigma.dim_in() != n || sigma.dim_out() != n {
            return Err(Error::Dimension("jet precomposition".into()));
        }
        let linear = |row: &Vec<S>| -> HoloPoly<S> {
            let mut p = HoloPoly::constant(nz, row[n].clone());
            for (k, c) in row[..n].iter().enumerate() {
                p = p.add(&HoloPoly::var(nz, k).scale(c));
            }
            p
        };
        let den = linear(sigma.m.last().unwrap());
        if den.constant_term().is_negligible(1e-300) {
            return Err(Error::Precondition("transformation has a pole at 0".into()));
        }
        let inv = series_inverse(&den, self.order);
        let subs: Vec<HoloPoly<S>> = sigma.m[..n].iter().map(|r| linear(r).mul_trunc(&inv, self.order)).collect();
        for (k, s) in subs.iter().enumerate() {
            let need = if k == nz { 2 } else { 1 };
            if s.weighted_order().is_some_and(|o| o < need) {
                return Err(Error::Precondition("source transformation must respect weights".into()));
            }
        }
        let comps = self.comps.iter().map(|c| c.compose_trunc(&subs, self.order)).collect();
        Ok(MapJet { comps, ..self.clone() })
    }

    /// Weighted-degree-`d` part of `−Im g + Σ weights_k |f̃_k|²` on `∂H_n`.
    pub fn expand_defining(&self, d: usize) -> Result<HermPoly<S>> {
        if self.zcap != usize::MAX {
            return Err(Error::Precondition("the defining expression needs a full jet".into()));
        }
        if d > self.order {
            return Err(Error::Precondition(format!(
                "jet of order {} cannot be expanded in degree {d}",
                self.order
            )));
        }
        let nz = self.nz();
        let mut acc = HermPoly::zero(nz);
        let nn = self.target_dim;
        for (k, c) in self.comps[..nn - 1].iter().enumerate() {
            let h = c.truncate(d).restrict_to_boundary();
            let sq = h.mul_trunc(&h.conj(), d).weighted_part(d);
            acc = acc.add(&sq.scale(&self.weights[k]));
        }
        let g = self.g().weighted_part(d).restrict_to_boundary();
        let im = g.sub(&g.conj()).scale(&(S::one() / (S::from_i64(2) * S::imag_unit())));
        Ok(acc.sub(&im.weighted_part(d)))
    }

    /// Every weighted-degree component of the defining expression through `order`.
    pub fn defining_residuals(&self) -> Vec<(usize, HermPoly<S>)> {
        (1..=self.order).map(|d| (d, self.expand_defining(d).expect("within order"))).collect()
    }
}

/// Jet of a Siegel-model map with `F(0) = 0` and `q(0) ≠ 0`.
pub fn jet_of<S: Scalar>(f: &RationalMap<S>, order: usize) -> Result<MapJet<S>> {
    jet_of_capped(f, order, usize::MAX)
}

/// Thin jet keeping only blocks of z-degree ≤ `zcap`.
pub fn jet_of_capped<S: Scalar>(f: &RationalMap<S>, order: usize, zcap: usize) -> Result<MapJet<S>> {
    if f.model != Model::Siegel || f.target_model != Model::Siegel {
        return Err(Error::Precondition("jets are taken of Siegel-model maps".into()));
    }
    let f = f.canonical()?;
    let scale = f.num.iter().map(HoloPoly::max_abs_coeff).fold(1.0, f64::max);
    if f.num.iter().any(|p| !p.constant_term().is_negligible(1e-9 * scale)) {
        return Err(Error::Precondition("F(0) ≠ 0".into()));
    }
    let inv = series_inverse_capped(&f.den, order, zcap);
    let comps = f
        .num
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.add_term(Mono::zero(p.width()), -p.constant_term());
            p.cap_z(zcap).mul_trunc_capped(&inv, order, zcap)
        })
        .collect();
    let mut jet = MapJet::from_comps(f.n, order, comps);
    jet.zcap = zcap;
    Ok(jet)
}

/// Jet of `F_p = τ_p^F ∘ F ∘ σ_p⁰` at a boundary point `p = (z₀, w₀)`,
/// expanded directly without forming the translated map.
pub fn jet_at<S: Scalar>(f: &RationalMap<S>, z0: &[S], w0: &S, order: usize, zcap: usize) -> Result<MapJet<S>> {
    if f.model != Model::Siegel || f.target_model != Model::Siegel {
        return Err(Error::Precondition("jets are taken of Siegel-model maps".into()));
    }
    let nz = f.nz();
    if z0.len() != nz {
        return Err(Error::Dimension("base point".into()));
    }
    let two_i = S::from_i64(2) * S::imag_unit();
    let mut subs: Vec<HoloPoly<S>> = (0..nz).map(|j| HoloPoly::z(nz, j).add(&HoloPoly::constant(nz, z0[j].clone()))).collect();
    let mut sw = HoloPoly::w(nz).add(&HoloPoly::constant(nz, w0.clone()));
    for (j, c) in z0.iter().enumerate() {
        sw = sw.add(&HoloPoly::z(nz, j).scale(&(two_i.clone() * c.conj())));
    }
    subs.push(sw);
    let q = f.den.compose_trunc_capped(&subs, order, zcap);
    let scale = q.max_abs_coeff();
    if q.constant_term().is_negligible(1e-12 * scale) {
        return Err(Error::Precondition("map has a pole at the base point".into()));
    }
    let inv = series_inverse_capped(&q, order, zcap);
    let mut comps: Vec<HoloPoly<S>> =
        f.num.iter().map(|p| p.compose_trunc_capped(&subs, order, zcap).mul_trunc_capped(&inv, order, zcap)).collect();
    let vals: Vec<S> = comps.iter().map(HoloPoly::constant_term).collect();
    let m = comps.len() - 1;
    let mut g = comps[m].clone();
    g.add_term(Mono::zero(nz + 1), -vals[m].conj());
    for (k, v) in vals[..m].iter().enumerate() {
        g = g.sub(&comps[k].scale(&(two_i.clone() * v.conj())));
    }
    for (k, v) in vals[..m].iter().enumerate() {
        comps[k].add_term(Mono::zero(nz + 1), -v.clone());
    }
    let g0 = g.constant_term();
    if !g0.is_negligible(1e-9 * g.max_abs_coeff().max(1.0)) {
        return Err(Error::Precondition("F(p) is off the target boundary".into()));
    }
    g.add_term(Mono::zero(nz + 1), -g0);
    comps[m] = g;
    let mut jet = MapJet::from_comps(f.n, order, comps);
    jet.zcap = zcap;
    Ok(jet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::boundary_point;
    use crate::scalar::{rat, GaussianRational as Q};
    use num_traits::Zero;

    #[test]
    fn geometric_series() {
        let q = HoloPoly::<Q>::parse("1 - w", 1).unwrap();
        let inv = series_inverse(&q, 7);
        assert_eq!(inv, HoloPoly::parse("1 + w + w^2 + w^3", 1).unwrap());
        let q = HoloPoly::<Q>::parse("1 - 2*z1 + 3*w - i*z1*w", 1).unwrap();
        let prod = series_inverse(&q, 6).mul_trunc(&q, 6);
        assert_eq!(prod, HoloPoly::one(1));
    }

    #[test]
    fn linear_jet() {
        let l = RationalMap::<Q>::linear_embedding(Model::Siegel, 3, 5);
        let j = jet_of(&l, 5).unwrap();
        assert_eq!(j.comps, l.num);
        for d in 1..=5 {
            assert!(j.expand_defining(d).unwrap().is_zero());
        }
    }

    fn whitney_siegel(n: usize) -> RationalMap<Q> {
        let mut num: Vec<HoloPoly<Q>> = (0..n - 1).map(|k| HoloPoly::var(n, k)).collect();
        let zn = HoloPoly::var(n, n - 1);
        num.extend((0..n).map(|k| zn.mul(&HoloPoly::var(n, k))));
        RationalMap::polynomial(Model::Ball, n, num)
            .unwrap()
            .conjugate_model()
            .unwrap()
            .translate_basepoint(&vec![Q::zero(); n - 1], &Q::zero())
            .unwrap()
    }

    #[test]
    fn whitney_jet_matches_division_oracle() {
        let s = whitney_siegel(2);
        let j = jet_of(&s, 5).unwrap();
        // term-by-term oracle: q·jet agrees with P through order 5
        for (p, c) in s.num.iter().zip(&j.comps) {
            let lhs = c.mul_trunc(&s.den.scale(&(Q::from_i64(1) / s.den.constant_term())), 5);
            let rhs = p.scale(&(Q::from_i64(1) / s.den.constant_term())).truncate(5);
            assert_eq!(lhs, rhs);
        }
        for d in 1..=5 {
            assert!(j.expand_defining(d).unwrap().is_zero(), "degree {d}");
        }
    }

    #[test]
    fn defect_detected() {
        let s = whitney_siegel(3);
        let mut j = jet_of(&s, 4).unwrap();
        let g = j.comps.last().unwrap().add(&HoloPoly::w(2).pow(2).scale(&rat(1, 3)));
        *j.comps.last_mut().unwrap() = g;
        assert!(j.expand_defining(3).unwrap().is_zero());
        assert!(!j.expand_defining(4).unwrap().is_zero());
    }

    #[test]
    fn composition_with_isotropy_preserves_defining() {
        use crate::lft::Isotropy;
        let s = whitney_siegel(3);
        let j = jet_of(&s, 6).unwrap();
        let iso = Isotropy { lambda: rat(2, 3), r: rat(1, 5), a: vec![rat(1, 2), Q::complex((0, 1), (1, 3))], u: crate::linalg::identity(2) };
        let pre = j.precompose(&iso.to_lft()).unwrap();
        let tiso = Isotropy { lambda: rat(3, 2), r: rat(-1, 4), a: vec![rat(1, 7), Q::zero(), Q::i(), Q::zero()], u: crate::linalg::identity(4) };
        let post = pre.postcompose(&tiso.to_lft()).unwrap();
        for d in 1..=6 {
            assert!(post.expand_defining(d).unwrap().is_zero(), "degree {d}");
        }
        let (z0, w0) = boundary_point(&[rat::<Q>(1, 3), rat(-1, 2)], &rat(2, 7));
        let fp = s.translate_basepoint(&z0, &w0).unwrap();
        let jp = jet_of(&fp, 5).unwrap();
        assert!(jp.defining_residuals().iter().all(|(_, r)| r.is_zero()));
        let direct = jet_at(&s, &z0, &w0, 5, usize::MAX).unwrap();
        assert_eq!(direct.comps, jp.comps);
        let thin = jet_at(&s, &z0, &w0, 5, 1).unwrap();
        let capped: Vec<_> = jp.comps.iter().map(|c| c.cap_z(1)).collect();
        assert_eq!(thin.comps, capped);
    }
}
