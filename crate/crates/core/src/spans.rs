//! Tangential fields `L_j = ∂/∂z_j − 2i z̄_j ∂/∂w`, jet spans at a boundary
//! point, and the gap-interval arithmetic.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{jet_at, MapJet};
use crate::linalg::{self, FLOAT_RANK_TOL};
use crate::maps::{Model, RationalMap};
use crate::poly::{HermPoly, HoloPoly, Mono};
use crate::scalar::Scalar;

/// `Σ_γ z̄^γ G_γ(z, w)`: the shape every `L^β F` takes for holomorphic `F`,
/// since each `L_j` annihilates `z̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryExpr<S: Scalar> {
    nz: usize,
    terms: BTreeMap<Vec<u8>, HoloPoly<S>>,
}

impl<S: Scalar> BoundaryExpr<S> {
    pub fn from_holo(h: &HoloPoly<S>) -> Self {
        let nz = h.nz();
        let mut terms = BTreeMap::new();
        if !h.is_zero() {
            terms.insert(vec![0; nz], h.clone());
        }
        BoundaryExpr { nz, terms }
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `z̄^γ`.
    pub fn zbar_coeff(&self, gamma: &[u8]) -> HoloPoly<S> {
        self.terms.get(gamma).cloned().unwrap_or_else(|| HoloPoly::zero(self.nz))
    }

    fn add_into(&mut self, gamma: Vec<u8>, h: HoloPoly<S>) {
        let slot = self.terms.entry(gamma).or_insert_with(|| HoloPoly::zero(h.nz()));
        *slot = slot.add(&h);
        self.terms.retain(|_, p| !p.is_zero());
    }

    /// Restriction to `Im w = |z|²` as a polynomial in `(z, z̄, u)`.
    pub fn restrict_to_boundary(&self) -> HermPoly<S> {
        let nz = self.nz;
        self.terms.iter().fold(HermPoly::zero(nz), |acc, (gamma, h)| {
            let mut e = vec![0u8; 2 * nz + 1];
            e[nz..2 * nz].copy_from_slice(gamma);
            let zbar = HermPoly::monomial(nz, &e, S::one());
            acc.add(&zbar.mul(&h.restrict_to_boundary()))
        })
    }

    /// Value at the origin.
    pub fn at_origin(&self) -> S {
        self.zbar_coeff(&vec![0; self.nz]).constant_term()
    }
}

/// `L_j` applied through the chain rule: `L_j(z̄^γ G) = z̄^γ ∂_j G − 2i z̄^{γ+e_j} ∂_w G`.
pub fn tangential_apply<S: Scalar>(f: &BoundaryExpr<S>, j: usize) -> BoundaryExpr<S> {
    let nz = f.nz;
    assert!(j < nz, "L_j needs j < n − 1");
    let m2i = S::from_i64(-2) * S::imag_unit();
    let mut out = BoundaryExpr { nz, terms: BTreeMap::new() };
    for (gamma, g) in &f.terms {
        out.add_into(gamma.clone(), g.derivative(j));
        let gw = g.derivative(nz);
        if !gw.is_zero() {
            let mut up = gamma.clone();
            up[j] += 1;
            out.add_into(up, gw.scale(&m2i));
        }
    }
    out
}

/// `L^β h` for a multi-index `β`.
pub fn tangential_power<S: Scalar>(h: &HoloPoly<S>, beta: &[u8]) -> BoundaryExpr<S> {
    let mut e = BoundaryExpr::from_holo(h);
    for (j, &b) in beta.iter().enumerate() {
        for _ in 0..b {
            e = tangential_apply(&e, j);
        }
    }
    e
}

/// Dimensions of `span{L^β F_p|₀ : |β| ≤ k}` for `k = 1..=max_order`.
#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub base_point: Vec<String>,
    pub dims: Vec<usize>,
    /// Smallest `k` with `dim_k = dim_{k+1}`, if it occurs in range.
    pub stabilization: Option<usize>,
}

impl SpanReport {
    pub fn dim(&self, k: usize) -> usize {
        self.dims[k - 1]
    }
}

fn multi_indices(nz: usize, deg: usize) -> Vec<Vec<u8>> {
    if nz == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in (0..=deg).rev() {
        for mut rest in multi_indices(nz - 1, deg - a) {
            rest.insert(0, a as u8);
            out.push(rest);
        }
    }
    out
}

fn factorial_weight<S: Scalar>(beta: &[u8]) -> S {
    let mut f = 1i64;
    for &b in beta {
        f *= (1..=b as i64).product::<i64>();
    }
    S::from_i64(f)
}

/// Span dimensions of a jet centred at the origin. At 0, `L^β = D_z^β`, so
/// the vectors are `β!` times the `z^β` coefficients.
pub fn jet_span_dims<S: Scalar>(jet: &MapJet<S>, max_order: usize) -> Result<Vec<usize>> {
    if jet.order < max_order {
        return Err(Error::Precondition(format!("jet of order {} cannot resolve |β| ≤ {max_order}", jet.order)));
    }
    let nz = jet.nz();
    let mut rows: linalg::Matrix<S> = Vec::new();
    let mut dims = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        for beta in multi_indices(nz, k) {
            let mut e = beta.clone();
            e.push(0);
            let mono = Mono::from_slice(&e);
            let c = factorial_weight::<S>(&beta);
            let row: Vec<S> = jet.comps.iter().map(|p| p.coeff(&mono) * c.clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
        dims.push(linalg::rank(&rows, FLOAT_RANK_TOL));
    }
    Ok(dims)
}

fn stabilization(dims: &[usize]) -> Option<usize> {
    dims.windows(2).position(|w| w[0] == w[1]).map(|i| i + 1)
}

/// Jet span report of `F_p` for a Siegel map and boundary point `p = (z₀, w₀)`.
pub fn jet_span<S: Scalar>(f: &RationalMap<S>, z0: &[S], w0: &S, max_order: usize) -> Result<SpanReport> {
    let jet = jet_at(f, z0, w0, max_order, max_order)?;
    let dims = jet_span_dims(&jet, max_order)?;
    let show = |x: &S| {
        let (re, im) = x.part_strings();
        match im.strip_prefix('-') {
            Some(m) => format!("{re}-{m}*i"),
            None => format!("{re}+{im}*i"),
        }
    };
    let mut base_point: Vec<String> = z0.iter().map(show).collect();
    base_point.push(show(w0));
    Ok(SpanReport { base_point, stabilization: stabilization(&dims), dims })
}

/// Span report of an already-centred jet.
pub fn jet_span_of_jet<S: Scalar>(jet: &MapJet<S>, max_order: usize) -> Result<SpanReport> {
    let dims = jet_span_dims(jet, max_order)?;
    Ok(SpanReport { base_point: vec!["0".into(); jet.n], stabilization: stabilization(&dims), dims })
}

/// `dim span{D^β F(0) : β ≠ 0}` over all orders. A vector `v` annihilates
/// every derivative exactly when `v·F` is constant, i.e. `v·P − c q ≡ 0`, so
/// this is the affine hull dimension of the image.
pub fn full_jet_span_dim<S: Scalar>(f: &RationalMap<S>, tol: f64) -> Result<usize> {
    if f.model != Model::Siegel {
        return Err(Error::Precondition("full jet span is taken in the Siegel model".into()));
    }
    Ok(f.affine_hull_dim(tol))
}

/// `K(n)` and the intervals `I_k = [kn + 1, (k+1)n − k(k+1)/2 − 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapProfile {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub intervals: Vec<GapInterval>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GapInterval {
    pub k: usize,
    pub lo: usize,
    pub hi: usize,
    pub empty: bool,
}

impl GapInterval {
    pub fn contains(&self, big_n: usize) -> bool {
        !self.empty && self.lo <= big_n && big_n <= self.hi
    }
}

impl GapProfile {
    pub fn interval(&self, k: usize) -> &GapInterval {
        &self.intervals[k - 1]
    }

    /// `max 𝕀`, the largest target dimension in any interval.
    pub fn max_gap(&self) -> Option<usize> {
        self.intervals.iter().filter(|i| !i.empty).map(|i| i.hi).max()
    }
}

/// Gap intervals for source dimension `n ≥ 2`.
pub fn gap_profile(n: usize) -> GapProfile {
    assert!(n >= 2, "gap profile needs n ≥ 2");
    let tri = |m: usize| m * (m + 1) / 2;
    let mut k = 0;
    while tri(k + 1) < n {
        k += 1;
    }
    let intervals = (1..=k)
        .map(|m| {
            let lo = m * n + 1;
            let top = (m + 1) * n - tri(m);
            let empty = top < lo + 1;
            GapInterval { k: m, lo, hi: top.saturating_sub(1), empty }
        })
        .collect();
    GapProfile { n, k, intervals }
}

pub fn in_gap(n: usize, big_n: usize) -> bool {
    gap_profile(n).intervals.iter().any(|i| i.contains(big_n))
}

/// `n > 7` and `3n + 1 ≤ N ≤ 4n − 7`.
pub fn thm11_applies(n: usize, big_n: usize) -> bool {
    n > 7 && 3 * n + 1 <= big_n && big_n + 7 <= 4 * n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    #[test]
    fn small_profiles() {
        assert_eq!(gap_profile(2).k, 1);
        assert!(gap_profile(2).interval(1).empty);
        let p = gap_profile(3);
        assert_eq!((p.k, p.interval(1).lo, p.interval(1).hi, p.interval(1).empty), (1, 4, 4, false));
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(2, 4).len(), 5);
    }

    #[test]
    fn l_of_w_and_z() {
        let nz = 2;
        let lw = tangential_apply(&BoundaryExpr::from_holo(&HoloPoly::<Q>::w(nz)), 0);
        let expect = HermPoly::zbar(nz, 0).scale(&(Q::from_i64(-2) * Q::i()));
        assert_eq!(lw.restrict_to_boundary(), expect);
        assert!(tangential_apply(&BoundaryExpr::from_holo(&HoloPoly::<Q>::z(nz, 1)), 0).is_zero());
    }
}
