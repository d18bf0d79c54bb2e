//! Rank-adapted normal form of a map jet: the `S₀`/`S₁` splitting of the
//! codimension part and the clause checks of that form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{jet_at, MapJet};
use crate::lft::{heisenberg_recentering, heisenberg_translation, unitary_lft, Isotropy, Lft};
use crate::maps::{Model, RationalMap};
use crate::linalg::{self, Matrix};
use crate::normalize::{mono, normalize_lemma21_jet, siegel_form, Lemma21Normalization};
use crate::poly::HoloPoly;
use crate::scalar::Scalar;

/// `S₀ = {(j, l) : j < κ₀, j ≤ l < n−1}` (0-based), in lexicographic order.
pub fn s0_pairs(kappa0: usize, nz: usize) -> Vec<(usize, usize)> {
    (0..kappa0).flat_map(|j| (j..nz).map(move |l| (j, l))).collect()
}

/// `#S₁ = N − n − #S₀`, or `None` when the target is too small to hold `S₀`.
pub fn s1_count(kappa0: usize, n: usize, target_dim: usize) -> Option<usize> {
    let s0 = kappa0 * (n - 1) - kappa0 * (kappa0.saturating_sub(1)) / 2;
    (target_dim - n).checked_sub(s0)
}

/// A jet `(f, Φ₀, Φ₁, g)` with unit weights, carrying its rank data.
#[derive(Clone, Debug)]
pub struct NormalizedJet<S: Scalar> {
    pub jet: MapJet<S>,
    pub kappa0: usize,
    /// `μ_1 … μ_κ₀ > 0`.
    pub mu: Vec<S>,
    pub s0: Vec<(usize, usize)>,
    /// `μ_{jl}` for each pair of `S₀`; always in the coefficient field since
    /// they are the leading coefficients of `Φ₀`.
    pub mu_jl: Vec<S>,
}

impl<S: Scalar> NormalizedJet<S> {
    /// Wrap a jet already in the normal form's component order.
    pub fn new(jet: MapJet<S>, kappa0: usize, mu: Vec<S>) -> Result<Self> {
        let nz = jet.nz();
        if mu.len() != kappa0 || mu.iter().any(|m| m.im_f64().abs() > 1e-12 || m.re_f64() <= 0.0) {
            return Err(Error::Precondition("μ must be κ₀ positive reals".into()));
        }
        if jet.weights.iter().any(|w| !w.is_one()) {
            return Err(Error::Precondition("normal forms use unit weights".into()));
        }
        let s0 = s0_pairs(kappa0, nz);
        if s1_count(kappa0, jet.n, jet.target_dim).is_none() {
            return Err(Error::Dimension(format!("N = {} cannot hold #S₀ = {}", jet.target_dim, s0.len())));
        }
        let mu_jl = s0
            .iter()
            .map(|&(j, l)| {
                let sq = if j < l && l < kappa0 { mu[j].clone() + mu[l].clone() } else { mu[j].clone() };
                sq.sqrt_real()
                    .ok_or_else(|| Error::ExactUnsolvable(format!("μ_({},{}) is irrational", j + 1, l + 1)))
            })
            .collect::<Result<Vec<S>>>()?;
        Ok(NormalizedJet { jet, kappa0, mu, s0, mu_jl })
    }

    pub fn nz(&self) -> usize {
        self.jet.nz()
    }

    pub fn n(&self) -> usize {
        self.jet.n
    }

    pub fn target_dim(&self) -> usize {
        self.jet.target_dim
    }

    pub fn s1_len(&self) -> usize {
        self.jet.target_dim - self.jet.n - self.s0.len()
    }

    pub fn f(&self) -> &[HoloPoly<S>] {
        self.jet.f()
    }

    pub fn phi(&self) -> &[HoloPoly<S>] {
        self.jet.phi()
    }

    pub fn phi0(&self) -> &[HoloPoly<S>] {
        &self.jet.phi()[..self.s0.len()]
    }

    pub fn phi1(&self) -> &[HoloPoly<S>] {
        &self.jet.phi()[self.s0.len()..]
    }

    pub fn g(&self) -> &HoloPoly<S> {
        self.jet.g()
    }

    /// `H^{(k,l)}` for each component of `comps`.
    pub fn blocks(comps: &[HoloPoly<S>], k: usize, l: usize) -> Vec<HoloPoly<S>> {
        comps.iter().map(|c| c.block(k, l)).collect()
    }

    /// Coefficient vector of `z_j w` across `comps`.
    fn zw_coeffs(&self, comps: &[HoloPoly<S>], j: usize) -> Vec<S> {
        comps.iter().map(|c| c.coeff(&mono(self.nz(), &[j], 1))).collect()
    }

    /// `e_j`: `Φ₀⁽¹,¹⁾(z) = Σ e_j z_j`.
    pub fn e(&self, j: usize) -> Vec<S> {
        self.zw_coeffs(self.phi0(), j)
    }

    /// `ê_j`: `Φ₁⁽¹,¹⁾(z) = Σ ê_j z_j`.
    pub fn e_hat(&self, j: usize) -> Vec<S> {
        self.zw_coeffs(self.phi1(), j)
    }

    /// `e*_j = (e_j, ê_j)`.
    pub fn e_star(&self, j: usize) -> Vec<S> {
        self.zw_coeffs(self.phi(), j)
    }

    /// `conj(v) · H` for a constant vector `v`.
    pub fn pair(v: &[S], h: &[HoloPoly<S>]) -> HoloPoly<S> {
        let nz = h.first().map_or(0, HoloPoly::nz);
        v.iter().zip(h).fold(HoloPoly::zero(nz), |acc, (c, p)| if c.is_zero() { acc } else { acc.add(&p.scale(&c.conj())) })
    }

    /// `ξ_j = conj(e_j) · Φ₀⁽²,⁰⁾`.
    pub fn xi(&self, j: usize) -> HoloPoly<S> {
        Self::pair(&self.e(j), &Self::blocks(self.phi0(), 2, 0))
    }

    /// `η_j = Φ₀⁽³,⁰⁾ · conj(e_j)`.
    pub fn eta(&self, j: usize) -> HoloPoly<S> {
        Self::pair(&self.e(j), &Self::blocks(self.phi0(), 3, 0))
    }

    /// `η*_j = φ⁽³,⁰⁾ · conj(e*_j)`.
    pub fn eta_star(&self, j: usize) -> HoloPoly<S> {
        Self::pair(&self.e_star(j), &Self::blocks(self.phi(), 3, 0))
    }
}

/// One clause of the normal form with the terms that violate it.
#[derive(Clone, Debug)]
pub struct ClauseResidual<S: Scalar> {
    pub clause: String,
    pub residual: HoloPoly<S>,
}

impl<S: Scalar> ClauseResidual<S> {
    pub fn passed(&self, tol: f64) -> bool {
        self.residual.is_negligible(tol)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClauseSummary {
    pub clause: String,
    pub passed: bool,
    pub terms: usize,
    pub max_coeff: f64,
    pub residual: String,
}

pub fn summarize<S: Scalar>(rs: &[ClauseResidual<S>], tol: f64) -> Vec<ClauseSummary> {
    rs.iter()
        .map(|r| ClauseSummary {
            clause: r.clause.clone(),
            passed: r.passed(tol),
            terms: r.residual.len(),
            max_coeff: r.residual.max_abs_coeff(),
            residual: r.residual.prune(tol).to_string(),
        })
        .collect()
}

/// Terms of `p` outside the ideal `(z_1, …, z_κ₀)`.
fn outside_ideal<S: Scalar>(p: &HoloPoly<S>, kappa0: usize) -> HoloPoly<S> {
    p.filter(|e| e.0[..kappa0].iter().all(|&x| x == 0))
}

/// Check each clause of the normal form through the jet's order.
pub fn verify_thm21_form<S: Scalar>(jet: &MapJet<S>, kappa0: usize, mu: &[S]) -> Result<Vec<ClauseResidual<S>>> {
    let nj = NormalizedJet::new(jet.clone(), kappa0, mu.to_vec())?;
    Ok(thm21_clauses(&nj))
}

pub fn thm21_clauses<S: Scalar>(nj: &NormalizedJet<S>) -> Vec<ClauseResidual<S>> {
    let nz = nj.nz();
    let k0 = nj.kappa0;
    let half_i = S::imag_unit() / S::from_i64(2);
    let mut out = Vec::new();
    let push = |out: &mut Vec<ClauseResidual<S>>, clause: String, residual: HoloPoly<S>| out.push(ClauseResidual { clause, residual });
    for (l, f) in nj.f().iter().enumerate() {
        if l >= k0 {
            push(&mut out, format!("f{} = z{}", l + 1, l + 1), f.sub(&HoloPoly::z(nz, l)));
            continue;
        }
        push(&mut out, format!("f{} in ideal", l + 1), outside_ideal(f, k0));
        // f_l = z_l + (iμ_l/2) z_l w + Σ_j z_j b_lj(z) w + O_wt(5)
        let lead = HoloPoly::z(nz, l).add(&HoloPoly::z(nz, l).times_w_pow(1).scale(&(half_i.clone() * nj.mu[l].clone())));
        let low = f.truncate(4).sub(&lead).filter(|e| !(e.0[nz] == 1 && e.total() == 3));
        push(&mut out, format!("f{} leading terms", l + 1), low);
    }
    for (s, (&(j, l), p)) in nj.s0.iter().zip(nj.phi0()).enumerate() {
        let lead = HoloPoly::z(nz, j).mul(&HoloPoly::z(nz, l)).scale(&nj.mu_jl[s]);
        push(&mut out, format!("phi{}{} = mu z{} z{} + ideal", j + 1, l + 1, j + 1, l + 1), outside_ideal(&p.sub(&lead), k0));
    }
    for (s, p) in nj.phi1().iter().enumerate() {
        let low = p.truncate(2);
        push(&mut out, format!("Phi1[{}] in ideal, O(3)", s + 1), outside_ideal(p, k0).add(&low));
    }
    push(&mut out, "g = w".into(), nj.g().sub(&HoloPoly::w(nz)));
    out
}

fn to_dmatrix(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.len(), m.first().map_or(0, Vec::len), |i, j| m[i][j])
}

/// Eigen-decomposition `A = V diag(μ) V*` of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eigen(a: &Matrix<Complex64>) -> (Vec<f64>, Matrix<Complex64>) {
    let m = to_dmatrix(a);
    let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].partial_cmp(&eig.eigenvalues[x]).unwrap());
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = a.len();
    let vecs = (0..n).map(|i| order.iter().map(|&k| eig.eigenvectors[(i, k)]).collect()).collect();
    (vals, vecs)
}

/// Left singular vectors of a complex matrix, ordered by decreasing singular value.
pub fn left_singular(m: &Matrix<Complex64>) -> (Vec<f64>, Matrix<Complex64>) {
    let rows = m.len();
    let d = to_dmatrix(m);
    // eigenvectors of M M* are the left singular vectors
    let mm = &d * d.adjoint();
    let mmv: Matrix<Complex64> = (0..rows).map(|i| (0..rows).map(|j| mm[(i, j)]).collect()).collect();
    let (vals, vecs) = hermitian_eigen(&mmv);
    (vals.into_iter().map(|v| v.max(0.0).sqrt()).collect(), vecs)
}

/// Apply `comps ↦ comps · V` on a block: `new_k = Σ_l comps_l V[l][k]`.
fn rotate(comps: &[HoloPoly<Complex64>], v: &Matrix<Complex64>) -> Vec<HoloPoly<Complex64>> {
    let nz = comps.first().map_or(0, HoloPoly::nz);
    (0..v.first().map_or(0, Vec::len))
        .map(|k| {
            comps.iter().enumerate().fold(HoloPoly::zero(nz), |acc, (l, c)| {
                let s = v[l][k];
                if s == Complex64::new(0.0, 0.0) {
                    acc
                } else {
                    acc.add(&c.scale(&s))
                }
            })
        })
        .collect()
}

/// Diagnostics of the rank adaptation.
#[derive(Clone, Debug, Serialize)]
pub struct AdaptReport {
    pub eigenvalues: Vec<f64>,
    /// `max |coefficient|` of `φ⁽²,⁰⁾` outside the `S₀` monomials.
    pub phi2_off_support: f64,
    /// Distance of the `S₀` columns from orthonormality.
    pub s0_frame_defect: f64,
    /// Singular values of the `Φ₁⁽³,⁰⁾` coefficient matrix.
    pub phi1_30_singular: Vec<f64>,
}

/// Unitary changes of coordinates that rank-adapt a second-order normalization.
#[derive(Clone, Debug)]
pub struct AdaptFrames {
    pub kappa0: usize,
    pub mu: Vec<Complex64>,
    /// Eigenvectors of `A`: source `z ↦ zV*`, target `f ↦ fV`.
    pub v: Matrix<Complex64>,
    /// Codimension rotation: `new_s = Σ_k φ_k P[k][s]`.
    pub p: Matrix<Complex64>,
    pub report: AdaptReport,
}

impl AdaptFrames {
    /// Source side as a map of `C^n`.
    pub fn source_lft(&self) -> Lft<Complex64> {
        let nz = self.v.len();
        // new z_l = Σ_j z_j conj(V[l][j])
        let vt: Matrix<Complex64> = (0..nz).map(|l| (0..nz).map(|j| self.v[l][j].conj()).collect()).collect();
        unitary_lft(&vt, nz + 1)
    }

    /// Target side as a map of `C^N`.
    pub fn target_lft(&self, target_dim: usize) -> Lft<Complex64> {
        let nz = self.v.len();
        let mut m = linalg::identity(target_dim + 1);
        for k in 0..nz {
            for l in 0..nz {
                m[k][l] = self.v[l][k];
            }
        }
        for (k, row) in self.p.iter().enumerate() {
            for (s, x) in row.iter().enumerate() {
                m[nz + s][nz + k] = *x;
            }
        }
        Lft::from_matrix(m)
    }

    /// Apply the frames to a jet of the normalization they came from.
    pub fn apply(&self, jet: &MapJet<Complex64>) -> Result<NormalizedJet<Complex64>> {
        let nz = self.v.len();
        let comps = source_rotate(&jet.comps, &self.v, jet.order);
        let f = rotate(&comps[..nz], &self.v);
        let phi = rotate(&comps[nz..comps.len() - 1], &self.p);
        let mut all = f;
        all.extend(phi);
        all.push(comps.last().unwrap().clone());
        let scale = all.iter().map(|c| c.truncate(2).max_abs_coeff()).fold(1.0, f64::max);
        let all: Vec<_> = all.into_iter().map(|p| p.prune(1e-13 * scale)).collect();
        NormalizedJet::new(MapJet::from_comps(jet.n, jet.order, all), self.kappa0, self.mu.clone())
    }
}

fn source_rotate(comps: &[HoloPoly<Complex64>], v: &Matrix<Complex64>, order: usize) -> Vec<HoloPoly<Complex64>> {
    let nz = v.len();
    let vstar = linalg::adjoint(v);
    let mut subs: Vec<HoloPoly<Complex64>> = (0..nz)
        .map(|l| (0..nz).fold(HoloPoly::zero(nz), |acc, j| acc.add(&HoloPoly::z(nz, j).scale(&vstar[j][l]))))
        .collect();
    subs.push(HoloPoly::w(nz));
    comps.iter().map(|c| c.compose_trunc(&subs, order).prune(1e-15)).collect()
}

/// Float: the frames that give `A = diag(μ)`, `Φ₀⁽²,⁰⁾ = (μ_{jl} z_j z_l)` and,
/// for `κ₀ ≥ 2`, `Φ₁⁽³,⁰⁾` concentrated in its first component.
pub fn adapt_frames(norm: &Lemma21Normalization<Complex64>, tol: f64) -> Result<AdaptFrames> {
    if norm.jet.weights.iter().any(|w| (w - Complex64::new(1.0, 0.0)).norm() > 1e-12) {
        return Err(Error::Precondition("float normalization must carry unit weights".into()));
    }
    let nz = norm.nz();
    let n = nz + 1;
    let jet = &norm.jet;
    let (vals, v) = hermitian_eigen(&norm.matrix_a());
    let scale = vals.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let kappa0 = vals.iter().filter(|&&x| x > tol * scale).count();
    if vals.iter().any(|&x| x < -tol * scale) {
        return Err(Error::Precondition(format!("A(p) has a negative eigenvalue: {vals:?}")));
    }
    if kappa0 == 0 || kappa0 > n.saturating_sub(2) {
        return Err(Error::Precondition(format!("geometric rank {kappa0} outside 1..=n−2")));
    }
    let mu: Vec<Complex64> = vals[..kappa0].iter().map(|&x| Complex64::new(x, 0.0)).collect();

    // only blocks of weighted degree ≤ 3 matter here
    let low: Vec<HoloPoly<Complex64>> = jet.phi().iter().map(|p| p.truncate(3)).collect();
    let phi = source_rotate(&low, &v, 3);

    // Φ⁽²,⁰⁾ = M·(μ_{jl} z_j z_l)_{S₀}
    let s0 = s0_pairs(kappa0, nz);
    let mu_jl: Vec<f64> = s0
        .iter()
        .map(|&(j, l)| if j < l && l < kappa0 { (vals[j] + vals[l]).sqrt() } else { vals[j].sqrt() })
        .collect();
    let ncod = phi.len();
    if ncod < s0.len() {
        return Err(Error::Dimension(format!("N − n = {ncod} < #S₀ = {}", s0.len())));
    }
    let mut m_cols: Matrix<Complex64> = Vec::new();
    for (s, &(j, l)) in s0.iter().enumerate() {
        let e = mono(nz, &[j, l], 0);
        m_cols.push(phi.iter().map(|p| p.coeff(&e) / mu_jl[s]).collect());
    }
    let mut off = 0.0f64;
    for p in &phi {
        for (e, c) in p.block(2, 0).terms() {
            if !e.0[..kappa0].iter().any(|&x| x > 0) {
                off = off.max(c.norm());
            }
        }
    }
    let gram = linalg::mat_mul(&m_cols, &linalg::adjoint(&m_cols));
    let mut defect = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            let want = if i == k { 1.0 } else { 0.0 };
            defect = defect.max((x - want).norm());
        }
    }
    // complete the S₀ frame to a unitary
    let complement = linalg::orthogonal_complement(&m_cols, ncod, 1e-8);
    let mut frame: Matrix<Complex64> = m_cols.clone();
    for c in complement {
        let norm = linalg::inner(&c, &c).re.sqrt();
        frame.push(c.iter().map(|x| x / norm).collect());
    }
    if frame.len() != ncod {
        return Err(Error::NoSolution("the S₀ frame does not complete to a unitary".into()));
    }
    // new_s = Σ_k conj(frame[s][k]) φ_k
    let mut p: Matrix<Complex64> = (0..ncod).map(|k| (0..ncod).map(|s| frame[s][k].conj()).collect()).collect();
    let framed = rotate(&phi, &p);

    // Φ₁⁽³,⁰⁾: rotate onto the closed form in ξ where it applies, else onto
    // its left singular vectors
    let s1 = ncod - s0.len();
    let mut singular = Vec::new();
    if s1 > 0 {
        let phi0 = &framed[..s0.len()];
        let phi1 = &framed[s0.len()..];
        let pairs: Vec<(usize, usize)> = (0..kappa0).flat_map(|j| (j + 1..kappa0).map(move |l| (j, l))).collect();
        let xi: Vec<HoloPoly<Complex64>> = (0..kappa0)
            .map(|j| {
                let e: Vec<Complex64> = phi0.iter().map(|q| q.coeff(&mono(nz, &[j], 1))).collect();
                NormalizedJet::pair(&e, &NormalizedJet::blocks(phi0, 2, 0))
            })
            .collect();
        let target: Vec<HoloPoly<Complex64>> = pairs
            .iter()
            .map(|&(j, l)| {
                let (mj, ml) = (vals[j], vals[l]);
                let c = 2.0 / (mj + ml).sqrt();
                let zj = HoloPoly::z(nz, j).mul(&xi[l]).scale(&Complex64::new(c * (mj / ml).sqrt(), 0.0));
                let zl = HoloPoly::z(nz, l).mul(&xi[j]).scale(&Complex64::new(c * (ml / mj).sqrt(), 0.0));
                zj.sub(&zl)
            })
            .collect();
        let monos: Vec<_> = {
            let mut set = std::collections::BTreeSet::new();
            for q in phi1.iter().chain(&target) {
                for (e, _) in q.block(3, 0).terms() {
                    set.insert(e.clone());
                }
            }
            set.into_iter().collect()
        };
        let coeffs = |qs: &[HoloPoly<Complex64>]| -> DMatrix<Complex64> {
            DMatrix::from_fn(s1, monos.len(), |i, k| qs.get(i).map_or(Complex64::new(0.0, 0.0), |q| q.block(3, 0).coeff(&monos[k])))
        };
        let c = coeffs(phi1);
        singular = c.clone().svd(false, false).singular_values.iter().copied().collect();
        // new Φ₁ = W Φ₁ with W unitary
        let w: Option<DMatrix<Complex64>> = if kappa0 >= 2 && pairs.len() <= s1 && !monos.is_empty() {
            // orthogonal Procrustes: W = X Y* from T C* = X Σ Y*
            let m = coeffs(&target) * c.adjoint();
            let svd = m.svd(true, true);
            match (svd.u, svd.v_t) {
                (Some(x), Some(yt)) => Some(x * yt),
                _ => None,
            }
        } else if !monos.is_empty() {
            let mm: Matrix<Complex64> = (0..s1).map(|i| (0..monos.len()).map(|k| c[(i, k)]).collect()).collect();
            let (_, u) = left_singular(&mm);
            Some(DMatrix::from_fn(s1, s1, |s, k| u[s][k].conj()))
        } else {
            None
        };
        if let Some(w) = w {
            let mut b = linalg::identity(ncod);
            for s in 0..s1 {
                for k in 0..s1 {
                    b[s0.len() + k][s0.len() + s] = w[(s, k)];
                }
            }
            p = linalg::mat_mul(&p, &b);
        }
    }
    let report = AdaptReport { eigenvalues: vals, phi2_off_support: off, s0_frame_defect: defect, phi1_30_singular: singular };
    Ok(AdaptFrames { kappa0, mu, v, p, report })
}

/// Float: rank-adapt a second-order normalization by substituting into its jet.
pub fn rank_adapt(norm: &Lemma21Normalization<Complex64>, tol: f64) -> Result<(NormalizedJet<Complex64>, AdaptReport)> {
    let frames = adapt_frames(norm, tol)?;
    Ok((frames.apply(&norm.jet)?, frames.report))
}

/// Result of bringing `F_p` into the rank-adapted normal form.
#[derive(Clone, Debug)]
pub struct Thm21Normalization {
    pub normalized: NormalizedJet<Complex64>,
    pub lemma21: Lemma21Normalization<Complex64>,
    /// Source isotropy shift found by the solver.
    pub source_shift: Vec<Complex64>,
    /// Largest `|f(0, w)|` weight-4 coefficient left after the solve.
    pub solve_residual: f64,
    pub newton_steps: usize,
    pub report: AdaptReport,
}

/// `F_p ∘ σ_a ∘ extra`, with `σ_a` the source isotropy shift, as a rational map
/// of the Siegel pictures sending `0` to `0`.
fn recentered(f: &RationalMap<Complex64>, z0: &[Complex64], w0: &Complex64, a: &[Complex64], extra: Option<&Lft<Complex64>>) -> Result<RationalMap<Complex64>> {
    let nz = z0.len();
    let iso = Isotropy { lambda: Complex64::new(1.0, 0.0), r: Complex64::new(0.0, 0.0), a: a.to_vec(), u: linalg::identity(nz) };
    let mut sigma = heisenberg_translation(z0, w0).after(&iso.to_lft());
    if let Some(e) = extra {
        sigma = sigma.after(e);
    }
    let mut p = z0.to_vec();
    p.push(*w0);
    let value = f.eval(&p).ok_or_else(|| Error::Precondition("p is a pole of F".into()))?;
    let (fz, fw) = value.split_at(value.len() - 1);
    f.precompose(&sigma, Model::Siegel)?.postcompose(&heisenberg_recentering(fz, &fw[0]), Model::Siegel)
}

/// `w²`-coefficients of `f**(0, w)`, split into real and imaginary parts.
fn w2_defect(f: &RationalMap<Complex64>, z0: &[Complex64], w0: &Complex64, a: &[Complex64], tol: f64) -> Result<Vec<f64>> {
    let g = recentered(f, z0, w0, a, None)?;
    let zero = vec![Complex64::new(0.0, 0.0); z0.len()];
    // z-degree is additive, so the z-free part only needs z-degree ≤ 1 inputs
    let norm = normalize_lemma21_jet(&jet_at(&g, &zero, &zero[0], 4, 1)?, tol)?;
    let e = mono(z0.len(), &[], 2);
    Ok(norm.jet.f().iter().flat_map(|p| {
        let c = p.coeff(&e);
        [c.re, c.im]
    }).collect())
}

fn unpack(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

/// Float: bring `F` at the boundary point `p = (z₀, w₀)` into the rank-adapted
/// normal form, returning its jet to weighted order `order`.
///
/// A source isotropy shift `a` is chosen so that the target normalization has
/// `f(0, w) = O(w³)` (damped Newton steps, finite-difference Jacobian, on
/// fourth-order jets). Every transformation is then composed onto the rational
/// map itself, so only one jet of the final map is expanded.
pub fn normalize_thm21(
    f: &RationalMap<Complex64>,
    z0: &[Complex64],
    w0: &Complex64,
    order: usize,
    tol: f64,
) -> Result<Thm21Normalization> {
    if order < 5 {
        return Err(Error::Precondition("the normal form needs a jet of order ≥ 5".into()));
    }
    let f = siegel_form(f)?;
    let nz = f.nz();
    if z0.len() != nz {
        return Err(Error::Dimension("base point".into()));
    }
    let dim = 2 * nz;
    let mut x = vec![0.0; dim];
    let defect = |x: &[f64]| w2_defect(&f, z0, w0, &unpack(x), tol);
    let mut res = defect(&x)?;
    let norm2 = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>();
    let mut steps = 0;
    let mut damping = 1e-8;
    while norm2(&res).sqrt() > 1e-13 && steps < 40 {
        steps += 1;
        let h = 1e-7;
        let mut jac = DMatrix::<f64>::zeros(res.len(), dim);
        for k in 0..dim {
            let mut xp = x.clone();
            xp[k] += h;
            let rp = defect(&xp)?;
            for (i, (a, b)) in rp.iter().zip(&res).enumerate() {
                jac[(i, k)] = (a - b) / h;
            }
        }
        let r = nalgebra::DVector::from_column_slice(&res);
        let jt = jac.transpose();
        let mut accepted = false;
        for _ in 0..30 {
            let lhs = &jt * &jac + DMatrix::<f64>::identity(dim, dim) * damping;
            let Some(step) = lhs.lu().solve(&(-(&jt * &r))) else {
                damping *= 10.0;
                continue;
            };
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            if let Ok(rc) = defect(&cand) {
                if norm2(&rc) < norm2(&res) {
                    x = cand;
                    res = rc;
                    damping = (damping * 0.1).max(1e-15);
                    accepted = true;
                    break;
                }
            }
            damping *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    let solve_residual = res.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if solve_residual > 1e-9 {
        return Err(Error::NoSolution(format!("source isotropy solve stalled at {solve_residual:.2e}")));
    }
    let shift = unpack(&x);
    let zero = vec![Complex64::new(0.0, 0.0); nz];
    let g = recentered(&f, z0, w0, &shift, None)?;
    let lemma21 = normalize_lemma21_jet(&jet_at(&g, &zero, &zero[0], 4, usize::MAX)?, tol)?;
    let frames = adapt_frames(&lemma21, tol)?;
    let tau = lemma21.target.clone().ok_or_else(|| Error::Precondition("non-unit weights".into()))?;
    let h = recentered(&f, z0, w0, &shift, Some(&frames.source_lft()))?
        .postcompose(&tau, Model::Siegel)?
        .postcompose(&frames.target_lft(f.target_dim), Model::Siegel)?;
    let mut jet = jet_at(&h, &zero, &zero[0], order, usize::MAX)?;
    let scale = jet.comps.iter().map(|c| c.truncate(2).max_abs_coeff()).fold(1.0, f64::max);
    for c in &mut jet.comps {
        *c = c.prune(1e-13 * scale);
    }
    let normalized = NormalizedJet::new(jet, frames.kappa0, frames.mu.clone())?;
    Ok(Thm21Normalization { normalized, lemma21, source_shift: shift, solve_residual, newton_steps: steps, report: frames.report })
}
