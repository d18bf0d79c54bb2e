//! Second-order normalization at a boundary point and the geometric rank.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{jet_at, series_inverse_capped, MapJet};
use crate::lft::Lft;
use crate::linalg::{self, Matrix};
use crate::maps::{sample_boundary_points, Model, RationalMap};
use crate::poly::{HermPoly, HoloPoly, Mono};
use crate::scalar::{GaussianRational, Scalar};

/// Relative tolerance for float-mode rank decisions.
pub const FLOAT_RANK_TOL: f64 = 1e-10;

/// Monomial `z^α w^l` in `nz` variables.
pub(crate) fn mono(nz: usize, zs: &[usize], wpow: u8) -> Mono {
    let mut e = Mono::zero(nz + 1);
    for &j in zs {
        e.0[j] += 1;
    }
    e.0[nz] = wpow;
    e
}

/// Output of the target-side normalization at a point.
///
/// `jet` holds `(f**, φ**, g**)`. Exact runs avoid square roots, so the `φ`
/// block may carry positive weights: `|φ**|² = Σ_k jet.weights[n−1+k]·|φ_k|²`.
#[derive(Clone, Debug)]
pub struct Lemma21Normalization<S: Scalar> {
    pub jet: MapJet<S>,
    /// `g_w(0) > 0` of the translated map.
    pub lambda2: S,
    /// Target isotropy parameters: shift `a`, real `r`.
    pub a: Vec<S>,
    pub r: S,
    /// `a⁽¹⁾(z)`, with `f** = z + (i/2)a⁽¹⁾(z)w + …`.
    pub a1: Vec<HoloPoly<S>>,
    /// `φ**⁽²⁾(z)`.
    pub phi2: Vec<HoloPoly<S>>,
    /// The target map `(f̃, g) ↦ ((f̃ + a g)M/δ, g/(λ²δ))` on `C^N`, when all
    /// weights are one, so that the normalized map is `target ∘ F_p`.
    pub target: Option<Lft<S>>,
}

impl<S: Scalar> Lemma21Normalization<S> {
    pub fn nz(&self) -> usize {
        self.jet.nz()
    }

    pub fn phi_weights(&self) -> &[S] {
        &self.jet.weights[self.nz()..]
    }

    /// `A = −2i(∂²f_l/∂z_j∂w)`, indexed `[j][l]`.
    pub fn matrix_a(&self) -> Matrix<S> {
        let nz = self.nz();
        let m2i = -(S::from_i64(2) * S::imag_unit());
        (0..nz)
            .map(|j| (0..nz).map(|l| self.jet.comps[l].coeff(&mono(nz, &[j], 1)) * m2i.clone()).collect())
            .collect()
    }

    /// `⟨z̄, a⁽¹⁾(z)⟩|z|² − |φ**⁽²⁾(z)|²`.
    pub fn compatibility_residual(&self) -> HermPoly<S> {
        assert!(self.jet.zcap >= 2, "compatibility needs the z-quadratic blocks");
        let nz = self.nz();
        let mut lhs = HermPoly::zero(nz);
        for (l, a) in self.a1.iter().enumerate() {
            lhs = lhs.add(&HermPoly::zbar(nz, l).mul(&a.restrict_to_boundary()));
        }
        lhs = lhs.mul(&HermPoly::norm_sq(nz));
        for (p, wt) in self.phi2.iter().zip(self.phi_weights()) {
            let b = p.restrict_to_boundary();
            lhs = lhs.sub(&b.mul(&b.conj()).scale(wt));
        }
        lhs
    }

    /// Deviations from `f** = z + (i/2)a⁽¹⁾w + O(4)`, `φ** = φ⁽²⁾ + O(3)`, `g** = w + O(5)`.
    pub fn shape_residuals(&self) -> Vec<(String, HoloPoly<S>)> {
        let nz = self.nz();
        let half_i = S::imag_unit() / S::from_i64(2);
        let mut out = Vec::new();
        for (l, f) in self.jet.f().iter().enumerate() {
            let expect = HoloPoly::z(nz, l).add(&self.a1[l].times_w_pow(1).scale(&half_i));
            out.push((format!("f{}", l + 1), f.truncate(3).sub(&expect)));
        }
        for (k, p) in self.jet.phi().iter().enumerate() {
            out.push((format!("phi{}", k + 1), p.truncate(2).sub(&self.phi2[k])));
        }
        out.push(("g".into(), self.jet.g().truncate(4).sub(&HoloPoly::w(nz))));
        out
    }
}

/// Normalize the jet of `F_p` (with `F_p(0) = 0`) by a target isotropy.
pub fn normalize_lemma21_jet<S: Scalar>(jet: &MapJet<S>, tol: f64) -> Result<Lemma21Normalization<S>> {
    if jet.order < 4 {
        return Err(Error::Precondition("second-order normalization needs a jet of order ≥ 4".into()));
    }
    let nz = jet.nz();
    let order = jet.order;
    let m = jet.target_dim - 1;
    let zcap = jet.zcap;
    let ft = &jet.comps[..m];
    let g = jet.g();
    let scale = jet.comps.iter().map(|c| c.truncate(2).max_abs_coeff()).fold(1.0, f64::max);
    let tol = tol * scale;

    let lambda2 = g.coeff(&mono(nz, &[], 1));
    if !lambda2.im_f64().abs().le(&tol) || lambda2.re_f64() <= tol {
        return Err(Error::Precondition(format!("g_w(0) = {lambda2:?} is not positive; F is not transversal at p")));
    }
    let lambda2 = lambda2.re();
    let b: Matrix<S> = (0..nz).map(|j| ft.iter().map(|f| f.coeff(&mono(nz, &[j], 0))).collect()).collect();
    let bbt = linalg::mat_mul(&b, &linalg::adjoint(&b));
    for (j, row) in bbt.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            let want = if j == l { lambda2.clone() } else { S::zero() };
            if !(x.clone() - want).is_negligible(tol) {
                return Err(Error::Precondition("first-order part is not conformal; F is not proper near p".into()));
            }
        }
    }
    let c: Vec<S> = ft.iter().map(|f| f.coeff(&mono(nz, &[], 1))).collect();
    let inv_l2 = S::one() / lambda2.clone();
    let a: Vec<S> = c.iter().map(|x| -(x.clone() * inv_l2.clone())).collect();
    let x: Vec<HoloPoly<S>> = ft.iter().zip(&a).map(|(f, ak)| f.add(&g.scale(ak))).collect();

    // δ = 1 − 2i Σ f̃_k conj(a_k) − (r + i|a|²) g
    let two_i = S::from_i64(2) * S::imag_unit();
    let a_sq = a.iter().fold(S::zero(), |s, v| s + v.norm_sq());
    let mut delta0 = HoloPoly::one(nz);
    for (f, ak) in ft.iter().zip(&a) {
        delta0 = delta0.sub(&f.scale(&(two_i.clone() * ak.conj())));
    }
    delta0 = delta0.sub(&g.scale(&(S::imag_unit() * a_sq.clone())));
    let g_scaled = g.scale(&inv_l2);
    let g0 = g_scaled.mul_trunc_capped(&series_inverse_capped(&delta0, order, zcap), order, zcap);
    let r = -(g0.coeff(&mono(nz, &[], 2)) * inv_l2.clone()).re();
    let delta = delta0.sub(&g.scale(&r));
    let inv = series_inverse_capped(&delta, order, zcap);

    let mut comps = Vec::with_capacity(m + 1);
    for brow in &b {
        let mut acc = HoloPoly::zero(nz);
        for (xm, bm) in x.iter().zip(brow) {
            if !bm.is_zero() {
                acc = acc.add(&xm.scale(&(bm.conj() * inv_l2.clone())));
            }
        }
        comps.push(acc.mul_trunc_capped(&inv, order, zcap));
    }
    let complement = linalg::orthogonal_complement(&b, m, if S::EXACT { 0.0 } else { 1e-9 });
    let mut weights = vec![S::one(); nz];
    // columns of M, indexed by f̃
    let mut cols: Vec<Vec<S>> = b.iter().map(|brow| brow.iter().map(|x| x.conj() * inv_l2.clone()).collect()).collect();
    for wv in &complement {
        let v: Vec<S> = wv.iter().map(|t| t.conj()).collect();
        let mut acc = HoloPoly::zero(nz);
        for (xm, vm) in x.iter().zip(&v) {
            if !vm.is_zero() {
                acc = acc.add(&xm.scale(vm));
            }
        }
        let wt = S::one() / (lambda2.clone() * v.iter().fold(S::zero(), |s, t| s + t.norm_sq()));
        let phi = acc.mul_trunc_capped(&inv, order, zcap);
        match wt.sqrt_real() {
            Some(sq) => {
                comps.push(phi.scale(&sq));
                cols.push(v.iter().map(|t| t.clone() * sq.clone()).collect());
                weights.push(S::one());
            }
            None => {
                comps.push(phi);
                weights.push(wt);
            }
        }
    }
    comps.push(g_scaled.mul_trunc_capped(&inv, order, zcap));
    let target = (cols.len() == m).then(|| {
        let nn = m + 1;
        let mut t = linalg::zeros(nn + 1, nn + 1);
        for (k, col) in cols.iter().enumerate() {
            t[k][..m].clone_from_slice(col);
            t[k][m] = col.iter().zip(&a).fold(S::zero(), |s, (c, ak)| s + c.clone() * ak.clone());
        }
        t[m][m] = inv_l2.clone();
        for (j, aj) in a.iter().enumerate() {
            t[nn][j] = -(two_i.clone() * aj.conj());
        }
        t[nn][m] = -(r.clone() + S::imag_unit() * a_sq.clone());
        t[nn][nn] = S::one();
        Lft::from_matrix(t)
    });
    let mut jet = MapJet::from_comps(jet.n, order, comps);
    jet.weights = weights;
    jet.zcap = zcap;
    if !S::EXACT {
        for c in &mut jet.comps {
            *c = c.prune(1e-14 * scale);
        }
    }

    let m2i = -two_i;
    let a1 = jet.f().iter().map(|f| f.block(1, 1).scale(&m2i)).collect();
    let phi2 = jet.phi().iter().map(|p| p.block(2, 0)).collect();
    Ok(Lemma21Normalization { jet, lambda2, a, r, a1, phi2, target })
}

/// Siegel form of `F` (ball maps are conjugated by the Cayley transform).
pub fn siegel_form<S: Scalar>(f: &RationalMap<S>) -> Result<RationalMap<S>> {
    match (f.model, f.target_model) {
        (Model::Siegel, Model::Siegel) => Ok(f.clone()),
        (Model::Ball, Model::Ball) => f.conjugate_model(),
        _ => Err(Error::Precondition("mixed-model maps are not supported here".into())),
    }
}

/// Normalize `F_p` for a boundary point `p = (z₀, w₀)` of `∂H_n`.
pub fn normalize_lemma21<S: Scalar>(f: &RationalMap<S>, z0: &[S], w0: &S, order: usize, tol: f64) -> Result<Lemma21Normalization<S>> {
    let jet = jet_at(&siegel_form(f)?, z0, w0, order, usize::MAX)?;
    normalize_lemma21_jet(&jet, tol)
}

/// `A(p)` straight from the Taylor blocks of `F_p`, without forming the
/// normalized jet. With `X = f̃ − (c/λ²)g`, where `c` are the `w`-coefficients
/// of `f̃`, and `B` the linear part:
/// `A[j][l] = −(2i/λ²)(Σ_m conj(B_lm)·X_m^{z_j w} − δ_jl·g^{w²})`.
/// The `w²` coefficient enters through the real parameter `r` that kills `w²` in `g**`.
pub fn matrix_a_direct<S: Scalar>(jet: &MapJet<S>, tol: f64) -> Result<Matrix<S>> {
    if jet.order < 4 {
        return Err(Error::Precondition("A(p) needs a jet of order ≥ 4".into()));
    }
    let nz = jet.nz();
    let m = jet.target_dim - 1;
    let (ft, g) = (&jet.comps[..m], jet.g());
    let lambda2 = g.coeff(&mono(nz, &[], 1));
    let scale = lambda2.abs_f64().max(1.0);
    if lambda2.im_f64().abs() > tol * scale || lambda2.re_f64() <= tol * scale {
        return Err(Error::Precondition(format!("g_w(0) = {lambda2:?} is not positive; F is not transversal at p")));
    }
    let lambda2 = lambda2.re();
    let inv_l2 = S::one() / lambda2;
    let gww = g.coeff(&mono(nz, &[], 2));
    let mut a = vec![vec![S::zero(); nz]; nz];
    for j in 0..nz {
        let gzw = g.coeff(&mono(nz, &[j], 1));
        let xzw: Vec<S> = ft
            .iter()
            .map(|f| f.coeff(&mono(nz, &[j], 1)) - f.coeff(&mono(nz, &[], 1)) * gzw.clone() * inv_l2.clone())
            .collect();
        for (l, entry) in a[j].iter_mut().enumerate() {
            let mut acc = ft.iter().zip(&xzw).fold(S::zero(), |s, (f, x)| s + f.coeff(&mono(nz, &[l], 0)).conj() * x.clone());
            if j == l {
                acc -= gww.clone();
            }
            *entry = -(S::from_i64(2) * S::imag_unit()) * inv_l2.clone() * acc;
        }
    }
    Ok(a)
}

/// Rank of `A(p)`.
pub fn rank_of_a<S: Scalar>(a: &Matrix<S>, tol: f64) -> usize {
    if S::EXACT {
        return linalg::rank(a, 0.0);
    }
    let scale = a.iter().flatten().map(Scalar::abs_f64).fold(1.0, f64::max);
    linalg::rank(a, tol.max(FLOAT_RANK_TOL) * scale)
}

/// `Rk_F(p)`. `A(p)` only involves blocks of z-degree ≤ 1, so a thin jet suffices.
pub fn geometric_rank_at<S: Scalar>(f: &RationalMap<S>, z0: &[S], w0: &S, tol: f64) -> Result<usize> {
    let jet = jet_at(&siegel_form(f)?, z0, w0, 4, 1)?;
    Ok(rank_of_a(&matrix_a_direct(&jet, tol)?, tol))
}

/// Rank at one sampled point.
#[derive(Clone, Debug, Serialize)]
pub struct RankSample {
    pub point: String,
    pub rank: Option<usize>,
    pub note: Option<String>,
}

/// Ranks over a seeded sample of boundary points; the maximum is a lower
/// bound for the geometric rank, not a proof of it.
#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub constant: bool,
    pub samples: Vec<RankSample>,
}

fn format_point<S: Scalar>(z0: &[S], w0: &S) -> String {
    let show = |x: &S| {
        let (re, im) = x.part_strings();
        match im.strip_prefix('-') {
            Some(m) => format!("({re}-{m}*i)"),
            None => format!("({re}+{im}*i)"),
        }
    };
    let zs: Vec<String> = z0.iter().map(show).collect();
    format!("z=[{}] w={}", zs.join(", "), show(w0))
}

pub fn geometric_rank<S: Scalar>(f: &RationalMap<S>, points: usize, seed: u64, tol: f64) -> Result<RankReport> {
    let fs = siegel_form(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_boundary_points(fs.n, points, &mut rng);
    let samples: Vec<RankSample> = pts
        .par_iter()
        .map(|(z0, w0)| {
            let z0: Vec<S> = z0.iter().map(S::from_gaussian).collect();
            let w0 = S::from_gaussian(w0);
            let point = format_point(&z0, &w0);
            match geometric_rank_at(&fs, &z0, &w0, tol) {
                Ok(r) => RankSample { point, rank: Some(r), note: None },
                Err(e) => RankSample { point, rank: None, note: Some(e.to_string()) },
            }
        })
        .collect();
    let ranks: Vec<usize> = samples.iter().filter_map(|s| s.rank).collect();
    let Some(&rank) = ranks.iter().max() else {
        return Err(Error::NoSolution("no sample point admitted a normalization".into()));
    };
    Ok(RankReport { rank, constant: ranks.iter().all(|&r| r == rank), samples })
}

/// Exact rank with the float pipeline as fallback for failed points.
pub fn geometric_rank_exact(f: &RationalMap<GaussianRational>, points: usize, seed: u64) -> Result<RankReport> {
    geometric_rank(f, points, seed, 0.0)
}
