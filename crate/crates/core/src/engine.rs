//! The defining equation by weighted degree and the identity battery run
//! against a normalized jet.
//!
//! Every identity is evaluated on its own from the jet's blocks, so a single
//! failure localizes. Radicals are never taken: `√μ_j` and `√(μ_j + μ_l)` are
//! read off the leading coefficients `μ_{jl}` of `Φ₀`, and
//! `√(μ_j/μ_l) = μ_{jj}/μ_{ll}`. Vector-valued identities stack their
//! components into one residual, tagging component `s` with `u^s`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::MapJet;
use crate::normal_form::{s0_pairs, s1_count, thm21_clauses, NormalizedJet};
use crate::normalize::mono;
use crate::poly::{HermPoly, HoloPoly, Mono};
use crate::scalar::Scalar;

/// Weighted-degree-`d` part of `−Im g + |f|² + |φ|²` over `Im w = |z|²`.
pub fn expand_defining<S: Scalar>(jet: &MapJet<S>, d: usize) -> Result<HermPoly<S>> {
    jet.expand_defining(d)
}

/// `μ_{jl}²` for a pair of `S₀`.
fn mu_sq<S: Scalar>(mu: &[S], kappa0: usize, j: usize, l: usize) -> S {
    if j < l && l < kappa0 {
        mu[j].clone() + mu[l].clone()
    } else {
        mu[j].clone()
    }
}

/// `μ_{jl}Λ_{jl}/(2i)` for each pair of `S₀`.
fn lambda_numerators<S: Scalar>(gamma: &[HoloPoly<S>], kappa0: usize, nz: usize) -> Vec<HoloPoly<S>> {
    s0_pairs(kappa0, nz)
        .into_iter()
        .map(|(j, l)| {
            if j < l && l < kappa0 {
                HoloPoly::z(nz, j).mul(&gamma[l]).add(&HoloPoly::z(nz, l).mul(&gamma[j]))
            } else if j == l {
                HoloPoly::z(nz, j).mul(&gamma[j])
            } else {
                HoloPoly::z(nz, l).mul(&gamma[j])
            }
        })
        .collect()
}

fn herm<S: Scalar>(p: &HoloPoly<S>) -> HermPoly<S> {
    p.restrict_to_boundary()
}

/// Both sides of the Λ-sum identity, multiplied by `Π_j μ_j · Π_{j<l≤κ₀} (μ_j + μ_l)`
/// so that every coefficient lies in the scalar field.
pub fn lemma31_combine<S: Scalar>(
    gamma1: &[HoloPoly<S>],
    gamma2: &[HoloPoly<S>],
    mu: &[S],
    kappa0: usize,
    n: usize,
    target_dim: usize,
) -> Result<(HermPoly<S>, HermPoly<S>)> {
    if gamma1.len() != kappa0 || gamma2.len() != kappa0 || mu.len() != kappa0 {
        return Err(Error::Dimension(format!("Γ¹, Γ², μ must have length κ₀ = {kappa0}")));
    }
    if mu.iter().any(|m| m.re_f64() <= 0.0 || m.im_f64().abs() > 1e-12) {
        return Err(Error::Precondition("μ must be positive reals".into()));
    }
    if n < 2 || kappa0 > n - 1 || s1_count(kappa0, n, target_dim).is_none() {
        return Err(Error::Dimension(format!("κ₀ = {kappa0} does not fit n = {n}, N = {target_dim}")));
    }
    let nz = n - 1;
    let mut clear = S::one();
    for j in 0..kappa0 {
        clear *= mu[j].clone();
        for l in j + 1..kappa0 {
            clear *= mu[j].clone() + mu[l].clone();
        }
    }
    let four = S::from_i64(4);
    let p1 = lambda_numerators(gamma1, kappa0, nz);
    let p2 = lambda_numerators(gamma2, kappa0, nz);
    let mut lhs = HermPoly::zero(nz);
    for ((&(j, l), a), b) in s0_pairs(kappa0, nz).iter().zip(&p1).zip(&p2) {
        let c = four.clone() * clear.clone() / mu_sq(mu, kappa0, j, l);
        lhs = lhs.add(&herm(a).conj().mul(&herm(b)).scale(&c));
    }
    let mut first = HermPoly::zero(nz);
    for j in 0..kappa0 {
        let c = four.clone() * clear.clone() / mu[j].clone();
        first = first.add(&herm(&gamma1[j]).conj().mul(&herm(&gamma2[j])).scale(&c));
    }
    let mut rhs = first.mul(&HermPoly::norm_sq(nz));
    for j in 0..kappa0 {
        for l in j + 1..kappa0 {
            let (mj, ml) = (mu[j].clone(), mu[l].clone());
            let c = four.clone() * clear.clone() / (mj.clone() * ml.clone() * (mj.clone() + ml.clone()));
            let left = HoloPoly::z(nz, j).mul(&gamma1[l]).scale(&mj).sub(&HoloPoly::z(nz, l).mul(&gamma1[j]).scale(&ml));
            let right = HoloPoly::z(nz, j).mul(&gamma2[l]).scale(&mj).sub(&HoloPoly::z(nz, l).mul(&gamma2[j]).scale(&ml));
            rhs = rhs.sub(&herm(&left).conj().mul(&herm(&right)).scale(&c));
        }
    }
    Ok((lhs, rhs))
}

/// Outcome of testing `Σ a_i·conj(b_i)` against the vanishing lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingSumVerdict {
    /// `Σ a_i·conj(b_i)` is divisible by `|z|²`.
    pub hypothesis_holds: bool,
    /// `Σ a_i·conj(b_i) ≡ 0`.
    pub conclusion_holds: bool,
}

impl VanishingSumVerdict {
    /// The lemma is a theorem, so this flags a bug in the arithmetic.
    pub fn violation(&self) -> bool {
        self.hypothesis_holds && !self.conclusion_holds
    }
}

/// Check the `k ≤ n − 2` vanishing lemma on holomorphic germs in `z ∈ C^{n−1}`.
pub fn huang_lemma_check<S: Scalar>(a: &[HoloPoly<S>], b: &[HoloPoly<S>], n: usize, tol: f64) -> Result<VanishingSumVerdict> {
    if a.len() != b.len() {
        return Err(Error::Dimension("a and b must have the same length".into()));
    }
    if n < 2 || a.len() > n - 2 {
        return Err(Error::Precondition(format!("k = {} exceeds n − 2 = {}", a.len(), n.saturating_sub(2))));
    }
    let nz = n - 1;
    let mut s = HermPoly::zero(nz);
    for (x, y) in a.iter().zip(b) {
        if x.nz() != nz || y.nz() != nz || x.has_w() || y.has_w() {
            return Err(Error::Dimension(format!("germs must be polynomials in z ∈ C^{nz}")));
        }
        if !x.constant_term().is_zero() || !y.constant_term().is_zero() {
            return Err(Error::Precondition("a_i(0) = b_i(0) = 0 required".into()));
        }
        s = s.add(&herm(x).mul(&herm(y).conj()));
    }
    let scale = a.iter().chain(b).fold(1.0f64, |m, p| m.max(p.max_abs_coeff()));
    let hypothesis_holds = s.is_zero() || s.divide_by_norm_sq(tol).is_some();
    let conclusion_holds = s.is_negligible(tol * scale * scale);
    Ok(VanishingSumVerdict { hypothesis_holds, conclusion_holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Passed,
    Failed,
    Skipped(String),
}

/// One identity: its left-minus-right residual and the verdict.
#[derive(Clone, Debug)]
pub struct IdentityReport<S: Scalar> {
    pub id: &'static str,
    pub status: Status,
    pub residual: HermPoly<S>,
    /// Largest residual coefficient.
    pub max_residual: f64,
    /// Largest coefficient among the identity's terms.
    pub scale: f64,
}

impl<S: Scalar> IdentityReport<S> {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    pub fn skipped(&self) -> bool {
        matches!(self.status, Status::Skipped(_))
    }
}

/// Every identity id, in report order.
pub const IDENTITY_IDS: &[&str] = &[
    "3.5", "3.7", "3.7(i)", "3.7(ii)", "3.7(iii)", "3.2", "L3.3", "3.9", "3.9(norm)", "4.10", "4.11", "4.12",
    "4.13", "4.14", "4.15", "4.16", "4.17", "4.18", "4.19", "4.21", "4.22", "4.23", "4.24", "4.26", "4.29",
    "4.30", "4.31", "4.32", "4.33", "4.34", "4.35", "4.36", "4.37", "4.38", "4.40", "4.41", "4.42", "4.43",
    "4.44", "4.45", "4.46", "4.49", "4.50", "4.51", "4.52", "4.53", "4.54", "4.55", "4.56", "4.57", "4.58",
    "4.59", "4.60", "4.61", "4.62", "4.63", "4.64", "4.65", "4.66", "4.67", "T4.1(2)", "T4.1(3)",
];

/// Jet order each identity reads blocks from.
fn order_needed(id: &str) -> usize {
    match id {
        "3.5" | "3.7" | "3.7(i)" | "3.7(ii)" | "3.7(iii)" | "3.2" | "L3.3" | "3.9" | "3.9(norm)" => 4,
        "T4.1(2)" | "T4.1(3)" => 5,
        x if x < "4.29" => 5,
        x if x < "4.49" => 6,
        _ => 7,
    }
}

/// A running sum that remembers its largest term.
#[derive(Clone)]
struct Sum<S: Scalar> {
    acc: HermPoly<S>,
    scale: f64,
}

impl<S: Scalar> Sum<S> {
    fn new(nz: usize) -> Self {
        Sum { acc: HermPoly::zero(nz), scale: 0.0 }
    }

    fn add(mut self, t: &HermPoly<S>) -> Self {
        self.scale = self.scale.max(t.max_abs_coeff());
        self.acc = self.acc.add(t);
        self
    }

    fn sub(self, t: &HermPoly<S>) -> Self {
        self.add(&t.neg())
    }
}

enum Check {
    Zero,
    /// Divisible by `|z|^{2k}`.
    Divisible(u32),
}

struct Battery<'a, S: Scalar> {
    nj: &'a NormalizedJet<S>,
    nz: usize,
    tol: f64,
    i: S,
    /// Largest jet coefficient: the floor for every identity's scale, so that
    /// identities whose sides both vanish are judged against the jet, not noise.
    floor: f64,
}

impl<'a, S: Scalar> Battery<'a, S> {
    fn c(&self, k: i64) -> S {
        S::from_i64(k)
    }

    fn inv(&self, x: &S) -> S {
        S::one() / x.clone()
    }

    fn mu(&self, j: usize) -> S {
        self.nj.mu[j].clone()
    }

    fn mujl(&self, j: usize, l: usize) -> S {
        let s = self.nj.s0.iter().position(|&p| p == (j, l)).expect("pair in S₀");
        self.nj.mu_jl[s].clone()
    }

    /// `√(μ_j/μ_l)`.
    fn r(&self, j: usize, l: usize) -> S {
        self.mujl(j, j) / self.mujl(l, l)
    }

    /// `|z|^{2k}`.
    fn nsq(&self, k: u32) -> HermPoly<S> {
        HermPoly::norm_sq(self.nz).pow(k)
    }

    fn zbar(&self, j: usize) -> HermPoly<S> {
        HermPoly::zbar(self.nz, j)
    }

    fn f(&self, k: usize, l: usize) -> Vec<HoloPoly<S>> {
        NormalizedJet::blocks(self.nj.f(), k, l)
    }

    fn phi(&self, k: usize, l: usize) -> Vec<HoloPoly<S>> {
        NormalizedJet::blocks(self.nj.phi(), k, l)
    }

    fn phi0(&self, k: usize, l: usize) -> Vec<HoloPoly<S>> {
        NormalizedJet::blocks(self.nj.phi0(), k, l)
    }

    fn phi1(&self, k: usize, l: usize) -> Vec<HoloPoly<S>> {
        NormalizedJet::blocks(self.nj.phi1(), k, l)
    }

    /// `Σ conj(a_s) b_s`.
    fn dot(&self, a: &[HoloPoly<S>], b: &[HoloPoly<S>]) -> HermPoly<S> {
        a.iter().zip(b).fold(HermPoly::zero(self.nz), |acc, (x, y)| acc.add(&herm(x).conj().mul(&herm(y))))
    }

    fn sq(&self, a: &[HoloPoly<S>]) -> HermPoly<S> {
        self.dot(a, a)
    }

    /// `z̄ · f = Σ z̄_j f_j`.
    fn zdot(&self, f: &[HoloPoly<S>]) -> HermPoly<S> {
        f.iter().take(self.nz).enumerate().fold(HermPoly::zero(self.nz), |acc, (j, p)| acc.add(&self.zbar(j).mul(&herm(p))))
    }

    fn re2(&self, x: &HermPoly<S>) -> HermPoly<S> {
        x.add(&x.conj())
    }

    fn xi(&self) -> Vec<HoloPoly<S>> {
        (0..self.nj.kappa0).map(|j| self.nj.xi(j)).collect()
    }

    fn eta(&self) -> Vec<HoloPoly<S>> {
        (0..self.nj.kappa0).map(|j| self.nj.eta(j)).collect()
    }

    fn eta_star(&self) -> Vec<HoloPoly<S>> {
        (0..self.nj.kappa0).map(|j| self.nj.eta_star(j)).collect()
    }

    /// `Σ_j (γ_j/μ_j) v_j` for constant vectors `v_j`.
    fn weighted(&self, gamma: &[HoloPoly<S>], vs: &[Vec<S>]) -> Vec<HoloPoly<S>> {
        let len = vs.first().map_or(0, Vec::len);
        (0..len)
            .map(|s| {
                gamma.iter().zip(vs).enumerate().fold(HoloPoly::zero(self.nz), |acc, (j, (g, v))| {
                    acc.add(&g.scale(&(v[s].clone() / self.mu(j))))
                })
            })
            .collect()
    }

    /// `Σ_j (conj(α_j)/μ_j) β_j`.
    fn weighted_pair(&self, a: &[HoloPoly<S>], b: &[HoloPoly<S>]) -> HermPoly<S> {
        a.iter().zip(b).enumerate().fold(HermPoly::zero(self.nz), |acc, (j, (x, y))| {
            acc.add(&herm(x).conj().mul(&herm(y)).scale(&self.inv(&self.mu(j))))
        })
    }

    /// `r_{lj} z_l Γ_j − r_{jl} z_j Γ_l` style pair term for `κ₀ = 2`:
    /// `√(μ₁/μ₂) z₁ Γ₂ − √(μ₂/μ₁) z₂ Γ₁`.
    fn cross(&self, gamma: &[HoloPoly<S>]) -> HoloPoly<S> {
        let nz = self.nz;
        HoloPoly::z(nz, 0).mul(&gamma[1]).scale(&self.r(0, 1)).sub(&HoloPoly::z(nz, 1).mul(&gamma[0]).scale(&self.r(1, 0)))
    }

    /// `Φ^{(I_j + 2I_n)}`: coefficient vector of `z_j w²` across `Φ₀`.
    fn w2_vec(&self, j: usize) -> Vec<S> {
        self.nj.phi0().iter().map(|p| p.coeff(&mono(self.nz, &[j], 2))).collect()
    }

    fn finish(&self, id: &'static str, check: Check, sum: Sum<S>) -> IdentityReport<S> {
        let residual = match check {
            Check::Zero => sum.acc,
            Check::Divisible(k) => {
                if self.nz == 0 || sum.acc.is_zero() {
                    sum.acc
                } else {
                    sum.acc.divide(&self.nsq(k)).1
                }
            }
        };
        self.verdict(id, residual, sum.scale)
    }

    fn verdict(&self, id: &'static str, residual: HermPoly<S>, scale: f64) -> IdentityReport<S> {
        let max_residual = residual.max_abs_coeff();
        let ok = residual.is_zero() || (self.tol > 0.0 && max_residual <= self.tol * scale.max(self.floor));
        IdentityReport { id, status: if ok { Status::Passed } else { Status::Failed }, residual, max_residual, scale }
    }

    /// Componentwise `lhs_s = rhs_s`, stacked with `u^s` tags.
    fn components(&self, id: &'static str, lhs: &[HoloPoly<S>], rhs: &[HoloPoly<S>]) -> IdentityReport<S> {
        let mut residual = HermPoly::zero(self.nz);
        let mut scale = 0.0f64;
        let zero = HoloPoly::zero(self.nz);
        for s in 0..lhs.len().max(rhs.len()) {
            let (a, b) = (lhs.get(s).unwrap_or(&zero), rhs.get(s).unwrap_or(&zero));
            scale = scale.max(a.max_abs_coeff()).max(b.max_abs_coeff());
            residual = residual.add(&herm(&a.sub(b)).mul(&HermPoly::u(self.nz).pow(s as u32)));
        }
        self.verdict(id, residual, scale)
    }

    /// Three-term shape: `μ_{jl}·Φ_{jl} = 2i(…Γ…)` on the pairs with `j ≤ l`
    /// selected by `which` (0: `j < l ≤ κ₀`, 1: `j = l`, 2: `j ≤ κ₀ < l`, 3: all).
    fn lambda_shape(&self, id: &'static str, comps: &[HoloPoly<S>], gamma: &[HoloPoly<S>], which: u8) -> IdentityReport<S> {
        let k0 = self.nj.kappa0;
        let num = lambda_numerators(gamma, k0, self.nz);
        let two_i = self.c(2) * self.i.clone();
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for (s, &(j, l)) in self.nj.s0.iter().enumerate() {
            let class = if j == l {
                1
            } else if l < k0 {
                0
            } else {
                2
            };
            if which == 3 || which == class {
                lhs.push(comps[s].scale(&self.nj.mu_jl[s]));
                rhs.push(num[s].scale(&two_i));
            }
        }
        self.components(id, &lhs, &rhs)
    }

    /// Remainder of `c` after projecting onto `span(basis)`, by Gram–Schmidt
    /// without normalization.
    fn span_remainder(&self, c: &[S], basis: &[Vec<S>]) -> Vec<S> {
        let inner = |a: &[S], b: &[S]| a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.conj() * y.clone());
        let scale = basis.iter().flatten().chain(c).fold(0.0f64, |m, x| m.max(x.abs_f64()));
        let mut ortho: Vec<(Vec<S>, S)> = Vec::new();
        let project = |v: &[S], ortho: &[(Vec<S>, S)]| {
            let mut r = v.to_vec();
            for (q, qq) in ortho {
                let t = inner(q, v) / qq.clone();
                for (x, y) in r.iter_mut().zip(q) {
                    *x -= t.clone() * y.clone();
                }
            }
            r
        };
        for v in basis {
            let r = project(v, &ortho);
            let rr = inner(&r, &r);
            let keep = if self.tol > 0.0 { rr.abs_f64().sqrt() > 1e-7 * scale.max(1e-300) } else { !rr.is_zero() };
            if keep {
                ortho.push((r, rr));
            }
        }
        project(c, &ortho)
    }

    /// Every `D^α` of the blocks `comps` with `|α| = deg` lies in `span(basis)`.
    fn span_check(&self, id: &'static str, comps: &[HoloPoly<S>], basis: &[Vec<S>]) -> IdentityReport<S> {
        let nz = self.nz;
        let monos: BTreeSet<Mono> = comps.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
        let mut residual = HermPoly::zero(nz);
        let mut scale = basis.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs_f64()));
        for e in monos {
            let c: Vec<S> = comps.iter().map(|p| p.coeff(&e)).collect();
            scale = c.iter().fold(scale, |m, x| m.max(x.abs_f64()));
            for (s, x) in self.span_remainder(&c, basis).into_iter().enumerate() {
                let mut key = Mono::zero(2 * nz + 1);
                key.0[..nz].copy_from_slice(&e.0[..nz]);
                key.0[2 * nz] = s as u8;
                residual.add_term(key, x);
            }
        }
        self.verdict(id, residual, scale)
    }
}

/// Run every identity against `nj`, in the fixed order of [`IDENTITY_IDS`].
/// `tol` is the relative float tolerance; pass `0.0` for exact scalars.
pub fn verify_identity_battery<S: Scalar>(nj: &NormalizedJet<S>, tol: f64) -> Vec<IdentityReport<S>> {
    let floor = nj.jet.comps.iter().fold(0.0f64, |m, p| m.max(p.max_abs_coeff()));
    let b = Battery { nj, nz: nj.nz(), tol, i: S::imag_unit(), floor };
    let n = nj.n();
    let big_n = nj.target_dim();
    let k0 = nj.kappa0;
    let skip = |id: &'static str, why: &str| IdentityReport {
        id,
        status: Status::Skipped(why.to_string()),
        residual: HermPoly::zero(b.nz),
        max_residual: 0.0,
        scale: 0.0,
    };

    let form_tol = tol * floor.max(1.0);
    let low = NormalizedJet { jet: nj.jet.truncate(5.min(nj.jet.order)), ..nj.clone() };
    let form_ok = thm21_clauses(&low).iter().all(|c| c.passed(form_tol));
    let cor34 = k0 >= 2 && (k0 + 1) * n - k0 <= big_n && big_n + k0 * (k0 + 1) + 2 <= (k0 + 2) * n + k0;
    let sec4 = k0 == 2 && n >= 7 && 3 * n - 2 <= big_n && big_n <= 4 * n - 6;

    let mut out = Vec::new();
    for &id in IDENTITY_IDS {
        if !form_ok {
            out.push(skip(id, "jet is not in the rank-adapted normal form through order 5"));
            continue;
        }
        if nj.jet.order < order_needed(id) {
            out.push(skip(id, &format!("needs a jet of order {}", order_needed(id))));
            continue;
        }
        if (id == "3.9" || id == "3.9(norm)") && !cor34 {
            out.push(skip(id, "needs κ₀ ≥ 2 and (κ₀+1)n − κ₀ ≤ N ≤ (κ₀+2)n − κ₀(κ₀+1) + κ₀ − 2"));
            continue;
        }
        if id.starts_with('4') || id.starts_with('T') {
            if !sec4 {
                out.push(skip(id, "needs κ₀ = 2, n ≥ 7 and 3n − 2 ≤ N ≤ 4n − 6"));
                continue;
            }
        }
        out.push(run(&b, id));
    }
    out
}

fn run<S: Scalar>(b: &Battery<'_, S>, id: &'static str) -> IdentityReport<S> {
    let nz = b.nz;
    let k0 = b.nj.kappa0;
    let i = b.i.clone();
    let c = |k: i64| b.c(k);
    let nsq = |k: u32| b.nsq(k);
    let s = || Sum::new(nz);
    match id {
        // z̄·f^(2,1) = −Σ z̄_j ξ_j
        "3.5" => {
            let xi = b.xi();
            let rhs = (0..k0).fold(HermPoly::zero(nz), |acc, j| acc.add(&b.zbar(j).mul(&herm(&xi[j]))));
            b.finish(id, Check::Zero, s().add(&b.zdot(&b.f(2, 1))).add(&rhs))
        }
        // conj(Φ₀^(2,0))·Φ₀^(3,0) = 2i|z|² Σ z̄_j ξ_j
        "3.7" => {
            let xi = b.xi();
            let rhs = (0..k0).fold(HermPoly::zero(nz), |acc, j| acc.add(&b.zbar(j).mul(&herm(&xi[j]))));
            let rhs = rhs.mul(&nsq(1)).scale(&(c(2) * i));
            b.finish(id, Check::Zero, s().add(&b.dot(&b.phi0(2, 0), &b.phi0(3, 0))).sub(&rhs))
        }
        "3.7(i)" => b.lambda_shape(id, &b.phi0(3, 0), &b.xi(), 0),
        "3.7(ii)" => b.lambda_shape(id, &b.phi0(3, 0), &b.xi(), 1),
        "3.7(iii)" => b.lambda_shape(id, &b.phi0(3, 0), &b.xi(), 2),
        "3.2" => {
            let xi = b.xi();
            let quarter = S::from_ratio(1, 4);
            let mut sum = s().add(&b.sq(&b.phi0(3, 0)).scale(&quarter)).sub(&b.weighted_pair(&xi, &xi).mul(&nsq(1)));
            for j in 0..k0 {
                for l in j + 1..k0 {
                    let t = HoloPoly::z(nz, j).mul(&xi[l]).scale(&b.r(j, l)).sub(&HoloPoly::z(nz, l).mul(&xi[j]).scale(&b.r(l, j)));
                    sum = sum.add(&b.sq(&[t]).scale(&b.inv(&(b.mu(j) + b.mu(l)))));
                }
            }
            b.finish(id, Check::Zero, sum)
        }
        "L3.3" => b.finish(id, Check::Divisible(1), s().add(&b.sq(&b.phi(3, 0)))),
        "3.9" => {
            let xi = b.xi();
            let mut target = Vec::new();
            for j in 0..k0 {
                for l in j + 1..k0 {
                    let t = HoloPoly::z(nz, j).mul(&xi[l]).scale(&b.r(j, l)).sub(&HoloPoly::z(nz, l).mul(&xi[j]).scale(&b.r(l, j)));
                    target.push(t.scale(&(c(2) / b.mujl(j, l))));
                }
            }
            b.components(id, &b.phi1(3, 0), &target)
        }
        "3.9(norm)" | "4.18" => {
            let xi = b.xi();
            let rhs = b.weighted_pair(&xi, &xi).mul(&nsq(1)).scale(&c(4));
            b.finish(id, Check::Zero, s().add(&b.sq(&b.phi(3, 0))).sub(&rhs))
        }
        _ => section4(b, id),
    }
}

fn section4<S: Scalar>(b: &Battery<'_, S>, id: &'static str) -> IdentityReport<S> {
    let nz = b.nz;
    let i = b.i.clone();
    let c = |k: i64| b.c(k);
    let ci = |k: i64| b.c(k) * b.i.clone();
    let nsq = |k: u32| b.nsq(k);
    let s = || Sum::new(nz);
    let (mu1, mu2) = (b.mu(0), b.mu(1));
    let xi = b.xi();
    let e: Vec<Vec<S>> = (0..2).map(|j| b.nj.e(j)).collect();
    let e_star: Vec<Vec<S>> = (0..2).map(|j| b.nj.e_star(j)).collect();
    // first two components of a block
    let two = |v: Vec<HoloPoly<S>>| v.into_iter().take(2).collect::<Vec<_>>();
    match id {
        "4.10" => b.finish(
            id,
            Check::Zero,
            s().add(&b.re2(&b.zdot(&b.f(1, 2)))).add(&b.sq(&b.f(1, 1))).add(&b.sq(&b.phi(1, 1))),
        ),
        "4.11" => b.finish(id, Check::Zero, s().add(&b.zdot(&b.f(3, 1))).add(&b.dot(&b.phi(1, 1), &b.phi(3, 0)))),
        "4.12" => {
            let inner = s().add(&b.zdot(&b.f(1, 2)).mul(&nsq(1)).scale(&ci(2))).add(&b.dot(&b.phi0(2, 0), &b.phi0(2, 1)));
            b.finish(id, Check::Zero, Sum { acc: b.re2(&inner.acc), scale: inner.scale })
        }
        "4.13" => b.finish(
            id,
            Check::Zero,
            s().add(&b.zdot(&b.f(3, 1)).mul(&nsq(1)).scale(&i))
                .add(&b.dot(&b.phi0(2, 0), &b.phi0(4, 0)))
                .sub(&b.dot(&b.phi(1, 1), &b.phi(3, 0)).mul(&nsq(1)).scale(&i)),
        ),
        "4.14" => {
            let inner = b.zdot(&b.f(1, 2)).mul(&nsq(2)).neg().add(&b.dot(&b.phi0(2, 0), &b.phi0(2, 1)).mul(&nsq(1)).scale(&i));
            b.finish(
                id,
                Check::Zero,
                s().add(&b.re2(&inner))
                    .add(&b.sq(&b.f(1, 1)).mul(&nsq(2)))
                    .add(&b.sq(&b.phi(3, 0)))
                    .add(&b.sq(&b.phi(1, 1)).mul(&nsq(2))),
            )
        }
        "4.15" => b.finish(
            id,
            Check::Zero,
            s().add(&b.dot(&b.phi0(2, 0), &b.phi0(4, 0))).sub(&b.dot(&b.phi(1, 1), &b.phi(3, 0)).mul(&nsq(1)).scale(&ci(2))),
        ),
        "4.16" | "4.17" | "4.19" => {
            let inner = b.zdot(&b.f(1, 2)).mul(&nsq(1)).scale(&c(-2)).add(&b.dot(&b.phi0(2, 0), &b.phi0(2, 1)).scale(&i));
            let head = match id {
                "4.16" => b.re2(&inner).mul(&nsq(1)),
                "4.17" => inner.scale(&c(2)).mul(&nsq(1)),
                _ => inner.scale(&c(2)),
            };
            let tail = if id == "4.19" { b.weighted_pair(&xi, &xi).scale(&c(4)) } else { b.sq(&b.phi(3, 0)) };
            b.finish(id, Check::Zero, s().add(&head).add(&tail))
        }
        // Φ̃₀^(2,1) = Φ₀^(2,1) − 2i Σ (ξ_j/μ_j) e_j
        "4.21" | "4.22" | "4.23" | "4.24" => {
            let corr = b.weighted(&xi, &e);
            let tilde: Vec<HoloPoly<S>> = b.phi0(2, 1).iter().zip(&corr).map(|(p, q)| p.sub(&q.scale(&ci(2)))).collect();
            let f12 = two(b.f(1, 2));
            match id {
                "4.21" => b.finish(
                    id,
                    Check::Zero,
                    s().add(&b.dot(&b.phi0(2, 0), &tilde)).add(&b.zdot(&b.f(1, 2)).mul(&nsq(1)).scale(&ci(2))),
                ),
                "4.22" => {
                    let gamma: Vec<HoloPoly<S>> = f12.iter().map(HoloPoly::neg).collect();
                    b.lambda_shape(id, &tilde, &gamma, 3)
                }
                _ => {
                    let k = c(4) / (mu1.clone() * mu2.clone() * (mu1.clone() + mu2.clone()));
                    let zf = HoloPoly::z(nz, 0).mul(&f12[1]).scale(&mu1).sub(&HoloPoly::z(nz, 1).mul(&f12[0]).scale(&mu2));
                    if id == "4.23" {
                        b.finish(
                            id,
                            Check::Zero,
                            s().add(&b.sq(&tilde))
                                .sub(&b.weighted_pair(&f12, &f12).mul(&nsq(1)).scale(&c(4)))
                                .add(&b.sq(&[zf]).scale(&k)),
                        )
                    } else {
                        let zx = HoloPoly::z(nz, 0).mul(&xi[1]).scale(&mu1).sub(&HoloPoly::z(nz, 1).mul(&xi[0]).scale(&mu2));
                        b.finish(
                            id,
                            Check::Zero,
                            s().add(&b.dot(&tilde, &b.phi0(3, 0)))
                                .add(&b.weighted_pair(&f12, &xi).mul(&nsq(1)).scale(&c(4)))
                                .sub(&b.dot(&[zf], &[zx]).scale(&k)),
                        )
                    }
                }
            }
        }
        "4.26" => {
            let phi20 = b.phi0(2, 0);
            let mut inner = HermPoly::zero(nz);
            for j in 0..2 {
                let t = herm(&xi[j]).conj().mul(&herm(&NormalizedJet::pair(&b.w2_vec(j), &phi20)));
                inner = inner.add(&t.scale(&(ci(2) / b.mu(j))));
            }
            let v = b.weighted(&xi, &e_star);
            b.finish(
                id,
                Check::Zero,
                s().sub(&b.re2(&inner)).add(&b.sq(&xi)).add(&b.sq(&v).scale(&c(4))),
            )
        }
        _ => weight7(b, id),
    }
}

fn weight7<S: Scalar>(b: &Battery<'_, S>, id: &'static str) -> IdentityReport<S> {
    let nz = b.nz;
    let i = b.i.clone();
    let c = |k: i64| b.c(k);
    let ci = |k: i64| b.c(k) * b.i.clone();
    let nsq = |k: u32| b.nsq(k);
    let s = || Sum::new(nz);
    let (mu1, mu2) = (b.mu(0), b.mu(1));
    let mu12 = b.mujl(0, 1);
    let inv_sum = b.inv(&(mu1.clone() + mu2.clone()));
    let xi = b.xi();
    let e: Vec<Vec<S>> = (0..2).map(|j| b.nj.e(j)).collect();
    let two = |v: Vec<HoloPoly<S>>| v.into_iter().take(2).collect::<Vec<_>>();
    let zf22 = || b.zdot(&b.f(2, 2));
    let p12_20 = || b.dot(&b.phi0(1, 2), &b.phi0(2, 0));
    let p20_31 = || b.dot(&b.phi0(2, 0), &b.phi0(3, 1));
    let q21_30 = || b.dot(&b.phi(2, 1), &b.phi(3, 0));
    let q30_40 = || b.dot(&b.phi(3, 0), &b.phi(4, 0));
    match id {
        "4.29" => b.finish(
            id,
            Check::Zero,
            s().add(&zf22()).add(&b.dot(&b.f(1, 1), &b.f(2, 1))).add(&p12_20()).add(&b.dot(&b.phi(1, 1), &b.phi(2, 1))),
        ),
        "4.30" => b.finish(
            id,
            Check::Zero,
            s().add(&zf22().mul(&nsq(1)).scale(&ci(2))).add(&p20_31()).sub(&p12_20().mul(&nsq(1)).scale(&ci(2))).add(&q21_30()),
        ),
        "4.31" => b.finish(
            id,
            Check::Zero,
            s().sub(&zf22().mul(&nsq(2)))
                .add(&b.dot(&b.f(1, 1), &b.f(2, 1)).mul(&nsq(2)))
                .add(&p20_31().mul(&nsq(1)).scale(&i))
                .sub(&p12_20().mul(&nsq(2)))
                .add(&q30_40())
                .sub(&q21_30().mul(&nsq(1)).scale(&i))
                .add(&b.dot(&b.phi(1, 1), &b.phi(2, 1)).mul(&nsq(2))),
        ),
        "4.32" => b.finish(
            id,
            Check::Zero,
            s().add(&zf22().mul(&nsq(2)).scale(&c(-2)))
                .add(&p20_31().mul(&nsq(1)).scale(&i))
                .add(&p12_20().mul(&nsq(2)).scale(&c(-2)))
                .add(&q30_40())
                .sub(&q21_30().mul(&nsq(1)).scale(&i)),
        ),
        "4.33" => b.finish(
            id,
            Check::Zero,
            s().add(&q30_40()).sub(&p12_20().mul(&nsq(2)).scale(&c(4))).sub(&q21_30().mul(&nsq(1)).scale(&ci(2))),
        ),
        "4.34" => {
            let inner = zf22().mul(&nsq(1)).scale(&ci(2)).add(&p20_31());
            b.finish(id, Check::Zero, s().add(&q30_40()).add(&inner.mul(&nsq(1)).scale(&ci(2))))
        }
        "4.35" => b.lambda_shape(id, &b.phi0(4, 0), &b.eta_star(), 3),
        "4.36" => {
            let es = b.eta_star();
            // √(μ₂/μ₁) z₂ X₁ − √(μ₁/μ₂) z₁ X₂ = −cross(X)
            let left = b.cross(&xi).neg();
            let right = b.cross(&es).neg();
            b.finish(
                id,
                Check::Zero,
                s().add(&b.dot(&b.phi0(3, 0), &b.phi0(4, 0)))
                    .sub(&b.weighted_pair(&xi, &es).mul(&nsq(1)).scale(&c(4)))
                    .add(&b.dot(&[left], &[right]).scale(&(c(4) * inv_sum.clone()))),
            )
        }
        "4.37" => {
            let target = b.cross(&b.eta_star()).scale(&(c(2) / mu12.clone()));
            b.components(id, &two(b.phi1(4, 0))[..1], &[target])
        }
        "4.38" => {
            let lhs = b.weighted_pair(&xi, &b.eta_star()).scale(&ci(2));
            b.finish(id, Check::Zero, s().add(&lhs).sub(&zf22().mul(&nsq(1)).scale(&ci(2))).sub(&p20_31()))
        }
        "4.40" | "4.41" | "4.43" => {
            let es = b.eta_star();
            let f22 = two(b.f(2, 2));
            let corr = b.weighted(&es, &e);
            let tilde: Vec<HoloPoly<S>> = b.phi0(3, 1).iter().zip(&corr).map(|(p, q)| p.sub(&q.scale(&ci(2)))).collect();
            if id == "4.40" {
                let gamma: Vec<HoloPoly<S>> = f22.iter().map(HoloPoly::neg).collect();
                return b.lambda_shape(id, &tilde, &gamma, 3);
            }
            // −4|z|² Σ ξ̄_j f_j/μ_j + 4/(μ₁+μ₂) conj(cross ξ)·cross f
            let closed = b
                .weighted_pair(&xi, &f22)
                .mul(&nsq(1))
                .scale(&c(-4))
                .add(&b.dot(&[b.cross(&xi)], &[b.cross(&f22)]).scale(&(c(4) * inv_sum.clone())));
            if id == "4.41" {
                b.finish(id, Check::Zero, s().add(&b.dot(&b.phi0(3, 0), &tilde)).sub(&closed))
            } else {
                let eta = b.eta();
                b.finish(
                    id,
                    Check::Zero,
                    s().add(&b.dot(&b.phi0(3, 0), &b.phi0(3, 1)))
                        .sub(&b.weighted_pair(&eta, &es).scale(&ci(2)))
                        .sub(&closed),
                )
            }
        }
        "4.42" => {
            let es = b.eta_star();
            let corr: Vec<HoloPoly<S>> = b.weighted(&es, &e).iter().map(|p| p.scale(&ci(2))).collect();
            b.finish(
                id,
                Check::Zero,
                s().add(&b.dot(&b.phi0(3, 0), &corr)).sub(&b.weighted_pair(&b.eta(), &es).scale(&ci(2))),
            )
        }
        "4.44" => b.finish(
            id,
            Check::Zero,
            s().add(&p12_20().mul(&nsq(1)).scale(&c(4)))
                .add(&q21_30().scale(&ci(2)))
                .sub(&b.weighted_pair(&xi, &b.eta_star()).scale(&c(4))),
        ),
        "4.45" | "4.46" => {
            let e_star: Vec<Vec<S>> = (0..2).map(|j| b.nj.e_star(j)).collect();
            let corr = b.weighted(&xi, &e_star);
            let tilde: Vec<HoloPoly<S>> = b.phi(2, 1).iter().zip(&corr).map(|(p, q)| p.sub(&q.scale(&ci(2)))).collect();
            if id == "4.45" {
                b.finish(id, Check::Divisible(1), s().add(&b.dot(&tilde, &b.phi(3, 0)).scale(&ci(2))))
            } else {
                let target = b.cross(&two(b.f(1, 2))).scale(&(c(-2) / mu12.clone()));
                let k = b.nj.s0.len();
                b.components(id, &tilde[k..k + 1], &[target])
            }
        }
        _ => weight8(b, id),
    }
}

fn weight8<S: Scalar>(b: &Battery<'_, S>, id: &'static str) -> IdentityReport<S> {
    let nz = b.nz;
    let i = b.i.clone();
    let c = |k: i64| b.c(k);
    let ci = |k: i64| b.c(k) * b.i.clone();
    let nsq = |k: u32| b.nsq(k);
    let s = || Sum::new(nz);
    let (mu1, mu2) = (b.mu(0), b.mu(1));
    let mu12 = b.mujl(0, 1);
    let inv_sum = b.inv(&(mu1.clone() + mu2.clone()));
    let xi = b.xi();
    let e_hat: Vec<Vec<S>> = (0..2).map(|j| b.nj.e_hat(j)).collect();
    let e_star: Vec<Vec<S>> = (0..2).map(|j| b.nj.e_star(j)).collect();
    let two = |v: Vec<HoloPoly<S>>| v.into_iter().take(2).collect::<Vec<_>>();
    let zf13 = || b.zdot(&b.f(1, 3));
    let f11_12 = || b.dot(&b.f(1, 1), &b.f(1, 2));
    let p20_22 = || b.dot(&b.phi0(2, 0), &b.phi0(2, 2));
    let q30_31 = || b.dot(&b.phi(3, 0), &b.phi(3, 1));
    let q11_12 = || b.dot(&b.phi(1, 1), &b.phi(1, 2));
    let sq21 = || b.sq(&b.f(2, 1)).add(&b.sq(&b.phi(2, 1)));
    let es_bar = |es: &[HoloPoly<S>]| b.weighted_pair(es, es);
    // √(μ₂/μ₁) z₂ η₁* − √(μ₁/μ₂) z₁ η₂*
    let swapped = |g: &[HoloPoly<S>]| b.cross(g).neg();
    // Σ_j 2i (ξ̄_j/μ_j) conj(v_j)·H
    let xi_pair = |vs: &[Vec<S>], h: &[HoloPoly<S>]| {
        (0..2).fold(HermPoly::zero(nz), |acc, j| {
            acc.add(&herm(&xi[j]).conj().mul(&herm(&NormalizedJet::pair(&vs[j], h))).scale(&(ci(2) / b.mu(j))))
        })
    };
    let w2: Vec<Vec<S>> = (0..2).map(|j| b.w2_vec(j)).collect();
    let big_s = || b.sq(&xi);
    let v_sq = || b.sq(&b.weighted(&xi, &e_star)).scale(&c(4));
    match id {
        "4.49" => {
            let inner = zf13()
                .mul(&nsq(3))
                .scale(&(c(-1) * i.clone()))
                .add(&f11_12().mul(&nsq(3)).scale(&i))
                .sub(&p20_22().mul(&nsq(2)))
                .add(&q30_31().mul(&nsq(1)).scale(&i))
                .add(&q11_12().mul(&nsq(3)).scale(&i));
            b.finish(id, Check::Zero, s().add(&b.re2(&inner)).add(&b.sq(&b.phi(4, 0))).add(&sq21().mul(&nsq(2))))
        }
        "4.50" => {
            let inner = zf13()
                .mul(&nsq(1))
                .scale(&ci(3))
                .add(&f11_12().mul(&nsq(1)).scale(&i))
                .add(&p20_22())
                .add(&q11_12().mul(&nsq(1)).scale(&i));
            b.finish(id, Check::Zero, s().add(&b.re2(&inner)).add(&sq21()))
        }
        "4.51" => {
            let inner = zf13()
                .mul(&nsq(2))
                .scale(&c(-3))
                .add(&f11_12().mul(&nsq(2)))
                .add(&p20_22().mul(&nsq(1)).scale(&ci(2)))
                .add(&q30_31())
                .add(&q11_12().mul(&nsq(2)));
            b.finish(id, Check::Zero, s().add(&b.re2(&inner)))
        }
        "4.52" => {
            let inner = zf13().mul(&nsq(2)).scale(&ci(-4)).add(&p20_22().mul(&nsq(1)).scale(&c(-2))).add(&q30_31().scale(&i));
            b.finish(id, Check::Zero, s().add(&b.re2(&inner).mul(&nsq(1))).add(&b.sq(&b.phi(4, 0))))
        }
        "4.53" => {
            let inner = p20_22().mul(&nsq(1)).scale(&c(-2)).add(&q30_31().scale(&i));
            b.finish(id, Check::Divisible(3), s().add(&inner.mul(&nsq(1)).scale(&c(2))).add(&b.sq(&b.phi(4, 0))))
        }
        "4.54" | "4.56" => {
            let es = b.eta_star();
            let x = b.sq(&[swapped(&es)]).scale(&inv_sum);
            let quarter = S::from_ratio(1, 4);
            if id == "4.54" {
                b.finish(
                    id,
                    Check::Zero,
                    s().add(&b.sq(&b.phi0(4, 0)).scale(&quarter)).sub(&es_bar(&es).mul(&nsq(1))).add(&x),
                )
            } else {
                b.finish(id, Check::Zero, s().add(&b.sq(&b.phi1(4, 0)).scale(&quarter)).sub(&x))
            }
        }
        "4.55" => {
            let es = b.eta_star();
            b.finish(
                id,
                Check::Divisible(2),
                s().sub(&p20_22().mul(&nsq(1)).scale(&c(4))).add(&q30_31().scale(&ci(2))).add(&es_bar(&es).scale(&c(4))),
            )
        }
        "4.57" => {
            let target = b.cross(&b.eta_star()).scale(&(c(2) / mu12.clone()));
            b.components(id, &b.phi1(4, 0), &[target])
        }
        "4.58" => {
            let es = b.eta_star();
            let eta = b.eta();
            let f22 = two(b.f(2, 2));
            let diff: Vec<HoloPoly<S>> = es.iter().zip(&eta).map(|(a, e)| a.sub(e)).collect();
            b.finish(
                id,
                Check::Divisible(2),
                s().sub(&p20_22().mul(&nsq(1)).scale(&c(4)))
                    .add(&b.dot(&b.phi1(3, 0), &b.phi1(3, 1)).scale(&ci(2)))
                    .sub(&b.weighted_pair(&xi, &f22).mul(&nsq(1)).scale(&ci(8)))
                    .add(&b.dot(&[b.cross(&xi)], &[b.cross(&f22)]).scale(&(ci(8) * inv_sum.clone())))
                    .add(&b.weighted_pair(&diff, &es).scale(&c(4))),
            )
        }
        "4.59" => {
            let f22 = two(b.f(2, 2));
            b.finish(id, Check::Divisible(1), s().add(&p20_22()).add(&b.weighted_pair(&xi, &f22).scale(&ci(2))))
        }
        "4.60" => {
            let f22 = two(b.f(2, 2));
            let f21 = two(b.f(2, 1));
            let phi20 = b.phi0(2, 0);
            let phi21 = b.phi(2, 1);
            let half_i = S::imag_unit() / c(2);
            let rhs: Vec<HoloPoly<S>> = (0..2)
                .map(|l| {
                    f21[l]
                        .scale(&(half_i.clone() * b.mu(l)))
                        .sub(&NormalizedJet::pair(&w2[l], &phi20))
                        .sub(&NormalizedJet::pair(&e_star[l], &phi21))
                })
                .collect();
            b.components(id, &f22, &rhs)
        }
        "4.61" => {
            let f22 = two(b.f(2, 2));
            let f21 = two(b.f(2, 1));
            let lhs = b.re2(&b.weighted_pair(&xi, &f22).scale(&ci(-2)));
            let half_i = S::imag_unit() / c(2);
            let f21_scaled: Vec<HoloPoly<S>> = (0..2).map(|j| f21[j].scale(&(half_i.clone() * b.mu(j)))).collect();
            let one = b.re2(&b.weighted_pair(&xi, &f21_scaled).scale(&ci(-2)));
            let two_ = b.re2(&xi_pair(&w2, &b.phi0(2, 0)));
            let three = b.re2(&xi_pair(&e_star, &b.phi(2, 1)));
            b.finish(id, Check::Zero, s().add(&lhs).sub(&one).sub(&two_).sub(&three))
        }
        "4.62" => {
            // I − (−2S) tagged u⁰, II − (S + 4|Σ ξ_j e*_j/μ_j|²) tagged u¹
            let f21 = two(b.f(2, 1));
            let half_i = S::imag_unit() / c(2);
            let f21_scaled: Vec<HoloPoly<S>> = (0..2).map(|j| f21[j].scale(&(half_i.clone() * b.mu(j)))).collect();
            let one = b.re2(&b.weighted_pair(&xi, &f21_scaled).scale(&ci(-2)));
            let two_ = b.re2(&xi_pair(&w2, &b.phi0(2, 0)));
            let r1 = s().add(&one).add(&big_s().scale(&c(2)));
            let r2 = s().add(&two_).sub(&big_s()).sub(&v_sq());
            let residual = r1.acc.add(&r2.acc.mul(&HermPoly::u(nz)));
            b.verdict(id, residual, r1.scale.max(r2.scale))
        }
        "4.63" => b.finish(id, Check::Divisible(1), s().add(&b.re2(&p20_22())).add(&sq21())),
        "4.64" => {
            let sum = s()
                .sub(&big_s().scale(&c(2)))
                .add(&big_s())
                .add(&v_sq())
                .add(&b.re2(&xi_pair(&e_star, &b.phi(2, 1))))
                .add(&big_s())
                .add(&b.sq(&b.phi(2, 1)));
            b.finish(id, Check::Divisible(1), sum)
        }
        "4.65" | "4.66" | "4.67" | "T4.1(2)" | "T4.1(3)" => {
            let corr = b.weighted(&xi, &e_star);
            let tilde: Vec<HoloPoly<S>> = b.phi(2, 1).iter().zip(&corr).map(|(p, q)| p.sub(&q.scale(&ci(2)))).collect();
            let k = b.nj.s0.len();
            let f12 = two(b.f(1, 2));
            match id {
                "4.65" => b.finish(id, Check::Divisible(1), s().add(&b.sq(&tilde))),
                "4.66" => {
                    let x = b.sq(&[b.cross(&f12)]).scale(&(c(4) * inv_sum.clone()));
                    b.finish(id, Check::Divisible(1), s().add(&b.sq(&tilde[k..])).sub(&x))
                }
                "4.67" => {
                    let target = b.cross(&f12).scale(&(c(-2) / mu12.clone()));
                    b.components(id, &tilde[k..], &[target])
                }
                "T4.1(2)" => {
                    let s1 = b.nj.s1_len();
                    let mut unit = vec![S::zero(); s1];
                    if s1 > 0 {
                        unit[0] = S::one();
                    }
                    b.span_check(id, &b.phi1(2, 1), &[unit, e_hat[0].clone(), e_hat[1].clone()])
                }
                _ => b.span_check(id, &b.phi1(1, 2), &[e_hat[0].clone(), e_hat[1].clone()]),
            }
        }
        other => panic!("unknown identity id {other}"),
    }
}
