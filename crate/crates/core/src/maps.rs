//! Rational maps `P/q` between balls and Siegel domains.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lft::{self, Lft};
use crate::linalg;
use crate::poly::{boundary_norm_sq, HermPoly, HoloPoly, Mono};
use crate::scalar::{GaussianRational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ball,
    Siegel,
}

impl Model {
    /// Number of z-variables in the polynomial layout of a dimension-`n` domain.
    pub fn nz(self, n: usize) -> usize {
        match self {
            Model::Ball => n,
            Model::Siegel => n - 1,
        }
    }

    pub fn flip(self) -> Model {
        match self {
            Model::Ball => Model::Siegel,
            Model::Siegel => Model::Ball,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Ball => "ball",
            Model::Siegel => "siegel",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ball" => Ok(Model::Ball),
            "siegel" => Ok(Model::Siegel),
            _ => Err(Error::Parse(format!("unknown model `{s}`"))),
        }
    }
}

/// `F = P/q` from a dimension-`n` domain into a dimension-`N` domain.
///
/// Coordinates of a Siegel domain are `(z_1..z_{n−1}, w)`; target components
/// of a Siegel-model map are ordered `(f, φ, g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap<S: Scalar> {
    pub model: Model,
    pub target_model: Model,
    pub n: usize,
    pub target_dim: usize,
    pub num: Vec<HoloPoly<S>>,
    pub den: HoloPoly<S>,
}

/// Outcome of a properness check.
#[derive(Clone, Debug)]
pub struct ProperVerdict<S: Scalar> {
    pub proper: bool,
    /// Ball: quotient by `|z|² − 1`. Siegel: `None`.
    pub certificate: Option<HermPoly<S>>,
    /// Nonzero remainder or residual when not proper.
    pub witness: Option<HermPoly<S>>,
}

impl<S: Scalar> RationalMap<S> {
    pub fn new(model: Model, n: usize, num: Vec<HoloPoly<S>>, den: HoloPoly<S>) -> Result<Self> {
        let map = RationalMap { model, target_model: model, n, target_dim: num.len(), num, den };
        map.validate()?;
        Ok(map)
    }

    pub fn polynomial(model: Model, n: usize, num: Vec<HoloPoly<S>>) -> Result<Self> {
        let nz = model.nz(n);
        Self::new(model, n, num, HoloPoly::one(nz))
    }

    fn validate(&self) -> Result<()> {
        let nz = self.nz();
        if self.n < 2 && self.model == Model::Siegel {
            return Err(Error::Dimension("Siegel domains need n ≥ 2".into()));
        }
        if self.num.iter().chain([&self.den]).any(|p| p.nz() != nz) {
            return Err(Error::Dimension(format!("components must use {nz} z-variables")));
        }
        if self.model == Model::Ball && self.num.iter().chain([&self.den]).any(|p| p.has_w()) {
            return Err(Error::Dimension("ball-model polynomials cannot contain w".into()));
        }
        if self.den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        Ok(())
    }

    pub fn nz(&self) -> usize {
        self.model.nz(self.n)
    }

    /// The identity map of the domain.
    pub fn identity(model: Model, n: usize) -> Self {
        let nz = model.nz(n);
        let num = (0..n).map(|k| HoloPoly::var(nz, k)).collect();
        RationalMap { model, target_model: model, n, target_dim: n, num, den: HoloPoly::one(nz) }
    }

    /// `z ↦ (z, 0, …, 0)` into dimension `target_dim`.
    pub fn linear_embedding(model: Model, n: usize, target_dim: usize) -> Self {
        Self::identity(model, n).zero_pad(target_dim)
    }

    /// Append zero components (Siegel: inserted before `g`).
    pub fn zero_pad(&self, target_dim: usize) -> Self {
        assert!(target_dim >= self.target_dim);
        let mut m = self.clone();
        let nz = self.nz();
        let extra = target_dim - self.target_dim;
        match self.target_model {
            Model::Ball => m.num.extend((0..extra).map(|_| HoloPoly::zero(nz))),
            Model::Siegel => {
                let g = m.num.pop().unwrap();
                m.num.extend((0..extra).map(|_| HoloPoly::zero(nz)));
                m.num.push(g);
            }
        }
        m.target_dim = target_dim;
        m
    }

    /// Divide numerator and denominator by `q(0)`.
    pub fn canonical(&self) -> Result<Self> {
        let c = self.den.constant_term();
        if c.is_negligible(1e-300) {
            return Err(Error::Precondition("denominator vanishes at the origin".into()));
        }
        let inv = S::one() / c;
        let mut m = self.clone();
        m.num = self.num.iter().map(|p| p.scale(&inv)).collect();
        m.den = self.den.scale(&inv);
        Ok(m)
    }

    /// Coordinates as a flat polynomial-variable vector (`w` slot padded for ball maps).
    fn flat_point(&self, x: &[S]) -> Vec<S> {
        let mut v = x.to_vec();
        if self.model == Model::Ball {
            v.push(S::zero());
        }
        v
    }

    /// `F(x)`, or `None` at a pole.
    pub fn eval(&self, x: &[S]) -> Option<Vec<S>> {
        assert_eq!(x.len(), self.n, "point dimension");
        let flat = self.flat_point(x);
        let q = self.den.eval_flat(&flat);
        if q.is_negligible(1e-300) {
            return None;
        }
        Some(self.num.iter().map(|p| p.eval_flat(&flat) / q.clone()).collect())
    }

    /// Highest total degree among numerator and denominator.
    pub fn degree(&self) -> usize {
        self.num.iter().chain([&self.den]).map(HoloPoly::total_degree).max().unwrap_or(0)
    }

    /// Same rational map (cross-multiplied equality).
    pub fn same_map(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n
            && self.target_dim == other.target_dim
            && self.model == other.model
            && self.target_model == other.target_model
            && self.num.iter().zip(&other.num).all(|(a, b)| {
                a.mul(&other.den).sub(&b.mul(&self.den)).is_negligible(tol)
            })
    }

    /// `F ∘ σ` for a transformation landing in the source domain.
    ///
    /// Numerator and denominator are homogenized to the common degree `D`
    /// and the linear forms of `σ` substituted, so the result stays polynomial.
    pub fn precompose(&self, sigma: &Lft<S>, new_model: Model) -> Result<Self> {
        if sigma.dim_out() != self.n {
            return Err(Error::Dimension("precomposition dimensions".into()));
        }
        let new_n = sigma.dim_in();
        let new_nz = new_model.nz(new_n);
        let linear = |row: &Vec<S>| -> HoloPoly<S> {
            let mut p = HoloPoly::constant(new_nz, row[new_n].clone());
            for (k, c) in row[..new_n].iter().enumerate() {
                p = p.add(&HoloPoly::var(new_nz, k).scale(c));
            }
            p
        };
        let mut subs: Vec<HoloPoly<S>> = sigma.m[..self.n].iter().map(linear).collect();
        if self.model == Model::Ball {
            subs.push(HoloPoly::zero(new_nz));
        }
        let t = linear(sigma.m.last().unwrap());
        let d = self.degree();
        let mut tpow = vec![HoloPoly::one(new_nz)];
        for k in 1..=d {
            tpow.push(tpow[k - 1].mul(&t));
        }
        let homog = |p: &HoloPoly<S>| -> HoloPoly<S> {
            let mut acc = HoloPoly::zero(new_nz);
            for (e, c) in p.terms() {
                let single = HoloPoly::from_terms(p.nz(), [(e.clone(), c.clone())]);
                let img = single.compose(&subs);
                acc = acc.add(&img.mul(&tpow[d - e.total()]));
            }
            acc
        };
        let map = RationalMap {
            model: new_model,
            target_model: self.target_model,
            n: new_n,
            target_dim: self.target_dim,
            num: self.num.iter().map(homog).collect(),
            den: homog(&self.den),
        };
        map.validate()?;
        Ok(map)
    }

    /// `τ ∘ F` for a transformation of the target.
    pub fn postcompose(&self, tau: &Lft<S>, new_target: Model) -> Result<Self> {
        if tau.dim_in() != self.target_dim {
            return Err(Error::Dimension("postcomposition dimensions".into()));
        }
        let nn = self.target_dim;
        let row_apply = |row: &Vec<S>| -> HoloPoly<S> {
            let mut acc = self.den.scale(&row[nn]);
            for (k, c) in row[..nn].iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&self.num[k].scale(c));
                }
            }
            acc
        };
        let num: Vec<_> = tau.m[..tau.dim_out()].iter().map(row_apply).collect();
        let den = row_apply(tau.m.last().unwrap());
        let map = RationalMap {
            model: self.model,
            target_model: new_target,
            n: self.n,
            target_dim: tau.dim_out(),
            num,
            den,
        };
        map.validate()?;
        Ok(map)
    }

    /// Transport between the ball and Siegel pictures: `ρ_N⁻¹ ∘ F ∘ ρ_n` or its inverse.
    pub fn conjugate_model(&self) -> Result<Self> {
        if self.model != self.target_model {
            return Err(Error::Precondition("map between different models".into()));
        }
        let out = match self.model {
            Model::Ball => self
                .precompose(&lft::cayley(self.n), Model::Siegel)?
                .postcompose(&lft::cayley_inverse(self.target_dim), Model::Siegel)?,
            Model::Siegel => self
                .precompose(&lft::cayley_inverse(self.n), Model::Ball)?
                .postcompose(&lft::cayley(self.target_dim), Model::Ball)?,
        };
        out.canonical()
    }

    /// Exact properness test (float fields: residual up to `tol` relative to the largest term).
    pub fn is_proper(&self, tol: f64) -> ProperVerdict<S> {
        let nz = self.nz();
        match (self.model, self.target_model) {
            (Model::Ball, Model::Ball) => {
                let h = boundary_norm_sq(nz, &self.num).sub(&boundary_norm_sq(nz, std::slice::from_ref(&self.den)));
                let (q, r) = h.divide(&HermPoly::sphere(nz));
                let scale = h.max_abs_coeff().max(1.0);
                if r.is_negligible(tol * scale) {
                    ProperVerdict { proper: true, certificate: Some(q), witness: None }
                } else {
                    ProperVerdict { proper: false, certificate: None, witness: Some(r) }
                }
            }
            (Model::Siegel, Model::Siegel) => {
                let r = self.siegel_residual();
                let scale = self.siegel_scale().max(1.0);
                if r.is_negligible(tol * scale) {
                    ProperVerdict { proper: true, certificate: None, witness: None }
                } else {
                    ProperVerdict { proper: false, certificate: None, witness: Some(r) }
                }
            }
            _ => ProperVerdict { proper: false, certificate: None, witness: None },
        }
    }

    /// `|q|²·(−Im g + |f̃|²)` on `∂H_n`, as `−(P_g q̄ − q P̄_g)/(2i) + Σ|P_k|²`.
    pub fn siegel_residual(&self) -> HermPoly<S> {
        let nz = self.nz();
        let nn = self.target_dim;
        let pg = self.num[nn - 1].restrict_to_boundary();
        let q = self.den.restrict_to_boundary();
        let im = pg.mul(&q.conj()).sub(&q.mul(&pg.conj()));
        let half_over_i = S::one() / (S::from_i64(2) * S::imag_unit());
        boundary_norm_sq(nz, &self.num[..nn - 1]).sub(&im.scale(&half_over_i))
    }

    fn siegel_scale(&self) -> f64 {
        let nz = self.nz();
        boundary_norm_sq(nz, &self.num).max_abs_coeff() + boundary_norm_sq(nz, std::slice::from_ref(&self.den)).max_abs_coeff()
    }

    /// `F_p = τ_p^F ∘ F ∘ σ_p⁰` for a boundary point `p = (z₀, w₀)` of a Siegel map.
    pub fn translate_basepoint(&self, z0: &[S], w0: &S) -> Result<Self> {
        if self.model != Model::Siegel || self.target_model != Model::Siegel {
            return Err(Error::Precondition("base-point translation needs a Siegel map".into()));
        }
        let mut p = z0.to_vec();
        p.push(w0.clone());
        let fp = self
            .eval(&p)
            .ok_or_else(|| Error::Precondition("map has a pole at the base point".into()))?;
        let sigma = lft::heisenberg_translation(z0, w0);
        let (fz, fw) = fp.split_at(self.target_dim - 1);
        let tau = lft::heisenberg_recentering(fz, &fw[0]);
        self.precompose(&sigma, Model::Siegel)?
            .postcompose(&tau, Model::Siegel)?
            .canonical()
    }

    /// Dimension of the smallest affine subspace containing the image:
    /// `N` minus the dimension of `{(v, c) : v·P − c q ≡ 0}`.
    pub fn affine_hull_dim(&self, tol: f64) -> usize {
        let mut rows = self.num.clone();
        rows.push(self.den.clone());
        coefficient_rank(&rows, tol) - 1
    }

    /// Dimension of the linear span of the image (equal to the affine hull when `F(0) = 0`).
    pub fn linear_span_dim(&self, tol: f64) -> usize {
        coefficient_rank(&self.num, tol)
    }

    /// `Φ = (z_1, …, z_{n−1}, z_n·H(z))` for a ball map `H`.
    pub fn whitney_lift(&self) -> Result<Self> {
        if self.model != Model::Ball || self.target_model != Model::Ball {
            return Err(Error::Precondition("Whitney lift is defined for ball maps".into()));
        }
        let nz = self.nz();
        let mut num: Vec<HoloPoly<S>> = (0..self.n - 1).map(|k| HoloPoly::var(nz, k).mul(&self.den)).collect();
        let zn = HoloPoly::var(nz, self.n - 1);
        num.extend(self.num.iter().map(|p| zn.mul(p)));
        RationalMap::new(Model::Ball, self.n, num, self.den.clone())
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> RationalMap<T> {
        RationalMap {
            model: self.model,
            target_model: self.target_model,
            n: self.n,
            target_dim: self.target_dim,
            num: self.num.iter().map(|p| p.convert(f)).collect(),
            den: self.den.convert(f),
        }
    }

    /// Minimum of `|q|` over deterministic quasi-random points of the closed
    /// ball (Ball model) or of a bounded slab of the closed Siegel domain.
    pub fn sampled_min_denominator(&self, points: usize) -> f64 {
        let c = self.den.convert(|x| x.to_c64());
        let n = self.n;
        let primes = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
        let halton = |mut i: u32, b: u32| {
            let (mut f, mut r) = (1.0, 0.0);
            while i > 0 {
                f /= b as f64;
                r += f * (i % b) as f64;
                i /= b;
            }
            r
        };
        let mut best = f64::INFINITY;
        for k in 1..=points as u32 {
            let coord = |j: usize| halton(k, primes[j % primes.len()]);
            let mut z: Vec<num_complex::Complex64> = (0..n)
                .map(|j| num_complex::Complex64::new(2.0 * coord(2 * j) - 1.0, 2.0 * coord(2 * j + 1) - 1.0))
                .collect();
            match self.model {
                Model::Ball => {
                    let norm = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                    let radius = coord(2 * n).sqrt();
                    for x in z.iter_mut() {
                        *x *= radius / norm.max(1e-300);
                    }
                    z.push(num_complex::Complex64::new(0.0, 0.0));
                }
                Model::Siegel => {
                    let nz = n - 1;
                    let h: f64 = z[..nz].iter().map(|x| x.norm_sqr()).sum();
                    z[nz] = num_complex::Complex64::new(4.0 * z[nz].re, h + 4.0 * coord(2 * n));
                }
            }
            best = best.min(c.eval_flat(&z).norm());
        }
        best
    }
}

/// Rank of the coefficient matrix whose rows are the given polynomials.
pub fn coefficient_rank<S: Scalar>(polys: &[HoloPoly<S>], tol: f64) -> usize {
    let mut monos: Vec<Mono> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    monos.sort();
    monos.dedup();
    let rows: linalg::Matrix<S> = polys
        .iter()
        .map(|p| monos.iter().map(|e| p.coeff(e)).collect())
        .collect();
    linalg::rank(&rows, tol)
}

/// Exact boundary point `(z₀, u₀ + i|z₀|²)`.
pub fn boundary_point<S: Scalar>(z0: &[S], u0: &S) -> (Vec<S>, S) {
    let n2 = z0.iter().fold(S::zero(), |s, x| s + x.norm_sq());
    (z0.to_vec(), u0.clone() + S::imag_unit() * n2)
}

/// Seeded boundary points of `∂H_n` with small Gaussian-rational coordinates.
///
/// All coordinates of one point share a denominator, which keeps the heights
/// of exact jets at that point low. No coordinate is zero.
pub fn sample_boundary_points<R: Rng>(n: usize, count: usize, rng: &mut R) -> Vec<(Vec<GaussianRational>, GaussianRational)> {
    (0..count)
        .map(|_| {
            let d = [4, 5, 6, 8][rng.gen_range(0..4)];
            let z0: Vec<GaussianRational> = (0..n - 1)
                .map(|_| {
                    // nonzero real part keeps the point off the coordinate hyperplanes
                    let re = rng.gen_range(1..=3) * if rng.gen() { 1 } else { -1 };
                    GaussianRational::complex((re, d), (rng.gen_range(-3..=3), d))
                })
                .collect();
            let u0 = GaussianRational::ratio(rng.gen_range(-6..=6), d);
            boundary_point(&z0, &u0)
        })
        .collect()
}

impl<S: Scalar> fmt::Display for RationalMap<S> {
    /// The map file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.model != self.target_model {
            writeln!(f, "model={} target={} n={} N={}", self.model, self.target_model, self.n, self.target_dim)?;
        } else {
            writeln!(f, "model={} n={} N={}", self.model, self.n, self.target_dim)?;
        }
        for p in &self.num {
            writeln!(f, "{p}")?;
        }
        writeln!(f, "denominator: {}", self.den)
    }
}

impl<S: Scalar> RationalMap<S> {
    /// Parse the map file format (blank lines and `#` comments ignored).
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty map file".into()))?;
        let (mut model, mut target, mut n, mut nn) = (None, None, None, None);
        for field in header.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            let int = |v: &str| v.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer `{v}`")));
            match k {
                "model" => model = Some(v.parse::<Model>()?),
                "target" => target = Some(v.parse::<Model>()?),
                "n" => n = Some(int(v)?),
                "N" => nn = Some(int(v)?),
                _ => return Err(Error::Parse(format!("unknown header key `{k}`"))),
            }
        }
        let model = model.ok_or_else(|| Error::Parse("header lacks model".into()))?;
        let n = n.ok_or_else(|| Error::Parse("header lacks n".into()))?;
        let nn = nn.ok_or_else(|| Error::Parse("header lacks N".into()))?;
        let nz = model.nz(n);
        let mut num = Vec::new();
        let mut den = None;
        for l in lines {
            if let Some(d) = l.strip_prefix("denominator:") {
                den = Some(HoloPoly::parse(d, nz)?);
            } else if den.is_some() {
                return Err(Error::Parse("components after the denominator".into()));
            } else {
                num.push(HoloPoly::parse(l, nz)?);
            }
        }
        if num.len() != nn {
            return Err(Error::Parse(format!("expected {nn} components, found {}", num.len())));
        }
        let den = den.ok_or_else(|| Error::Parse("missing denominator line".into()))?;
        let map = RationalMap {
            model,
            target_model: target.unwrap_or(model),
            n,
            target_dim: nn,
            num,
            den,
        };
        map.validate()?;
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_traits::{One, Zero};

    type Q = GaussianRational;

    fn whitney(n: usize) -> RationalMap<Q> {
        let mut num: Vec<HoloPoly<Q>> = (0..n - 1).map(|k| HoloPoly::var(n, k)).collect();
        let zn = HoloPoly::var(n, n - 1);
        num.extend((0..n).map(|k| zn.mul(&HoloPoly::var(n, k))));
        RationalMap::polynomial(Model::Ball, n, num).unwrap()
    }

    #[test]
    fn whitney_properness_certificate() {
        let v = whitney(3).is_proper(0.0);
        assert!(v.proper);
        assert_eq!(v.certificate.unwrap(), HermPoly::parse("1 + z3*~z3", 3).unwrap());
        let mut bad = whitney(3);
        bad.num[0] = bad.num[0].scale(&rat(1001, 1000));
        let v = bad.is_proper(0.0);
        assert!(!v.proper && !v.witness.unwrap().is_zero());
    }

    #[test]
    fn file_round_trip() {
        let w = whitney(3);
        let text = w.to_string();
        assert_eq!(RationalMap::<Q>::parse_file(&text).unwrap(), w);
        assert!(RationalMap::<Q>::parse_file("model=ball n=2 N=1\nz1\n").is_err());
    }

    #[test]
    fn transport_round_trip() {
        for n in [2, 3] {
            let w = whitney(n);
            let s = w.conjugate_model().unwrap();
            assert_eq!(s.model, Model::Siegel);
            assert!(s.is_proper(0.0).proper);
            let back = s.conjugate_model().unwrap();
            assert!(back.same_map(&w, 0.0));
        }
    }

    #[test]
    fn linear_embedding_to_siegel() {
        // (z', 0, z_n): the Cayley transforms single out the last coordinate
        let nz = 3;
        let num = vec![
            HoloPoly::z(nz, 0),
            HoloPoly::z(nz, 1),
            HoloPoly::zero(nz),
            HoloPoly::z(nz, 2),
        ];
        let l = RationalMap::<Q>::polynomial(Model::Ball, 3, num).unwrap();
        let s = l.conjugate_model().unwrap();
        assert!(s.same_map(&RationalMap::linear_embedding(Model::Siegel, 3, 4), 0.0));
        assert_eq!(s.num[3], HoloPoly::w(2));
        assert!(s.num[2].is_zero());
    }

    #[test]
    fn identity_transport() {
        let id = RationalMap::<Q>::identity(Model::Ball, 3);
        let s = id.conjugate_model().unwrap();
        assert!(s.same_map(&RationalMap::identity(Model::Siegel, 3), 0.0));
    }

    #[test]
    fn basepoint_translation() {
        let s = whitney(3).conjugate_model().unwrap();
        let (z0, w0) = boundary_point(&[rat::<Q>(1, 2), Q::zero()], &Q::zero());
        assert_eq!(w0, Q::complex((0, 1), (1, 4)));
        let fp = s.translate_basepoint(&z0, &w0).unwrap();
        assert!(fp.eval(&[Q::zero(), Q::zero(), Q::zero()]).unwrap().iter().all(Zero::is_zero));
        assert!(fp.is_proper(0.0).proper);
        let f0 = s.translate_basepoint(&[Q::zero(), Q::zero()], &Q::zero()).unwrap();
        if s.eval(&[Q::zero(), Q::zero(), Q::zero()]).unwrap().iter().all(Zero::is_zero) {
            assert!(f0.same_map(&s, 0.0));
        }
    }

    #[test]
    fn hulls() {
        assert_eq!(RationalMap::<Q>::linear_embedding(Model::Ball, 3, 5).affine_hull_dim(0.0), 3);
        assert_eq!(whitney(3).affine_hull_dim(0.0), 5);
        let lifted = RationalMap::<Q>::identity(Model::Ball, 3).whitney_lift().unwrap();
        assert_eq!(lifted, whitney(3));
        let twice = whitney(2).whitney_lift().unwrap();
        assert!(twice.is_proper(0.0).proper);
        assert_eq!(twice.degree(), 3);
        assert_eq!(twice.affine_hull_dim(0.0), 4);
    }

    #[test]
    fn denominator_sampling() {
        let s = whitney(2).conjugate_model().unwrap();
        assert!(s.sampled_min_denominator(200) > 0.0);
        assert!(RationalMap::<Q>::identity(Model::Ball, 2).sampled_min_denominator(50) == 1.0);
        let _ = Q::one();
    }
}
