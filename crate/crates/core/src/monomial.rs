//! Exact feasibility search for proper monomial maps.
//!
//! A monomial map `(√x_α z^α)` is proper from `B^n` exactly when
//! `Σ x_α t^α ≡ 1` on the simplex `t_1 + … + t_n = 1` (with `t_i = |z_i|²`),
//! with all `x_α ≥ 0`. Substituting `t_n = 1 − Σ_{i<n} t_i` turns this into a
//! linear system in the `x_α`, solved exactly by the simplex in [`crate::simplex`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog;
use crate::error::{Error, Result};
use crate::linalg;
use crate::maps::{Model, RationalMap};
use crate::poly::HoloPoly;
use crate::scalar::{rat, GaussianRational as Q, Scalar};
use crate::simplex::{self, LpOutcome};
use crate::Complex64;

type R = BigRational;

/// Largest support accepted by [`monomial_feasibility`].
pub const MAX_SUPPORT: usize = 64;
/// Bound on the subsets visited when a sparser solution has to be searched for.
const MAX_SUBSETS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    Whitney,
    Dangelo,
    Example11,
}

impl std::str::FromStr for Pattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whitney" => Ok(Pattern::Whitney),
            "dangelo" => Ok(Pattern::Dangelo),
            "example11" => Ok(Pattern::Example11),
            _ => Err(Error::Parse(format!("unknown support pattern `{s}`"))),
        }
    }
}

/// Exponent vectors of the catalog map of the given shape.
pub fn pattern_support(pattern: Pattern, n: usize) -> Result<Vec<Vec<u8>>> {
    let f = match pattern {
        Pattern::Whitney => catalog::whitney(n),
        Pattern::Dangelo => catalog::dangelo(n, &rat(3, 5))?,
        Pattern::Example11 => catalog::example11(n, &rat(3, 5), &rat(4, 5))?,
    };
    Ok(f.num.iter().map(|p| p.terms().next().expect("monomial component").0 .0[..n].to_vec()).collect())
}

/// Every exponent of total degree `1..=d` in `n` variables, graded then lex.
pub fn all_monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, deg: usize, out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>) {
        if cur.len() == n - 1 {
            cur.push(deg as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=deg).rev() {
            cur.push(a as u8);
            rec(n, deg - a, out, cur);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for deg in 1..=d {
        rec(n, deg, &mut out, &mut Vec::new());
    }
    out
}

type Dense = BTreeMap<Vec<u8>, R>;

fn mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(R::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `t^α` with `t_n = 1 − Σ_{i<n} t_i`, as a polynomial in `t_1..t_{n−1}`.
fn substituted(alpha: &[u8]) -> Dense {
    let m = alpha.len() - 1;
    let mut lead = vec![0u8; m];
    lead.copy_from_slice(&alpha[..m]);
    let mut p = Dense::from([(lead, R::one())]);
    let mut last = Dense::from([(vec![0u8; m], R::one())]);
    for i in 0..m {
        let mut e = vec![0u8; m];
        e[i] = 1;
        last.insert(e, -R::one());
    }
    for _ in 0..alpha[m] {
        p = mul(&p, &last);
    }
    p
}

/// Coefficient matching system `A x = b`.
fn linear_system(support: &[Vec<u8>]) -> (Vec<Vec<R>>, Vec<R>) {
    let cols: Vec<Dense> = support.iter().map(|a| substituted(a)).collect();
    let mut keys: Vec<Vec<u8>> = cols.iter().flat_map(|c| c.keys().cloned()).collect();
    let m = support.first().map_or(0, |a| a.len() - 1);
    keys.push(vec![0u8; m]);
    keys.sort();
    keys.dedup();
    let a = keys.iter().map(|k| cols.iter().map(|c| c.get(k).cloned().unwrap_or_else(R::zero)).collect()).collect();
    let b = keys.iter().map(|k| if k.iter().all(|&x| x == 0) { R::one() } else { R::zero() }).collect();
    (a, b)
}

fn to_q(x: &R) -> Q {
    Q::real(x.clone())
}

fn rational_sqrt(x: &R) -> Option<R> {
    if x.is_negative() {
        return None;
    }
    let (p, q) = (x.numer(), x.denom());
    let (sp, sq): (BigInt, BigInt) = (p.sqrt(), q.sqrt());
    (&sp * &sp == *p && &sq * &sq == *q).then(|| R::new(sp, sq))
}

/// One point of the feasible set with its classification.
#[derive(Clone, Debug, Serialize)]
pub struct MonomialSolution {
    pub n: usize,
    pub support: Vec<Vec<u8>>,
    /// The squared moduli `x_α`, as rational literals.
    #[serde(serialize_with = "ser_rationals")]
    pub x: Vec<R>,
    /// Components actually used; for a monomial map this is its affine hull dimension.
    pub hull_dim: usize,
    /// `true` when every `x_α` is a rational square, so the map itself is exact.
    pub exact_map: bool,
}

fn ser_rationals<S: serde::Serializer>(x: &[R], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|v| v.to_string()))
}

impl MonomialSolution {
    fn new(n: usize, support: Vec<Vec<u8>>, x: Vec<R>) -> Self {
        let hull_dim = x.iter().filter(|v| !v.is_zero()).count();
        let exact_map = x.iter().all(|v| rational_sqrt(v).is_some());
        MonomialSolution { n, support, x, hull_dim, exact_map }
    }

    /// `Σ x_α t^α − 1` after substitution; zero exactly for a proper map.
    pub fn identity_residual(&self) -> usize {
        let (a, b) = linear_system(&self.support);
        a.iter().zip(&b).filter(|(row, bi)| row.iter().zip(&self.x).map(|(c, x)| c * x).sum::<R>() != **bi).count()
    }

    /// The exact monomial map when all `x_α` are rational squares.
    pub fn exact_map(&self, target_dim: usize) -> Option<RationalMap<Q>> {
        let n = self.n;
        let mut num = Vec::new();
        for (a, x) in self.support.iter().zip(&self.x) {
            if x.is_zero() {
                continue;
            }
            let mut e = a.clone();
            e.push(0);
            num.push(HoloPoly::monomial(n, &e, to_q(&rational_sqrt(x)?)));
        }
        let f = RationalMap::polynomial(Model::Ball, n, num).ok()?;
        Some(if target_dim > f.target_dim { f.zero_pad(target_dim) } else { f })
    }

    /// The map with floating square roots, for irrational `√x_α`.
    pub fn float_map(&self) -> RationalMap<Complex64> {
        let n = self.n;
        let num = self
            .support
            .iter()
            .zip(&self.x)
            .filter(|(_, x)| !x.is_zero())
            .map(|(a, x)| {
                let mut e = a.clone();
                e.push(0);
                let v = to_q(x).re_f64().sqrt();
                HoloPoly::monomial(n, &e, Complex64::new(v, 0.0))
            })
            .collect();
        RationalMap::polynomial(Model::Ball, n, num).expect("monomial map")
    }

    /// Properness of the instantiated map: exact when possible, else in float.
    pub fn verify_proper(&self) -> bool {
        match self.exact_map(0) {
            Some(f) => f.is_proper(0.0).proper,
            None => self.float_map().is_proper(1e-9).proper,
        }
    }
}

/// Outcome of a feasibility solve.
#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub n: usize,
    pub target_dim: usize,
    pub degree: usize,
    pub feasible: bool,
    /// A solution using at most `target_dim` components, preferring an exact
    /// (rational-square) point of the feasible set.
    pub solution: Option<MonomialSolution>,
    /// Dimension of the feasible polytope (0 for an isolated solution).
    pub family_dim: Option<usize>,
    /// Support entries that vanish on every feasible solution.
    pub forced_zero: Vec<Vec<u8>>,
    /// `true` when the solution uses all `target_dim` components, so it is not
    /// of the form `(G, 0′)`.
    pub full_hull: bool,
}

fn always_zero(a: &[Vec<R>], b: &[R], i: usize) -> bool {
    let mut c = vec![R::zero(); a[0].len()];
    c[i] = -R::one();
    matches!(simplex::minimize(a, b, &c), LpOutcome::Optimal { value, .. } if value.is_zero())
}

/// Squares `(k/m)²` used as trial parameter values.
fn square_candidates() -> Vec<R> {
    let mut v: Vec<R> = (1..=13i64)
        .flat_map(|m| (0..=m).map(move |k| R::new((k * k).into(), (m * m).into())))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Searches the affine solution set for a point whose coordinates are all rational squares.
fn square_point(a: &[Vec<R>], b: &[R], live: &[usize]) -> Option<Vec<R>> {
    let nv = a[0].len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| live.iter().map(|&j| to_q(&row[j])).chain(std::iter::once(to_q(bi))).collect())
        .collect();
    let pivots = linalg::rref(&mut m, 0.0);
    if pivots.contains(&live.len()) {
        return None;
    }
    let free: Vec<usize> = (0..live.len()).filter(|c| !pivots.contains(c)).collect();
    let cands = square_candidates();
    let total = cands.len().checked_pow(free.len() as u32).unwrap_or(usize::MAX).min(MAX_SUBSETS);
    // keep the square point with the most nonzero coordinates; stop at full support
    let mut best: Option<(usize, Vec<R>)> = None;
    for code in 0..total {
        let mut vals = vec![R::zero(); live.len()];
        let mut c = code;
        for &f in &free {
            vals[f] = cands[c % cands.len()].clone();
            c /= cands.len();
        }
        let mut ok = true;
        for (r, &p) in pivots.iter().enumerate() {
            let mut v = m[r][live.len()].re.clone();
            for &f in &free {
                v -= m[r][f].re.clone() * &vals[f];
            }
            if rational_sqrt(&v).is_none() {
                ok = false;
                break;
            }
            vals[p] = v;
        }
        if !ok {
            continue;
        }
        let nz = vals.iter().filter(|v| !v.is_zero()).count();
        if best.as_ref().is_some_and(|(b, _)| *b >= nz) {
            continue;
        }
        let mut x = vec![R::zero(); nv];
        for (k, &j) in live.iter().enumerate() {
            x[j] = vals[k].clone();
        }
        best = Some((nz, x));
        if nz == live.len() {
            break;
        }
    }
    best.map(|(_, x)| x)
}

/// Feasibility of a proper monomial map on the given support with at most
/// `target_dim` nonzero components.
pub fn monomial_feasibility(n: usize, target_dim: usize, d: usize, support: &[Vec<u8>]) -> Result<FeasibilityReport> {
    if n < 2 {
        return Err(Error::Precondition("n ≥ 2 required".into()));
    }
    if support.len() > MAX_SUPPORT {
        return Err(Error::Limit(format!("support of size {} exceeds the limit {MAX_SUPPORT}", support.len())));
    }
    if support.is_empty() || d == 0 {
        return Err(Error::Precondition("empty support or zero degree".into()));
    }
    for a in support {
        let deg: usize = a.iter().map(|&x| x as usize).sum();
        if a.len() != n || deg == 0 || deg > d {
            return Err(Error::Dimension(format!("exponent {a:?} is not a monomial of degree 1..={d} in {n} variables")));
        }
    }
    let (a, b) = linear_system(support);
    let empty = FeasibilityReport {
        n,
        target_dim,
        degree: d,
        feasible: false,
        solution: None,
        family_dim: None,
        forced_zero: vec![],
        full_hull: false,
    };
    let Some(vertex) = simplex::feasible_point(&a, &b) else { return Ok(empty) };
    let zero: Vec<bool> = (0..support.len()).into_par_iter().map(|i| always_zero(&a, &b, i)).collect();
    let live: Vec<usize> = (0..support.len()).filter(|&i| !zero[i]).collect();
    let live_rows: linalg::Matrix<Q> = a.iter().map(|row| live.iter().map(|&j| to_q(&row[j])).collect()).collect();
    let family_dim = live.len() - linalg::rank(&live_rows, 0.0);
    let forced_zero = (0..support.len()).filter(|&i| zero[i]).map(|i| support[i].clone()).collect();

    let mut candidates = Vec::new();
    if let Some(x) = square_point(&a, &b, &live) {
        candidates.push(x);
    }
    candidates.push(vertex);
    let fits = |x: &Vec<R>| x.iter().filter(|v| !v.is_zero()).count() <= target_dim;
    let mut solution = candidates.into_iter().find(fits).map(|x| MonomialSolution::new(n, support.to_vec(), x));
    if solution.is_none() {
        solution = sparse_search(&a, &b, target_dim).map(|x| MonomialSolution::new(n, support.to_vec(), x));
    }
    let full_hull = solution.as_ref().is_some_and(|s| s.hull_dim == target_dim);
    Ok(FeasibilityReport {
        feasible: solution.is_some(),
        solution,
        family_dim: Some(family_dim),
        forced_zero,
        full_hull,
        ..empty
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Feasible point supported on at most `max_nz` columns, by bounded subset enumeration.
fn sparse_search(a: &[Vec<R>], b: &[R], max_nz: usize) -> Option<Vec<R>> {
    let nv = a[0].len();
    if binom(nv, max_nz.min(nv)) > MAX_SUBSETS {
        return None;
    }
    subsets(nv, max_nz.min(nv)).into_par_iter().find_map_first(|cols| {
        let sub: Vec<Vec<R>> = a.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        simplex::feasible_point(&sub, b).map(|y| {
            let mut x = vec![R::zero(); nv];
            for (k, &j) in cols.iter().enumerate() {
                x[j] = y[k].clone();
            }
            x
        })
    })
}

/// Bounded exhaustive mode (`n ≤ 3`, `d ≤ 3`): every vertex of the feasible
/// polytope over all monomials of degree `1..=d` with at most `target_dim`
/// nonzero components. Vertices are the basic feasible solutions.
pub fn exhaustive_search(n: usize, target_dim: usize, d: usize) -> Result<Vec<MonomialSolution>> {
    if n > 3 || d > 3 || n < 2 {
        return Err(Error::Precondition("exhaustive mode is limited to 2 ≤ n ≤ 3, d ≤ 3".into()));
    }
    let support = all_monomials(n, d);
    let (a, b) = linear_system(&support);
    let rows: linalg::Matrix<Q> = a.iter().map(|r| r.iter().map(to_q).collect()).collect();
    let rank = linalg::rank(&rows, 0.0);
    let nv = support.len();
    let mut found: Vec<Vec<R>> = (1..=rank.min(target_dim))
        .flat_map(|k| subsets(nv, k))
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|cols| {
            let sub: Vec<Vec<Q>> = a.iter().map(|row| cols.iter().map(|&j| to_q(&row[j])).collect()).collect();
            if linalg::rank(&sub, 0.0) != cols.len() {
                return None;
            }
            let rhs: Vec<Q> = b.iter().map(to_q).collect();
            let y = linalg::solve(&sub, &rhs, 0.0)?;
            let y: Vec<R> = y.iter().map(|q| q.re.clone()).collect();
            if y.iter().any(|v| !v.is_positive()) {
                return None;
            }
            let mut x = vec![R::zero(); nv];
            for (k, &j) in cols.iter().enumerate() {
                x[j] = y[k].clone();
            }
            Some(x)
        })
        .collect();
    found.sort();
    found.dedup();
    Ok(found.into_iter().map(|x| MonomialSolution::new(n, support.clone(), x)).collect())
}

/// Runs independent supports in parallel.
pub fn feasibility_batch(n: usize, target_dim: usize, d: usize, supports: &[Vec<Vec<u8>>]) -> Vec<Result<FeasibilityReport>> {
    supports.par_iter().map(|s| monomial_feasibility(n, target_dim, d, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_of_t1t2() {
        // t1 t2 with t2 = 1 − t1 is t1 − t1²
        let p = substituted(&[1, 1]);
        assert_eq!(p.get(&vec![1]), Some(&R::one()));
        assert_eq!(p.get(&vec![2]), Some(&-R::one()));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(all_monomials(3, 3).len(), 19);
        assert_eq!(all_monomials(2, 2).len(), 5);
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(rational_sqrt(&R::new(9.into(), 25.into())), Some(R::new(3.into(), 5.into())));
        assert_eq!(rational_sqrt(&R::new(2.into(), 1.into())), None);
    }
}
