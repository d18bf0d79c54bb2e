//! Built-in proper maps at Gaussian-rational parameter points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{Model, RationalMap};
use crate::poly::HoloPoly;
use crate::scalar::{GaussianRational as Q, Scalar};

fn z(n: usize, k: usize) -> HoloPoly<Q> {
    HoloPoly::var(n, k)
}

/// `√(1 − x²)` for rational `x ∈ (0, 1)`, which must itself be rational.
pub fn complement(x: &Q) -> Result<Q> {
    let one = Q::ratio(1, 1);
    if !x.is_real() || x.re_f64() <= 0.0 || x.re_f64() >= 1.0 {
        return Err(Error::Precondition(format!("parameter {x} must lie in (0, 1)")));
    }
    (one - x.clone() * x.clone())
        .sqrt_real()
        .ok_or_else(|| Error::ExactUnsolvable(format!("√(1 − ({x})²) is irrational")))
}

/// Whitney map `(z', z_n z)` from `B^n` into `B^{2n−1}`.
pub fn whitney(n: usize) -> RationalMap<Q> {
    let mut num: Vec<HoloPoly<Q>> = (0..n - 1).map(|k| z(n, k)).collect();
    num.extend((0..n).map(|k| z(n, n - 1).mul(&z(n, k))));
    RationalMap::polynomial(Model::Ball, n, num).expect("well-formed")
}

/// D'Angelo map `(z', c z_n, s z_1 z_n, …, s z_n²)` with `s = √(1 − c²)`, into `B^{2n}`.
pub fn dangelo(n: usize, c: &Q) -> Result<RationalMap<Q>> {
    let s = complement(c)?;
    let mut num: Vec<HoloPoly<Q>> = (0..n - 1).map(|k| z(n, k)).collect();
    num.push(z(n, n - 1).scale(c));
    num.extend((0..n).map(|k| z(n, n - 1).mul(&z(n, k)).scale(&s)));
    RationalMap::polynomial(Model::Ball, n, num)
}

/// The degree-three monomial map into `B^{3n}`:
/// `(z_1..z_{n−2}, λz_{n−1}, z_n, λ'z_{n−1}(z_1..z_{n−1}, μz_n, μ'z_n z))`
/// with `λ' = √(1 − λ²)`, `μ' = √(1 − μ²)`.
pub fn example11(n: usize, lambda: &Q, mu: &Q) -> Result<RationalMap<Q>> {
    if n < 2 {
        return Err(Error::Precondition("n ≥ 2 required".into()));
    }
    let lc = complement(lambda)?;
    let mc = complement(mu)?;
    let mut num: Vec<HoloPoly<Q>> = (0..n - 2).map(|k| z(n, k)).collect();
    num.push(z(n, n - 2).scale(lambda));
    num.push(z(n, n - 1));
    let zl = z(n, n - 2).scale(&lc);
    num.extend((0..n - 1).map(|k| zl.mul(&z(n, k))));
    num.push(zl.mul(&z(n, n - 1)).scale(mu));
    num.extend((0..n).map(|k| zl.mul(&z(n, n - 1)).mul(&z(n, k)).scale(&mc)));
    RationalMap::polynomial(Model::Ball, n, num)
}

/// Rational map into `B^{3n−2}` with denominator `1 − a z_n`:
/// `(z', z_n z', z_n²(a' z', z_n − a)/(1 − a z_n))`, `a' = √(1 − a²)`.
pub fn fhjz(n: usize, a: &Q) -> Result<RationalMap<Q>> {
    let ac = complement(a)?;
    let zn = z(n, n - 1);
    let q = HoloPoly::one(n).sub(&zn.scale(a));
    let mut num: Vec<HoloPoly<Q>> = (0..n - 1).map(|k| z(n, k).mul(&q)).collect();
    num.extend((0..n - 1).map(|k| zn.mul(&z(n, k)).mul(&q)));
    let zn2 = zn.mul(&zn);
    num.extend((0..n - 1).map(|k| zn2.mul(&z(n, k)).scale(&ac)));
    num.push(zn2.mul(&zn.sub(&HoloPoly::constant(n, a.clone()))));
    RationalMap::new(Model::Ball, n, num, q)
}

/// Facts a catalog entry must reproduce when loaded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedFacts {
    pub proper: bool,
    pub degree: usize,
    pub geometric_rank: Option<usize>,
    pub affine_hull: usize,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<(String, Q)>,
    pub map: RationalMap<Q>,
    pub expected: ExpectedFacts,
}

pub fn whitney_entry(n: usize) -> CatalogEntry {
    CatalogEntry {
        name: format!("whitney({n})"),
        params: vec![],
        map: whitney(n),
        expected: ExpectedFacts { proper: true, degree: 2, geometric_rank: Some(1), affine_hull: 2 * n - 1 },
    }
}

pub fn dangelo_entry(n: usize, c: Q) -> Result<CatalogEntry> {
    Ok(CatalogEntry {
        name: format!("dangelo({n}, {c})"),
        map: dangelo(n, &c)?,
        params: vec![("c".into(), c)],
        expected: ExpectedFacts { proper: true, degree: 2, geometric_rank: Some(1), affine_hull: 2 * n },
    })
}

pub fn example11_entry(n: usize, lambda: Q, mu: Q) -> Result<CatalogEntry> {
    Ok(CatalogEntry {
        name: format!("example11({n}, {lambda}, {mu})"),
        map: example11(n, &lambda, &mu)?,
        params: vec![("lambda".into(), lambda), ("mu".into(), mu)],
        expected: ExpectedFacts { proper: true, degree: 3, geometric_rank: Some(2), affine_hull: 3 * n },
    })
}

pub fn fhjz_entry(n: usize, a: Q) -> Result<CatalogEntry> {
    Ok(CatalogEntry {
        name: format!("fhjz({n}, {a})"),
        map: fhjz(n, &a)?,
        params: vec![("a".into(), a)],
        expected: ExpectedFacts { proper: true, degree: 3, geometric_rank: Some(1), affine_hull: 3 * n - 2 },
    })
}

/// The default catalog, ordered by name.
pub fn catalog() -> Vec<CatalogEntry> {
    let three_fifths = Q::ratio(3, 5);
    let four_fifths = Q::ratio(4, 5);
    let mut v = vec![
        dangelo_entry(8, three_fifths.clone()).expect("3-4-5 point"),
        example11_entry(8, three_fifths.clone(), four_fifths).expect("3-4-5 point"),
        fhjz_entry(4, three_fifths).expect("3-4-5 point"),
        whitney_entry(2),
        whitney_entry(3),
        whitney_entry(8),
    ];
    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}

/// Look up a constructor by name with optional parameters, e.g. `example11 8 3/5 4/5`.
pub fn build(name: &str, n: usize, params: &[Q]) -> Result<RationalMap<Q>> {
    let p = |k: usize, default: (i64, i64)| params.get(k).cloned().unwrap_or_else(|| Q::ratio(default.0, default.1));
    match name {
        "whitney" => Ok(whitney(n)),
        "dangelo" => dangelo(n, &p(0, (3, 5))),
        "example11" => example11(n, &p(0, (3, 5)), &p(1, (4, 5))),
        "fhjz" => fhjz(n, &p(0, (3, 5))),
        "linear" => Ok(RationalMap::linear_embedding(Model::Ball, n, n + params.len())),
        _ => Err(Error::Parse(format!("unknown catalog map `{name}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(whitney(3).target_dim, 5);
        assert_eq!(dangelo(8, &Q::ratio(3, 5)).unwrap().target_dim, 16);
        assert_eq!(example11(8, &Q::ratio(3, 5), &Q::ratio(4, 5)).unwrap().target_dim, 24);
        assert_eq!(fhjz(4, &Q::ratio(3, 5)).unwrap().target_dim, 10);
        assert!(matches!(dangelo(3, &Q::ratio(1, 2)), Err(Error::ExactUnsolvable(_))));
    }

    #[test]
    fn all_proper() {
        for e in catalog() {
            assert!(e.map.is_proper(0.0).proper, "{}", e.name);
            assert_eq!(e.map.degree(), e.expected.degree, "{}", e.name);
            assert_eq!(e.map.affine_hull_dim(0.0), e.expected.affine_hull, "{}", e.name);
        }
        let f = dangelo(3, &Q::ratio(3, 5)).unwrap();
        let cert = f.is_proper(0.0).certificate.unwrap();
        assert_eq!(cert, crate::poly::HermPoly::parse("1 + 16/25*z3*~z3", 3).unwrap());
    }
}
