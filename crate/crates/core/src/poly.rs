//! Sparse multivariate polynomials.
//!
//! A [`HoloPoly`] lives in `(z_1..z_m, w)`; a [`HermPoly`] lives in
//! `(z, z̄, u)` and represents a real-analytic function on the Heisenberg
//! boundary `Im w = |z|²`. Ball-model maps use `m = n` and never mention `w`.
//! Both share one exponent-vector representation with lexicographic order.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mono(pub SmallVec<[u8; 24]>);

impl Mono {
    pub fn zero(width: usize) -> Self {
        Mono(SmallVec::from_elem(0, width))
    }

    pub fn from_slice(e: &[u8]) -> Self {
        Mono(SmallVec::from_slice(e))
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Index<usize> for Mono {
    type Output = u8;
    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

/// Variable layout of a polynomial family.
pub trait Kind: Clone + Copy + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    fn width(nz: usize) -> usize;
    fn weight(nz: usize, e: &Mono) -> usize;
    fn var_name(nz: usize, idx: usize) -> String;
    fn parse_var(nz: usize, name: &str) -> Option<usize>;
}

/// Layout `(z_1..z_m, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Holo;

/// Layout `(z_1..z_m, z̄_1..z̄_m, u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Herm;

fn parse_z_index(nz: usize, name: &str) -> Option<usize> {
    let k: usize = name.strip_prefix('z')?.parse().ok()?;
    (1..=nz).contains(&k).then(|| k - 1)
}

impl Kind for Holo {
    fn width(nz: usize) -> usize {
        nz + 1
    }
    fn weight(nz: usize, e: &Mono) -> usize {
        e.0[..nz].iter().map(|&x| x as usize).sum::<usize>() + 2 * e.0[nz] as usize
    }
    fn var_name(nz: usize, idx: usize) -> String {
        if idx == nz {
            "w".into()
        } else {
            format!("z{}", idx + 1)
        }
    }
    fn parse_var(nz: usize, name: &str) -> Option<usize> {
        if name == "w" {
            Some(nz)
        } else {
            parse_z_index(nz, name)
        }
    }
}

impl Kind for Herm {
    fn width(nz: usize) -> usize {
        2 * nz + 1
    }
    fn weight(nz: usize, e: &Mono) -> usize {
        e.0[..2 * nz].iter().map(|&x| x as usize).sum::<usize>() + 2 * e.0[2 * nz] as usize
    }
    fn var_name(nz: usize, idx: usize) -> String {
        if idx == 2 * nz {
            "u".into()
        } else if idx >= nz {
            format!("~z{}", idx - nz + 1)
        } else {
            format!("z{}", idx + 1)
        }
    }
    fn parse_var(nz: usize, name: &str) -> Option<usize> {
        if name == "u" {
            Some(2 * nz)
        } else if let Some(rest) = name.strip_prefix('~') {
            parse_z_index(nz, rest).map(|k| k + nz)
        } else {
            parse_z_index(nz, name)
        }
    }
}

/// Sparse polynomial with no stored zero coefficients.
#[derive(Clone, PartialEq)]
pub struct Poly<S, K> {
    nz: usize,
    terms: BTreeMap<Mono, S>,
    kind: PhantomData<K>,
}

pub type HoloPoly<S> = Poly<S, Holo>;
pub type HermPoly<S> = Poly<S, Herm>;

impl<S: Scalar, K: Kind> Poly<S, K> {
    pub fn zero(nz: usize) -> Self {
        Poly { nz, terms: BTreeMap::new(), kind: PhantomData }
    }

    pub fn constant(nz: usize, c: S) -> Self {
        let mut p = Self::zero(nz);
        p.add_term(Mono::zero(K::width(nz)), c);
        p
    }

    pub fn one(nz: usize) -> Self {
        Self::constant(nz, S::one())
    }

    pub fn monomial(nz: usize, e: &[u8], c: S) -> Self {
        assert_eq!(e.len(), K::width(nz), "exponent vector width");
        let mut p = Self::zero(nz);
        p.add_term(Mono::from_slice(e), c);
        p
    }

    /// The variable with flat index `idx`.
    pub fn var(nz: usize, idx: usize) -> Self {
        let mut e = Mono::zero(K::width(nz));
        e.0[idx] = 1;
        let mut p = Self::zero(nz);
        p.add_term(e, S::one());
        p
    }

    pub fn from_terms(nz: usize, terms: impl IntoIterator<Item = (Mono, S)>) -> Self {
        let mut p = Self::zero(nz);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn width(&self) -> usize {
        K::width(self.nz)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &S)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Mono, S> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Mono) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeff_of(&self, e: &[u8]) -> S {
        self.coeff(&Mono::from_slice(e))
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Mono::zero(self.width()))
    }

    pub fn add_term(&mut self, e: Mono, c: S) {
        debug_assert_eq!(e.0.len(), self.width());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nz != other.nz {
            return Err(Error::Dimension(format!(
                "polynomials in {} and {} variables",
                self.nz, other.nz
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_filtered(other, |_| true))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("variable-count mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("variable-count mismatch")
    }

    /// Product with all terms of weighted degree above `max_weight` dropped.
    pub fn mul_trunc(&self, other: &Self, max_weight: usize) -> Self {
        assert_eq!(self.nz, other.nz, "variable-count mismatch");
        let nz = self.nz;
        self.mul_filtered(other, |e| K::weight(nz, e) <= max_weight)
    }

    fn mul_filtered(&self, other: &Self, keep: impl Fn(&Mono) -> bool) -> Self {
        let mut acc: BTreeMap<Mono, S> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.mul(eb);
                if !keep(&e) {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => *o.get_mut() += c,
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { nz: self.nz, terms: acc, kind: PhantomData }
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.nz);
        }
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(self.nz);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        Self::from_terms(self.nz, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Same polynomial over another field.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T, K> {
        Poly::from_terms(self.nz, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn filter(&self, keep: impl Fn(&Mono) -> bool) -> Self {
        Poly {
            nz: self.nz,
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
            kind: PhantomData,
        }
    }

    pub fn weight_of(&self, e: &Mono) -> usize {
        K::weight(self.nz, e)
    }

    /// Highest weighted degree among the terms (0 for the zero polynomial).
    pub fn weighted_degree(&self) -> usize {
        self.terms.keys().map(|e| K::weight(self.nz, e)).max().unwrap_or(0)
    }

    /// Lowest weighted degree among the terms, `None` for zero.
    pub fn weighted_order(&self) -> Option<usize> {
        self.terms.keys().map(|e| K::weight(self.nz, e)).min()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(Mono::total).max().unwrap_or(0)
    }

    pub fn weighted_part(&self, d: usize) -> Self {
        let nz = self.nz;
        self.filter(|e| K::weight(nz, e) == d)
    }

    pub fn truncate(&self, max_weight: usize) -> Self {
        let nz = self.nz;
        self.filter(|e| K::weight(nz, e) <= max_weight)
    }

    pub fn derivative(&self, idx: usize) -> Self {
        Self::from_terms(
            self.nz,
            self.terms.iter().filter(|(e, _)| e[idx] > 0).map(|(e, c)| {
                let mut d = e.clone();
                d.0[idx] -= 1;
                (d, c.clone() * S::from_i64(e[idx] as i64))
            }),
        )
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Zero exactly (exact fields) or up to `tol` in absolute value.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(tol))
    }

    /// Drop coefficients with modulus at most `tol` (no-op for exact fields).
    pub fn prune(&self, tol: f64) -> Self {
        if S::EXACT {
            return self.clone();
        }
        self.filter_coeffs(|c| c.abs_f64() > tol)
    }

    fn filter_coeffs(&self, keep: impl Fn(&S) -> bool) -> Self {
        Poly {
            nz: self.nz,
            terms: self.terms.iter().filter(|(_, c)| keep(c)).map(|(e, c)| (e.clone(), c.clone())).collect(),
            kind: PhantomData,
        }
    }

    /// Evaluate at values for every flat variable.
    pub fn eval_flat(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.width(), "point dimension");
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in x.iter().zip(e.0.iter()) {
                for _ in 0..k {
                    t *= v.clone();
                }
            }
            acc += t;
        }
        acc
    }

    /// Multivariate division by a single divisor under the lex order.
    ///
    /// A single polynomial is a Gröbner basis of its ideal, so the remainder
    /// vanishes exactly when `self` is a multiple of `divisor`. The leading
    /// coefficient must be invertible; the step is a triangular solve of the
    /// coefficient system `divisor · Q = self`.
    pub fn divide(&self, divisor: &Self) -> (Self, Self) {
        assert_eq!(self.nz, divisor.nz, "variable-count mismatch");
        let Some((lead, lc)) = divisor.terms.iter().next_back() else {
            panic!("division by the zero polynomial");
        };
        let tail: Vec<(Mono, S)> = divisor
            .terms
            .iter()
            .rev()
            .skip(1)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        let mut work = self.terms.clone();
        let mut quot = Self::zero(self.nz);
        let mut rem = Self::zero(self.nz);
        while let Some((e, c)) = work.pop_last() {
            if !lead.divides(&e) {
                rem.terms.insert(e, c);
                continue;
            }
            let qe = e.div(lead);
            let qc = c / lc.clone();
            for (te, tc) in &tail {
                let m = qe.mul(te);
                let v = -(qc.clone() * tc.clone());
                match work.entry(m) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(v);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += v;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quot.add_term(qe, qc);
        }
        (quot, rem)
    }

    /// `Some(q)` when `self = divisor · q`, with float remainders judged
    /// relative to the largest input coefficient.
    pub fn exact_quotient(&self, divisor: &Self, tol: f64) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero(self.nz));
        }
        let (q, r) = self.divide(divisor);
        let scale = self.max_abs_coeff().max(1.0);
        r.is_negligible(tol * scale).then_some(q)
    }

    fn write_coeff(f: &mut fmt::Formatter<'_>, c: &S, first: bool, bare: bool) -> fmt::Result {
        let (re, im) = c.part_strings();
        let re_zero = c.re().is_zero();
        let im_zero = (c.clone() - c.re()).is_zero();
        let sign = |f: &mut fmt::Formatter<'_>, neg: bool| -> fmt::Result {
            match (first, neg) {
                (true, true) => write!(f, "-"),
                (true, false) => Ok(()),
                (false, true) => write!(f, " - "),
                (false, false) => write!(f, " + "),
            }
        };
        if im_zero || re_zero {
            let (body, imag) = if im_zero { (re, false) } else { (im, true) };
            let (neg, mag) = match body.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, body),
            };
            sign(f, neg)?;
            let unit = mag == "1";
            match (imag, unit, bare) {
                (false, true, true) => Ok(()),
                (false, _, true) => write!(f, "{mag}*"),
                (false, _, false) => write!(f, "{mag}"),
                (true, true, true) => write!(f, "i*"),
                (true, true, false) => write!(f, "i"),
                (true, false, true) => write!(f, "{mag}*i*"),
                (true, false, false) => write!(f, "{mag}*i"),
            }
        } else {
            sign(f, false)?;
            let (op, im_mag) = match im.strip_prefix('-') {
                Some(m) => ('-', m.to_string()),
                None => ('+', im),
            };
            write!(f, "({re}{op}{im_mag}*i)")?;
            if bare {
                write!(f, "*")?;
            }
            Ok(())
        }
    }
}

impl<S: Scalar, K: Kind> fmt::Display for Poly<S, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let name = K::var_name(self.nz, i);
                    if x == 1 {
                        name
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            Self::write_coeff(f, c, k == 0, !vars.is_empty())?;
            write!(f, "{}", vars.join("*"))?;
        }
        Ok(())
    }
}

impl<S: Scalar, K: Kind> fmt::Debug for Poly<S, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nz, self)
    }
}

/// Recursive-descent parser for the polynomial grammar.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nz: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr<S: Scalar, K: Kind>(&mut self) -> Result<Poly<S, K>> {
        let mut acc = Poly::zero(self.nz);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term::<S, K>()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term<S: Scalar, K: Kind>(&mut self) -> Result<Poly<S, K>> {
        let mut acc = self.factor::<S, K>()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor::<S, K>()?);
        }
        Ok(acc)
    }

    fn factor<S: Scalar, K: Kind>(&mut self) -> Result<Poly<S, K>> {
        let base = self.atom::<S, K>()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn number_token(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn atom<S: Scalar, K: Kind>(&mut self) -> Result<Poly<S, K>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr::<S, K>()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = self.number_token().to_string();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.number_token();
                    lit = format!("{lit}/{den}");
                }
                let c = S::parse_real(&lit).ok_or_else(|| self.err("bad number"))?;
                Ok(Poly::constant(self.nz, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'~' => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "i" {
                    return Ok(Poly::constant(self.nz, S::imag_unit()));
                }
                let idx = K::parse_var(self.nz, name)
                    .ok_or_else(|| self.err(&format!("unknown variable `{name}`")))?;
                Ok(Poly::var(self.nz, idx))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

impl<S: Scalar, K: Kind> Poly<S, K> {
    /// Parse the text grammar with `nz` z-variables.
    pub fn parse(s: &str, nz: usize) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, nz };
        let r = p.expr::<S, K>()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }
}

/// Weighted blocks `H^{(k,l)}(z)` of a holomorphic polynomial, keyed by weighted degree.
pub type WeightedBlocks<S> = BTreeMap<usize, Vec<(usize, usize, HoloPoly<S>)>>;

impl<S: Scalar> HoloPoly<S> {
    pub fn z(nz: usize, j: usize) -> Self {
        Self::var(nz, j)
    }

    pub fn w(nz: usize) -> Self {
        Self::var(nz, nz)
    }

    pub fn has_w(&self) -> bool {
        self.terms.keys().any(|e| e[self.nz] > 0)
    }

    /// Evaluate at `(z, w)`.
    pub fn eval(&self, z: &[S], w: &S) -> S {
        let mut x = z.to_vec();
        x.push(w.clone());
        self.eval_flat(&x)
    }

    /// Substitute `w = u + i|z|²`.
    pub fn restrict_to_boundary(&self) -> HermPoly<S> {
        let nz = self.nz;
        let max_w = self.terms.keys().map(|e| e[nz]).max().unwrap_or(0);
        let mut wpow = vec![HermPoly::one(nz)];
        let boundary_w = HermPoly::var(nz, 2 * nz).add(&HermPoly::norm_sq(nz).scale(&S::imag_unit()));
        for k in 1..=max_w as usize {
            wpow.push(wpow[k - 1].mul(&boundary_w));
        }
        let mut acc = HermPoly::zero(nz);
        for (e, c) in &self.terms {
            let mut z = Mono::zero(2 * nz + 1);
            z.0[..nz].copy_from_slice(&e.0[..nz]);
            let zpart = HermPoly::from_terms(nz, [(z, c.clone())]);
            acc = acc.add(&zpart.mul(&wpow[e[nz] as usize]));
        }
        acc
    }

    /// Complex conjugate on the boundary, a polynomial in `z̄` and `u`.
    pub fn conj_boundary(&self) -> HermPoly<S> {
        self.restrict_to_boundary().conj()
    }

    /// `H^{(k,l)}(z)`: the coefficient of `w^l` restricted to z-degree `k`.
    pub fn block(&self, k: usize, l: usize) -> Self {
        let nz = self.nz;
        Self::from_terms(
            nz,
            self.terms
                .iter()
                .filter(|(e, _)| e[nz] as usize == l && e.0[..nz].iter().map(|&x| x as usize).sum::<usize>() == k)
                .map(|(e, c)| {
                    let mut d = e.clone();
                    d.0[nz] = 0;
                    (d, c.clone())
                }),
        )
    }

    /// All nonzero blocks `(k, l, H^{(k,l)})`, grouped by weighted degree `k + 2l`.
    pub fn weighted_decompose(&self) -> WeightedBlocks<S> {
        let nz = self.nz;
        let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        for e in self.terms.keys() {
            let k = e.0[..nz].iter().map(|&x| x as usize).sum();
            seen.insert((k, e[nz] as usize), ());
        }
        let mut out: WeightedBlocks<S> = BTreeMap::new();
        for &(k, l) in seen.keys() {
            out.entry(k + 2 * l).or_default().push((k, l, self.block(k, l)));
        }
        out
    }

    /// Drop terms of z-degree above `zcap`.
    pub fn cap_z(&self, zcap: usize) -> Self {
        let nz = self.nz;
        self.filter(|e| e.0[..nz].iter().map(|&x| x as usize).sum::<usize>() <= zcap)
    }

    /// `mul_trunc` that also drops terms of z-degree above `zcap`. The z-degree
    /// is additive, so low z-degree parts of a product only see low parts of
    /// the factors.
    pub fn mul_trunc_capped(&self, other: &Self, max_weight: usize, zcap: usize) -> Self {
        assert_eq!(self.nz, other.nz, "variable-count mismatch");
        let nz = self.nz;
        self.mul_filtered(other, |e| {
            let zd: usize = e.0[..nz].iter().map(|&x| x as usize).sum();
            zd <= zcap && zd + 2 * e.0[nz] as usize <= max_weight
        })
    }

    /// Multiply by `w^l`.
    pub fn times_w_pow(&self, l: u8) -> Self {
        let nz = self.nz;
        Self::from_terms(
            nz,
            self.terms.iter().map(|(e, c)| {
                let mut d = e.clone();
                d.0[nz] += l;
                (d, c.clone())
            }),
        )
    }

    /// Substitute a polynomial for every variable (`subs.len() = nz + 1`).
    pub fn compose(&self, subs: &[HoloPoly<S>]) -> HoloPoly<S> {
        self.compose_trunc(subs, usize::MAX)
    }

    /// Composition with products truncated at weighted degree `max_weight`.
    pub fn compose_trunc(&self, subs: &[HoloPoly<S>], max_weight: usize) -> HoloPoly<S> {
        self.compose_trunc_capped(subs, max_weight, usize::MAX)
    }

    /// `compose_trunc` also dropping terms of z-degree above `zcap`.
    pub fn compose_trunc_capped(&self, subs: &[HoloPoly<S>], max_weight: usize, zcap: usize) -> HoloPoly<S> {
        assert_eq!(subs.len(), self.width(), "substitution arity");
        let out_nz = subs.first().map_or(0, |s| s.nz);
        let mut powers: Vec<Vec<HoloPoly<S>>> = Vec::with_capacity(subs.len());
        for (i, s) in subs.iter().enumerate() {
            let max = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
            let mut p = vec![HoloPoly::one(out_nz)];
            for k in 1..=max {
                p.push(p[k - 1].mul_trunc_capped(s, max_weight, zcap));
            }
            powers.push(p);
        }
        let mut acc = HoloPoly::zero(out_nz);
        for (e, c) in &self.terms {
            let mut t = HoloPoly::constant(out_nz, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t = t.mul_trunc_capped(&powers[i][k as usize], max_weight, zcap);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl<S: Scalar> HermPoly<S> {
    pub fn z(nz: usize, j: usize) -> Self {
        Self::var(nz, j)
    }

    pub fn zbar(nz: usize, j: usize) -> Self {
        Self::var(nz, nz + j)
    }

    pub fn u(nz: usize) -> Self {
        Self::var(nz, 2 * nz)
    }

    /// `|z|² = Σ z_j z̄_j`.
    pub fn norm_sq(nz: usize) -> Self {
        let mut p = Self::zero(nz);
        for j in 0..nz {
            let mut e = Mono::zero(2 * nz + 1);
            e.0[j] = 1;
            e.0[nz + j] = 1;
            p.add_term(e, S::one());
        }
        p
    }

    /// `|z|² − 1`.
    pub fn sphere(nz: usize) -> Self {
        Self::norm_sq(nz).sub(&Self::one(nz))
    }

    /// Swap `z ↔ z̄` and conjugate coefficients (`u` is real).
    pub fn conj(&self) -> Self {
        let nz = self.nz;
        Self::from_terms(
            nz,
            self.terms.iter().map(|(e, c)| {
                let mut d = e.clone();
                for j in 0..nz {
                    d.0.swap(j, nz + j);
                }
                (d, c.conj())
            }),
        )
    }

    /// `|z^α|`-degree, `|z̄^β|`-degree and `u`-power of a key.
    pub fn class_of(&self, e: &Mono) -> (usize, usize, usize) {
        let nz = self.nz;
        let a = e.0[..nz].iter().map(|&x| x as usize).sum();
        let b = e.0[nz..2 * nz].iter().map(|&x| x as usize).sum();
        (a, b, e[2 * nz] as usize)
    }

    /// Terms with `|α| = adeg` (z-degree), `|β| = bdeg` (z̄-degree), `u^upow`.
    pub fn extract_class(&self, adeg: usize, bdeg: usize, upow: usize) -> Self {
        self.filter(|e| self.class_of(e) == (adeg, bdeg, upow))
    }

    /// Every nonempty class keyed by `(adeg, bdeg, upow)`.
    pub fn classes(&self) -> BTreeMap<(usize, usize, usize), Self> {
        let mut out: BTreeMap<(usize, usize, usize), Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(self.class_of(e))
                .or_insert_with(|| Self::zero(self.nz))
                .add_term(e.clone(), c.clone());
        }
        out
    }

    /// `A` with `A·|z|² = self`, if it exists.
    pub fn divide_by_norm_sq(&self, tol: f64) -> Option<Self> {
        if self.nz == 0 {
            return self.is_negligible(tol).then(|| Self::zero(0));
        }
        self.exact_quotient(&Self::norm_sq(self.nz), tol)
    }

    /// `Q` with `(|z|² − 1)·Q = self`, if it exists.
    pub fn divide_by_sphere(&self, tol: f64) -> Option<Self> {
        self.exact_quotient(&Self::sphere(self.nz), tol)
    }

    /// Conjugation symmetry `coeff(α, β, γ) = conj(coeff(β, α, γ))`.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        self.sub(&self.conj()).is_negligible(tol)
    }

    /// Evaluate at `z` (with `z̄ = conj(z)`) and real `u`.
    pub fn eval(&self, z: &[S], u: &S) -> S {
        let mut x = z.to_vec();
        x.extend(z.iter().map(|v| v.conj()));
        x.push(u.clone());
        self.eval_flat(&x)
    }
}

impl<S: Scalar> FromStr for HoloPoly<S> {
    type Err = Error;
    /// Parse with the number of z-variables inferred from the largest index.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, infer_nz(s))
    }
}

/// Largest `zK` index mentioned in a polynomial string.
pub fn infer_nz(s: &str) -> usize {
    let b = s.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'z' {
            let start = i + 1;
            let mut j = start;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = s[start..j].parse::<usize>() {
                best = best.max(k);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

/// `|h|²` on the boundary for a vector of holomorphic components.
pub fn boundary_norm_sq<S: Scalar>(nz: usize, comps: &[HoloPoly<S>]) -> HermPoly<S> {
    let mut acc = HermPoly::zero(nz);
    for h in comps {
        let b = h.restrict_to_boundary();
        acc = acc.add(&b.mul(&b.conj()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, GaussianRational as Q};
    use num_complex::Complex64;

    type H = HoloPoly<Q>;
    type R = HermPoly<Q>;

    #[test]
    fn grammar_round_trip() {
        let p = H::parse("1/2*z1^2*w - i*z2", 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(H::parse(&p.to_string(), 2).unwrap(), p);
        let c = H::parse("(1/2+3/4*i)*z1 - (2-i)*w^2 + 7", 1).unwrap();
        assert_eq!(H::parse(&c.to_string(), 1).unwrap(), c);
        let h = R::parse("z1*~z2*u - 3/7*i*~z1^2 + u^3", 2).unwrap();
        assert_eq!(R::parse(&h.to_string(), 2).unwrap(), h);
        assert!(H::parse("z3", 2).is_err());
        assert!(H::parse("z1 +", 2).is_err());
    }

    #[test]
    fn float_round_trip() {
        let p = HoloPoly::<Complex64>::from_terms(
            1,
            [(Mono::from_slice(&[1, 0]), Complex64::new(0.1, -1.0 / 3.0))],
        );
        assert_eq!(HoloPoly::<Complex64>::parse(&p.to_string(), 1).unwrap(), p);
    }

    #[test]
    fn arithmetic_examples() {
        let z1 = H::z(1, 0);
        assert_eq!(z1.mul(&z1), H::parse("z1^2", 1).unwrap());
        let iz = H::parse("i*z1", 1).unwrap();
        assert_eq!(iz.conj_boundary(), R::parse("-i*~z1", 1).unwrap());
        let p = H::parse("2*z1 + w", 1).unwrap();
        assert_eq!(p.eval(&[rat(1, 2)], &Q::i()), Q::complex((1, 1), (1, 1)));
    }

    #[test]
    fn boundary_restriction() {
        let w = H::w(2);
        assert_eq!(w.restrict_to_boundary(), R::parse("u + i*z1*~z1 + i*z2*~z2", 2).unwrap());
        let w2 = w.mul(&w).restrict_to_boundary();
        let n = R::norm_sq(2);
        let expected = R::u(2)
            .pow(2)
            .add(&R::u(2).mul(&n).scale(&(rat::<Q>(2, 1) * Q::i())))
            .sub(&n.mul(&n));
        assert_eq!(w2, expected);
        assert_eq!(H::z(2, 0).restrict_to_boundary(), R::z(2, 0));
    }

    #[test]
    fn weighted_blocks() {
        let p = H::parse("z1 + z2*w^2", 2).unwrap();
        let d = p.weighted_decompose();
        assert_eq!((d[&1][0].0, d[&1][0].1), (1, 0));
        assert_eq!((d[&5][0].0, d[&5][0].1), (1, 2));
        let q = H::parse("z1^2*w", 2).unwrap().weighted_decompose();
        assert_eq!(q.keys().copied().collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn class_extraction() {
        let h = R::parse("z1*~z2*u + z1^2", 2).unwrap();
        assert_eq!(h.extract_class(1, 1, 1), R::parse("z1*~z2*u", 2).unwrap());
        let w = H::w(2).restrict_to_boundary();
        let ww = w.mul(&w.conj());
        let n = R::norm_sq(2);
        assert_eq!(ww.extract_class(2, 2, 0), n.mul(&n));
        let total = ww.classes().values().fold(R::zero(2), |a, c| a.add(c));
        assert_eq!(total, ww);
    }

    #[test]
    fn norm_sq_division() {
        let n = R::norm_sq(3);
        assert_eq!(n.mul(&n).divide_by_norm_sq(0.0), Some(n.clone()));
        assert_eq!(R::parse("z1*~z2", 3).unwrap().divide_by_norm_sq(0.0), None);
        assert_eq!(R::zero(3).divide_by_norm_sq(0.0), Some(R::zero(3)));
    }

    #[test]
    fn sphere_division() {
        // |W|² − 1 for the Whitney map in three variables
        let comps: Vec<H> = ["z1", "z2", "z3^2", "z3*z1", "z3*z2"]
            .iter()
            .map(|s| H::parse(s, 3).unwrap())
            .collect();
        let h = boundary_norm_sq(3, &comps).sub(&R::one(3));
        let q = h.divide_by_sphere(0.0).unwrap();
        assert_eq!(q, R::parse("1 + z3*~z3", 3).unwrap());
        assert_eq!(R::parse("z1*~z1 - 1", 2).unwrap().divide_by_sphere(0.0), None);
    }

    #[test]
    fn composition() {
        let p = H::parse("z1*w + w^2", 1).unwrap();
        let subs = vec![H::parse("2*z1", 1).unwrap(), H::parse("w + z1^2", 1).unwrap()];
        let direct = H::parse("2*z1*(w + z1^2) + (w + z1^2)^2", 1).unwrap();
        assert_eq!(p.compose(&subs), direct);
        assert_eq!(p.compose_trunc(&subs, 4), direct.truncate(4));
    }
}
