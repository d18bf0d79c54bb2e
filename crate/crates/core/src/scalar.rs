//! Coefficient fields.
//!
//! Every algorithm in the crate is written against [`Scalar`], which is
//! implemented by the exact field of Gaussian rationals and by binary64
//! complex numbers. Exact computation is the default; the float field is
//! used where a normalization needs square roots that leave `Q(i)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A field with complex conjugation, the coefficient domain of all polynomials.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    /// `true` for exact fields; zero tests are structural there.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn imag_unit() -> Self;
    fn from_gaussian(q: &GaussianRational) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(x: f64) -> Option<Self>;
    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re_f64(), self.im_f64())
    }
    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
    /// Real part as a scalar.
    fn re(&self) -> Self;
    /// Square root of a real nonnegative value, when it exists in the field.
    fn sqrt_real(&self) -> Option<Self>;
    /// Zero up to `tol` (exact fields ignore `tol`).
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs_f64() <= tol
        }
    }
    fn from_i64(k: i64) -> Self {
        Self::from_ratio(k, 1)
    }
    fn norm_sq(&self) -> Self {
        (self.clone() * self.conj()).re()
    }
    /// Parse a real literal: an integer, `a/b`, or a decimal.
    fn parse_real(s: &str) -> Option<Self>;
    /// Real and imaginary parts as literals accepted by [`Scalar::parse_real`].
    fn part_strings(&self) -> (String, String);
    /// A positive real factor that makes `v` primitive, when the field has one.
    fn content_scale(_v: &[Self]) -> Self {
        Self::one()
    }
}

/// Exact `a/b + (c/d)·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn complex(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        )
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Sign of the real part (meaningful for real values).
    pub fn real_cmp_zero(&self) -> Ordering {
        self.re.cmp(&BigRational::zero())
    }

    fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
        if q.denom().is_one() {
            write!(f, "{}", q.numer())
        } else {
            write!(f, "{}/{}", q.numer(), q.denom())
        }
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let root = |k: &BigInt| -> Option<BigInt> {
        let r = k.sqrt();
        (&r * &r == *k).then_some(r)
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `a/b`, `c/d*i`, or `a/b+c/d*i`, the coefficient syntax of the polynomial grammar.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => Self::write_rational(f, &self.re),
            (true, false) => {
                Self::write_rational(f, &self.im)?;
                write!(f, "*i")
            }
            (false, false) => {
                Self::write_rational(f, &self.re)?;
                if self.im.is_positive() {
                    write!(f, "+")?;
                }
                Self::write_rational(f, &self.im)?;
                write!(f, "*i")
            }
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad coefficient `{s}`"));
        let parse_q = |t: &str| -> Result<BigRational> {
            let t = t.trim();
            let (n, d) = match t.split_once('/') {
                Some((n, d)) => (n, d),
                None => (t, "1"),
            };
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        };
        if let Some(body) = s.strip_suffix("*i").or_else(|| s.strip_suffix('i')) {
            // split real and imaginary parts at the last sign that is not leading
            let split = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(k, _)| k)
                .last();
            let (re, im) = match split {
                Some(k) => (parse_q(&body[..k])?, &body[k..]),
                None => (BigRational::zero(), body),
            };
            let im = match im.trim() {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                t => parse_q(t.strip_prefix('+').unwrap_or(t))?,
            };
            Ok(Self::new(re, im))
        } else {
            Ok(Self::real(parse_q(s)?))
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::real(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(self.re * rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero Gaussian rational");
        if rhs.im.is_zero() {
            return Self::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        let den = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &den;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &den;
        Self::new(re, im)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for GaussianRational {
    fn sub_assign(&mut self, rhs: Self) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl MulAssign for GaussianRational {
    fn mul_assign(&mut self, rhs: Self) {
        *self = self.clone() * rhs;
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
    fn imag_unit() -> Self {
        Self::i()
    }
    fn from_gaussian(q: &GaussianRational) -> Self {
        q.clone()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::ratio(num, den)
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::real)
    }
    fn re_f64(&self) -> f64 {
        rational_to_f64(&self.re)
    }
    fn im_f64(&self) -> f64 {
        rational_to_f64(&self.im)
    }
    fn re(&self) -> Self {
        Self::real(self.re.clone())
    }
    fn content_scale(v: &[Self]) -> Self {
        let parts = v.iter().flat_map(|x| [&x.re, &x.im]).filter(|r| !r.is_zero());
        let (mut den, mut num) = (BigInt::one(), BigInt::zero());
        for r in parts {
            den = den.lcm(r.denom());
            num = num.gcd(r.numer());
        }
        if num.is_zero() {
            return Self::one();
        }
        Self::real(BigRational::new(den, num))
    }
    fn sqrt_real(&self) -> Option<Self> {
        if !self.im.is_zero() {
            return None;
        }
        rational_sqrt(&self.re).map(Self::real)
    }
    fn parse_real(s: &str) -> Option<Self> {
        parse_rational(s).map(Self::real)
    }
    fn part_strings(&self) -> (String, String) {
        let show = |q: &BigRational| {
            if q.denom().is_one() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        };
        (show(&self.re), show(&self.im))
    }
}

/// Integer, `a/b`, or finite decimal, parsed exactly.
fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        return (!d.is_zero()).then(|| n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return None;
    }
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int}{frac}");
    let num: BigInt = if digits.is_empty() { return None } else { digits.parse().ok()? };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(num, den);
    Some(if neg { -q } else { q })
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn imag_unit() -> Self {
        Complex64::i()
    }
    fn from_gaussian(q: &GaussianRational) -> Self {
        Complex64::new(q.re_f64(), q.im_f64())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Complex64::new(x, 0.0))
    }
    fn re_f64(&self) -> f64 {
        self.re
    }
    fn im_f64(&self) -> f64 {
        self.im
    }
    fn re(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn sqrt_real(&self) -> Option<Self> {
        // tolerate rounding noise in the imaginary part and slightly negative zeros
        let scale = self.norm().max(1.0);
        if self.im.abs() > 1e-8 * scale || self.re < -1e-12 * scale {
            return None;
        }
        Some(Complex64::new(self.re.max(0.0).sqrt(), 0.0))
    }
    fn parse_real(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            return Some(Complex64::new(n / d, 0.0));
        }
        s.parse::<f64>().ok().map(|x| Complex64::new(x, 0.0))
    }
    fn part_strings(&self) -> (String, String) {
        (format!("{}", self.re), format!("{}", self.im))
    }
}

/// Shorthand for a rational scalar in any field.
pub fn rat<S: Scalar>(num: i64, den: i64) -> S {
    S::from_ratio(num, den)
}

/// Exact field plus the option of a binary64 fallback, as chosen on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Parse(format!("unknown mode `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["1/2", "-3", "2/3*i", "-i", "1/2+3/4*i", "1-1/5*i", "0"] {
            let q: GaussianRational = s.parse().unwrap();
            let back: GaussianRational = q.to_string().parse().unwrap();
            assert_eq!(q, back, "{s}");
        }
        assert_eq!("-i".parse::<GaussianRational>().unwrap(), -GaussianRational::i());
        assert_eq!(
            "1/2+3/4*i".parse::<GaussianRational>().unwrap(),
            GaussianRational::complex((1, 2), (3, 4))
        );
    }

    #[test]
    fn conjugation_and_modulus() {
        let s = GaussianRational::complex((3, 5), (-4, 7));
        assert_eq!(s.conj().conj(), s);
        let m = s.clone() * s.conj();
        assert!(m.is_real());
        assert_eq!(s.norm_sq(), m);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(
            GaussianRational::ratio(9, 25).sqrt_real(),
            Some(GaussianRational::ratio(3, 5))
        );
        assert_eq!(GaussianRational::ratio(2, 1).sqrt_real(), None);
        assert_eq!(GaussianRational::i().sqrt_real(), None);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = GaussianRational::complex((1, 2), (1, 3));
        let b = GaussianRational::complex((-2, 5), (7, 4));
        assert_eq!((a.clone() * b.clone()) / b, a);
    }
}
