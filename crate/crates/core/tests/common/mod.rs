#![allow(dead_code)]

use ballmap::maps::{boundary_point, RationalMap};
use ballmap::normal_form::{normalize_thm21, Thm21Normalization};
use ballmap::{catalog, normalize, rat, Complex64, GaussianRational as Q, Scalar};

/// A generic boundary point of the unit sphere in `C^n`, in Siegel coordinates.
pub fn siegel_point(n: usize) -> (Vec<Q>, Q) {
    let mut zs = vec![rat::<Q>(1, 3), rat(-2, 7), Q::complex((1, 5), (1, 2))];
    zs.truncate(n - 1);
    zs.extend((zs.len()..n - 1).map(|k| rat::<Q>(1, 3 + 2 * k as i64)));
    boundary_point(&zs, &rat(1, 4))
}

pub fn to_float(f: &RationalMap<Q>) -> RationalMap<Complex64> {
    normalize::siegel_form(&f.convert(Complex64::from_gaussian)).unwrap()
}

/// Float normal form of `f` (a ball map) at [`siegel_point`].
pub fn normal_form_at(f: &RationalMap<Q>, order: usize) -> Thm21Normalization {
    let (z0, w0) = siegel_point(f.n);
    let cz: Vec<Complex64> = z0.iter().map(Complex64::from_gaussian).collect();
    normalize_thm21(&to_float(f), &cz, &Complex64::from_gaussian(&w0), order, 1e-9).unwrap()
}

pub fn example11(n: usize) -> RationalMap<Q> {
    catalog::example11(n, &rat(3, 5), &rat(4, 5)).unwrap()
}
