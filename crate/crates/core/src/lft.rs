//! Linear-fractional transformations `x ↦ (A x + b) / (c·x + d)`.
//!
//! Every automorphism used by the crate (Heisenberg translations, isotropy
//! elements, ball Möbius maps, unitaries) and both Cayley transforms are
//! projective matrices, so composition is a matrix product.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, zeros, Matrix};
use crate::scalar::{GaussianRational, Scalar};

/// Projective matrix of shape `(m + 1) × (n + 1)`; the last row is the
/// denominator and the last column the constant terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Lft<S> {
    pub m: Matrix<S>,
}

impl<S: Scalar> Lft<S> {
    pub fn from_matrix(m: Matrix<S>) -> Self {
        Lft { m }
    }

    pub fn identity(n: usize) -> Self {
        Lft { m: linalg::identity(n + 1) }
    }

    /// Source dimension.
    pub fn dim_in(&self) -> usize {
        self.m[0].len() - 1
    }

    /// Target dimension.
    pub fn dim_out(&self) -> usize {
        self.m.len() - 1
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Lft<S>) -> Lft<S> {
        assert_eq!(self.dim_in(), other.dim_out(), "composition dimensions");
        Lft { m: linalg::mat_mul(&self.m, &other.m) }
    }

    pub fn inverse(&self) -> Result<Lft<S>> {
        linalg::inverse(&self.m, 1e-12)
            .map(|m| Lft { m })
            .ok_or_else(|| Error::Precondition("singular transformation".into()))
    }

    /// Image of a point; `None` at a pole.
    pub fn apply(&self, x: &[S]) -> Option<Vec<S>> {
        let n = self.dim_in();
        assert_eq!(x.len(), n);
        let row = |r: &Vec<S>| -> S {
            let mut s = r[n].clone();
            for (a, v) in r.iter().zip(x) {
                s += a.clone() * v.clone();
            }
            s
        };
        let den = row(self.m.last().unwrap());
        if den.is_negligible(1e-300) {
            return None;
        }
        Some(self.m[..self.dim_out()].iter().map(|r| row(r) / den.clone()).collect())
    }

    /// Equal up to a nonzero scalar factor.
    pub fn projectively_eq(&self, other: &Lft<S>, tol: f64) -> bool {
        if self.m.len() != other.m.len() || self.dim_in() != other.dim_in() {
            return false;
        }
        let flat_a: Vec<&S> = self.m.iter().flatten().collect();
        let flat_b: Vec<&S> = other.m.iter().flatten().collect();
        let Some(k) = flat_a.iter().position(|x| !x.is_negligible(tol)) else {
            return flat_b.iter().all(|x| x.is_negligible(tol));
        };
        if flat_b[k].is_negligible(tol) {
            return false;
        }
        let ratio = flat_b[k].clone() / flat_a[k].clone();
        flat_a
            .iter()
            .zip(&flat_b)
            .all(|(a, b)| ((*a).clone() * ratio.clone() - (*b).clone()).is_negligible(tol))
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Lft<T> {
        Lft { m: self.m.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }
}

/// Cayley transform `ρ_n(z, w) = (2z/(1 − iw), (1 + iw)/(1 − iw))` from the
/// Siegel domain onto the ball, in coordinates `(z_1..z_{n−1}, w)`.
pub fn cayley<S: Scalar>(n: usize) -> Lft<S> {
    let i = S::imag_unit();
    let mut m = zeros(n + 1, n + 1);
    for j in 0..n - 1 {
        m[j][j] = S::from_i64(2);
    }
    m[n - 1][n - 1] = i.clone();
    m[n - 1][n] = S::one();
    m[n][n - 1] = -i;
    m[n][n] = S::one();
    Lft { m }
}

/// `ρ_n⁻¹(Z, W) = (Z/(1 + W), i(1 − W)/(1 + W))`.
pub fn cayley_inverse<S: Scalar>(n: usize) -> Lft<S> {
    let i = S::imag_unit();
    let mut m = zeros(n + 1, n + 1);
    for j in 0..n - 1 {
        m[j][j] = S::one();
    }
    m[n - 1][n - 1] = -i.clone();
    m[n - 1][n] = i;
    m[n][n - 1] = S::one();
    m[n][n] = S::one();
    Lft { m }
}

/// Heisenberg translation `σ(z, w) = (z + z₀, w + w₀ + 2i⟨z, z̄₀⟩)` with
/// `⟨z, z̄₀⟩ = Σ z_j conj(z₀_j)`; sends the origin to `(z₀, w₀)`.
pub fn heisenberg_translation<S: Scalar>(z0: &[S], w0: &S) -> Lft<S> {
    let nz = z0.len();
    let n = nz + 1;
    let two_i = S::from_i64(2) * S::imag_unit();
    let mut m = zeros(n + 1, n + 1);
    for j in 0..nz {
        m[j][j] = S::one();
        m[j][n] = z0[j].clone();
        m[nz][j] = two_i.clone() * z0[j].conj();
    }
    m[nz][nz] = S::one();
    m[nz][n] = w0.clone();
    m[n][n] = S::one();
    Lft { m }
}

/// Target re-centering `τ(z*, w*) = (z* − z₀, w* − conj(w₀) − 2i⟨z*, z̄₀⟩)`,
/// the inverse of the translation to `(z₀, w₀)` when `Im w₀ = |z₀|²`.
pub fn heisenberg_recentering<S: Scalar>(z0: &[S], w0: &S) -> Lft<S> {
    let nz = z0.len();
    let n = nz + 1;
    let two_i = S::from_i64(2) * S::imag_unit();
    let mut m = zeros(n + 1, n + 1);
    for j in 0..nz {
        m[j][j] = S::one();
        m[j][n] = -z0[j].clone();
        m[nz][j] = -(two_i.clone() * z0[j].conj());
    }
    m[nz][nz] = S::one();
    m[nz][n] = -w0.conj();
    m[n][n] = S::one();
    Lft { m }
}

/// Parameters of an isotropy element of the Heisenberg hypersurface.
#[derive(Clone, Debug, PartialEq)]
pub struct Isotropy<S> {
    pub lambda: S,
    pub r: S,
    pub a: Vec<S>,
    /// Unitary acting on row vectors: `z ↦ zU`.
    pub u: Matrix<S>,
}

impl<S: Scalar> Isotropy<S> {
    pub fn identity(nz: usize) -> Self {
        Isotropy { lambda: S::one(), r: S::zero(), a: vec![S::zero(); nz], u: linalg::identity(nz) }
    }

    /// `(z, w) ↦ (λ(z + a w)U/δ, λ² w/δ)` with
    /// `δ = 1 − 2i⟨z, ā⟩ − (r + i|a|²)w`, `⟨z, ā⟩ = Σ z_j conj(a_j)`.
    pub fn to_lft(&self) -> Lft<S> {
        let nz = self.a.len();
        let n = nz + 1;
        let i = S::imag_unit();
        let mut m = zeros(n + 1, n + 1);
        for k in 0..nz {
            for j in 0..nz {
                m[k][j] = self.lambda.clone() * self.u[j][k].clone();
            }
            let mut aw = S::zero();
            for j in 0..nz {
                aw += self.a[j].clone() * self.u[j][k].clone();
            }
            m[k][nz] = self.lambda.clone() * aw;
        }
        m[nz][nz] = self.lambda.clone() * self.lambda.clone();
        let a_sq = self.a.iter().fold(S::zero(), |s, x| s + x.norm_sq());
        for j in 0..nz {
            m[n][j] = -(S::from_i64(2) * i.clone() * self.a[j].conj());
        }
        m[n][nz] = -(self.r.clone() + i * a_sq);
        m[n][n] = S::one();
        Lft { m }
    }
}

/// Block-diagonal embedding of a unitary on the first coordinates of an LFT space.
pub fn unitary_lft<S: Scalar>(u: &Matrix<S>, dim: usize) -> Lft<S> {
    let mut m = linalg::identity(dim + 1);
    for (i, row) in u.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m[i][j] = x.clone();
        }
    }
    Lft { m }
}

/// Ball Möbius map `φ_a(z) = (a − P_a z − s Q_a z)/(1 − ⟨z, a⟩)` with
/// `s = √(1 − |a|²)` supplied by the caller; swaps `0` and `a`.
pub fn ball_mobius<S: Scalar>(a: &[S], s: &S) -> Lft<S> {
    let n = a.len();
    let a_sq = a.iter().fold(S::zero(), |acc, x| acc + x.norm_sq());
    let mut m = zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            let proj = if a_sq.is_zero() {
                S::zero()
            } else {
                a[i].clone() * a[j].conj() / a_sq.clone()
            };
            let id = if i == j { S::one() } else { S::zero() };
            // −(P_a + s(I − P_a))
            m[i][j] = -(proj.clone() + s.clone() * (id - proj));
        }
        m[i][n] = a[i].clone();
        m[n][i] = -a[i].conj();
    }
    m[n][n] = S::one();
    Lft { m }
}

/// Pythagorean triples `(p, q, r)` with `p² + q² = r²`.
const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// Random exact unitary: products of phase-signed permutations and rational Givens rotations.
pub fn random_exact_unitary<R: Rng>(n: usize, rng: &mut R) -> Matrix<GaussianRational> {
    let phases = [
        GaussianRational::ratio(1, 1),
        GaussianRational::ratio(-1, 1),
        GaussianRational::i(),
        -GaussianRational::i(),
    ];
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut u: Matrix<GaussianRational> = zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        u[i][p] = phases[rng.gen_range(0..4)].clone();
    }
    if n >= 2 {
        for _ in 0..2 {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let (p, q, r) = TRIPLES[rng.gen_range(0..TRIPLES.len())];
            let c = GaussianRational::ratio(p, r);
            let s = GaussianRational::ratio(q, r);
            let mut g: Matrix<GaussianRational> = linalg::identity(n);
            g[i][i] = c.clone();
            g[j][j] = c;
            g[i][j] = -s.clone();
            g[j][i] = s;
            u = linalg::mat_mul(&g, &u);
        }
    }
    u
}

/// Random exact automorphism of `B^n`: unitary after a Möbius map with rational `a`, `s`.
pub fn random_exact_ball_automorphism<R: Rng>(n: usize, rng: &mut R) -> Lft<GaussianRational> {
    let (p, q, r) = TRIPLES[rng.gen_range(0..TRIPLES.len())];
    // a = (p/r)·v with v a rational unit vector, s = q/r
    let v = random_rational_unit_vector(n, rng);
    let a: Vec<GaussianRational> = v.iter().map(|x| x.clone() * GaussianRational::ratio(p, r)).collect();
    let s = GaussianRational::ratio(q, r);
    let mob = ball_mobius(&a, &s);
    let u = random_exact_unitary(n, rng);
    unitary_lft(&u, n).after(&mob)
}

/// A unit vector with Gaussian-rational entries.
pub fn random_rational_unit_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<GaussianRational> {
    let u = random_exact_unitary(n, rng);
    u[rng.gen_range(0..n)].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = GaussianRational;

    #[test]
    fn cayley_values() {
        let rho = cayley::<Q>(2);
        assert_eq!(rho.apply(&[Q::zero(), Q::i()]).unwrap(), vec![Q::zero(), Q::zero()]);
        assert_eq!(rho.apply(&[Q::zero(), Q::zero()]).unwrap(), vec![Q::zero(), Q::one()]);
        let w = Q::complex((1, 1), (1, 1));
        assert_eq!(
            rho.apply(&[Q::zero(), w]).unwrap(),
            vec![Q::zero(), Q::complex((-1, 5), (2, 5))]
        );
        let id = cayley_inverse::<Q>(3).after(&cayley(3));
        assert!(id.projectively_eq(&Lft::identity(3), 0.0));
    }

    #[test]
    fn translation_sends_origin() {
        let z0 = vec![rat::<Q>(1, 2), Q::zero()];
        let w0 = Q::complex((0, 1), (1, 4));
        let s = heisenberg_translation(&z0, &w0);
        assert_eq!(s.apply(&[Q::zero(), Q::zero(), Q::zero()]).unwrap(), vec![z0.clone()[0].clone(), Q::zero(), w0.clone()]);
        let t = heisenberg_recentering(&z0, &w0);
        assert!(t.after(&s).projectively_eq(&Lft::identity(3), 0.0));
    }

    /// `Im w − |z|²` on the image of a boundary point.
    fn defect(x: &[Q]) -> Q {
        let nz = x.len() - 1;
        let w = x[nz].clone();
        let im = (w.clone() - w.conj()) / (rat::<Q>(2, 1) * Q::i());
        x[..nz].iter().fold(im, |acc, z| acc - z.norm_sq())
    }

    #[test]
    fn isotropy_preserves_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let iso = Isotropy {
                lambda: rat::<Q>(rng.gen_range(1..5), rng.gen_range(1..5)),
                r: rat(rng.gen_range(-3..4), 2),
                a: vec![Q::complex((rng.gen_range(-3..4), 3), (1, 2)), rat(1, 3)],
                u: random_exact_unitary(2, &mut rng),
            };
            let f = iso.to_lft();
            let z = vec![rat::<Q>(rng.gen_range(-2..3), 3), Q::complex((1, 5), (-1, 2))];
            let n2 = z.iter().fold(Q::zero(), |s, v| s + v.norm_sq());
            let w = rat::<Q>(rng.gen_range(-4..5), 7) + Q::i() * n2;
            let mut p = z.clone();
            p.push(w);
            assert!(defect(&p).is_zero());
            let img = f.apply(&p).unwrap();
            assert!(defect(&img).is_zero(), "isotropy leaves the boundary");
            assert!(f.apply(&[Q::zero(), Q::zero(), Q::zero()]).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn random_ball_automorphisms_preserve_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..5 {
            let u = random_exact_unitary(n, &mut rng);
            assert!(linalg::is_unitary(&u, 0.0));
            let phi = random_exact_ball_automorphism(n, &mut rng);
            let v = random_rational_unit_vector(n, &mut rng);
            let img = phi.apply(&v).unwrap();
            let norm = img.iter().fold(Q::zero(), |s, x| s + x.norm_sq());
            assert_eq!(norm, Q::one());
        }
    }
}
