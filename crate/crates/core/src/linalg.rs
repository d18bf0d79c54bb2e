//! Dense elimination over any [`Scalar`] field.
//!
//! Exact fields pivot on the first nonzero entry; floats pivot on the largest
//! entry and treat values below `tol * max_row_norm` as zero.

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

/// Default relative threshold for float rank decisions.
pub const FLOAT_RANK_TOL: f64 = 1e-9;

fn max_entry<S: Scalar>(m: &Matrix<S>) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs_f64())
        .fold(0.0, f64::max)
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<S: Scalar>(m: &mut Matrix<S>, tol: f64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let cutoff = tol * max_entry(m).max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pick = if S::EXACT {
            (r..rows).find(|&i| !m[i][c].is_zero())
        } else {
            (r..rows)
                .map(|i| (i, m[i][c].abs_f64()))
                .filter(|&(_, a)| a > cutoff)
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(i, _)| i)
        };
        let Some(p) = pick else { continue };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= f.clone() * y.clone();
                }
            }
            if !S::EXACT {
                row[c] = S::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(m: &Matrix<S>, tol: f64) -> usize {
    let mut a = m.clone();
    rref(&mut a, tol).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<S: Scalar>(m: &Matrix<S>, cols: usize, tol: f64) -> Vec<Vec<S>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, tol);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `m x = b` (free variables set to zero), or `None`.
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &[S], tol: f64) -> Option<Vec<S>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix<S> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, tol);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![S::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn inverse<S: Scalar>(m: &Matrix<S>, tol: f64) -> Option<Matrix<S>> {
    let n = m.len();
    let mut aug: Matrix<S> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, tol);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn zeros<S: Scalar>(rows: usize, cols: usize) -> Matrix<S> {
    vec![vec![S::zero(); cols]; rows]
}

pub fn identity<S: Scalar>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = S::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += row[k].clone() * b[k][j].clone();
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Conjugate transpose.
pub fn adjoint<S: Scalar>(a: &Matrix<S>) -> Matrix<S> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].conj()).collect())
        .collect()
}

/// `⟨x, y⟩ = Σ x_j conj(y_j)`.
pub fn inner<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.conj())
}

pub fn is_unitary<S: Scalar>(u: &Matrix<S>, tol: f64) -> bool {
    let p = mat_mul(u, &adjoint(u));
    let n = u.len();
    p.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| {
            let target = if i == j { S::one() } else { S::zero() };
            (x.clone() - target).is_negligible(tol)
        })
    })
        && n == u.first().map_or(0, Vec::len)
}

/// Orthogonal (unnormalized) complement of the row space of `rows` inside `S^dim`,
/// built by Gram-Schmidt on the standard basis. No square roots are taken, so the
/// result stays in the field.
pub fn orthogonal_complement<S: Scalar>(rows: &[Vec<S>], dim: usize, tol: f64) -> Vec<Vec<S>> {
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut norms: Vec<S> = Vec::new();
    let project_out = |v: &mut Vec<S>, basis: &[Vec<S>], norms: &[S]| {
        for (b, nb) in basis.iter().zip(norms) {
            let c = inner(v, b) / nb.clone();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c.clone() * y.clone();
            }
        }
    };
    let negligible = |v: &[S]| v.iter().all(|x| x.is_negligible(tol));
    for r in rows {
        let mut v = r.clone();
        project_out(&mut v, &basis, &norms);
        if !negligible(&v) {
            norms.push(inner(&v, &v));
            basis.push(v);
        }
    }
    let start = basis.len();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![S::zero(); dim];
        v[k] = S::one();
        project_out(&mut v, &basis, &norms);
        if !negligible(&v) {
            // keeps exact entries from growing along the sweep
            let c = S::content_scale(&v);
            v.iter_mut().for_each(|x| *x *= c.clone());
            norms.push(inner(&v, &v));
            basis.push(v);
        }
    }
    basis.split_off(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, GaussianRational as Q};
    use num_complex::Complex64;
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 0.0), 2);
        let ns = nullspace(&a, 3, 0.0);
        assert_eq!(ns.len(), 1);
        for row in &a {
            assert!(inner(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[5, 3]]);
        let inv = inverse(&a, 0.0).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]]), 0.0).is_none());
    }

    #[test]
    fn solve_consistency() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &[rat(3, 1), rat(1, 1)], 0.0).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[rat(1, 1), rat(2, 1)], 0.0).is_none());
    }

    #[test]
    fn complement_is_orthogonal() {
        let rows = vec![vec![rat::<Q>(1, 1), Q::i(), rat(0, 1)]];
        let c = orthogonal_complement(&rows, 3, 0.0);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert!(inner(v, &rows[0]).is_zero());
        }
        assert!(inner(&c[0], &c[1]).is_zero());
    }

    #[test]
    fn float_rank_threshold() {
        let a: Matrix<Complex64> = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-14, 0.0)],
        ];
        assert_eq!(rank(&a, FLOAT_RANK_TOL), 1);
    }
}
