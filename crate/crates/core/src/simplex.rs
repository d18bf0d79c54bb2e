//! Exact two-phase simplex over `BigRational` with Bland's rule.
//!
//! Solves `min c·x` subject to `Ax = b`, `x ≥ 0`. Bland's rule (smallest
//! eligible index for both the entering and the leaving variable) rules out
//! cycling, so every call terminates.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type R = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<R>, value: R },
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<R>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = R::one() / &self.t[r][c];
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[R]) -> Vec<R> {
        let mut d = cost.to_vec();
        for (row, &bv) in self.t.iter().zip(&self.basis) {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (j, x) in row[..self.cols].iter().enumerate() {
                d[j] -= cb * x;
            }
        }
        d
    }

    /// Runs simplex iterations over the columns `allowed`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[R], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let d = self.reduced_costs(cost);
            let Some(enter) = (0..self.cols).find(|&j| allowed(j) && d[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, R)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, enter);
        }
    }

    fn solution(&self, n: usize) -> Vec<R> {
        let mut x = vec![R::zero(); n];
        for (row, &bv) in self.t.iter().zip(&self.basis) {
            if bv < n {
                x[bv] = row[self.cols].clone();
            }
        }
        x
    }
}

/// Builds a feasible basis for `Ax = b, x ≥ 0`, or `None` if there is none.
fn phase_one(a: &[Vec<R>], b: &[R]) -> Option<Tableau> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let cols = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let sgn = |x: &R| if flip { -x } else { x.clone() };
        let mut r: Vec<R> = row.iter().map(sgn).collect();
        r.extend((0..m).map(|k| if k == i { R::one() } else { R::zero() }));
        r.push(sgn(bi));
        t.push(r);
    }
    let mut tab = Tableau { t, basis: (n..n + m).collect(), cols };
    let cost: Vec<R> = (0..cols).map(|j| if j < n { R::zero() } else { R::one() }).collect();
    tab.optimize(&cost, &|_| true);
    let infeas: R = tab.t.iter().zip(&tab.basis).filter(|(_, &bv)| bv >= n).map(|(r, _)| r[cols].clone()).sum();
    if infeas.is_positive() {
        return None;
    }
    // drive zero-level artificials out; rows that cannot be cleared are redundant
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                Some(c) => tab.pivot(r, c),
                None => {
                    tab.t.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    Some(tab)
}

/// A vertex of `{x ≥ 0 : Ax = b}`, if the set is nonempty.
pub fn feasible_point(a: &[Vec<R>], b: &[R]) -> Option<Vec<R>> {
    let n = a.first().map_or(0, Vec::len);
    phase_one(a, b).map(|t| t.solution(n))
}

/// `min c·x` subject to `Ax = b`, `x ≥ 0`.
pub fn minimize(a: &[Vec<R>], b: &[R], c: &[R]) -> LpOutcome {
    let n = c.len();
    let Some(mut tab) = phase_one(a, b) else { return LpOutcome::Infeasible };
    let mut cost = c.to_vec();
    cost.extend((0..tab.cols - n).map(|_| R::zero()));
    if !tab.optimize(&cost, &|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let x = tab.solution(n);
    let value = x.iter().zip(c).map(|(x, c)| x * c).sum();
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> R {
        R::new(n.into(), d.into())
    }

    #[test]
    fn small_lp() {
        // min −x − y, x + 2y + s = 4, 3x + y + t = 6
        let a = vec![vec![q(1, 1), q(2, 1), q(1, 1), q(0, 1)], vec![q(3, 1), q(1, 1), q(0, 1), q(1, 1)]];
        let b = vec![q(4, 1), q(6, 1)];
        let c = vec![q(-1, 1), q(-1, 1), q(0, 1), q(0, 1)];
        match minimize(&a, &b, &c) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, q(-14, 5));
                assert_eq!(&x[..2], &[q(8, 5), q(6, 5)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![q(1, 1), q(1, 1)]];
        assert_eq!(minimize(&a, &[q(-1, 1)], &[q(0, 1), q(0, 1)]), LpOutcome::Infeasible);
        let a = vec![vec![q(1, 1), q(-1, 1)]];
        assert_eq!(minimize(&a, &[q(1, 1)], &[q(0, 1), q(-1, 1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]];
        let x = feasible_point(&a, &[q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(&x[0] + &x[1], q(1, 1));
    }
}
