//! Exact Gaussian elimination over the rationals for the small dense
//! systems that appear in hull, cone and chart computations.

use crate::rational::Q;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<Q>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
        .collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] = &m[i][j] - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    rank(&from_i64(rows))
}

/// Basis of `{x : m x = 0}`; `ncols` is needed when `m` has no rows.
pub fn nullspace(m: &Matrix, ncols: usize) -> Vec<Vec<Q>> {
    if m.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
    }
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn det(m: &Matrix) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let factor = &a[i][c] / &a[c][c];
                for j in c..n {
                    let delta = &factor * &a[c][j];
                    a[i][j] = &a[i][j] - delta;
                }
            }
        }
    }
    d
}

pub fn det_i64(rows: &[Vec<i64>]) -> Q {
    det(&from_i64(rows))
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn nullspace_of_plane() {
        let m = from_i64(&[vec![1, 1, 1]]);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(mat_vec(&m, &v), vec![q(0)]);
        }
    }

    #[test]
    fn det_and_inverse() {
        let m = from_i64(&[vec![3, 0], vec![2, 1]]);
        assert_eq!(det(&m), q(3));
        let inv = inverse(&m).unwrap();
        let prod: Vec<Vec<Q>> = m
            .iter()
            .map(|r| (0..2).map(|j| r.iter().zip(&inv).fold(q(0), |a, (x, row)| a + x * &row[j])).collect())
            .collect();
        assert_eq!(prod, identity(2));
        assert!(inverse(&from_i64(&[vec![1, 2], vec![2, 4]])).is_none());
    }
}
