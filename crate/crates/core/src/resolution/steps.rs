//! The local steps of the recursion: choosing a direction of minimal order,
//! the implicit series killing the `x_n^{m-1}` slice, and the slice split.

use crate::error::{Error, Result};
use crate::poly::{Polynomial, TruncatedSeries};
use crate::rational::Q;
use num_traits::{One, Zero};

/// Linear change `x = A y` whose last column is `v`; the other columns are
/// the unit vectors except `e_p`, `p` the last index with `v_p != 0`.
pub fn rotation_matrix(v: &[i64]) -> Vec<Vec<Q>> {
    let n = v.len();
    let p = v.iter().rposition(|&x| x != 0).expect("nonzero direction");
    let mut cols: Vec<Vec<i64>> = (0..n)
        .filter(|&j| j != p)
        .map(|j| (0..n).map(|i| i64::from(i == j)).collect())
        .collect();
    cols.push(v.to_vec());
    (0..n).map(|i| cols.iter().map(|c| Q::from_integer(c[i].into())).collect()).collect()
}

/// Primitive integer directions in `[-bound, bound]^n` whose last nonzero
/// entry is positive, by increasing 1-norm, later pivots first.
fn directions(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let mut out = Vec::new();
    for idx in 0..side.pow(n as u32) {
        let mut rem = idx;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let x = (rem % side) as i64 - bound;
                rem /= side;
                x
            })
            .collect();
        let Some(p) = v.iter().rposition(|&x| x != 0) else { continue };
        if v[p] < 0 || v.iter().fold(0, |g, &x| crate::rational::gcd_i64(g, x)) != 1 {
            continue;
        }
        out.push(v);
    }
    out.sort_by_key(|v| {
        let norm: i64 = v.iter().map(|x| x.abs()).sum();
        let p = v.iter().rposition(|&x| x != 0).unwrap();
        let key: Vec<i64> = v.iter().map(|&x| if x > 0 { 2 * x - 1 } else { -2 * x }).collect();
        (norm, std::cmp::Reverse(p), key)
    });
    out
}

/// Minimal total degree `m` of `f` and a rational invertible `A` such that
/// `f(A y)` has a nonzero pure `y_n^m` term.
pub fn min_order_direction(f: &TruncatedSeries, bound: i64) -> Result<(u32, Vec<Vec<Q>>)> {
    let p = f.poly();
    let n = p.nvars();
    let m = p.min_degree().ok_or(Error::VanishesToTruncation(f.order() as u32))?;
    if m == 0 {
        return Err(Error::Precondition("f(0) must vanish".into()));
    }
    let lowest = p.restrict(|e| e.degree() == m);
    for v in directions(n, bound) {
        let val = lowest.eval_exact(&v.iter().map(|&x| Q::from_integer(x.into())).collect::<Vec<_>>());
        if !val.is_zero() {
            return Ok((m as u32, rotation_matrix(&v)));
        }
    }
    Err(Error::Precondition(format!("no direction in [-{bound}, {bound}]^{n} sees the order-{m} part")))
}

fn series_inverse(a: &Polynomial, order: u64) -> Result<Polynomial> {
    let c = a.constant_term();
    if c.is_zero() {
        return Err(Error::IterationStalled("denominator vanishes at the origin".into()));
    }
    let n = a.nvars();
    let two = Polynomial::constant(n, Q::from_integer(2.into()));
    let mut inv = Polynomial::constant(n, Q::one() / c);
    let mut prec = 1u64;
    while prec < order {
        prec = (2 * prec).min(order);
        inv = inv.mul_truncated(&two.sub(&a.mul_truncated(&inv, prec)), prec);
    }
    Ok(inv)
}

fn substitute_last(phi: &Polynomial, g: &Polynomial, order: u64) -> Result<Polynomial> {
    let k = g.nvars();
    let mut subs: Vec<Polynomial> = (0..k).map(|j| Polynomial::var(k, j)).collect();
    subs.push(g.clone());
    phi.substitute_truncated(&subs, order)
}

fn nth_derivative(f: &Polynomial, var: usize, k: u32) -> Polynomial {
    (0..k).fold(f.clone(), |acc, _| acc.derivative(var).expect("variable in range"))
}

/// The series `g(x')`, `g(0) = 0`, with `d^{m-1}/dx_n^{m-1} f(x', g(x')) = 0`
/// to the truncation order, by Newton iteration with doubling precision.
pub fn implicit_series(f: &TruncatedSeries, m: u32) -> Result<TruncatedSeries> {
    let p = f.poly();
    let n = p.nvars();
    if n < 2 || m == 0 {
        return Err(Error::Precondition("implicit series needs n >= 2 and m >= 1".into()));
    }
    let order = f.order();
    let phi = nth_derivative(p, n - 1, m - 1);
    let dphi = phi.derivative(n - 1)?;
    if !phi.constant_term().is_zero() {
        return Err(Error::Precondition("the (m-1)-th x_n derivative must vanish at 0".into()));
    }
    if dphi.constant_term().is_zero() {
        return Err(Error::IterationStalled("the m-th x_n derivative vanishes at 0".into()));
    }
    let mut g = Polynomial::zero(n - 1);
    let mut prec = 1u64;
    for _ in 0..64 {
        prec = (2 * prec).min(order);
        let r = substitute_last(&phi, &g, prec)?;
        let d = substitute_last(&dphi, &g, prec)?;
        let inv = series_inverse(&d, prec)?;
        g = g.sub(&r.mul_truncated(&inv, prec)).truncate(prec);
        if prec == order {
            if substitute_last(&phi, &g, order)?.is_zero() {
                return Ok(TruncatedSeries::new(&g, order));
            }
        }
    }
    Err(Error::IterationStalled("no convergence".into()))
}

/// Exact postcondition of [`implicit_series`].
pub fn implicit_residual_vanishes(f: &TruncatedSeries, m: u32, g: &TruncatedSeries) -> bool {
    let n = f.nvars();
    let phi = nth_derivative(f.poly(), n - 1, m - 1);
    substitute_last(&phi, g.poly(), f.order().min(g.order())).map(|r| r.is_zero()).unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSplit {
    /// `h_m` in all `n` variables, `h_m(0) != 0`.
    pub h_m: Polynomial,
    /// `(p, h_p)` for `p < m - 1`, each in the first `n - 1` variables.
    pub lower: Vec<(u32, Polynomial)>,
}

/// `F = h_m x_n^m + sum_{p < m-1} h_p(x') x_n^p`.
pub fn coefficient_split(f: &TruncatedSeries, m: u32) -> Result<CoefficientSplit> {
    let p = f.poly();
    let n = p.nvars();
    let slices = p.coefficients_in(n - 1);
    let slice = |k: usize| slices.get(k).cloned().unwrap_or_else(|| Polynomial::zero(n));
    if m >= 1 && !slice(m as usize - 1).is_zero() {
        return Err(Error::NonzeroCriticalSlice);
    }
    let mut h_m = Polynomial::zero(n);
    for (k, s) in slices.iter().enumerate().skip(m as usize) {
        let mut e = vec![0u32; n];
        e[n - 1] = (k - m as usize) as u32;
        h_m = h_m.add(&s.mul_monomial(&e));
    }
    if h_m.constant_term().is_zero() {
        return Err(Error::Precondition("h_m(0) vanishes".into()));
    }
    let lower = (0..m.saturating_sub(1))
        .map(|k| (k, slice(k as usize).remove_var(n - 1)))
        .collect();
    Ok(CoefficientSplit { h_m, lower })
}

/// Reassemble `h_m x_n^m + sum h_p x_n^p`.
pub fn reassemble(split: &CoefficientSplit, m: u32) -> Polynomial {
    let n = split.h_m.nvars();
    let mut e = vec![0u32; n];
    e[n - 1] = m;
    let mut out = split.h_m.mul_monomial(&e);
    for (k, h) in &split.lower {
        let mut e = vec![0u32; n];
        e[n - 1] = *k;
        out = out.add(&h.insert_var(n - 1).mul_monomial(&e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, ExponentVector};
    use crate::rational::q;

    fn ts(s: &str, n: usize, order: u64) -> TruncatedSeries {
        TruncatedSeries::new(&parse_polynomial(s, n).unwrap(), order)
    }

    #[test]
    fn direction_search() {
        let (m, a) = min_order_direction(&ts("x1^2 - x2^2", 2, 12), 3).unwrap();
        assert_eq!(m, 2);
        assert_eq!(a, crate::linalg::identity(2));
        let (m, a) = min_order_direction(&ts("x1*x2", 2, 12), 3).unwrap();
        assert_eq!(m, 2);
        assert_eq!(a, vec![vec![q(1), q(1)], vec![q(0), q(1)]]);
        let (m, a) = min_order_direction(&ts("x2^3 + x1^5", 2, 12), 3).unwrap();
        assert_eq!((m, a), (3, crate::linalg::identity(2)));
        let (_, a) = min_order_direction(&ts("x1^2 + x2^3", 2, 12), 3).unwrap();
        assert_eq!(a, vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert!(min_order_direction(&ts("x1^20", 2, 12), 3).is_err());
    }

    #[test]
    fn implicit_examples() {
        let g = implicit_series(&ts("x2^2 + x1*x2", 2, 12), 2).unwrap();
        assert_eq!(g.poly(), &parse_polynomial("-1/2*x1", 1).unwrap());
        let g = implicit_series(&ts("x2^3", 2, 12), 3).unwrap();
        assert!(g.poly().is_zero());
        let g = implicit_series(&ts("x2^2 - x1^3", 2, 12), 2).unwrap();
        assert!(g.poly().is_zero());
        // nonlinear: x2 + x2^2 - x1 has the root x2 = (sqrt(1 + 4 x1) - 1)/2
        let f = ts("x2 + x2^2 - x1", 2, 8);
        let g = implicit_series(&f, 1).unwrap();
        assert_eq!(g.poly().coeff(&ExponentVector(vec![2])), q(-1));
        assert_eq!(g.poly().coeff(&ExponentVector(vec![3])), q(2));
        assert!(implicit_residual_vanishes(&f, 1, &g));
    }

    #[test]
    fn split_examples() {
        let f = ts("x2^2 + x1*x2", 2, 12);
        let g = implicit_series(&f, 2).unwrap();
        let big = f.compose_quasitranslation(1, &g).unwrap();
        let s = coefficient_split(&big, 2).unwrap();
        assert_eq!(s.h_m, Polynomial::one(2));
        assert_eq!(s.lower, vec![(0, parse_polynomial("-1/4*x1^2", 1).unwrap())]);
        assert_eq!(reassemble(&s, 2), big.poly().clone());

        let s = coefficient_split(&ts("x2^3 + x1^5", 2, 12), 3).unwrap();
        assert_eq!(s.lower[1], (1, Polynomial::zero(1)));
        assert_eq!(s.lower[0].1.coeff(&ExponentVector(vec![5])), q(1));
        assert!(matches!(coefficient_split(&ts("x2^2 + x1*x2", 2, 12), 2), Err(Error::NonzeroCriticalSlice)));
    }
}
