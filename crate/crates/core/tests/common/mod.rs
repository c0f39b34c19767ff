//! Independent oracles shared by the integration tests. Nothing here calls
//! the geometry, fan or resolution code under test.
#![allow(dead_code)]

use newton_resolve::poly::{parse_polynomial, Polynomial};
use newton_resolve::Q;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

pub const BATTERY: [(&str, &str, usize); 10] = [
    ("x1^2+x2^3", "x1^2 + x2^3", 2),
    ("x1*x2", "x1*x2", 2),
    ("x1^2*x2^2", "x1^2*x2^2", 2),
    ("x1^2*x2+x1*x2^3", "x1^2*x2 + x1*x2^3", 2),
    ("x1^2-2x1x2+x2^2", "x1^2 - 2*x1*x2 + x2^2", 2),
    ("x1^3", "x1^3", 2),
    ("x2^2-x1^3", "x2^2 - x1^3", 2),
    ("x1*x2*(x1+x2)", "x1^2*x2 + x1*x2^2", 2),
    ("x1^2+x2^2+x3^3", "x1^2 + x2^2 + x3^3", 3),
    ("x1*x2*x3", "x1*x2*x3", 3),
];

pub fn poly(text: &str, n: usize) -> Polynomial {
    parse_polynomial(text, n).unwrap()
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn support(f: &Polynomial) -> Vec<Vec<i64>> {
    f.terms().map(|(e, _)| e.0.iter().map(|&x| x as i64).collect()).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All nonzero `w` in `{lo..=hi}^n`.
pub fn grid(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|w| w.iter().any(|&x| x != 0));
    out
}

pub fn grid_bound(n: usize) -> i64 {
    if n <= 2 {
        12
    } else {
        8
    }
}

/// `min over the support of w . alpha`.
fn support_min(pts: &[Vec<i64>], w: &[i64]) -> i64 {
    pts.iter().map(|a| dot(w, a)).min().unwrap()
}

/// Does some grid functional separate `(t, ..., t)` from the polyhedron?
fn separated(pts: &[Vec<i64>], ws: &[Vec<i64>], t: &Q) -> bool {
    ws.iter().any(|w| t * q(w.iter().sum()) < q(support_min(pts, w)))
}

/// Newton distance from diagonal bisection against an exhaustive separator
/// grid, snapped to the unique candidate ratio inside the final bracket.
pub fn oracle_distance(pts: &[Vec<i64>], n: usize) -> Q {
    let ws = grid(n, 0, grid_bound(n));
    let mut lo = q(0);
    let mut hi = q(pts.iter().flatten().copied().max().unwrap().max(1));
    assert!(!separated(pts, &ws, &hi));
    for _ in 0..60 {
        let mid = (&lo + &hi) / q(2);
        if separated(pts, &ws, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cands: Vec<Q> = ws
        .iter()
        .map(|w| Q::new(support_min(pts, w).into(), w.iter().sum::<i64>().into()))
        .filter(|r| *r > lo && *r <= hi)
        .collect();
    let best = cands.iter().max().expect("bracket contains a candidate").clone();
    assert!(cands.iter().all(|c| *c == best), "ambiguous bracket");
    best
}

/// Separators supporting the polyhedron at `(d, ..., d)`.
pub fn tight_separators(pts: &[Vec<i64>], n: usize, d: &Q) -> Vec<Vec<i64>> {
    grid(n, 0, grid_bound(n))
        .into_iter()
        .filter(|w| q(support_min(pts, w)) == d * q(w.iter().sum()))
        .collect()
}

/// Rank over Q by fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

pub fn oracle_k(pts: &[Vec<i64>], n: usize, d: &Q) -> usize {
    n - rank(&tight_separators(pts, n, d))
}

// ---- univariate arithmetic over Q, kept separate from the library ----

type U = Vec<Q>;

fn trim(mut p: U) -> U {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deriv(p: &U) -> U {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
}

fn rem(a: &U, b: &U) -> U {
    let mut r = trim(a.clone());
    let b = trim(b.clone());
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() / b.last().unwrap();
        let s = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[s + i] = &r[s + i] - &f * c;
        }
        r = trim(r);
    }
    r
}

fn gcd(a: &U, b: &U) -> U {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Largest multiplicity of a nonzero complex root.
pub fn max_root_multiplicity(p: &U) -> usize {
    let mut p = trim(p.clone());
    while p.first().is_some_and(|c| c.is_zero()) {
        p.remove(0);
    }
    if p.len() <= 1 {
        return 0;
    }
    let mut m = 1;
    let mut g = gcd(&p, &deriv(&p));
    let mut dk = deriv(&p);
    while g.len() > 1 {
        m += 1;
        dk = deriv(&dk);
        g = gcd(&g, &dk);
    }
    m
}

/// Zero order of a face polynomial given as exponent → coefficient.
pub fn oracle_zero_order(terms: &BTreeMap<Vec<i64>, Q>) -> usize {
    let pts: Vec<&Vec<i64>> = terms.keys().collect();
    if pts.len() == 1 {
        return 0;
    }
    let n = pts[0].len();
    let diffs: Vec<Vec<i64>> = pts.iter().map(|p| (0..n).map(|i| p[i] - pts[0][i]).collect()).collect();
    if rank(&diffs) == 1 {
        // f_F = x^{v0} P(x^step)
        let mut sorted = pts.clone();
        sorted.sort();
        let v0 = sorted[0];
        let delta: Vec<i64> = (0..n).map(|i| sorted.last().unwrap()[i] - v0[i]).collect();
        let g = delta.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        let step: Vec<i64> = delta.iter().map(|x| x / g).collect();
        let lead = step.iter().position(|&x| x != 0).unwrap();
        let mut p = vec![q(0); g as usize + 1];
        for (e, c) in terms {
            let j = (e[lead] - v0[lead]) / step[lead];
            p[j as usize] = c.clone();
        }
        return max_root_multiplicity(&p);
    }
    // higher faces: a monomial partial derivative rules out singular torus points
    let monomial_partial = (0..n).any(|i| terms.keys().filter(|e| e[i] > 0).count() == 1);
    assert!(monomial_partial, "oracle inconclusive for {terms:?}");
    1
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleGrowth {
    pub d: Q,
    pub k: usize,
    pub case: char,
    pub s: Option<Q>,
}

/// `d`, `k` and the growth case from separators and univariate reduction.
pub fn oracle_growth(f: &Polynomial) -> OracleGrowth {
    let n = f.nvars();
    let pts = support(f);
    let d = oracle_distance(&pts, n);
    let k = oracle_k(&pts, n, &d);
    let tight = tight_separators(&pts, n, &d);
    let coeffs: BTreeMap<Vec<i64>, Q> = f.terms().map(|(e, c)| (e.0.iter().map(|&x| x as i64).collect(), c.clone())).collect();
    // compact faces are the argmin sets of strictly positive functionals
    let mut faces: Vec<Vec<Vec<i64>>> = grid(n, 1, grid_bound(n))
        .iter()
        .map(|w| {
            let m = support_min(&pts, w);
            let mut s: Vec<Vec<i64>> = pts.iter().filter(|a| dot(w, a) == m).cloned().collect();
            s.sort();
            s
        })
        .collect();
    faces.sort();
    faces.dedup();
    let mut smax = 0usize;
    let mut central_hit = false;
    for face in &faces {
        let terms: BTreeMap<Vec<i64>, Q> = face.iter().map(|e| (e.clone(), coeffs[e].clone())).collect();
        let o = oracle_zero_order(&terms);
        smax = smax.max(o);
        let in_central = face.iter().all(|a| tight.iter().all(|w| q(dot(w, a)) == &d * q(w.iter().sum())));
        if in_central && q(o as i64) == d {
            central_hit = true;
        }
    }
    let s = q(smax as i64);
    if s > d {
        OracleGrowth { d, k, case: 'c', s: Some(s) }
    } else if central_hit {
        OracleGrowth { d, k, case: 'b', s: None }
    } else {
        OracleGrowth { d, k, case: 'a', s: None }
    }
}

/// `f(z^M)`: term `x^alpha` goes to `z^{M^T alpha}`, expanded by hand.
pub fn pullback_by_hand(f: &Polynomial, m: &[Vec<i64>]) -> BTreeMap<Vec<i64>, Q> {
    let n = m.len();
    let mut out: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
    for (e, c) in f.terms() {
        let img: Vec<i64> = (0..n).map(|k| (0..n).map(|j| m[j][k] * e.0[j] as i64).sum()).collect();
        let slot = out.entry(img).or_insert_with(Q::zero);
        *slot += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn to_map(p: &Polynomial) -> BTreeMap<Vec<i64>, Q> {
    p.terms().map(|(e, c)| (e.0.iter().map(|&x| x as i64).collect(), c.clone())).collect()
}

/// Exact integer count of `p^l | f(x)` for `f` with small integer
/// coefficients, by nested loops independent of the library.
pub fn count_by_loops(coeffs: &[(i64, Vec<u32>)], n: usize, p: i64, l: u32) -> u64 {
    let m = p.pow(l);
    let mut x = vec![0i64; n];
    let mut count = 0;
    loop {
        let v: i128 = coeffs
            .iter()
            .map(|(c, e)| {
                e.iter().zip(&x).fold(*c as i128, |acc, (&k, &xi)| {
                    let mut a = acc;
                    for _ in 0..k {
                        a = (a * xi as i128).rem_euclid(m as i128);
                    }
                    a
                })
            })
            .sum();
        if v.rem_euclid(m as i128) == 0 {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            x[i] += 1;
            if x[i] < m {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}
