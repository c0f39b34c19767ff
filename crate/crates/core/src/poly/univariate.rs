//! Dense univariate polynomials, exact over the rationals and approximate
//! over `f64`. Coefficient `i` multiplies `t^i`.

use crate::rational::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type UPoly = Vec<Q>;

pub fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &UPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(p: &UPoly) -> UPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
        .collect()
}

pub fn eval(p: &UPoly, t: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
}

pub fn eval_f64(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn div_rem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![Q::zero(); r.len() - db];
    let lead = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            let delta = &c * bc;
            r[dr - db + i] = &r[dr - db + i] - delta;
        }
        q[dr - db] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn monic(p: &UPoly) -> UPoly {
    match degree(p) {
        None => vec![],
        Some(d) => {
            let l = p[d].clone();
            p[..=d].iter().map(|c| c / &l).collect()
        }
    }
}

pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while degree(&y).is_some() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Strip factors of `t`, returning the multiplicity removed.
pub fn strip_zero_root(p: &UPoly) -> (UPoly, usize) {
    let k = p.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut out = p[k..].to_vec();
    trim(&mut out);
    (out, k)
}

/// Largest multiplicity of a nonzero complex root; 0 when there is none.
pub fn max_nonzero_root_multiplicity(p: &UPoly) -> usize {
    let (p, _) = strip_zero_root(p);
    if degree(&p).unwrap_or(0) == 0 {
        return 0;
    }
    let mut g = p.clone();
    let mut dj = p;
    let mut m = 0;
    while degree(&g).unwrap_or(0) > 0 {
        m += 1;
        dj = derivative(&dj);
        g = gcd(&g, &dj);
    }
    m
}

/// Multiplicity of `r` as a root of `p`.
pub fn root_multiplicity(p: &UPoly, r: &Q) -> usize {
    let mut cur = p.clone();
    trim(&mut cur);
    let mut m = 0;
    while degree(&cur).is_some() && eval(&cur, r).is_zero() {
        m += 1;
        cur = derivative(&cur);
    }
    m
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let Some(v) = n.to_u64() else {
        return vec![];
    };
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i != v / i {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
        if i > 5_000_000 {
            break;
        }
    }
    out
}

/// All distinct rational roots, sorted ascending.
pub fn rational_roots(p: &UPoly) -> Vec<Q> {
    let (p, z) = strip_zero_root(p);
    let mut roots = Vec::new();
    if z > 0 {
        roots.push(Q::zero());
    }
    let Some(d) = degree(&p) else {
        return roots;
    };
    if d == 0 {
        return roots;
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = &ints[0];
    let ad = &ints[d];
    for num in divisors(a0) {
        for den in divisors(ad) {
            for s in [1, -1] {
                let r = Q::new(&num * s, den.clone());
                if !roots.contains(&r) && eval(&p, &r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Sturm sequence of a square-free-or-not polynomial.
pub fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![p.clone()];
    let d = derivative(p);
    if degree(&d).is_none() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let (_, r) = div_rem(&seq[n - 2], &seq[n - 1]);
        if degree(&r).is_none() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[UPoly], t: &Q) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|q| {
            let v = eval(q, t);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_real_roots(p: &UPoly, a: &Q, b: &Q) -> usize {
    if degree(p).is_none() {
        return 0;
    }
    let seq = sturm_sequence(p);
    sign_changes(&seq, a).saturating_sub(sign_changes(&seq, b))
}

/// Cauchy bound on the absolute value of every root.
pub fn root_bound(p: &UPoly) -> Q {
    let Some(d) = degree(p) else {
        return Q::one();
    };
    let lead = p[d].abs();
    let m = p[..d].iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Q::zero);
    m + Q::one()
}

/// Real roots of a float polynomial inside `[a, b]`, located by splitting at
/// the roots of the derivative and bisecting each monotone piece.
pub fn real_roots_in(p: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    while q.len() > 1 && *q.last().unwrap() == 0.0 {
        q.pop();
    }
    if q.len() <= 1 {
        return vec![];
    }
    if q.len() == 2 {
        let r = -q[0] / q[1];
        return if r >= a && r <= b { vec![r] } else { vec![] };
    }
    let dq: Vec<f64> = q.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let mut cuts = vec![a];
    cuts.extend(real_roots_in(&dq, a, b));
    cuts.push(b);
    let mut roots: Vec<f64> = Vec::new();
    for w in cuts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (eval_f64(&q, lo), eval_f64(&q, hi));
        if flo == 0.0 {
            push_root(&mut roots, lo);
            continue;
        }
        if fhi == 0.0 {
            push_root(&mut roots, hi);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = eval_f64(&q, mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        push_root(&mut roots, 0.5 * (lo + hi));
    }
    roots
}

fn push_root(roots: &mut Vec<f64>, r: f64) {
    if roots.last().is_none_or(|&l| (r - l).abs() > 1e-300) {
        roots.push(r);
    }
}

/// Lebesgue measure of `{t in [a, b] : |p(t)| < eps}`.
pub fn sublevel_measure(p: &[f64], eps: f64, a: f64, b: f64) -> f64 {
    let mut lo = p.to_vec();
    let mut hi = p.to_vec();
    if lo.is_empty() {
        return b - a;
    }
    lo[0] -= eps;
    hi[0] += eps;
    let mut cuts = vec![a, b];
    cuts.extend(real_roots_in(&lo, a, b));
    cuts.extend(real_roots_in(&hi, a, b));
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.windows(2)
        .filter(|w| eval_f64(p, 0.5 * (w[0] + w[1])).abs() < eps)
        .map(|w| w[1] - w[0])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn up(c: &[i64]) -> UPoly {
        c.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn multiplicities() {
        // (t - 1)^2 (t + 2) t^3
        let p = up(&[0, 0, 0, 2, -3, 0, 1]);
        assert_eq!(max_nonzero_root_multiplicity(&p), 2);
        assert_eq!(root_multiplicity(&p, &q(1)), 2);
        assert_eq!(root_multiplicity(&p, &q(-2)), 1);
        // t^2 + 1 has no real roots but multiplicity 1 over C
        assert_eq!(max_nonzero_root_multiplicity(&up(&[1, 0, 1])), 1);
        assert_eq!(max_nonzero_root_multiplicity(&up(&[0, 0, 5])), 0);
    }

    #[test]
    fn roots_and_sturm() {
        // 2 t^2 - 8 = 2 (t-2)(t+2) ; 4 - t^2/2 style
        let p = vec![q(2), q(0), qf(-1, 2)];
        assert_eq!(rational_roots(&p), vec![q(-2), q(2)]);
        assert_eq!(count_real_roots(&up(&[-2, 0, 1]), &q(0), &q(10)), 1);
        assert_eq!(count_real_roots(&up(&[1, 0, 1]), &q(-10), &q(10)), 0);
        assert!(rational_roots(&up(&[-2, 0, 1])).is_empty());
    }

    #[test]
    fn float_roots_and_measure() {
        let r = real_roots_in(&[-2.0, 0.0, 1.0], -5.0, 5.0);
        assert_eq!(r.len(), 2);
        assert!((r[1] - 2f64.sqrt()).abs() < 1e-12);
        // |t| < 0.1 on [-1, 1]
        assert!((sublevel_measure(&[0.0, 1.0], 0.1, -1.0, 1.0) - 0.2).abs() < 1e-12);
        // |t^3| < 1e-3 on [-1, 1] has measure 0.2
        assert!((sublevel_measure(&[0.0, 0.0, 0.0, 1.0], 1e-3, -1.0, 1.0) - 0.2).abs() < 1e-9);
    }
}
