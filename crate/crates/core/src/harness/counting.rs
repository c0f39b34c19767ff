//! Exact counts of `#{x mod p^l : p^l | f(x)}`.

use crate::poly::{ModPoly, Polynomial};
use crate::rational::{serde_frac, Q};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Brute,
    Hensel,
}

/// Normalized counts `N_l = #{x in (Z/p^l)^n : f(x) = 0 mod p^l} / p^{ln}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSeries {
    pub p: u64,
    pub strategy: Strategy,
    pub levels: Vec<u32>,
    #[serde(with = "serde_frac::vec")]
    pub values: Vec<Q>,
    /// Hensel tree nodes visited (zero for brute force).
    pub nodes: u64,
}

impl CountSeries {
    pub fn get(&self, l: u32) -> Option<&Q> {
        self.levels.iter().position(|&x| x == l).map(|i| &self.values[i])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountConfig {
    /// Largest `p^{ln}` enumerated by brute force.
    pub cap: u128,
    /// Largest number of Hensel tree nodes.
    pub branch_cap: u64,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { cap: 10_000_000, branch_cap: 50_000_000 }
    }
}

pub(crate) fn require_integer(f: &Polynomial) -> Result<()> {
    match f.terms().find(|(_, c)| !c.is_integer()) {
        Some((_, c)) => Err(Error::NonIntegerCoefficient(c.to_string())),
        None => Ok(()),
    }
}

pub(crate) fn modulus(p: u64, l: u32) -> Result<u64> {
    if p < 2 {
        return Err(Error::InvalidConfig(format!("p = {p} is not a prime")));
    }
    p.checked_pow(l)
        .filter(|m| *m <= u64::MAX / 2)
        .ok_or_else(|| Error::Precondition(format!("p^l = {p}^{l} exceeds 63 bits")))
}

/// Decode a flat index into a residue vector, first coordinate most significant.
pub(crate) fn decode(mut idx: u128, m: u64, n: usize, out: &mut [u64]) {
    for i in (0..n).rev() {
        out[i] = (idx % m as u128) as u64;
        idx /= m as u128;
    }
}

/// Solutions of `f = 0 mod p^l`, by exhaustive enumeration.
pub fn brute_count(f: &Polynomial, p: u64, l: u32, cap: u128) -> Result<u64> {
    require_integer(f)?;
    let m = modulus(p, l)?;
    let n = f.nvars();
    let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let mp = f.reduce_mod(p, l)?;
    let chunk = (size / m as u128).max(1);
    let count = (0..m.min(size as u64))
        .into_par_iter()
        .map(|a| {
            let mut x = vec![0u64; n];
            let mut c = 0u64;
            for r in 0..chunk {
                decode(a as u128 * chunk + r, m, n, &mut x);
                if mp.eval(&x) == 0 {
                    c += 1;
                }
            }
            c
        })
        .sum();
    Ok(count)
}

fn ord(v: u64, p: u64, cap: u32) -> u32 {
    if v == 0 {
        return cap;
    }
    let (mut v, mut k) = (v, 0);
    while v % p == 0 {
        v /= p;
        k += 1;
    }
    k.min(cap)
}

/// Taylor coefficients `D_beta f = (1/beta!) d^beta f` for every `beta != 0`
/// below some support exponent; integral for integer `f`.
fn taylor_coefficients(f: &Polynomial) -> Vec<(Vec<u32>, Polynomial)> {
    let n = f.nvars();
    let mut betas: Vec<Vec<u32>> = vec![];
    for (e, _) in f.terms() {
        let mut b = vec![0u32; n];
        loop {
            if b.iter().any(|&x| x > 0) && !betas.contains(&b) {
                betas.push(b.clone());
            }
            let mut i = 0;
            while i < n && b[i] == e.0[i] {
                b[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            b[i] += 1;
        }
    }
    betas.sort();
    betas
        .into_iter()
        .map(|b| {
            let terms = f.terms().filter(|(e, _)| e.0.iter().zip(&b).all(|(x, y)| x >= y)).map(|(e, c)| {
                let binom: BigInt = e.0.iter().zip(&b).map(|(&a, &k)| binomial(a, k)).product();
                (e.0.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<u32>>(), c * Q::from_integer(binom))
            });
            let d = Polynomial::from_terms(n, terms).expect("exponent count matches");
            (b, d)
        })
        .collect()
}

fn binomial(a: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(a - i) / BigInt::from(i + 1))
}

struct Hensel<'a> {
    p: u64,
    n: usize,
    top: u32,
    f: &'a ModPoly,
    taylor: Vec<(Vec<u32>, ModPoly)>,
    /// `pw[e] = p^e`.
    pw: Vec<BigInt>,
    scale: u32,
    nodes: &'a AtomicU64,
    branch_cap: u64,
}

impl Hensel<'_> {
    /// Adds `p^scale * measure{y in B : p^l | f(y)}` to `acc[l]` for the ball
    /// `B = prod (x_i + p^{j_i} Z_p)`.
    ///
    /// With `f(x + p^j t) = f(x) + sum_beta D_beta f(x) p^{j.beta} t^beta`, let
    /// `mu` be the least valuation of the non-constant terms. The ball closes
    /// when `ord f(x) < mu` (constant valuation), when `mu >= top`, or when
    /// only linear terms attain `mu` (a unit-gradient form after dividing by
    /// `p^mu`). Otherwise one coordinate of a minimal nonlinear term is split.
    fn ball(&self, x: &mut Vec<u64>, j: &mut Vec<u32>, acc: &mut [BigInt], depth: usize) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.branch_cap {
            return Err(Error::BranchCapExceeded(self.branch_cap));
        }
        let (p, top) = (self.p, self.top);
        let vol = self.scale - j.iter().sum::<u32>();
        let w = ord(self.f.eval(x), p, top);
        let mut mu = top;
        let mut minimal: Vec<&Vec<u32>> = vec![];
        for (b, d) in &self.taylor {
            let shift: u32 = b.iter().zip(j.iter()).map(|(x, y)| x * y).sum();
            if shift > mu {
                continue;
            }
            let v = (ord(d.eval(x), p, top) + shift).min(top);
            if v < mu {
                mu = v;
                minimal.clear();
            }
            if v == mu && v < top {
                minimal.push(b);
            }
        }
        if w < mu || mu >= top {
            for l in 1..=w.min(top) {
                acc[l as usize] += &self.pw[vol as usize];
            }
            return Ok(());
        }
        let nonlinear: Vec<&&Vec<u32>> = minimal.iter().filter(|b| b.iter().sum::<u32>() > 1).collect();
        if nonlinear.is_empty() {
            for l in 1..=top {
                let e = vol - l.saturating_sub(mu);
                acc[l as usize] += &self.pw[e as usize];
            }
            return Ok(());
        }
        let i = (0..self.n)
            .filter(|&i| nonlinear.iter().any(|b| b[i] > 0))
            .min_by_key(|&i| (j[i], i))
            .expect("nonlinear term has a variable");
        let step = p.pow(j[i]);
        let base = x[i];
        j[i] += 1;
        let children = |s: u64| -> Result<Vec<BigInt>> {
            let mut xc = x.clone();
            let mut jc = j.clone();
            xc[i] = base + step * s;
            let mut part = vec![BigInt::zero(); acc.len()];
            self.ball(&mut xc, &mut jc, &mut part, depth + 1)?;
            Ok(part)
        };
        if depth < 3 {
            let parts = (0..p).into_par_iter().map(children).collect::<Result<Vec<_>>>()?;
            for part in parts {
                for (a, b) in acc.iter_mut().zip(part) {
                    *a += b;
                }
            }
        } else {
            for s in 0..p {
                x[i] = base + step * s;
                self.ball(x, j, acc, depth + 1)?;
            }
            x[i] = base;
        }
        j[i] -= 1;
        Ok(())
    }
}

/// Solution counts `#{x mod p^l : p^l | f(x)}` for `l = 0..=top`, by Hensel
/// refinement of anisotropic balls.
pub fn hensel_counts(f: &Polynomial, p: u64, top: u32, branch_cap: u64) -> Result<(Vec<BigInt>, u64)> {
    require_integer(f)?;
    modulus(p, top)?;
    let n = f.nvars();
    let mp = f.reduce_mod(p, top)?;
    let taylor = taylor_coefficients(f)
        .into_iter()
        .map(|(b, d)| d.reduce_mod(p, top).map(|m| (b, m)))
        .collect::<Result<Vec<_>>>()?;
    let scale = (n as u32 + 1) * top;
    let pb = BigInt::from(p);
    let pw: Vec<BigInt> = (0..=scale).map(|e| Pow::pow(&pb, e)).collect();
    let nodes = AtomicU64::new(0);
    let h = Hensel { p, n, top, f: &mp, taylor, pw, scale, nodes: &nodes, branch_cap };
    let mut acc = vec![BigInt::zero(); top as usize + 1];
    if top > 0 {
        h.ball(&mut vec![0; n], &mut vec![0; n], &mut acc, 0)?;
    }
    // acc[l] = p^scale * N_l; convert to solution counts p^{ln} N_l
    let mut counts: Vec<BigInt> = acc
        .into_iter()
        .enumerate()
        .map(|(l, a)| {
            let e = scale - l as u32 * n as u32;
            let (qt, r) = a.div_rem(&h.pw[e as usize]);
            debug_assert!(r.is_zero());
            qt
        })
        .collect();
    counts[0] = BigInt::one();
    Ok((counts, nodes.into_inner()))
}

/// `N_l` for every requested level.
pub fn count_series(f: &Polynomial, p: u64, levels: &[u32], strategy: Strategy, cfg: &CountConfig) -> Result<CountSeries> {
    let n = f.nvars() as u32;
    let norm = |c: BigInt, l: u32| Q::new(c, Pow::pow(&BigInt::from(p), l * n));
    let (values, nodes) = match strategy {
        Strategy::Brute => {
            let vals = levels
                .iter()
                .map(|&l| brute_count(f, p, l, cfg.cap).map(|c| norm(BigInt::from(c), l)))
                .collect::<Result<Vec<_>>>()?;
            (vals, 0)
        }
        Strategy::Hensel => {
            let top = levels.iter().copied().max().unwrap_or(0);
            let (counts, nodes) = hensel_counts(f, p, top, cfg.branch_cap)?;
            (levels.iter().map(|&l| norm(counts[l as usize].clone(), l)).collect(), nodes)
        }
    };
    Ok(CountSeries { p, strategy, levels: levels.to_vec(), values, nodes })
}

/// Single-level convenience wrapper.
pub fn count_divisibility(f: &Polynomial, p: u64, l: u32, strategy: Strategy, cfg: &CountConfig) -> Result<Q> {
    Ok(count_series(f, p, &[l], strategy, cfg)?.values.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rational::qf;

    fn both(text: &str, n: usize, p: u64, l: u32) -> (Q, Q) {
        let f = parse_polynomial(text, n).unwrap();
        let cfg = CountConfig::default();
        (
            count_divisibility(&f, p, l, Strategy::Brute, &cfg).unwrap(),
            count_divisibility(&f, p, l, Strategy::Hensel, &cfg).unwrap(),
        )
    }

    #[test]
    fn examples() {
        for p in [2u64, 3, 5] {
            for l in 1..4 {
                let (b, h) = both("x1", 1, p, l);
                assert_eq!(b, Q::new(1.into(), BigInt::from(p).pow(l)));
                assert_eq!(b, h);
            }
        }
        // x in {0, 9, 18}
        let (b, h) = both("x1^2", 1, 3, 3);
        assert_eq!((b, h), (qf(1, 9), qf(1, 9)));
        // brute force over the 81 pairs, independently of the library
        let direct = (0..9).flat_map(|a| (0..9).map(move |b| (a, b))).filter(|(a, b)| (a * a + b * b * b) % 9 == 0).count();
        let (b, h) = both("x1^2 + x2^3", 2, 3, 2);
        assert_eq!(b, qf(direct as i64, 81));
        assert_eq!(b, qf(15, 81));
        assert_eq!(h, b);
    }

    #[test]
    fn brute_matches_hensel_on_mixed_inputs() {
        for (t, n) in [("x1*x2", 2), ("x1^2 - 2*x1*x2 + x2^2", 2), ("x1^2*x2 + x1*x2^3", 2), ("x1^2 + x2^2 + x3^3", 3), ("x1 + 3*x2^2", 2)] {
            for p in [2u64, 3] {
                for l in 1..4 {
                    let (b, h) = both(t, n, p, l);
                    assert_eq!(b, h, "{t} p={p} l={l}");
                }
            }
        }
    }

    #[test]
    fn guards() {
        let f = parse_polynomial("x1^2 + x2^3", 2).unwrap();
        assert!(matches!(brute_count(&f, 3, 10, 1000), Err(Error::CapExceeded { .. })));
        assert!(matches!(hensel_counts(&f, 3, 12, 10), Err(Error::BranchCapExceeded(10))));
        let g = parse_polynomial("1/2*x1", 1).unwrap();
        assert!(matches!(brute_count(&g, 3, 1, 1000), Err(Error::NonIntegerCoefficient(_))));
    }
}
