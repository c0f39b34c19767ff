//! Normalized exponential sums `S_l = p^{-ln} sum_x e^{2 pi i f(x) / p^l}`.

use super::counting::{decode, modulus, require_integer};
use crate::poly::Polynomial;
use crate::rational::{to_f64, Q};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    pub fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

const BLOCKS: u128 = 1024;

/// `hist[v] = #{x in {0..p^l-1}^n : f(x) = v mod q}`.
pub fn value_histogram(f: &Polynomial, p: u64, l: u32, q: u64, cap: u128) -> Result<Vec<u64>> {
    require_integer(f)?;
    let m = modulus(p, l)?;
    let n = f.nvars();
    let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    if q as u128 > cap {
        return Err(Error::CapExceeded { size: q as u128, cap });
    }
    let qexp = (0..64).find(|&k| p.checked_pow(k) == Some(q)).ok_or_else(|| Error::InvalidConfig(format!("{q} is not a power of {p}")))?;
    let mp = f.reduce_mod(p, qexp)?;
    // contiguous blocks folded into one histogram per rayon split, so the
    // number of live histograms stays near the thread count
    let blocks = size.min(BLOCKS);
    Ok((0..blocks as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; q as usize],
            |mut h, b| {
                let mut x = vec![0u64; n];
                let (lo, hi) = (size * b as u128 / blocks, size * (b as u128 + 1) / blocks);
                for idx in lo..hi {
                    decode(idx, m, n, &mut x);
                    h[mp.eval(&x) as usize] += 1;
                }
                h
            },
        )
        .reduce(
            || vec![0u64; q as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        ))
}

/// `sum_v hist[v] e^{2 pi i u v / q} / total`.
fn character_average(hist: &[u64], u: u64, q: u64, total: f64) -> Complex64 {
    let mut acc = KahanSum::default();
    for (v, &c) in hist.iter().enumerate() {
        if c > 0 {
            let phase = ((u as u128 * v as u128) % q as u128) as f64 / q as f64;
            acc.add(Complex64::from_polar(c as f64, TAU * phase));
        }
    }
    acc.value() / total
}

pub fn exp_sum(f: &Polynomial, p: u64, l: u32, cap: u128) -> Result<Complex64> {
    let q = modulus(p, l)?;
    let hist = value_histogram(f, p, l, q, cap)?;
    let total: u64 = hist.iter().sum();
    Ok(character_average(&hist, 1, q, total as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpSumSeries {
    pub p: u64,
    pub levels: Vec<u32>,
    /// `(re, im)` per level.
    pub values: Vec<(f64, f64)>,
    pub abs: Vec<f64>,
}

pub fn exp_sum_series(f: &Polynomial, p: u64, levels: &[u32], cap: u128) -> Result<ExpSumSeries> {
    let values = levels.iter().map(|&l| if l == 0 { Ok(Complex64::new(1.0, 0.0)) } else { exp_sum(f, p, l, cap) }).collect::<Result<Vec<_>>>()?;
    Ok(ExpSumSeries {
        p,
        levels: levels.to_vec(),
        abs: values.iter().map(|z| z.norm()).collect(),
        values: values.iter().map(|z| (z.re, z.im)).collect(),
    })
}

/// `E(u) = p^{-ln} sum_x e^{2 pi i u f(x) / p^k}` for `u = 0..p^l - 1`, where
/// `p^k` is the character modulus (`k = l` for the true identity).
pub fn character_family(f: &Polynomial, p: u64, l: u32, char_exp: u32, cap: u128) -> Result<Vec<Complex64>> {
    let m = modulus(p, l)?;
    let q = modulus(p, char_exp)?;
    let hist = value_histogram(f, p, l, q, cap)?;
    let total: u64 = hist.iter().sum();
    Ok((0..m).into_par_iter().map(|u| character_average(&hist, u, q, total as f64)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub p: u64,
    pub l: u32,
    pub count: String,
    pub count_f64: f64,
    /// `(re, im)` of `p^{-l} sum_u E(u)`.
    pub character_side: (f64, f64),
    pub error: f64,
    pub passed: bool,
}

/// Compare `N_l` against the character average over `u mod p^l`.
pub fn cross_check_identity(count: &Q, p: u64, l: u32, family: &[Complex64]) -> CrossCheck {
    let mut acc = KahanSum::default();
    for z in family {
        acc.add(*z);
    }
    let side = acc.value() / p.pow(l) as f64;
    let c = to_f64(count);
    let error = (side - Complex64::new(c, 0.0)).norm();
    CrossCheck {
        p,
        l,
        count: count.to_string(),
        count_f64: c,
        character_side: (side.re, side.im),
        error,
        passed: error <= 1e-9,
    }
}
