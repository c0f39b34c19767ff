//! Maximal vanishing order `o(F)` of a face polynomial on the torus.

use super::{Face, NewtonPolyhedron};
use crate::error::{Error, Result};
use crate::poly::univariate;
use crate::poly::{ModPoly, Polynomial};
use crate::rational::{gcd_i64, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroOrderMethod {
    /// Exact for vertices and edges in any dimension, gradient check otherwise.
    Auto,
    Exact2d,
    GradientCheck,
    Sampled(Vec<u64>),
    UserOverride(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroOrder {
    pub o: u32,
    pub certainty: Certainty,
}

/// Write `f_F = x^{v0} P(x^w)` for an edge with primitive direction `w` and
/// return the largest multiplicity of a nonzero root of `P`. `x -> x^w` is a
/// submersion of the torus, so this is the torus vanishing order.
fn edge_order(f_face: &Polynomial, pts: &[Vec<i64>]) -> u32 {
    let (v0, v1) = (&pts[0], &pts[1]);
    let diff: Vec<i64> = v1.iter().zip(v0).map(|(a, b)| a - b).collect();
    let g = diff.iter().fold(0, |acc, &x| gcd_i64(acc, x));
    let w: Vec<i64> = diff.iter().map(|x| x / g).collect();
    let mut coeffs: univariate::UPoly = vec![Q::zero(); g as usize + 1];
    for (e, c) in f_face.terms() {
        let a = e.as_i64();
        let j = a
            .iter()
            .zip(v0)
            .zip(&w)
            .find(|(_, &wi)| wi != 0)
            .map(|((ai, vi), wi)| (ai - vi) / wi)
            .unwrap();
        coeffs[j as usize] = c.clone();
    }
    univariate::max_nonzero_root_multiplicity(&coeffs) as u32
}

fn largest_primes(n: usize, count: usize) -> Vec<u64> {
    let cap: f64 = 3.0e5;
    let mut p = cap.powf(1.0 / n as f64).floor() as u64;
    let mut out = Vec::new();
    while out.len() < count && p >= 5 {
        if (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            out.push(p);
        }
        p -= 1;
    }
    out
}

fn all_partials(f: &Polynomial, order: usize) -> Vec<Polynomial> {
    let mut layer = vec![f.clone()];
    for _ in 0..order {
        layer = layer
            .iter()
            .flat_map(|g| (0..f.nvars()).map(move |i| g.derivative(i).unwrap()))
            .filter(|g| !g.is_zero())
            .collect();
    }
    layer
}

/// Torus points over `F_p` where `f` and its gradient vanish, and the
/// largest vanishing order among them (capped at `max_order`).
fn singular_order_mod_p(f: &Polynomial, p: u64, max_order: usize) -> Option<u32> {
    let reduce = |g: &Polynomial| g.reduce_mod(p, 1).ok();
    let levels: Vec<Vec<ModPoly>> = (0..=max_order)
        .map(|k| all_partials(f, k).iter().filter_map(reduce).collect())
        .collect();
    if levels[0].is_empty() {
        return None;
    }
    let n = f.nvars();
    let mut x = vec![1u64; n];
    let mut best = 0u32;
    loop {
        let mut order = 0u32;
        while (order as usize) <= max_order
            && levels[order as usize].iter().all(|g| g.eval(&x) == 0)
        {
            order += 1;
        }
        if order >= 2 {
            best = best.max(order);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(best);
            }
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 1;
            i += 1;
        }
    }
}

fn modular_check(f_face: &Polynomial, primes: &[u64]) -> ZeroOrder {
    let max_order = f_face.total_degree() as usize;
    let results: Vec<u32> = primes
        .iter()
        .filter_map(|&p| singular_order_mod_p(f_face, p, max_order))
        .collect();
    // a singular locus defined over Q shows up for most primes; isolated
    // reductions at bad primes do not
    let hits: Vec<u32> = results.iter().copied().filter(|&o| o >= 2).collect();
    let o = if !results.is_empty() && 2 * hits.len() > results.len() {
        let mut h = hits.clone();
        h.sort_unstable();
        h[h.len() / 2]
    } else {
        1
    };
    ZeroOrder { o, certainty: Certainty::Heuristic }
}

/// `o(F)` for the face polynomial `f_face` of `face` in `poly`.
pub fn face_zero_order(
    f_face: &Polynomial,
    poly: &NewtonPolyhedron,
    face: &Face,
    method: &ZeroOrderMethod,
) -> Result<ZeroOrder> {
    let exact = |o| Ok(ZeroOrder { o, certainty: Certainty::Exact });
    if let ZeroOrderMethod::UserOverride(o) = method {
        return exact(*o);
    }
    if let ZeroOrderMethod::Exact2d = method {
        if f_face.nvars() != 2 {
            return Err(Error::Exact2dDimension(f_face.nvars()));
        }
    }
    if f_face.len() <= 1 {
        return exact(0);
    }
    let pts = poly.face_points(face);
    match method {
        ZeroOrderMethod::Auto | ZeroOrderMethod::Exact2d if face.compact && face.dim == 1 => {
            exact(edge_order(f_face, &pts))
        }
        ZeroOrderMethod::Exact2d => Err(Error::Precondition(
            "exact two-variable zero order needs a vertex or a compact edge".into(),
        )),
        ZeroOrderMethod::Sampled(primes) => Ok(modular_check(f_face, primes)),
        _ => Ok(modular_check(f_face, &largest_primes(f_face.nvars(), 5))),
    }
}
