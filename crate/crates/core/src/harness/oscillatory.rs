//! Real oscillatory integrals `I(lambda) = int e^{i lambda f(x)} phi(x) dx`.
//!
//! The decay fit built on this table is heuristic: fixed-grid quadrature
//! cannot certify asymptotics.

use super::sublevel::FloatPoly;
use crate::poly::Polynomial;
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscConfig {
    /// Bump support `[-r, r]^n`; the bump is `prod cos^2(pi x_i / 2r)`.
    pub radius: f64,
    /// Grid points per axis per unit of `lambda`.
    pub res_factor: f64,
    pub min_res: usize,
    /// Per-axis resolution ceiling.
    pub max_res: usize,
}

impl Default for OscConfig {
    fn default() -> Self {
        OscConfig { radius: 0.5, res_factor: 8.0, min_res: 64, max_res: 4096 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscRow {
    pub lambda: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub res: usize,
    /// The requested resolution exceeded `max_res`.
    pub under_resolved: bool,
}

fn quadrature(fp: &FloatPoly, lambda: f64, res: usize, r: f64) -> Complex64 {
    let n = fp.nvars;
    let h = 2.0 * r / res as f64;
    let nodes: Vec<(f64, f64)> = (1..res)
        .map(|k| {
            let x = -r + k as f64 * h;
            (x, (PI * x / (2.0 * r)).cos().powi(2))
        })
        .collect();
    let m = nodes.len() as u64;
    let total = m.pow(n as u32);
    let s: Complex64 = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut i = idx;
            let mut x = vec![0.0; n];
            let mut w = 1.0;
            for xi in x.iter_mut() {
                let (v, b) = nodes[(i % m) as usize];
                i /= m;
                *xi = v;
                w *= b;
            }
            Complex64::from_polar(w, lambda * fp.eval(&x))
        })
        .sum();
    s * h.powi(n as i32)
}

/// `I(lambda)` for each `lambda` (ascending, `>= 1`) by trapezoid quadrature;
/// the bump vanishes to second order at the boundary.
pub fn oscillatory_integral(f: &Polynomial, lambdas: &[f64], cfg: &OscConfig) -> Result<Vec<OscRow>> {
    if lambdas.iter().any(|&l| l < 1.0) || lambdas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig("lambda values must be >= 1 and ascending".into()));
    }
    let fp = FloatPoly::new(f);
    Ok(lambdas
        .iter()
        .map(|&lambda| {
            let want = ((cfg.res_factor * lambda).ceil() as usize).max(cfg.min_res);
            let res = want.min(cfg.max_res);
            let z = quadrature(&fp, lambda, res, cfg.radius);
            OscRow { lambda, re: z.re, im: z.im, abs: z.norm(), res, under_resolved: want > cfg.max_res }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn fresnel_decay() {
        // int e^{i lambda x^2} phi ~ phi(0) sqrt(pi / lambda)
        let f = parse_polynomial("x1^2", 1).unwrap();
        let rows = oscillatory_integral(&f, &[400.0, 1600.0], &OscConfig::default()).unwrap();
        for r in rows {
            let want = (PI / r.lambda).sqrt();
            assert!((r.abs / want - 1.0).abs() < 0.05, "{r:?}");
        }
    }

    #[test]
    fn nonstationary_phase_is_tiny() {
        let f = parse_polynomial("x1", 1).unwrap();
        let rows = oscillatory_integral(&f, &[50.0], &OscConfig::default()).unwrap();
        assert!(rows[0].abs < 1e-4);
    }
}
