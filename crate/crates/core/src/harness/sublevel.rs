//! Monte Carlo and quadrature estimates of `|{x : |f(x)| < eps}|` near the origin.

use crate::geometry::FieldTag;
use crate::poly::{univariate, Polynomial};
use crate::rational::to_f64;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// `f` with `f64` coefficients, for hot evaluation loops.
#[derive(Debug, Clone)]
pub struct FloatPoly {
    pub nvars: usize,
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl FloatPoly {
    pub fn new(f: &Polynomial) -> Self {
        FloatPoly { nvars: f.nvars(), terms: f.terms().map(|(e, c)| (to_f64(c), e.0.clone())).collect() }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| e.iter().zip(x).fold(*c, |acc, (&k, &v)| if k == 0 { acc } else { acc * v.powi(k as i32) }))
            .sum()
    }

    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, e)| e.iter().zip(z).fold(Complex64::new(*c, 0.0), |acc, (&k, v)| if k == 0 { acc } else { acc * v.powi(k as i32) }))
            .sum()
    }

    /// Coefficients in the last variable after fixing the others.
    pub fn last_var_coeffs(&self, head: &[f64]) -> Vec<f64> {
        let n = self.nvars;
        let deg = self.terms.iter().map(|(_, e)| e[n - 1]).max().unwrap_or(0) as usize;
        let mut out = vec![0.0; deg + 1];
        for (c, e) in &self.terms {
            out[e[n - 1] as usize] += e[..n - 1].iter().zip(head).fold(*c, |acc, (&k, &v)| acc * v.powi(k as i32));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Sampler {
    /// Midpoint grid with `res` points per axis (real field).
    Grid { res: usize },
    /// Uniform samples in the box or polydisc.
    MonteCarlo { samples: u64, seed: u64 },
    /// Uniform samples of the first `n-1` coordinates with the last one
    /// integrated exactly through its sublevel intervals (real field).
    Sliced { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub eps: f64,
    pub volume: f64,
    pub stderr: f64,
    pub hits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeTable {
    pub field: FieldTag,
    pub radius: f64,
    pub sampler: Sampler,
    pub rows: Vec<VolumeEstimate>,
    pub note: Option<String>,
}

const CHUNK: u64 = 1 << 16;

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Counter-based Monte Carlo: bucket `|f|` against every threshold at once.
fn monte_carlo<S: Fn(&mut ChaCha8Rng) -> f64 + Sync>(eps: &[f64], samples: u64, seed: u64, sample_abs: S) -> Vec<u64> {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let mut hits = vec![0u64; eps.len()];
            let len = CHUNK.min(samples - c * CHUNK);
            for _ in 0..len {
                let v = sample_abs(&mut rng);
                // eps is sorted ascending: first threshold above v and all later ones hit
                let i = eps.partition_point(|&e| e <= v);
                if i < eps.len() {
                    hits[i] += 1;
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; eps.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
        .into_iter()
        .scan(0u64, |acc, h| {
            *acc += h;
            Some(*acc)
        })
        .collect()
}

fn proportion_rows(eps: &[f64], hits: &[u64], total: u64, volume: f64) -> Vec<VolumeEstimate> {
    eps.iter()
        .zip(hits)
        .map(|(&e, &h)| {
            let p = h as f64 / total as f64;
            VolumeEstimate { eps: e, volume: volume * p, stderr: volume * (p * (1.0 - p) / total as f64).sqrt(), hits: h }
        })
        .collect()
}

/// Sublevel volumes of `f` on `[-r, r]^n` (real) or the polydisc `|z_i| <= r`
/// (complex), for every threshold in `eps`.
pub fn sublevel_volumes(f: &Polynomial, field: FieldTag, eps: &[f64], sampler: &Sampler, radius: f64) -> Result<VolumeTable> {
    if eps.iter().any(|&e| !(e > 0.0)) || !(radius > 0.0) {
        return Err(Error::InvalidConfig("eps and radius must be positive".into()));
    }
    let mut order: Vec<usize> = (0..eps.len()).collect();
    order.sort_by(|&a, &b| eps[a].partial_cmp(&eps[b]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| eps[i]).collect();
    let fp = FloatPoly::new(f);
    let n = f.nvars();
    let (rows, note) = match (field, sampler) {
        (FieldTag::Complex, Sampler::MonteCarlo { samples, seed }) => {
            let hits = monte_carlo(&sorted, *samples, *seed, |rng| {
                let z: Vec<Complex64> = (0..n)
                    .map(|_| Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>()))
                    .collect();
                fp.eval_complex(&z).norm()
            });
            (proportion_rows(&sorted, &hits, *samples, (PI * radius * radius).powi(n as i32)), None)
        }
        (FieldTag::Complex, _) => return Err(Error::InvalidConfig("complex volumes use the Monte Carlo sampler".into())),
        (FieldTag::PAdic { .. }, _) => return Err(Error::InvalidConfig("p-adic volumes are computed by counting".into())),
        (FieldTag::Real, Sampler::MonteCarlo { samples, seed }) => {
            let hits = monte_carlo(&sorted, *samples, *seed, |rng| {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-radius..radius)).collect();
                fp.eval(&x).abs()
            });
            (proportion_rows(&sorted, &hits, *samples, (2.0 * radius).powi(n as i32)), None)
        }
        (FieldTag::Real, Sampler::Grid { res }) => {
            let res = (*res).max(1);
            let total = (res as u64).pow(n as u32);
            let h = 2.0 * radius / res as f64;
            let hits = (0..total)
                .into_par_iter()
                .fold(
                    || vec![0u64; sorted.len()],
                    |mut acc, idx| {
                        let mut r = idx;
                        let x: Vec<f64> = (0..n)
                            .map(|_| {
                                let k = r % res as u64;
                                r /= res as u64;
                                -radius + (k as f64 + 0.5) * h
                            })
                            .collect();
                        let v = fp.eval(&x).abs();
                        for (a, &e) in acc.iter_mut().zip(&sorted) {
                            *a += (v < e) as u64;
                        }
                        acc
                    },
                )
                .reduce(|| vec![0u64; sorted.len()], |a, b| a.iter().zip(b).map(|(x, y)| x + y).collect());
            let vol = (2.0 * radius).powi(n as i32);
            let rows = sorted
                .iter()
                .zip(&hits)
                .map(|(&e, &k)| VolumeEstimate { eps: e, volume: vol * k as f64 / total as f64, stderr: 0.0, hits: k })
                .collect();
            (rows, Some(format!("midpoint grid with {res} points per axis; error is resolution-limited")))
        }
        (FieldTag::Real, Sampler::Sliced { samples, seed }) => {
            let chunks = samples.div_ceil(CHUNK);
            let sums = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = chunk_rng(*seed, c);
                    let mut s = vec![(0.0f64, 0.0f64, 0u64); sorted.len()];
                    for _ in 0..CHUNK.min(samples - c * CHUNK) {
                        let head: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-radius..radius)).collect();
                        let g = fp.last_var_coeffs(&head);
                        for (acc, &e) in s.iter_mut().zip(&sorted) {
                            let m = univariate::sublevel_measure(&g, e, -radius, radius);
                            acc.0 += m;
                            acc.1 += m * m;
                            acc.2 += (m > 0.0) as u64;
                        }
                    }
                    s
                })
                .reduce(
                    || vec![(0.0, 0.0, 0); sorted.len()],
                    |a, b| a.iter().zip(b).map(|(x, y)| (x.0 + y.0, x.1 + y.1, x.2 + y.2)).collect(),
                );
            let vol = (2.0 * radius).powi(n as i32 - 1);
            let k = *samples as f64;
            let rows = sorted
                .iter()
                .zip(sums)
                .map(|(&e, (s, s2, h))| {
                    let mean = s / k;
                    let var = (s2 / k - mean * mean).max(0.0);
                    VolumeEstimate { eps: e, volume: vol * mean, stderr: vol * (var / k).sqrt(), hits: h }
                })
                .collect();
            (rows, None)
        }
    };
    // restore the caller's order
    let mut out = rows.clone();
    for (slot, &i) in order.iter().enumerate() {
        out[i] = rows[slot].clone();
    }
    Ok(VolumeTable { field, radius, sampler: sampler.clone(), rows: out, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn slab_volume() {
        let f = parse_polynomial("x1", 2).unwrap();
        let t = sublevel_volumes(&f, FieldTag::Real, &[0.1, 0.01], &Sampler::MonteCarlo { samples: 200_000, seed: 3 }, 0.5).unwrap();
        for (r, want) in t.rows.iter().zip([0.2, 0.02]) {
            assert!((r.volume - want).abs() < 3.0 * r.stderr + 1e-12, "{r:?}");
        }
        let g = parse_polynomial("x2", 2).unwrap();
        let s = sublevel_volumes(&g, FieldTag::Real, &[0.1], &Sampler::Sliced { samples: 1000, seed: 3 }, 0.5).unwrap();
        assert!((s.rows[0].volume - 0.2).abs() < 1e-9);
    }

    #[test]
    fn hyperbola_against_quadrature() {
        // |{|x1 x2| < eps}| on [-1/2, 1/2]^2 = 4 * int_0^{1/2} min(1/2, eps/x1) dx1
        let eps = 1e-3;
        let m = 200_000;
        let h = 0.5 / m as f64;
        let quad: f64 = (0..m).map(|i| (eps / ((i as f64 + 0.5) * h)).min(0.5) * h).sum::<f64>() * 4.0;
        let f = parse_polynomial("x1*x2", 2).unwrap();
        let t = sublevel_volumes(&f, FieldTag::Real, &[eps], &Sampler::MonteCarlo { samples: 1 << 20, seed: 1 }, 0.5).unwrap();
        assert!((t.rows[0].volume - quad).abs() < 4.0 * t.rows[0].stderr, "{} vs {quad}", t.rows[0].volume);
        let s = sublevel_volumes(&f, FieldTag::Real, &[eps], &Sampler::Sliced { samples: 1 << 16, seed: 1 }, 0.5).unwrap();
        assert!((s.rows[0].volume - quad).abs() < 4.0 * s.rows[0].stderr, "{} vs {quad}", s.rows[0].volume);
    }

    #[test]
    fn monotone_and_reproducible() {
        let f = parse_polynomial("x1^2 + x2^3", 2).unwrap();
        let eps = [1e-1, 1e-3, 1e-2];
        let s = Sampler::MonteCarlo { samples: 300_000, seed: 9 };
        let a = sublevel_volumes(&f, FieldTag::Real, &eps, &s, 0.5).unwrap();
        let b = sublevel_volumes(&f, FieldTag::Real, &eps, &s, 0.5).unwrap();
        assert_eq!(a, b);
        assert!(a.rows[1].volume <= a.rows[2].volume && a.rows[2].volume <= a.rows[0].volume);
        let c = sublevel_volumes(&f, FieldTag::Complex, &eps, &s, 0.5).unwrap();
        assert!(c.rows[1].volume <= c.rows[2].volume);
    }
}
