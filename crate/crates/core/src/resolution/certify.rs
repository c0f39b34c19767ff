//! Numeric leaf certificates and whole-tree consistency checks.

use super::multiprec::Chain;
use super::{ChartNode, LeafData, Move, ResolutionConfig, StepTag};
use crate::certificate::{unit_certificate, CertificateConfig, UnitCertificate};
use crate::linalg;
use crate::poly::Polynomial;
use crate::rational::to_f64;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafCertificate {
    /// `f(alpha(y)) / y^{m_leaf}` on the box.
    pub unit: UnitCertificate,
    /// `det D alpha(y) / y^{jacobian_monomial}` on the box.
    pub jacobian: UnitCertificate,
    /// Largest relative gap between a move's Jacobian determinant and a
    /// complex-step one, over every move and three points.
    pub finite_difference_error: f64,
    pub finite_difference_ok: bool,
    /// Diagnostic: each component `alpha_q`, `q < n`, keeps its sign on the
    /// positive part of the box.
    pub components_sign_stable: Vec<bool>,
    pub passed: bool,
}

/// Apply the composed map; returns the image and the chain-rule Jacobian.
fn forward(moves: &[Move], y: &[f64]) -> (Vec<f64>, f64) {
    let mut p = y.to_vec();
    let mut jac = 1.0;
    for mv in moves.iter().rev() {
        jac *= mv.jac_det_f64(&p);
        p = mv.apply_f64(&p);
    }
    (p, jac)
}

fn monomial(y: &[f64], e: &[u32]) -> f64 {
    y.iter().zip(e).map(|(v, &k)| v.powi(k as i32)).product()
}

fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    d
}

/// Worst relative gap between each move's Jacobian determinant and one
/// from complex-step derivatives `Im F(p + i h e_k) / h`, along the chain
/// from `y`.
fn fd_error(moves: &[Move], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let mut worst = 0.0f64;
    for mv in moves.iter().rev() {
        let scale = p.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let cols: Vec<Vec<f64>> = (0..p.len())
            .map(|k| {
                let h = 1e-20 * p[k].abs().max(1e-3 * scale);
                let z: Vec<Complex64> =
                    p.iter().enumerate().map(|(i, &v)| Complex64::new(v, if i == k { h } else { 0.0 })).collect();
                mv.apply_c64(&z).iter().map(|w| w.im / h).collect()
            })
            .collect();
        let analytic = mv.jac_det_f64(&p);
        let err = (analytic - det_f64(linalg::transpose(&cols))).abs() / analytic.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(if err.is_finite() { err } else { f64::INFINITY });
        p = mv.apply_f64(&p);
    }
    worst
}

/// Error weight of `sum c x^e`: each term's magnitude times its relative
/// error in units of eps, given relative errors `r` of `x`.
fn terms_bound<'a>(terms: impl Iterator<Item = (&'a [u32], f64)>, x: &[f64], r: &[f64]) -> f64 {
    terms
        .map(|(e, c)| {
            let size = e.iter().zip(x).fold(c.abs(), |acc, (&k, v)| acc * v.abs().powi(k as i32));
            let rel: f64 = e.iter().zip(r).map(|(&k, rk)| k as f64 * (rk + 1.0)).sum();
            size * (rel + e.iter().sum::<u32>() as f64 + 2.0)
        })
        .sum()
}

/// Image of `y` in f64 with a first-order running error bound: `(x, r)`
/// where `|x_j - exact_j| <= r_j |x_j| eps`, approximately.
fn forward_with_error(moves: &[Move], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut x = y.to_vec();
    let mut r = vec![0.0; y.len()];
    for mv in moves.iter().rev() {
        let next = mv.apply_f64(&x);
        let abs_err: Vec<f64> = match mv {
            Move::AffineLinear { matrix, shift } => matrix
                .iter()
                .zip(shift)
                .map(|(row, s)| {
                    row.iter().zip(&x).zip(&r).map(|((a, v), rv)| (to_f64(a) * v).abs() * (rv + 2.0)).sum::<f64>()
                        + to_f64(s).abs() * (row.len() as f64 + 1.0)
                })
                .collect(),
            Move::Monomial { map } => map
                .iter()
                .zip(&next)
                .map(|(row, v)| v.abs() * row.iter().zip(&r).map(|(&e, rk)| e as f64 * (rk + 1.0)).sum::<f64>())
                .collect(),
            Move::Quasitranslation { axis, g } => {
                let mut rest = x.clone();
                let mut rest_r = r.clone();
                rest.remove(*axis);
                rest_r.remove(*axis);
                let gt = g.poly().terms().map(|(e, c)| (e.0.as_slice(), to_f64(c)));
                let mut out: Vec<f64> = x.iter().zip(&r).map(|(v, rv)| v.abs() * rv).collect();
                out[*axis] = x[*axis].abs() * (r[*axis] + 1.0) + terms_bound(gt, &rest, &rest_r);
                out
            }
            Move::Dilation { .. } => next.iter().zip(&r).map(|(v, rv)| v.abs() * (rv + 1.0)).collect(),
        };
        r = abs_err.iter().zip(&next).map(|(e, v)| if *v == 0.0 { f64::INFINITY } else { e / v.abs() }).collect();
        x = next;
    }
    (x, r)
}

/// `f(alpha(y)) / y^m` for one leaf. When the running error bound of the
/// f64 value exceeds `TRUST`, the chain is recomputed in binary floating
/// point at 128, 256, ... bits until two precisions agree. Converted chains
/// are cached per precision.
struct PulledBack<'a> {
    f: &'a Polynomial,
    moves: &'a [Move],
    m: &'a [u32],
    chains: RefCell<Vec<Chain>>,
}

impl<'a> PulledBack<'a> {
    fn new(f: &'a Polynomial, moves: &'a [Move], m: &'a [u32]) -> Self {
        PulledBack { f, moves, m, chains: RefCell::new(Vec::new()) }
    }

    fn at_level(&self, level: usize, y: &[f64]) -> Option<f64> {
        let mut chains = self.chains.borrow_mut();
        while chains.len() <= level {
            let bits = 128 << chains.len();
            chains.push(Chain::new(self.f, self.moves, bits));
        }
        chains[level].ratio(y, self.m)
    }

    fn eval(&self, y: &[f64]) -> f64 {
        const TRUST: f64 = 1e-8;
        const LEVELS: usize = 4;
        let (x, r) = forward_with_error(self.moves, y);
        let value = self.f.eval_real(&x);
        let err = f64::EPSILON * terms_bound(self.f.terms().map(|(e, c)| (e.0.as_slice(), to_f64(c))), &x, &r);
        if err <= TRUST * value.abs() {
            return value / monomial(y, self.m);
        }
        let Some(mut prev) = self.at_level(0, y) else { return f64::NAN };
        for level in 1..LEVELS {
            let Some(next) = self.at_level(level, y) else { return f64::NAN };
            if (next - prev).abs() <= 1e-9 * next.abs() {
                return next;
            }
            prev = next;
        }
        f64::NAN
    }
}

/// Box shrink steps tried after the configured radius fails: `r / 4^s`.
const SHRINKS: i32 = 6;

/// Certify one leaf reached through `moves` (root first). The leaf is only
/// claimed on some neighbourhood of its center, so a failing box is retried
/// at `r/4, r/16, ...`; the certificates record the radius that was used.
pub fn verify_leaf(f: &Polynomial, moves: &[Move], leaf: &LeafData, cfg: &ResolutionConfig, seed: u64) -> LeafCertificate {
    let mut cert = verify_leaf_at(f, moves, leaf, cfg, seed, cfg.radius);
    for s in 1..=SHRINKS {
        if cert.passed {
            break;
        }
        cert = verify_leaf_at(f, moves, leaf, cfg, seed, cfg.radius * 0.25f64.powi(s));
    }
    cert
}

fn verify_leaf_at(f: &Polynomial, moves: &[Move], leaf: &LeafData, cfg: &ResolutionConfig, seed: u64, radius: f64) -> LeafCertificate {
    let n = leaf.center.len();
    let ccfg = CertificateConfig { samples: cfg.samples, radius, bound: cfg.unit_bound, seed };
    let pulled = PulledBack::new(f, moves, &leaf.m_leaf);
    let unit = unit_certificate(|y| pulled.eval(y), &leaf.center, &ccfg);
    let jacobian = unit_certificate(|y| forward(moves, y).1 / monomial(y, &leaf.jacobian_monomial), &leaf.center, &ccfg);
    let worst = (0..3)
        .map(|k| {
            let y: Vec<f64> = (0..n)
                .map(|i| leaf.center[i] + radius * (0.25 + 0.2 * ((i + k) % 3) as f64))
                .collect();
            fd_error(moves, &y)
        })
        .fold(0.0f64, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let pts: Vec<Vec<f64>> = (0..64)
        .map(|_| (0..n).map(|i| leaf.center[i] + rng.gen_range(radius * 1e-3..radius)).collect())
        .collect();
    let images: Vec<Vec<f64>> = pts.iter().map(|y| forward(moves, y).0).collect();
    let components_sign_stable = (0..n.saturating_sub(1))
        .map(|q| {
            let s0 = images[0][q].signum();
            images.iter().all(|x| x[q] != 0.0 && x[q].signum() == s0)
        })
        .collect();
    let fd_ok = worst <= 1e-6;
    LeafCertificate {
        passed: unit.passed && jacobian.passed && fd_ok,
        unit,
        jacobian,
        finite_difference_error: worst,
        finite_difference_ok: fd_ok,
        components_sign_stable,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeReport {
    pub leaves: usize,
    pub leaves_passed: usize,
    pub implicit_checks: usize,
    pub implicit_checks_passed: bool,
    /// Orders recorded at localization and order-drop nodes are below the
    /// order of the step they come from.
    pub orders_decrease: bool,
    /// Vertex-chart siblings under each sign pattern have disjoint interiors
    /// (sampled forward images).
    pub siblings_disjoint: bool,
    pub tree_height: usize,
    pub partial: bool,
    /// First failing leaf, as its path of step tags.
    pub first_failure: Option<Vec<StepTag>>,
    pub passed: bool,
}

fn certify_rec(
    f: &Polynomial,
    node: &mut ChartNode,
    path: &mut Vec<Move>,
    cfg: &ResolutionConfig,
    counter: &mut u64,
    tags: &mut Vec<StepTag>,
    failure: &mut Option<Vec<StepTag>>,
) {
    let before = path.len();
    path.extend(node.moves.iter().cloned());
    tags.push(node.step);
    if let Some(leaf) = node.leaf.as_mut() {
        let cert = verify_leaf(f, path, leaf, cfg, cfg.seed.wrapping_add(*counter));
        *counter += 1;
        if !cert.passed && failure.is_none() {
            *failure = Some(tags.clone());
        }
        leaf.certificate = Some(cert);
    }
    for c in node.children.iter_mut() {
        certify_rec(f, c, path, cfg, counter, tags, failure);
    }
    tags.pop();
    path.truncate(before);
}

fn orders_ok(node: &ChartNode, last_qt: Option<u32>) -> bool {
    let mut ok = true;
    if node.step == StepTag::OrderDrop {
        ok &= matches!((node.order, last_qt), (Some(k), Some(m)) if k < m);
    }
    let qt = if node.step == StepTag::Quasitranslation { node.order } else { last_qt };
    for c in &node.children {
        if c.step == StepTag::Localization {
            ok &= node.step == StepTag::FanChart && matches!((c.order, node.order), (Some(k), Some(m)) if k < m);
        }
        ok &= orders_ok(c, qt);
    }
    ok
}

fn is_vertex_leaf_chart(node: &ChartNode) -> Option<Vec<Vec<i64>>> {
    match (node.step, node.moves.first(), node.children.first()) {
        (StepTag::FanChart, Some(Move::Monomial { map }), Some(c))
            if node.children.len() == 1 && c.leaf.as_ref().is_some_and(|l| l.center.iter().all(|&x| x == 0.0)) =>
        {
            Some(map.clone())
        }
        _ => None,
    }
}

fn siblings_ok(node: &ChartNode, radius: f64, seed: u64) -> bool {
    let maps: Vec<Vec<Vec<i64>>> = node.children.iter().filter_map(is_vertex_leaf_chart).collect();
    let mut ok = true;
    if maps.len() > 1 {
        let inverses: Vec<Vec<Vec<f64>>> = maps
            .iter()
            .map(|m| {
                linalg::inverse(&linalg::from_i64(m))
                    .unwrap()
                    .iter()
                    .map(|r| r.iter().map(crate::rational::to_f64).collect())
                    .collect()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (i, m) in maps.iter().enumerate() {
            for _ in 0..50 {
                let n = m.len();
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(radius * 1e-2..radius)).collect();
                // -log x = M (-log y)
                let w: Vec<f64> = m.iter().map(|row| row.iter().zip(&y).map(|(&a, v)| -(a as f64) * v.ln()).sum()).collect();
                for (j, inv) in inverses.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let c: Vec<f64> = inv.iter().map(|r| r.iter().zip(&w).map(|(a, b)| a * b).sum()).collect();
                    if c.iter().all(|&x| x > 1e-9) {
                        ok = false;
                    }
                }
            }
        }
    }
    ok && node.children.iter().all(|c| siblings_ok(c, radius, seed))
}

/// Attach certificates to every leaf and summarize the tree checks.
pub fn certify_tree(f: &Polynomial, tree: &mut ChartNode, cfg: &ResolutionConfig) -> TreeReport {
    let mut counter = 0;
    let mut failure = None;
    certify_rec(f, tree, &mut Vec::new(), cfg, &mut counter, &mut Vec::new(), &mut failure);
    let nodes = tree.nodes();
    let leaves: Vec<&LeafData> = nodes.iter().filter_map(|n| n.leaf.as_ref()).collect();
    let leaves_passed = leaves.iter().filter(|l| l.certificate.as_ref().is_some_and(|c| c.passed)).count();
    let implicit: Vec<bool> = nodes.iter().filter_map(|n| n.implicit_check).collect();
    let implicit_ok = implicit.iter().all(|&b| b);
    let orders_decrease = orders_ok(tree, None);
    let siblings_disjoint = siblings_ok(tree, cfg.radius, cfg.seed);
    let partial = tree.is_partial();
    TreeReport {
        leaves: leaves.len(),
        leaves_passed,
        implicit_checks: implicit.len(),
        implicit_checks_passed: implicit_ok,
        orders_decrease,
        siblings_disjoint,
        tree_height: tree.max_depth(),
        partial,
        first_failure: failure,
        passed: !partial && leaves_passed == leaves.len() && !leaves.is_empty() && implicit_ok && orders_decrease && siblings_disjoint,
    }
}

