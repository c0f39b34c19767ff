//! Numeric evidence that a function is a unit (bounded away from zero and
//! infinity, with no sign change) on a small box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateConfig {
    pub samples: usize,
    pub radius: f64,
    /// Allowed ratio `|u(x) / u(ref)|` lies in `[1/bound, bound]`.
    pub bound: f64,
    pub seed: u64,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        CertificateConfig { samples: 1000, radius: 0.05, bound: 100.0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCertificate {
    pub center: Vec<f64>,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub reference_value: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub passed: bool,
    /// First failing sample, if any.
    pub witness: Option<Vec<f64>>,
}

/// Sample `u` on `center + [-r, r]^n` and compare against its value at
/// `center + r/2`. A sign change or a ratio outside the band fails.
pub fn unit_certificate<F: Fn(&[f64]) -> f64>(u: F, center: &[f64], cfg: &CertificateConfig) -> UnitCertificate {
    let n = center.len();
    let r = cfg.radius;
    let reference_pt: Vec<f64> = center.iter().map(|c| c + r / 2.0).collect();
    let reference = u(&reference_pt);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    let mut witness = None;
    let ok_ref = reference.is_finite() && reference != 0.0;
    for _ in 0..cfg.samples {
        let x: Vec<f64> = (0..n).map(|i| center[i] + rng.gen_range(-r..=r)).collect();
        let v = u(&x);
        let ratio = v / reference;
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
        let bad = !ok_ref || !ratio.is_finite() || ratio < 1.0 / cfg.bound || ratio > cfg.bound;
        if bad && witness.is_none() {
            witness = Some(x);
        }
    }
    UnitCertificate {
        center: center.to_vec(),
        radius: r,
        samples: cfg.samples,
        seed: cfg.seed,
        reference_value: reference,
        min_ratio,
        max_ratio,
        passed: witness.is_none(),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_non_unit() {
        let cfg = CertificateConfig::default();
        let c = unit_certificate(|x| 1.0 + x[0].powi(3) * x[1], &[0.0, 0.0], &cfg);
        assert!(c.passed);
        assert!(c.min_ratio > 0.999 && c.max_ratio < 1.001);
        let c = unit_certificate(|x| x[0], &[0.0], &cfg);
        assert!(!c.passed);
        assert!(c.witness.is_some());
    }
}
