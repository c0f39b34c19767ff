//! Exact sparse multivariate polynomials over the rationals.

mod parse;
mod series;
pub mod univariate;

pub use parse::parse_polynomial;
pub use series::TruncatedSeries;

use crate::error::{Error, Result};
use crate::rational::{frac_string, to_f64, Q};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Multi-index of a monomial. Ordered by total degree, then with larger
/// powers of lower-indexed variables first, which is the printing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Q>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(nvars, ExponentVector::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    /// The coordinate function `x_{i+1}` (zero-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, ExponentVector::unit(nvars, i), Q::one())
    }

    pub fn monomial(nvars: usize, e: ExponentVector, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(e, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Q)>>(nvars: usize, terms: I) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(ExponentVector(e), c);
        }
        Ok(p)
    }

    pub fn from_i64_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), Q::from_integer((*c).into()))))
            .expect("term length matches nvars")
    }

    /// Add `c x^e` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, e: ExponentVector, c: Q) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Q)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().map(|e| e.as_i64()).collect()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&ExponentVector::zero(self.nvars))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.degree()).min()
    }

    /// Largest degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.0[var]).max().unwrap_or(0)
    }

    /// Componentwise minimum of the exponents (the monomial content).
    pub fn monomial_content(&self) -> Vec<u32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut m = first.0.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(&e.0) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Divide by `x^e`; every term must be divisible.
    pub fn div_monomial(&self, e: &[u32]) -> Option<Polynomial> {
        let mut out = Self::zero(self.nvars);
        for (k, c) in &self.terms {
            if k.0.iter().zip(e).any(|(a, b)| a < b) {
                return None;
            }
            out.terms
                .insert(ExponentVector(k.0.iter().zip(e).map(|(a, b)| a - b).collect()), c.clone());
        }
        Some(out)
    }

    pub fn mul_monomial(&self, e: &[u32]) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (k, c) in &self.terms {
            out.terms
                .insert(ExponentVector(k.0.iter().zip(e).map(|(a, b)| a + b).collect()), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Q::one())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = Self::zero(self.nvars);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                out.add_term(ka.add(kb), va * vb);
            }
        }
        out
    }

    /// Product with all terms of total degree `>= order` discarded.
    pub fn mul_truncated(&self, other: &Polynomial, order: u64) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (ka, va) in &self.terms {
            let da = ka.degree();
            if da >= order {
                break;
            }
            for (kb, vb) in &other.terms {
                if da + kb.degree() >= order {
                    break;
                }
                out.add_term(ka.add(kb), va * vb);
            }
        }
        out
    }

    pub fn truncate(&self, order: u64) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() < order)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative in the zero-based variable `var`.
    pub fn derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange { index: var + 1, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            let e = k.0[var];
            if e > 0 {
                let mut nk = k.clone();
                nk.0[var] -= 1;
                out.add_term(nk, v * Q::from_integer(BigInt::from(e)));
            }
        }
        Ok(out)
    }

    pub fn eval_real(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(k, c)| {
                k.0.iter().zip(x).fold(to_f64(c), |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum()
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(k, c)| {
                k.0.iter()
                    .zip(x)
                    .fold(Complex64::new(to_f64(c), 0.0), |acc, (&e, &xi)| acc * xi.powu(e))
            })
            .sum()
    }

    pub fn eval_exact(&self, x: &[Q]) -> Q {
        self.terms
            .iter()
            .map(|(k, c)| {
                k.0.iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (&e, xi)| acc * num_traits::pow(xi.clone(), e as usize))
            })
            .fold(Q::zero(), |a, b| a + b)
    }

    /// Exact value modulo `p^l` at the residue point.
    pub fn eval_mod(&self, point: &ResiduePoint) -> Result<u64> {
        let reduced = self.reduce_mod(point.p, point.l)?;
        Ok(reduced.eval(&point.coords))
    }

    /// Coefficients reduced into `Z/p^l`, for fast repeated evaluation.
    pub fn reduce_mod(&self, p: u64, l: u32) -> Result<ModPoly> {
        let modulus = p
            .checked_pow(l)
            .filter(|m| *m <= u64::MAX / 2)
            .ok_or_else(|| Error::Precondition(format!("p^l = {p}^{l} exceeds 63 bits")))?;
        let mbig = BigInt::from(modulus);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            let den = c.denom();
            if (den % BigInt::from(p)).is_zero() {
                return Err(Error::DenominatorDivisibleByP { denominator: den.to_string(), p });
            }
            let num = c.numer().mod_floor(&mbig).to_u64().unwrap();
            let d = den.mod_floor(&mbig).to_u64().unwrap();
            let inv = mod_inverse(d, modulus).expect("unit modulo p^l");
            let coeff = mulmod(num, inv, modulus);
            if coeff != 0 {
                terms.push((k.0.clone(), coeff));
            }
        }
        Ok(ModPoly { modulus, nvars: self.nvars, terms })
    }

    /// Pull back along `x_j = prod_k z_k^{M[j][k]}`: `x^a -> z^{M^T a}`.
    pub fn compose_monomial(&self, m: &[Vec<u32>]) -> Result<Polynomial> {
        if m.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: m.len() });
        }
        let out_n = m.first().map(|r| r.len()).unwrap_or(0);
        if m.iter().any(|r| r.len() != out_n) {
            return Err(Error::DimensionMismatch { expected: out_n, found: 0 });
        }
        let mut out = Self::zero(out_n);
        for (k, c) in &self.terms {
            let e: Vec<u32> = (0..out_n)
                .map(|col| (0..self.nvars).map(|j| m[j][col] * k.0[j]).sum())
                .collect();
            out.add_term(ExponentVector(e), c.clone());
        }
        Ok(out)
    }

    /// Substitute `x_j <- subs[j]`; all substitutes share one variable count.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        self.substitute_impl(subs, None)
    }

    pub fn substitute_truncated(&self, subs: &[Polynomial], order: u64) -> Result<Polynomial> {
        self.substitute_impl(subs, Some(order))
    }

    fn substitute_impl(&self, subs: &[Polynomial], order: Option<u64>) -> Result<Polynomial> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: subs.len() });
        }
        let out_n = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mul = |a: &Polynomial, b: &Polynomial| match order {
            Some(o) => a.mul_truncated(b, o),
            None => a.mul(b),
        };
        // cache powers of each substitute
        let mut powers: Vec<Vec<Polynomial>> = subs.iter().map(|s| vec![Self::one(s.nvars)]).collect();
        for j in 0..self.nvars {
            let d = self.degree_in(j) as usize;
            for _ in 1..=d {
                let next = mul(powers[j].last().unwrap(), &subs[j]);
                powers[j].push(next);
            }
        }
        let mut out = Self::zero(out_n);
        for (k, c) in &self.terms {
            let mut t = Self::constant(out_n, c.clone());
            for (j, &e) in k.0.iter().enumerate() {
                if e > 0 {
                    t = mul(&t, &powers[j][e as usize]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Substitute `x_i <- c_i x_i` for rational scalars.
    pub fn scale_vars(&self, c: &[Q]) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            let f = k
                .0
                .iter()
                .zip(c)
                .fold(v.clone(), |acc, (&e, ci)| acc * num_traits::pow(ci.clone(), e as usize));
            out.add_term(k.clone(), f);
        }
        out
    }

    /// View as a polynomial in `x_var` with coefficients in the remaining
    /// variables (returned with `x_var` still present but of degree 0).
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (k, v) in &self.terms {
            let e = k.0[var] as usize;
            let mut nk = k.clone();
            nk.0[var] = 0;
            out[e].add_term(nk, v.clone());
        }
        out
    }

    /// Drop the variable `var`, which must not occur.
    pub fn remove_var(&self, var: usize) -> Polynomial {
        let mut out = Self::zero(self.nvars - 1);
        for (k, v) in &self.terms {
            debug_assert_eq!(k.0[var], 0);
            let mut e = k.0.clone();
            e.remove(var);
            out.add_term(ExponentVector(e), v.clone());
        }
        out
    }

    /// Insert a new variable at position `var` with exponent 0 everywhere.
    pub fn insert_var(&self, var: usize) -> Polynomial {
        let mut out = Self::zero(self.nvars + 1);
        for (k, v) in &self.terms {
            let mut e = k.0.clone();
            e.insert(var, 0);
            out.add_term(ExponentVector(e), v.clone());
        }
        out
    }

    /// Restrict to the terms whose exponent lies in `keep`.
    pub fn restrict<F: Fn(&ExponentVector) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Embed into more variables by appending unused ones.
    pub fn with_nvars(&self, n: usize) -> Result<Polynomial> {
        if n < self.nvars {
            if self.terms.keys().any(|k| k.0[n..].iter().any(|&e| e > 0)) {
                return Err(Error::DimensionMismatch { expected: self.nvars, found: n });
            }
        }
        let mut out = Self::zero(n);
        for (k, v) in &self.terms {
            let mut e = k.0.clone();
            e.resize(n, 0);
            out.add_term(ExponentVector(e), v.clone());
        }
        Ok(out)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| to_f64(&c.abs())).fold(0.0, f64::max)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let factors: Vec<String> = k
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", frac_string(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", frac_string(&a))?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Polynomial", 2)?;
        st.serialize_field("nvars", &self.nvars)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            nvars: usize,
            text: String,
        }
        let r = Raw::deserialize(d)?;
        parse_polynomial(&r.text, r.nvars).map_err(serde::de::Error::custom)
    }
}

/// A point of `{0, ..., p^l - 1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePoint {
    pub coords: Vec<u64>,
    pub p: u64,
    pub l: u32,
}

impl ResiduePoint {
    pub fn new(coords: Vec<u64>, p: u64, l: u32) -> Result<Self> {
        let m = p.checked_pow(l).ok_or_else(|| Error::Precondition("p^l overflows".into()))?;
        if let Some(&c) = coords.iter().find(|&&c| c >= m) {
            return Err(Error::Precondition(format!("coordinate {c} not below p^l = {m}")));
        }
        Ok(ResiduePoint { coords, p, l })
    }
}

/// Polynomial with coefficients in `Z/modulus`.
#[derive(Debug, Clone)]
pub struct ModPoly {
    pub modulus: u64,
    pub nvars: usize,
    pub terms: Vec<(Vec<u32>, u64)>,
}

impl ModPoly {
    pub fn eval(&self, x: &[u64]) -> u64 {
        let m = self.modulus;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (&xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    t = mulmod(t, powmod(xi % m, ei as u64, m), m);
                }
            }
            acc = (acc + t) % m;
        }
        acc
    }

    /// Same polynomial with coefficients reduced to a smaller modulus.
    pub fn reduce(&self, modulus: u64) -> ModPoly {
        ModPoly {
            modulus,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c % modulus))
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    #[test]
    fn canonical_order_and_printing() {
        assert_eq!(p("x2^3 + x1^2", 2).to_string(), "x1^2 + x2^3");
        assert_eq!(p("x2^2 + x1*x2 + x1^2", 2).to_string(), "x1^2 + x1*x2 + x2^2");
        assert_eq!(p("3*x1^2*x2 - 1/2*x2^5", 2).to_string(), "3*x1^2*x2 - 1/2*x2^5");
        assert_eq!(p("x1*x2 - x1*x2", 2).to_string(), "0");
    }

    #[test]
    fn derivatives() {
        let f = p("x1^2 + x2^3", 2);
        assert_eq!(f.derivative(1).unwrap(), p("3*x2^2", 2));
        assert!(p("x2^3", 2).derivative(0).unwrap().is_zero());
        assert_eq!(p("3*x1^2*x2", 2).derivative(0).unwrap(), p("6*x1*x2", 2));
        assert!(f.derivative(2).is_err());
    }

    #[test]
    fn evaluation() {
        let f = p("x1^2 + x2^3", 2);
        assert_eq!(f.eval_real(&[2.0, 1.0]), 5.0);
        let g = p("x1^2*x2^2", 2);
        assert!((g.eval_real(&[0.1, 0.1]) - 1e-4).abs() < 1e-16);
        let z = f.eval_complex(&[Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]);
        assert!((z - Complex64::new(0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn modular_evaluation() {
        let f = p("x1^2 + x2^3", 2);
        assert_eq!(f.eval_mod(&ResiduePoint::new(vec![1, 2], 3, 2).unwrap()).unwrap(), 0);
        assert_eq!(p("x1^2", 1).eval_mod(&ResiduePoint::new(vec![3], 3, 3).unwrap()).unwrap(), 9);
        assert_eq!(p("1/2*x1", 1).eval_mod(&ResiduePoint::new(vec![1], 3, 1).unwrap()).unwrap(), 2);
        assert!(matches!(
            p("1/3*x1", 1).eval_mod(&ResiduePoint::new(vec![1], 3, 1).unwrap()),
            Err(Error::DenominatorDivisibleByP { .. })
        ));
    }

    #[test]
    fn monomial_pullback() {
        let f = p("x1^2 + x2^3", 2);
        let g = f.compose_monomial(&[vec![3, 0], vec![2, 1]]).unwrap();
        assert_eq!(g, p("x1^6 + x1^6*x2^3", 2));
        let h = p("x1*x2", 2).compose_monomial(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(h, p("x1^2*x2", 2));
    }

    #[test]
    fn substitution_and_helpers() {
        let f = p("x1^2 + x1*x2", 2);
        let s = f.substitute(&[p("x1 + x2", 2), p("x2", 2)]).unwrap();
        assert_eq!(s, p("x1 + x2", 2).pow(2).add(&p("x1*x2 + x2^2", 2)));
        assert_eq!(f.monomial_content(), vec![1, 0]);
        assert_eq!(f.div_monomial(&[1, 0]).unwrap(), p("x1 + x2", 2));
        assert_eq!(f.scale_vars(&[q(2), qf(1, 2)]), p("4*x1^2 + x1*x2", 2));
        let cs = p("x1 + x1*x2^2 + 3", 2).coefficients_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], p("x1 + 3", 2));
        assert!(cs[1].is_zero());
    }
}
