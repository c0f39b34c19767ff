//! Power series represented to a finite total-degree order.

use super::Polynomial;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A polynomial standing in for a power series; every stored term has total
/// degree below `order`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    poly: Polynomial,
    order: u64,
}

impl TruncatedSeries {
    pub fn new(poly: &Polynomial, order: u64) -> Self {
        assert!(order > 0, "truncation order must be positive");
        TruncatedSeries { poly: poly.truncate(order), order }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn add(&self, other: &Self) -> Self {
        let o = self.order.min(other.order);
        Self::new(&self.poly.add(&other.poly), o)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let o = self.order.min(other.order);
        Self::new(&self.poly.sub(&other.poly), o)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { poly: self.poly.neg(), order: self.order }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let o = self.order.min(other.order);
        TruncatedSeries { poly: self.poly.mul_truncated(&other.poly, o), order: o }
    }

    /// `x_axis <- x_axis + g(other variables)`, truncated to `self.order`.
    /// `g` is given in the `n - 1` remaining variables.
    pub fn compose_quasitranslation(&self, axis: usize, g: &TruncatedSeries) -> Result<Self> {
        let n = self.nvars();
        if axis >= n {
            return Err(Error::VariableOutOfRange { index: axis + 1, nvars: n });
        }
        if g.nvars() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, found: g.nvars() });
        }
        if !g.poly.constant_term().eq(&num_traits::Zero::zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        let shift = Polynomial::var(n, axis).add(&g.poly.insert_var(axis));
        let subs: Vec<Polynomial> = (0..n)
            .map(|j| if j == axis { shift.clone() } else { Polynomial::var(n, j) })
            .collect();
        let order = self.order.min(g.order);
        Ok(TruncatedSeries { poly: self.poly.substitute_truncated(&subs, order)?, order })
    }

    /// Substitute every variable by a series, truncating at `order`.
    pub fn compose(&self, subs: &[Polynomial], order: u64) -> Result<Self> {
        let o = self.order.min(order);
        Ok(TruncatedSeries { poly: self.poly.substitute_truncated(subs, o)?, order: o })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    #[test]
    fn quasitranslation_examples() {
        let f = TruncatedSeries::new(&p("x2^2", 2), 12);
        let g = TruncatedSeries::new(&p("-1*x1", 1), 12);
        let r = f.compose_quasitranslation(1, &g).unwrap();
        assert_eq!(r.poly(), &p("x2^2 - 2*x1*x2 + x1^2", 2));

        let zero = TruncatedSeries::new(&Polynomial::zero(1), 12);
        assert_eq!(f.compose_quasitranslation(1, &zero).unwrap(), f);

        let f = TruncatedSeries::new(&p("x2^2 + x1*x2", 2), 3);
        let g = TruncatedSeries::new(&p("-1/2*x1", 1), 3);
        let r = f.compose_quasitranslation(1, &g).unwrap();
        assert_eq!(r.poly(), &p("x2^2 - 1/4*x1^2", 2));
    }

    #[test]
    fn constant_shift_rejected() {
        let f = TruncatedSeries::new(&p("x2^2", 2), 5);
        let g = TruncatedSeries::new(&p("1 + x1", 1), 5);
        assert_eq!(f.compose_quasitranslation(1, &g), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn truncation_takes_min_order() {
        let a = TruncatedSeries::new(&p("1 + x1 + x1^2 + x1^3", 1), 4);
        let b = TruncatedSeries::new(&p("1 + x1", 1), 2);
        let c = a.mul(&b);
        assert_eq!(c.order(), 2);
        assert_eq!(c.poly(), &p("1 + 2*x1", 1));
    }
}
