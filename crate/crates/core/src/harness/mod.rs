//! Experimental checks of the growth predictions: counting mod `p^l`,
//! exponential sums, sublevel volumes, oscillatory integrals and fits.

pub mod counting;
pub mod expsum;
pub mod fit;
pub mod oscillatory;
pub mod sublevel;

use crate::poly::Polynomial;
use crate::rational::Q;
use num_bigint::BigInt;
use num_traits::Pow;

/// `f(p^{a_1} x_1, ..., p^{a_n} x_n)`, exactly.
pub fn prescale(f: &Polynomial, p: u64, a: &[u32]) -> Polynomial {
    let c: Vec<Q> = a.iter().map(|&k| Q::from_integer(Pow::pow(&BigInt::from(p), k))).collect();
    f.scale_vars(&c)
}
