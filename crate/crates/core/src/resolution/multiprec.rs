//! Fixed-precision binary floating point evaluation of `f(alpha(y)) / y^m`,
//! for leaf points where f64 loses the value to cancellation.

use super::Move;
use crate::poly::Polynomial;
use crate::rational::Q;
use dashu_float::FBig;
use dashu_int::IBig;

type Mp = FBig;

fn ibig(x: &num_bigint::BigInt) -> IBig {
    IBig::from_le_bytes(&x.to_signed_bytes_le())
}

fn mp(x: &Q, bits: usize) -> Mp {
    let n = Mp::from(ibig(x.numer())).with_precision(bits).value();
    let d = Mp::from(ibig(x.denom())).with_precision(bits).value();
    n / d
}

struct MpPoly {
    terms: Vec<(Vec<u32>, Mp)>,
    degrees: Vec<u32>,
}

impl MpPoly {
    fn new(p: &Polynomial, bits: usize) -> MpPoly {
        let terms: Vec<(Vec<u32>, Mp)> = p.terms().map(|(e, c)| (e.0.clone(), mp(c, bits))).collect();
        let degrees = (0..p.nvars()).map(|i| p.degree_in(i)).collect();
        MpPoly { terms, degrees }
    }

    fn eval(&self, x: &[Mp], one: &Mp) -> Mp {
        let powers: Vec<Vec<Mp>> = x
            .iter()
            .zip(&self.degrees)
            .map(|(v, &d)| {
                let mut p = vec![one.clone()];
                for k in 0..d as usize {
                    let next = &p[k] * v;
                    p.push(next);
                }
                p
            })
            .collect();
        self.terms.iter().fold(one - one, |acc, (e, c)| {
            acc + e.iter().enumerate().fold(c.clone(), |t, (i, &k)| if k == 0 { t } else { t * &powers[i][k as usize] })
        })
    }
}

enum MpMove {
    Affine { matrix: Vec<Vec<Mp>>, shift: Vec<Mp> },
    Monomial { map: Vec<Vec<i64>> },
    Quasitranslation { axis: usize, g: MpPoly },
    Dilation { scale: Vec<Mp> },
}

/// `f` and the moves of one leaf, converted at one precision.
pub(super) struct Chain {
    f: MpPoly,
    moves: Vec<MpMove>,
    bits: usize,
    one: Mp,
}

impl Chain {
    pub(super) fn new(f: &Polynomial, moves: &[Move], bits: usize) -> Chain {
        let row = |r: &[Q]| r.iter().map(|v| mp(v, bits)).collect::<Vec<Mp>>();
        let moves = moves
            .iter()
            .map(|mv| match mv {
                Move::AffineLinear { matrix, shift } => {
                    MpMove::Affine { matrix: matrix.iter().map(|r| row(r)).collect(), shift: row(shift) }
                }
                Move::Monomial { map } => MpMove::Monomial { map: map.clone() },
                Move::Quasitranslation { axis, g } => MpMove::Quasitranslation { axis: *axis, g: MpPoly::new(g.poly(), bits) },
                Move::Dilation { scale } => MpMove::Dilation { scale: row(scale) },
            })
            .collect();
        Chain { f: MpPoly::new(f, bits), moves, bits, one: mp(&Q::from_integer(1.into()), bits) }
    }

    /// `f(alpha(y)) / y^m`; `None` when `y^m` is zero.
    pub(super) fn ratio(&self, y: &[f64], m: &[u32]) -> Option<f64> {
        let one = &self.one;
        let y: Vec<Mp> = y.iter().map(|&v| Q::from_float(v).map(|q| mp(&q, self.bits))).collect::<Option<_>>()?;
        let mono = y.iter().zip(m).fold(one.clone(), |acc, (v, &e)| (0..e).fold(acc, |a, _| a * v));
        if mono == one - one {
            return None;
        }
        let mut x = y;
        for mv in self.moves.iter().rev() {
            x = match mv {
                MpMove::Affine { matrix, shift } => matrix
                    .iter()
                    .zip(shift)
                    .map(|(r, s)| r.iter().zip(&x).fold(s.clone(), |acc, (a, v)| acc + a * v))
                    .collect(),
                MpMove::Monomial { map } => map
                    .iter()
                    .map(|r| r.iter().zip(&x).fold(one.clone(), |acc, (&e, v)| (0..e).fold(acc, |a, _| a * v)))
                    .collect(),
                MpMove::Quasitranslation { axis, g } => {
                    let mut rest = x.clone();
                    rest.remove(*axis);
                    let shift = g.eval(&rest, one);
                    x[*axis] = &x[*axis] + shift;
                    x
                }
                MpMove::Dilation { scale } => scale.iter().zip(&x).map(|(s, v)| s * v).collect(),
            };
        }
        Some((self.f.eval(&x, one) / mono).to_f64().value())
    }
}
