//! Recursive chart-tree resolution: rotations, quasitranslations,
//! sub-resolutions in one fewer variable, fan charts and localizations,
//! with numeric certificates at the leaves.

mod certify;
mod engine;
mod multiprec;
mod steps;

pub use certify::{certify_tree, verify_leaf, LeafCertificate, TreeReport};
pub use engine::{resolve, ResolveOutcome};
pub use steps::{coefficient_split, implicit_series, implicit_residual_vanishes, min_order_direction, reassemble, rotation_matrix, CoefficientSplit};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Polynomial, TruncatedSeries};
use crate::rational::{serde_frac, to_f64, Q};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// One coordinate change `x = mu(y)` from new coordinates `y` to old `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    /// `x = A y + shift`.
    AffineLinear {
        #[serde(with = "matrix_text")]
        matrix: Vec<Vec<Q>>,
        #[serde(with = "serde_frac::vec")]
        shift: Vec<Q>,
    },
    /// `x_j = prod_k y_k^{map[j][k]}`.
    Monomial { map: Vec<Vec<i64>> },
    /// `x_axis = y_axis + g(y without axis)`.
    Quasitranslation { axis: usize, g: TruncatedSeries },
    /// `x_i = scale_i y_i`.
    Dilation {
        #[serde(with = "serde_frac::vec")]
        scale: Vec<Q>,
    },
}

mod matrix_text {
    use crate::rational::{frac_string, parse_frac, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let t: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(frac_string).collect()).collect();
        t.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let t = Vec::<Vec<String>>::deserialize(d)?;
        t.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| parse_frac(&x).ok_or_else(|| serde::de::Error::custom("bad fraction")))
                    .collect()
            })
            .collect()
    }
}

impl Move {
    pub fn shift(n: usize, axis: usize, t: Q) -> Move {
        let mut shift = vec![Q::zero(); n];
        shift[axis] = t;
        Move::AffineLinear { matrix: linalg::identity(n), shift }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Move::AffineLinear { matrix, .. } => matrix.len(),
            Move::Monomial { map } => map.len(),
            Move::Quasitranslation { g, .. } => g.nvars() + 1,
            Move::Dilation { scale } => scale.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Move::AffineLinear { matrix, .. } if linalg::det(matrix).is_zero() => Err(Error::SingularMatrix),
            Move::Monomial { map } if linalg::det_i64(map).is_zero() => Err(Error::SingularMatrix),
            Move::Quasitranslation { g, .. } if !g.poly().constant_term().is_zero() => Err(Error::NonzeroConstantTerm),
            Move::Dilation { scale } if scale.iter().any(|s| s.is_zero()) => Err(Error::SingularMatrix),
            _ => Ok(()),
        }
    }

    /// Pull `p` back along the move; `trunc` bounds the total degree kept
    /// after a quasitranslation.
    pub fn pull(&self, p: &Polynomial, trunc: u64) -> Result<Polynomial> {
        let n = self.nvars();
        match self {
            Move::AffineLinear { matrix, shift } => {
                let subs: Vec<Polynomial> = (0..n)
                    .map(|j| {
                        let mut s = Polynomial::constant(n, shift[j].clone());
                        for (k, a) in matrix[j].iter().enumerate() {
                            s.add_term(crate::poly::ExponentVector::unit(n, k), a.clone());
                        }
                        s
                    })
                    .collect();
                p.substitute(&subs)
            }
            Move::Monomial { map } => {
                let m: Vec<Vec<u32>> = map.iter().map(|r| r.iter().map(|&x| x as u32).collect()).collect();
                p.compose_monomial(&m)
            }
            Move::Quasitranslation { axis, g } => {
                let shift = Polynomial::var(n, *axis).add(&g.poly().insert_var(*axis));
                let subs: Vec<Polynomial> =
                    (0..n).map(|j| if j == *axis { shift.clone() } else { Polynomial::var(n, j) }).collect();
                if p.degree_in(*axis) == 0 {
                    Ok(p.clone())
                } else {
                    p.substitute_truncated(&subs, trunc)
                }
            }
            Move::Dilation { scale } => Ok(p.scale_vars(scale)),
        }
    }

    pub fn apply_f64(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Move::AffineLinear { matrix, shift } => matrix
                .iter()
                .zip(shift)
                .map(|(row, s)| row.iter().zip(y).map(|(a, v)| to_f64(a) * v).sum::<f64>() + to_f64(s))
                .collect(),
            Move::Monomial { map } => map
                .iter()
                .map(|row| row.iter().zip(y).map(|(&e, v)| v.powi(e as i32)).product())
                .collect(),
            Move::Quasitranslation { axis, g } => {
                let mut rest = y.to_vec();
                rest.remove(*axis);
                let mut x = y.to_vec();
                x[*axis] += g.poly().eval_real(&rest);
                x
            }
            Move::Dilation { scale } => scale.iter().zip(y).map(|(s, v)| to_f64(s) * v).collect(),
        }
    }

    pub fn apply_c64(&self, y: &[Complex64]) -> Vec<Complex64> {
        match self {
            Move::AffineLinear { matrix, shift } => matrix
                .iter()
                .zip(shift)
                .map(|(row, s)| row.iter().zip(y).map(|(a, v)| v * to_f64(a)).sum::<Complex64>() + to_f64(s))
                .collect(),
            Move::Monomial { map } => map
                .iter()
                .map(|row| row.iter().zip(y).map(|(&e, v)| v.powu(e as u32)).product())
                .collect(),
            Move::Quasitranslation { axis, g } => {
                let mut rest = y.to_vec();
                rest.remove(*axis);
                let mut x = y.to_vec();
                x[*axis] += g.poly().eval_complex(&rest);
                x
            }
            Move::Dilation { scale } => scale.iter().zip(y).map(|(s, v)| v * to_f64(s)).collect(),
        }
    }

    /// Exact image of a rational point.
    pub fn apply_exact(&self, y: &[Q]) -> Vec<Q> {
        match self {
            Move::AffineLinear { matrix, shift } => matrix
                .iter()
                .zip(shift)
                .map(|(row, s)| row.iter().zip(y).fold(s.clone(), |acc, (a, v)| acc + a * v))
                .collect(),
            Move::Monomial { map } => map
                .iter()
                .map(|row| row.iter().zip(y).fold(Q::one(), |acc, (&e, v)| acc * num_traits::pow(v.clone(), e as usize)))
                .collect(),
            Move::Quasitranslation { axis, g } => {
                let mut rest = y.to_vec();
                rest.remove(*axis);
                let mut x = y.to_vec();
                x[*axis] += g.poly().eval_exact(&rest);
                x
            }
            Move::Dilation { scale } => scale.iter().zip(y).map(|(s, v)| s * v).collect(),
        }
    }

    /// The move's formula applied to polynomial components, keeping total
    /// degrees below `order`.
    pub fn apply_poly(&self, y: &[Polynomial], order: u64) -> Result<Vec<Polynomial>> {
        let m = y.first().map(|p| p.nvars()).unwrap_or(0);
        let power = |p: &Polynomial, e: u32| (0..e).fold(Polynomial::one(m), |acc, _| acc.mul_truncated(p, order));
        Ok(match self {
            Move::AffineLinear { matrix, shift } => matrix
                .iter()
                .zip(shift)
                .map(|(row, s)| row.iter().zip(y).fold(Polynomial::constant(m, s.clone()), |acc, (a, p)| acc.add(&p.scale(a))))
                .collect(),
            Move::Monomial { map } => map
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(y)
                        .fold(Polynomial::one(m), |acc, (&e, p)| acc.mul_truncated(&power(p, e as u32), order))
                })
                .collect(),
            Move::Quasitranslation { axis, g } => {
                let mut rest = y.to_vec();
                rest.remove(*axis);
                let mut x = y.to_vec();
                x[*axis] = x[*axis].add(&g.poly().substitute_truncated(&rest, order)?);
                x
            }
            Move::Dilation { scale } => y.iter().zip(scale).map(|(p, c)| p.scale(c)).collect(),
        })
    }

    /// Jacobian determinant of the move at `y`.
    pub fn jac_det_f64(&self, y: &[f64]) -> f64 {
        match self {
            Move::AffineLinear { matrix, .. } => to_f64(&linalg::det(matrix)),
            Move::Monomial { map } => {
                let det = to_f64(&linalg::det_i64(map));
                let cols = linalg::transpose(map);
                cols.iter()
                    .zip(y)
                    .map(|(c, v)| v.powi((c.iter().sum::<i64>() - 1) as i32))
                    .product::<f64>()
                    * det
            }
            Move::Quasitranslation { .. } => 1.0,
            Move::Dilation { scale } => scale.iter().map(to_f64).product(),
        }
    }

    /// The same move acting on the first `n` of `n + 1` coordinates.
    pub fn lift(&self) -> Move {
        let n = self.nvars();
        match self {
            Move::AffineLinear { matrix, shift } => {
                let mut m: Vec<Vec<Q>> = matrix
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r.push(Q::zero());
                        r
                    })
                    .collect();
                let mut last = vec![Q::zero(); n + 1];
                last[n] = Q::one();
                m.push(last);
                let mut s = shift.clone();
                s.push(Q::zero());
                Move::AffineLinear { matrix: m, shift: s }
            }
            Move::Monomial { map } => {
                let mut m: Vec<Vec<i64>> = map
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r.push(0);
                        r
                    })
                    .collect();
                let mut last = vec![0; n + 1];
                last[n] = 1;
                m.push(last);
                Move::Monomial { map: m }
            }
            Move::Quasitranslation { axis, g } => Move::Quasitranslation {
                axis: *axis,
                g: TruncatedSeries::new(&g.poly().insert_var(n - 1), g.order()),
            },
            Move::Dilation { scale } => {
                let mut s = scale.clone();
                s.push(Q::one());
                Move::Dilation { scale: s }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepTag {
    Root,
    Rotation,
    Quasitranslation,
    SubResolution,
    OrderDrop,
    Reflection,
    FanChart,
    Localization,
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafData {
    /// Exponents of the monomial `x^{m_leaf}` in the pullback of `f`.
    pub m_leaf: Vec<u32>,
    /// Exponents of the monomial part of the composed Jacobian.
    pub jacobian_monomial: Vec<u32>,
    /// Certificate box center in leaf coordinates.
    pub center: Vec<f64>,
    /// Leaf representation of the local factor (text).
    pub local_unit: String,
    /// Monomial contents of auxiliary factors (sub-resolutions only).
    pub factor_contents: Vec<Vec<u32>>,
    pub certificate: Option<LeafCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartNode {
    pub step: StepTag,
    pub nvars: usize,
    pub moves: Vec<Move>,
    /// Order `m` recorded at this step (x_n-order or minimal total degree).
    pub order: Option<u32>,
    /// Implicit-series postcondition, quasitranslation nodes only.
    pub implicit_check: Option<bool>,
    /// Reason the subtree is incomplete, if it is.
    pub partial: Option<String>,
    pub children: Vec<ChartNode>,
    pub leaf: Option<LeafData>,
}

impl ChartNode {
    pub fn new(step: StepTag, nvars: usize, moves: Vec<Move>) -> Self {
        ChartNode { step, nvars, moves, order: None, implicit_check: None, partial: None, children: vec![], leaf: None }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty() && self.leaf.is_some()
    }

    /// Visit every root-to-leaf path with the nodes along it.
    /// Every leaf with the move list leading to it, root first.
    pub fn leaves_with_moves(&self) -> Vec<(Vec<Move>, &LeafData)> {
        let mut out = Vec::new();
        self.for_each_path(&mut |path: &[&ChartNode]| {
            if let Some(leaf) = path.last().and_then(|n| n.leaf.as_ref()) {
                out.push((path.iter().flat_map(|n| n.moves.iter().cloned()).collect(), leaf));
            }
        });
        out
    }

    pub fn for_each_path<'a, F: FnMut(&[&'a ChartNode])>(&'a self, f: &mut F) {
        fn rec<'a, F: FnMut(&[&'a ChartNode])>(n: &'a ChartNode, path: &mut Vec<&'a ChartNode>, f: &mut F) {
            path.push(n);
            if n.children.is_empty() {
                f(path);
            }
            for c in &n.children {
                rec(c, path, f);
            }
            path.pop();
        }
        rec(self, &mut Vec::new(), f);
    }

    pub fn count_leaves(&self) -> usize {
        let mut k = 0;
        self.for_each_path(&mut |p| {
            if p.last().unwrap().leaf.is_some() {
                k += 1
            }
        });
        k
    }

    pub fn max_depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.max_depth()).max().unwrap_or(0)
    }

    pub fn is_partial(&self) -> bool {
        self.partial.is_some() || self.children.iter().any(|c| c.is_partial())
    }

    pub fn nodes(&self) -> Vec<&ChartNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionConfig {
    pub truncation: u64,
    /// Maximal nesting of recursive calls (sub-resolutions, localizations,
    /// order drops).
    pub max_depth: usize,
    pub samples: usize,
    pub radius: f64,
    pub unit_bound: f64,
    pub rotation_bound: i64,
    /// Split the real line into signs before fan steps.
    pub reflections: bool,
    pub seed: u64,
}

impl ResolutionConfig {
    /// Defaults with truncation `max(2 deg f, 12)`.
    pub fn for_polynomial(f: &Polynomial) -> Self {
        ResolutionConfig { truncation: (2 * f.total_degree()).max(12), ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation == 0 || self.max_depth == 0 || self.samples == 0 || self.rotation_bound <= 0 {
            return Err(Error::InvalidConfig("all parameters must be positive".into()));
        }
        if !(self.radius > 0.0 && self.unit_bound > 1.0) {
            return Err(Error::InvalidConfig("radius must be positive and unit bound above 1".into()));
        }
        Ok(())
    }
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        ResolutionConfig {
            truncation: 12,
            max_depth: 8,
            samples: 1000,
            radius: 0.05,
            unit_bound: 100.0,
            rotation_bound: 3,
            reflections: true,
            seed: 0,
        }
    }
}

/// `p` pulled back along `moves` (root first) as a polynomial in the last
/// coordinates, exact in every total degree below `order`. The moves are
/// applied from the last one outwards, so truncation never meets a shift.
pub fn compose_truncated(p: &Polynomial, moves: &[Move], order: u64) -> Result<Polynomial> {
    let n = moves.last().map(|m| m.nvars()).unwrap_or(p.nvars());
    let mut y: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    for mv in moves.iter().rev() {
        y = mv.apply_poly(&y, order)?;
    }
    p.substitute_truncated(&y, order)
}
