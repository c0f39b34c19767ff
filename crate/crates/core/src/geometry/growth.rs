//! Classification of sublevel / counting growth into the three regimes and
//! the predicted decay exponent and logarithm power.

use super::{
    central_face, face_polynomial, face_zero_order, newton_distance, newton_polyhedron, Certainty, Face,
    NewtonPolyhedron, ZeroOrder, ZeroOrderMethod,
};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{serde_frac, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FieldTag {
    Real,
    Complex,
    PAdic { p: u64 },
}

impl FieldTag {
    pub fn b_k(&self) -> u32 {
        match self {
            FieldTag::Complex => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthCase {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthPrediction {
    pub field: FieldTag,
    pub b_k: u32,
    pub n: usize,
    #[serde(with = "serde_frac")]
    pub d: Q,
    pub k: usize,
    pub case: GrowthCase,
    #[serde(with = "serde_frac::opt")]
    pub s: Option<Q>,
    /// `b_K/d` in cases a and b, `b_K/s` (upper bound side) in case c.
    #[serde(with = "serde_frac")]
    pub delta: Q,
    /// `[n-k-1, n-k-1]` in case a, `[n-k-1, n-k]` in case b, absent in case c.
    pub log_power: Option<(usize, usize)>,
    pub upper_bound_only: bool,
    pub certainty: Certainty,
}

impl GrowthPrediction {
    /// Predicted slope of `log_p N_l` against `l` (or of `log g` against `log eps`).
    pub fn count_slope(&self) -> Q {
        -self.delta.clone() / Q::from_integer(self.b_k.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceReport {
    pub index: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub active_facets: Vec<usize>,
    pub in_central_face: bool,
    pub face_polynomial: String,
    pub zero_order: ZeroOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub polynomial: String,
    pub nvars: usize,
    pub polyhedron: NewtonPolyhedron,
    #[serde(with = "serde_frac")]
    pub d: Q,
    pub k: usize,
    pub central_face: Face,
    pub faces: Vec<FaceReport>,
    pub prediction: GrowthPrediction,
}

/// Classify from precomputed zero orders, one per compact face.
pub fn predict_from_orders(
    np: &NewtonPolyhedron,
    orders: &[ZeroOrder],
    field: FieldTag,
) -> GrowthPrediction {
    let d = newton_distance(np);
    let (central, k) = central_face(np);
    let n = np.nvars;
    let b_k = field.b_k();
    let bq = Q::from_integer(b_k.into());
    let certainty = if orders.iter().all(|o| o.certainty == Certainty::Exact) {
        Certainty::Exact
    } else {
        Certainty::Heuristic
    };
    let s = orders.iter().map(|o| o.o).max().unwrap_or(0);
    let sq = Q::from_integer(s.into());
    let on_central_equal = np
        .compact_faces
        .iter()
        .zip(orders)
        .any(|(f, o)| np.face_contains(&central, f) && Q::from_integer(o.o.into()) == d);
    let (case, delta, log_power, s_out) = if sq > d {
        (GrowthCase::C, &bq / &sq, None, Some(sq))
    } else if on_central_equal {
        (GrowthCase::B, &bq / &d, Some((n - k - 1, n - k)), None)
    } else {
        (GrowthCase::A, &bq / &d, Some((n - k - 1, n - k - 1)), None)
    };
    GrowthPrediction {
        field,
        b_k,
        n,
        d,
        k,
        case,
        upper_bound_only: case == GrowthCase::C,
        s: s_out,
        delta,
        log_power,
        certainty,
    }
}

/// Full Newton-polyhedron analysis of `f`.
pub fn analyze(f: &Polynomial, field: FieldTag, method: &ZeroOrderMethod) -> Result<Analysis> {
    if !f.constant_term().is_zero() {
        return Err(Error::Precondition("f(0) must vanish".into()));
    }
    let np = newton_polyhedron(f)?;
    let (central, k) = central_face(&np);
    let mut faces = Vec::new();
    let mut orders = Vec::new();
    for (i, face) in np.compact_faces.iter().enumerate() {
        let ff = face_polynomial(f, &np, face)?;
        let o = match method {
            // an override names s(f) for the top faces; lower faces still computed
            ZeroOrderMethod::UserOverride(_) if face.dim == 0 => {
                face_zero_order(&ff, &np, face, &ZeroOrderMethod::Auto)?
            }
            m => face_zero_order(&ff, &np, face, m)?,
        };
        orders.push(o.clone());
        faces.push(FaceReport {
            index: i,
            dim: face.dim,
            vertices: np.face_points(face),
            active_facets: face.active_facets.clone(),
            in_central_face: np.face_contains(&central, face),
            face_polynomial: ff.to_string(),
            zero_order: o,
        });
    }
    let prediction = predict_from_orders(&np, &orders, field);
    Ok(Analysis {
        polynomial: f.to_string(),
        nvars: f.nvars(),
        d: prediction.d.clone(),
        k,
        central_face: central,
        faces,
        polyhedron: np,
        prediction,
    })
}

pub fn predict_growth(f: &Polynomial, field: FieldTag) -> Result<GrowthPrediction> {
    Ok(analyze(f, field, &ZeroOrderMethod::Auto)?.prediction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rational::{q, qf};

    fn pred(s: &str, n: usize, field: FieldTag) -> GrowthPrediction {
        predict_growth(&parse_polynomial(s, n).unwrap(), field).unwrap()
    }

    #[test]
    fn regimes() {
        let p = pred("x1^2 + x2^3", 2, FieldTag::Real);
        assert_eq!((p.case, p.delta.clone(), p.log_power), (GrowthCase::A, qf(5, 6), Some((0, 0))));
        let p = pred("x1^2 + x2^3", 2, FieldTag::Complex);
        assert_eq!(p.delta, qf(5, 3));

        let p = pred("x1^2*x2^2", 2, FieldTag::Real);
        assert_eq!((p.case, p.delta.clone(), p.log_power), (GrowthCase::A, qf(1, 2), Some((1, 1))));

        let p = pred("x1^2 - 2*x1*x2 + x2^2", 2, FieldTag::PAdic { p: 3 });
        assert_eq!((p.case, p.s.clone(), p.delta.clone()), (GrowthCase::C, Some(q(2)), qf(1, 2)));
        assert!(p.upper_bound_only);
    }

    #[test]
    fn equality_case() {
        // o(edge) = 1 = d with the edge central
        let p = pred("x1^2 + x2^2 - 2*x1*x2 + x1^3", 2, FieldTag::Real);
        assert_eq!(p.case, GrowthCase::C);
        let p = pred("x1*x2", 2, FieldTag::Real);
        assert_eq!((p.case, p.d.clone()), (GrowthCase::A, q(1)));
        let p = pred("x1 + x2", 2, FieldTag::Real);
        // d = 1/2, o = 1 > d
        assert_eq!(p.case, GrowthCase::C);
    }
}
