//! The Newton polyhedron `N(f) = conv(supp f) + R^n_{>=0}`: facets, compact
//! faces, face polynomials, Newton distance and the central face.

mod growth;
mod zero_order;

pub use growth::{analyze, predict_growth, predict_from_orders, Analysis, FaceReport, FieldTag, GrowthCase, GrowthPrediction};
pub use zero_order::{face_zero_order, Certainty, ZeroOrder, ZeroOrderMethod};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::Polynomial;
use crate::rational::{primitive_from_rational, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Supporting half-space `normal · y >= offset` with a primitive normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn value(&self, y: &[i64]) -> i64 {
        linalg::dot_i64(&self.normal, y)
    }

    pub fn is_tight(&self, y: &[i64]) -> bool {
        self.value(y) == self.offset
    }

    /// `normal · (t, ..., t) - offset`.
    pub fn diagonal_slack(&self, t: &Q) -> Q {
        let s: i64 = self.normal.iter().sum();
        t * Q::from_integer(s.into()) - Q::from_integer(self.offset.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Face {
    pub dim: usize,
    /// Indices into `NewtonPolyhedron::facets` of every facet containing the face.
    pub active_facets: Vec<usize>,
    /// Indices into `NewtonPolyhedron::vertices`.
    pub vertex_set: Vec<usize>,
    pub compact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolyhedron {
    pub nvars: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<Facet>,
    pub compact_faces: Vec<Face>,
}

/// Drop support points that dominate another point componentwise; they lie
/// in the interior of a translated orthant and are never vertices.
fn minimal_points(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let set: BTreeSet<Vec<i64>> = points.iter().cloned().collect();
    let pts: Vec<Vec<i64>> = set.into_iter().collect();
    pts.iter()
        .filter(|p| {
            !pts.iter().any(|q| q != *p && q.iter().zip(p.iter()).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn subsets_upto(n: usize, kmax: usize) -> Vec<Vec<usize>> {
    (1..=kmax.min(n)).flat_map(|k| combinations(n, k)).collect()
}

/// Irredundant facet description of `conv(points) + R^n_{>=0}`.
///
/// Every facet hyperplane is spanned by differences of tight points together
/// with the coordinate rays it contains, so enumerating `j` points and
/// `n - j` rays with a one-dimensional orthogonal complement finds all of
/// them; each candidate is kept only if it is valid for every point.
pub fn facets_of(points: &[Vec<i64>], n: usize) -> Vec<Facet> {
    let pts = minimal_points(points);
    let mut found: BTreeSet<Facet> = BTreeSet::new();
    for j in 1..=n.min(pts.len()) {
        let rays = combinations(n, n - j);
        for sub in combinations(pts.len(), j) {
            let p0 = &pts[sub[0]];
            let mut base: Vec<Vec<i64>> = sub[1..]
                .iter()
                .map(|&i| pts[i].iter().zip(p0).map(|(a, b)| a - b).collect())
                .collect();
            if !base.is_empty() && linalg::rank_i64(&base) < base.len() {
                continue;
            }
            for r in &rays {
                base.truncate(j - 1);
                base.extend(r.iter().map(|&i| {
                    let mut e = vec![0i64; n];
                    e[i] = 1;
                    e
                }));
                let ns = linalg::nullspace(&linalg::from_i64(&base), n);
                if ns.len() != 1 {
                    continue;
                }
                let Some(mut a) = primitive_from_rational(&ns[0]) else { continue };
                if a.iter().all(|&x| x <= 0) {
                    a.iter_mut().for_each(|x| *x = -*x);
                }
                if a.iter().any(|&x| x < 0) {
                    continue;
                }
                let b = linalg::dot_i64(&a, p0);
                if pts.iter().all(|p| linalg::dot_i64(&a, p) >= b) {
                    found.insert(Facet { normal: a, offset: b });
                }
            }
        }
    }
    found.into_iter().collect()
}

fn affine_rank(points: &[&Vec<i64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank_i64(&diffs)
}

pub fn newton_polyhedron(f: &Polynomial) -> Result<NewtonPolyhedron> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    NewtonPolyhedron::from_points(&f.support(), f.nvars())
}

impl NewtonPolyhedron {
    pub fn from_points(points: &[Vec<i64>], n: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let facets = facets_of(points, n);
        let cands = minimal_points(points);
        let vertices: Vec<Vec<i64>> = cands
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<i64>> =
                    facets.iter().filter(|f| f.is_tight(p)).map(|f| f.normal.clone()).collect();
                linalg::rank_i64(&tight) == n
            })
            .collect();
        let mut poly = NewtonPolyhedron { nvars: n, vertices, facets, compact_faces: vec![] };
        poly.compact_faces = poly.enumerate_compact_faces();
        Ok(poly)
    }

    fn tight_vertices(&self, active: &[usize]) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| active.iter().all(|&k| self.facets[k].is_tight(&self.vertices[v])))
            .collect()
    }

    fn facets_through(&self, vs: &[usize]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&k| vs.iter().all(|&v| self.facets[k].is_tight(&self.vertices[v])))
            .collect()
    }

    /// A face with these active facets contains no coordinate ray.
    pub fn is_compact_active(&self, active: &[usize]) -> bool {
        (0..self.nvars).all(|i| active.iter().any(|&k| self.facets[k].normal[i] > 0))
    }

    /// The face cut out by `active`, closed up to all facets containing it.
    pub fn face_from_active(&self, active: &[usize]) -> Face {
        let vs = self.tight_vertices(active);
        let compact = self.is_compact_active(active);
        let rank = linalg::rank_i64(&active.iter().map(|&k| self.facets[k].normal.clone()).collect::<Vec<_>>());
        let dim = if compact {
            affine_rank(&vs.iter().map(|&v| &self.vertices[v]).collect::<Vec<_>>())
        } else {
            self.nvars - rank
        };
        Face { dim, active_facets: active.to_vec(), vertex_set: vs, compact }
    }

    fn enumerate_compact_faces(&self) -> Vec<Face> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut faces = Vec::new();
        for v in 0..self.vertices.len() {
            seen.insert(vec![v]);
            faces.push(self.face_from_active(&self.facets_through(&[v])));
        }
        for sub in subsets_upto(self.facets.len(), self.nvars) {
            let vs = self.tight_vertices(&sub);
            if vs.len() < 2 || seen.contains(&vs) {
                continue;
            }
            let active = self.facets_through(&vs);
            if !self.is_compact_active(&active) {
                continue;
            }
            seen.insert(vs);
            faces.push(self.face_from_active(&active));
        }
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertex_set.cmp(&b.vertex_set)));
        faces
    }

    /// Exact membership of a rational point.
    pub fn contains(&self, y: &[Q]) -> bool {
        self.facets.iter().all(|f| {
            let v = f
                .normal
                .iter()
                .zip(y)
                .fold(Q::zero(), |acc, (a, yi)| acc + Q::from_integer((*a).into()) * yi);
            v >= Q::from_integer(f.offset.into())
        })
    }

    pub fn face_points(&self, face: &Face) -> Vec<Vec<i64>> {
        face.vertex_set.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    pub fn owns(&self, face: &Face) -> bool {
        face.active_facets.iter().all(|&k| k < self.facets.len())
            && face.vertex_set.iter().all(|&v| v < self.vertices.len())
            && face.vertex_set == self.tight_vertices(&face.active_facets)
    }

    /// `F ⊆ G` for faces given by maximal active sets.
    pub fn face_contains(&self, outer: &Face, inner: &Face) -> bool {
        outer.active_facets.iter().all(|k| inner.active_facets.contains(k))
    }

    pub fn face_index(&self, face: &Face) -> Option<usize> {
        self.compact_faces.iter().position(|g| g.active_facets == face.active_facets)
    }
}

pub fn compact_faces(n: &NewtonPolyhedron) -> Vec<Face> {
    n.compact_faces.clone()
}

/// Terms of `f` whose exponents lie on every active facet of `face`.
pub fn face_polynomial(f: &Polynomial, n: &NewtonPolyhedron, face: &Face) -> Result<Polynomial> {
    if !n.owns(face) {
        return Err(Error::ForeignFace);
    }
    let active: Vec<&Facet> = face.active_facets.iter().map(|&k| &n.facets[k]).collect();
    Ok(f.restrict(|e| {
        let y = e.as_i64();
        active.iter().all(|fa| fa.is_tight(&y))
    }))
}

/// `max_k b_k / sum(a_k)`, the diagonal parameter where `(t, ..., t)` enters N(f).
pub fn newton_distance(n: &NewtonPolyhedron) -> Q {
    n.facets
        .iter()
        .filter(|f| f.normal.iter().sum::<i64>() > 0)
        .map(|f| Q::new(f.offset.into(), f.normal.iter().sum::<i64>().into()))
        .max()
        .unwrap_or_else(Q::zero)
}

/// The face whose relative interior meets the diagonal, and its dimension.
pub fn central_face(n: &NewtonPolyhedron) -> (Face, usize) {
    let d = newton_distance(n);
    let tight: Vec<usize> = (0..n.facets.len())
        .filter(|&k| n.facets[k].diagonal_slack(&d).is_zero())
        .collect();
    let mut face = n.face_from_active(&tight);
    let rank = linalg::rank_i64(&tight.iter().map(|&k| n.facets[k].normal.clone()).collect::<Vec<_>>());
    face.dim = n.nvars - rank;
    let k = face.dim;
    debug_assert!(n.facets.iter().all(|f| !f.diagonal_slack(&d).is_negative()));
    (face, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rational::{q, qf};

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    fn fac(a: &[i64], b: i64) -> Facet {
        Facet { normal: a.to_vec(), offset: b }
    }

    #[test]
    fn hull_examples() {
        let n = newton_polyhedron(&poly("x1^2 + x2^3", 2)).unwrap();
        assert_eq!(n.vertices, vec![vec![0, 3], vec![2, 0]]);
        assert_eq!(n.facets, vec![fac(&[0, 1], 0), fac(&[1, 0], 0), fac(&[3, 2], 6)]);

        let n = newton_polyhedron(&poly("x1*x2", 2)).unwrap();
        assert_eq!(n.vertices, vec![vec![1, 1]]);
        assert_eq!(n.facets, vec![fac(&[0, 1], 1), fac(&[1, 0], 1)]);

        let n = newton_polyhedron(&poly("x1^2*x2 + x1*x2^3", 2)).unwrap();
        assert_eq!(n.vertices, vec![vec![1, 3], vec![2, 1]]);
        assert!(n.facets.contains(&fac(&[2, 1], 5)));
        assert_eq!(newton_distance(&n), qf(5, 3));
    }

    #[test]
    fn faces_and_face_polynomials() {
        let f = poly("x1^2 + x2^3 + x1^5*x2^5", 2);
        let n = newton_polyhedron(&f).unwrap();
        let dims: Vec<usize> = n.compact_faces.iter().map(|f| f.dim).collect();
        assert_eq!(dims, vec![0, 0, 1]);
        let edge = &n.compact_faces[2];
        assert_eq!(face_polynomial(&f, &n, edge).unwrap(), poly("x1^2 + x2^3", 2));
        let v = n.compact_faces.iter().find(|g| n.face_points(g) == vec![vec![2, 0]]).unwrap();
        assert_eq!(face_polynomial(&f, &n, v).unwrap(), poly("x1^2", 2));

        let n = newton_polyhedron(&poly("x1^2*x2^2", 2)).unwrap();
        assert_eq!(n.compact_faces.len(), 1);
        assert_eq!(n.compact_faces[0].dim, 0);
    }

    #[test]
    fn distance_and_central_face() {
        let n = newton_polyhedron(&poly("x1^2 + x2^3", 2)).unwrap();
        assert_eq!(newton_distance(&n), qf(6, 5));
        let (c, k) = central_face(&n);
        assert_eq!(k, 1);
        assert!(c.compact);

        let n = newton_polyhedron(&poly("x1^2*x2^2", 2)).unwrap();
        assert_eq!(newton_distance(&n), q(2));
        assert_eq!(central_face(&n).1, 0);

        let n = newton_polyhedron(&poly("x1^2", 2)).unwrap();
        assert_eq!(newton_distance(&n), q(2));
        let (c, k) = central_face(&n);
        assert_eq!(k, 1);
        assert!(!c.compact);
        assert_eq!(n.facets[c.active_facets[0]], fac(&[1, 0], 2));
    }

    #[test]
    fn three_variables() {
        let n = newton_polyhedron(&poly("x1^2 + x2^2 + x3^3", 3)).unwrap();
        assert!(n.facets.contains(&fac(&[3, 3, 2], 6)));
        assert_eq!(newton_distance(&n), qf(3, 4));
        assert_eq!(central_face(&n).1, 2);
        let top = n.compact_faces.iter().filter(|f| f.dim == 2).count();
        assert_eq!(top, 1);
        assert_eq!(n.compact_faces.iter().filter(|f| f.dim == 1).count(), 3);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(newton_polyhedron(&Polynomial::zero(2)), Err(Error::ZeroPolynomial));
    }
}
