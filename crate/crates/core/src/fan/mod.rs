//! Normal cones of compact faces, their simplicial refinement, and the
//! invertible monomial maps built from it.

mod charts;

pub use charts::{
    chart_atlas, check_distance_relation, check_domination, check_factorization, chart_unit_certificate,
    cone_to_chart, region_membership, Atlas, AtlasReport, DistanceReport, FaceChart, FactorizationReport,
    SubdivisionConfig,
};

use crate::error::{Error, Result};
use crate::geometry::{Face, NewtonPolyhedron};
use crate::linalg;
use crate::rational::{primitive, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    pub generators: Vec<Vec<i64>>,
}

impl Cone {
    pub fn new(mut generators: Vec<Vec<i64>>) -> Result<Self> {
        for g in generators.iter_mut() {
            if g.iter().any(|&x| x < 0) || g.iter().all(|&x| x == 0) {
                return Err(Error::DegenerateCone(format!("generator {g:?} not in the closed orthant")));
            }
            *g = primitive(g);
        }
        generators.sort();
        generators.dedup();
        Ok(Cone { generators })
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.first().map(|g| g.len()).unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        linalg::rank_i64(&self.generators)
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    /// Exact test `w in cone` for a simplicial cone, and whether `w` is interior.
    pub fn locate(&self, w: &[Q]) -> Option<bool> {
        let coeffs = simplicial_coordinates(&self.generators, w)?;
        if coeffs.iter().any(|c| c.is_negative()) {
            return None;
        }
        Some(coeffs.iter().all(|c| c.is_positive()))
    }
}

/// Coefficients of `w` in the generators of a simplicial cone, if `w` lies
/// in their span.
fn simplicial_coordinates(gens: &[Vec<i64>], w: &[Q]) -> Option<Vec<Q>> {
    let n = w.len();
    let r = gens.len();
    // solve sum c_k g_k = w through the augmented system
    let mut m: linalg::Matrix = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = gens.iter().map(|g| Q::from_integer(g[i].into())).collect();
            row.push(w[i].clone());
            row
        })
        .collect();
    let pivots = linalg::rref(&mut m);
    if pivots.contains(&r) {
        return None;
    }
    let mut c = vec![Q::zero(); r];
    for (row, &pc) in pivots.iter().enumerate() {
        c[pc] = m[row][r].clone();
    }
    Some(c)
}

/// Generators are the primitive normals of every facet containing the face.
pub fn normal_cone(n: &NewtonPolyhedron, face: &Face) -> Cone {
    Cone::new(face.active_facets.iter().map(|&k| n.facets[k].normal.clone()).collect())
        .expect("facet normals are nonnegative")
}

fn span_complement(gens: &[Vec<i64>], n: usize) -> Vec<Vec<Q>> {
    linalg::nullspace(&linalg::from_i64(gens), n)
}

/// Linear functional on `span(all)` vanishing on `facet`, positive on `apex`.
fn facet_functional(facet: &[Vec<i64>], complement: &[Vec<Q>], apex: &[i64]) -> Vec<Q> {
    let n = apex.len();
    let mut rows = linalg::from_i64(facet);
    rows.extend(complement.iter().cloned());
    let ns = linalg::nullspace(&rows, n);
    debug_assert_eq!(ns.len(), 1);
    let h = ns.into_iter().next().unwrap();
    let v = eval_functional(&h, apex);
    if v.is_negative() {
        h.into_iter().map(|x| -x).collect()
    } else {
        h
    }
}

fn eval_functional(h: &[Q], x: &[i64]) -> Q {
    h.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * Q::from_integer((*b).into()))
}

/// Placing triangulation: generators are inserted in lex order; a generator
/// raising the dimension is coned over every simplex, otherwise it is coned
/// over each boundary facet it sees. No new rays are introduced.
pub fn triangulate(cone: &Cone) -> Result<Vec<Cone>> {
    let gens = &cone.generators;
    if gens.is_empty() {
        return Err(Error::DegenerateCone("no generators".into()));
    }
    let n = cone.ambient_dim();
    let mut simplices: Vec<Vec<usize>> = vec![vec![0]];
    let mut placed: Vec<usize> = vec![0];
    let mut dim = 1;
    for g in 1..gens.len() {
        let mut with: Vec<Vec<i64>> = placed.iter().map(|&i| gens[i].clone()).collect();
        with.push(gens[g].clone());
        let r = linalg::rank_i64(&with);
        if r > dim {
            for s in simplices.iter_mut() {
                s.push(g);
            }
            dim = r;
        } else {
            let complement = span_complement(&with, n);
            let mut boundary: Vec<(Vec<usize>, usize)> = Vec::new();
            for s in &simplices {
                for drop in 0..s.len() {
                    let facet: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, &v)| v).collect();
                    let shared = simplices
                        .iter()
                        .filter(|t| facet.iter().all(|v| t.contains(v)))
                        .count();
                    if shared == 1 {
                        boundary.push((facet, s[drop]));
                    }
                }
            }
            let mut added = Vec::new();
            for (facet, apex) in boundary {
                let fg: Vec<Vec<i64>> = facet.iter().map(|&i| gens[i].clone()).collect();
                let h = facet_functional(&fg, &complement, &gens[apex]);
                if eval_functional(&h, &gens[g]).is_negative() {
                    let mut s = facet.clone();
                    s.push(g);
                    added.push(s);
                }
            }
            simplices.extend(added);
        }
        placed.push(g);
    }
    if dim != cone.dim() {
        return Err(Error::DegenerateCone("rank mismatch".into()));
    }
    simplices
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            Ok(Cone { generators: s.iter().map(|&i| gens[i].clone()).collect() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::newton_polyhedron;
    use crate::poly::parse_polynomial;

    #[test]
    fn normal_cones() {
        let f = parse_polynomial("x1^2 + x2^3", 2).unwrap();
        let np = newton_polyhedron(&f).unwrap();
        let gens: Vec<Vec<Vec<i64>>> = np.compact_faces.iter().map(|g| normal_cone(&np, g).generators).collect();
        assert_eq!(gens[0], vec![vec![1, 0], vec![3, 2]]);
        assert_eq!(gens[1], vec![vec![0, 1], vec![3, 2]]);
        assert_eq!(gens[2], vec![vec![3, 2]]);
    }

    #[test]
    fn simplicial_cones_are_kept() {
        let c = Cone::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(triangulate(&c).unwrap(), vec![c.clone()]);
        let c = Cone::new(vec![vec![3, 2], vec![0, 1]]).unwrap();
        assert_eq!(triangulate(&c).unwrap().len(), 1);
    }

    #[test]
    fn square_base_splits_in_two() {
        let c = Cone::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        let t = triangulate(&c).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|s| s.is_simplicial() && s.generators.len() == 3));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(Cone::new(vec![vec![1, -1]]).is_err());
        assert!(Cone::new(vec![vec![0, 0]]).is_err());
    }
}
