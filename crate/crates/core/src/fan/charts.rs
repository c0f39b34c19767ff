//! Face charts: invertible monomial maps whose pullback of `f` is a monomial
//! times a unit-like factor, and the exponent relations they satisfy.

use super::{normal_cone, triangulate, Cone};
use crate::certificate::{unit_certificate, CertificateConfig, UnitCertificate};
use crate::error::{Error, Result};
use crate::geometry::{central_face, face_polynomial, newton_distance, newton_polyhedron, Face, NewtonPolyhedron};
use crate::linalg;
use crate::poly::Polynomial;
use crate::rational::{serde_frac, to_f64, Q};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Region constants `C_1 < ... < C_n`; only used by [`region_membership`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionConfig {
    #[serde(with = "serde_frac::vec")]
    pub c: Vec<Q>,
}

impl SubdivisionConfig {
    pub fn new(c: Vec<Q>) -> Result<Self> {
        let one = Q::from_integer(1.into());
        if c.is_empty() || c[0] <= one || c.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("need 1 < C_1 < C_2 < ... < C_n".into()));
        }
        Ok(SubdivisionConfig { c })
    }

    pub fn permissive(n: usize) -> Self {
        SubdivisionConfig { c: (1..=n).map(|i| Q::from_integer(num_bigint::BigInt::from(10).pow(3 * i as u32))).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceChart {
    /// Index into the polyhedron's compact faces.
    pub face: usize,
    pub face_dim: usize,
    /// Number of leading (monomial-carrying) chart coordinates, `n - i`.
    pub head: usize,
    /// `x_j = prod_k z_k^{map[j][k]}`; columns are the cone generators.
    pub map: Vec<Vec<i64>>,
    pub a: Vec<i64>,
    pub e: Vec<i64>,
    pub unit: Polynomial,
    pub multiplicity: u64,
}

impl FaceChart {
    pub fn nvars(&self) -> usize {
        self.map.len()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        linalg::transpose(&self.map)
    }

    pub fn map_u32(&self) -> Vec<Vec<u32>> {
        self.map.iter().map(|r| r.iter().map(|&x| x as u32).collect()).collect()
    }

    pub fn pullback(&self, f: &Polynomial) -> Result<Polynomial> {
        f.compose_monomial(&self.map_u32())
    }
}

fn lex_least_vertex(np: &NewtonPolyhedron, face: &Face) -> Vec<i64> {
    np.face_points(face).into_iter().min().expect("face has a vertex")
}

/// Build the chart of `face` from a simplicial cone inside its normal cone.
/// Faces of positive dimension are completed to `n` columns with normals of
/// facets through the lex-least vertex of the face.
pub fn cone_to_chart(f: &Polynomial, np: &NewtonPolyhedron, face: &Face, sigma: &[Vec<i64>]) -> Result<FaceChart> {
    let n = np.nvars;
    let face_index = np.face_index(face).ok_or(Error::ForeignFace)?;
    let r = sigma.len();
    if linalg::rank_i64(sigma) != r || r + face.dim != n {
        return Err(Error::NotSimplicial(format!("{sigma:?} for a face of dimension {}", face.dim)));
    }
    let support = f.support();
    let pts = np.face_points(face);
    for g in sigma {
        let min = support.iter().map(|a| linalg::dot_i64(g, a)).min().unwrap();
        if g.iter().any(|&x| x < 0) || pts.iter().any(|p| linalg::dot_i64(g, p) != min) {
            return Err(Error::OutsideFan(format!("{g:?} is not normal to the face")));
        }
    }
    let mut cols: Vec<Vec<i64>> = sigma.to_vec();
    if r < n {
        let v = lex_least_vertex(np, face);
        let vface = np
            .compact_faces
            .iter()
            .find(|g| g.dim == 0 && np.face_points(g) == vec![v.clone()])
            .expect("vertex face");
        let mut extra = normal_cone(np, vface).generators;
        extra.extend((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()));
        for g in extra {
            if cols.len() == n {
                break;
            }
            let mut trial = cols.clone();
            trial.push(g);
            if linalg::rank_i64(&trial) == trial.len() {
                cols = trial;
            }
        }
    }
    let map = linalg::transpose(&cols);
    let det = linalg::det_i64(&map);
    let multiplicity = det.abs().to_integer().to_u64().unwrap_or(u64::MAX);
    let e: Vec<i64> = cols.iter().map(|c| c.iter().sum::<i64>() - 1).collect();
    let a: Vec<i64> = (0..n)
        .map(|k| if k < r { support.iter().map(|al| linalg::dot_i64(&cols[k], al)).min().unwrap() } else { 0 })
        .collect();
    let m32: Vec<Vec<u32>> = map.iter().map(|row| row.iter().map(|&x| x as u32).collect()).collect();
    let pulled = f.compose_monomial(&m32)?;
    let a32: Vec<u32> = a.iter().map(|&x| x as u32).collect();
    let unit = pulled.div_monomial(&a32).expect("minimum exponent divides every term");
    Ok(FaceChart { face: face_index, face_dim: face.dim, head: r, map, a, e, unit, multiplicity })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atlas {
    pub nvars: usize,
    #[serde(with = "serde_frac")]
    pub d: Q,
    pub k: usize,
    pub central_face: Face,
    /// All rays of the refined fan, sorted.
    pub rays: Vec<Vec<i64>>,
    pub charts: Vec<FaceChart>,
}

impl Atlas {
    pub fn vertex_charts(&self) -> impl Iterator<Item = &FaceChart> {
        self.charts.iter().filter(|c| c.face_dim == 0)
    }

    /// For each vertex chart containing the direction `w`, whether `w` is interior.
    pub fn locate(&self, w: &[Q]) -> Vec<(usize, bool)> {
        self.charts
            .iter()
            .enumerate()
            .filter(|(_, c)| c.face_dim == 0)
            .filter_map(|(i, c)| Cone { generators: c.columns() }.locate(w).map(|int| (i, int)))
            .collect()
    }
}

pub fn chart_atlas(f: &Polynomial) -> Result<(NewtonPolyhedron, Atlas)> {
    if !f.constant_term().is_zero() {
        return Err(Error::Precondition("f(0) must vanish".into()));
    }
    let np = newton_polyhedron(f)?;
    let mut charts = Vec::new();
    let mut rays = std::collections::BTreeSet::new();
    for face in &np.compact_faces {
        let cone = normal_cone(&np, face);
        for s in triangulate(&cone)? {
            rays.extend(s.generators.iter().cloned());
            charts.push(cone_to_chart(f, &np, face, &s.generators)?);
        }
    }
    let (central, k) = central_face(&np);
    let atlas = Atlas {
        nvars: np.nvars,
        d: newton_distance(&np),
        k,
        central_face: central,
        rays: rays.into_iter().collect(),
        charts,
    };
    Ok((np, atlas))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    #[serde(with = "serde_frac::vec")]
    pub ratios: Vec<Q>,
    pub all_below_d: bool,
    pub equality_count: usize,
    pub count_ok: bool,
}

/// Exact check of `a_j / (e_j + 1) <= d` with at most `n - k` equalities.
pub fn check_distance_relation(chart: &FaceChart, d: &Q, k: usize) -> DistanceReport {
    let ratios: Vec<Q> = chart
        .a
        .iter()
        .zip(&chart.e)
        .map(|(&a, &e)| Q::new(a.into(), (e + 1).into()))
        .collect();
    let equality_count = ratios.iter().filter(|r| *r == d).count();
    DistanceReport {
        all_below_d: ratios.iter().all(|r| r <= d),
        equality_count,
        count_ok: equality_count <= chart.nvars() - k,
        ratios,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub exact_identity: bool,
    pub head_not_divisible: bool,
    /// Vertex charts only: `U(0) != 0`.
    pub unit_at_origin: Option<bool>,
    /// Positive-dimensional faces only: `U(0, t)` is the pulled-back face
    /// polynomial over `z^a`, and nonzero.
    pub face_restriction: Option<bool>,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.exact_identity
            && self.head_not_divisible
            && self.unit_at_origin.unwrap_or(true)
            && self.face_restriction.unwrap_or(true)
    }
}

pub fn check_factorization(f: &Polynomial, np: &NewtonPolyhedron, chart: &FaceChart) -> Result<FactorizationReport> {
    let pulled = chart.pullback(f)?;
    let a32: Vec<u32> = chart.a.iter().map(|&x| x as u32).collect();
    let exact_identity = chart.unit.mul_monomial(&a32) == pulled;
    let head_not_divisible =
        (0..chart.head).all(|j| chart.unit.terms().any(|(e, _)| e.0[j] == 0));
    let (unit_at_origin, face_restriction) = if chart.face_dim == 0 {
        (Some(!chart.unit.constant_term().is_zero()), None)
    } else {
        let face = &np.compact_faces[chart.face];
        let ff = face_polynomial(f, np, face)?;
        let expected = ff.compose_monomial(&chart.map_u32())?.div_monomial(&a32);
        let restricted = chart.unit.restrict(|e| e.0[..chart.head].iter().all(|&x| x == 0));
        (None, Some(expected.as_ref() == Some(&restricted) && !restricted.is_zero()))
    };
    Ok(FactorizationReport { exact_identity, head_not_divisible, unit_at_origin, face_restriction })
}

/// Term-by-term check that head pullback exponents of face points are
/// dominated by those of every support point, with equality in all head
/// coordinates exactly for support points on the face.
pub fn check_domination(f: &Polynomial, np: &NewtonPolyhedron, chart: &FaceChart) -> bool {
    let cols = chart.columns();
    let face = &np.compact_faces[chart.face];
    let active: Vec<_> = face.active_facets.iter().map(|&k| &np.facets[k]).collect();
    let head = |al: &[i64]| -> Vec<i64> { cols[..chart.head].iter().map(|c| linalg::dot_i64(c, al)).collect() };
    np.face_points(face).iter().all(|al| {
        let g = head(al);
        f.support().iter().all(|alp| {
            let gp = head(alp);
            let dominated = g.iter().zip(&gp).all(|(x, y)| x <= y);
            let equal = g == gp;
            let on_face = active.iter().all(|fa| fa.is_tight(alp));
            dominated && equal == on_face
        })
    })
}

/// Whether the point `x` of the original coordinates lies in the chart's
/// region: with `log|x| = M log|z|`, head coordinates need `|z_j| <= 1`
/// and tail coordinates `1/C_j <= |z_j| <= C_j`.
pub fn region_membership(chart: &FaceChart, cfg: &SubdivisionConfig, x: &[f64]) -> Result<bool> {
    let n = chart.nvars();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    if let Some(i) = x.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroCoordinate(i));
    }
    let inv = linalg::inverse(&linalg::from_i64(&chart.map)).ok_or(Error::SingularMatrix)?;
    let logs: Vec<f64> = x.iter().map(|v| v.abs().ln()).collect();
    let u: Vec<f64> = inv
        .iter()
        .map(|row| row.iter().zip(&logs).map(|(a, l)| to_f64(a) * l).sum())
        .collect();
    let tol = 1e-12;
    Ok(u.iter().enumerate().all(|(j, &uj)| {
        if j < chart.head {
            uj <= tol
        } else {
            let c = to_f64(&cfg.c[(j - chart.head).min(cfg.c.len() - 1)]).ln();
            uj.abs() <= c + tol
        }
    }))
}

const TAIL_CANDIDATES: [f64; 7] = [1.0, 2.0, 0.5, 1.5, 3.0, 0.75, 2.5];

/// Numeric unit certificate for the chart's factor `U`: vertex charts at the
/// origin, face charts at `(0, t0)` for the first tail point that passes.
pub fn chart_unit_certificate(chart: &FaceChart, cfg: &CertificateConfig) -> UnitCertificate {
    let n = chart.nvars();
    let u = |z: &[f64]| chart.unit.eval_real(z);
    let tail = n - chart.head;
    if tail == 0 {
        return unit_certificate(u, &vec![0.0; n], cfg);
    }
    let mut last = None;
    let total = TAIL_CANDIDATES.len().pow(tail as u32);
    for idx in 0..total {
        let mut center = vec![0.0; n];
        let mut rem = idx;
        for slot in center[chart.head..].iter_mut() {
            *slot = TAIL_CANDIDATES[rem % TAIL_CANDIDATES.len()];
            rem /= TAIL_CANDIDATES.len();
        }
        let c = unit_certificate(u, &center, cfg);
        if c.passed {
            return c;
        }
        last = Some(c);
    }
    last.unwrap()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartCheck {
    pub chart: usize,
    pub distance: DistanceReport,
    pub factorization: FactorizationReport,
    pub domination: bool,
    pub face_in_central: bool,
    pub certificate: UnitCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasReport {
    pub checks: Vec<ChartCheck>,
    pub some_chart_attains_n_minus_k: bool,
    pub equality_only_on_central_faces: bool,
    pub passed: bool,
}

impl AtlasReport {
    pub fn build(f: &Polynomial, np: &NewtonPolyhedron, atlas: &Atlas, cfg: &CertificateConfig) -> Result<Self> {
        let n = atlas.nvars;
        let mut checks = Vec::new();
        for (i, ch) in atlas.charts.iter().enumerate() {
            let face = &np.compact_faces[ch.face];
            checks.push(ChartCheck {
                chart: i,
                distance: check_distance_relation(ch, &atlas.d, atlas.k),
                factorization: check_factorization(f, np, ch)?,
                domination: check_domination(f, np, ch),
                face_in_central: np.face_contains(&atlas.central_face, face),
                certificate: chart_unit_certificate(ch, cfg),
            });
        }
        let some = checks.iter().any(|c| c.distance.equality_count == n - atlas.k);
        let only = checks.iter().all(|c| c.distance.equality_count == 0 || c.face_in_central);
        let passed = some
            && only
            && checks.iter().all(|c| {
                c.distance.all_below_d
                    && c.distance.count_ok
                    && c.factorization.passed()
                    && c.domination
                    && c.certificate.passed
            });
        Ok(AtlasReport { checks, some_chart_attains_n_minus_k: some, equality_only_on_central_faces: only, passed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rational::{q, qf};

    fn setup(s: &str, n: usize) -> (Polynomial, NewtonPolyhedron) {
        let f = parse_polynomial(s, n).unwrap();
        let np = newton_polyhedron(&f).unwrap();
        (f, np)
    }

    fn vertex<'a>(np: &'a NewtonPolyhedron, v: &[i64]) -> &'a Face {
        np.compact_faces.iter().find(|g| g.dim == 0 && np.face_points(g) == vec![v.to_vec()]).unwrap()
    }

    #[test]
    fn vertex_chart_examples() {
        let (f, np) = setup("x1^2 + x2^3", 2);
        let ch = cone_to_chart(&f, &np, vertex(&np, &[2, 0]), &[vec![3, 2], vec![0, 1]]).unwrap();
        assert_eq!(ch.map, vec![vec![3, 0], vec![2, 1]]);
        assert_eq!((ch.a.clone(), ch.e.clone()), (vec![6, 0], vec![4, 0]));
        assert_eq!(ch.unit, parse_polynomial("1 + x2^3", 2).unwrap());
        assert_eq!(ch.multiplicity, 3);
        let r = check_distance_relation(&ch, &qf(6, 5), 1);
        assert_eq!(r.ratios, vec![qf(6, 5), q(0)]);
        assert_eq!(r.equality_count, 1);

        let ch = cone_to_chart(&f, &np, vertex(&np, &[0, 3]), &[vec![1, 0], vec![3, 2]]).unwrap();
        assert_eq!(ch.map, vec![vec![1, 3], vec![0, 2]]);
        assert_eq!((ch.a.clone(), ch.e.clone()), (vec![0, 6], vec![0, 4]));

        let (f, np) = setup("x1*x2", 2);
        let ch = cone_to_chart(&f, &np, &np.compact_faces[0], &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!((ch.a.clone(), ch.e.clone()), (vec![1, 1], vec![0, 0]));
        assert!(ch.unit == Polynomial::one(2));
        assert_eq!(check_distance_relation(&ch, &q(1), 0).equality_count, 2);
    }

    #[test]
    fn outside_fan_rejected() {
        let (f, np) = setup("x1^2 + x2^3", 2);
        let r = cone_to_chart(&f, &np, vertex(&np, &[2, 0]), &[vec![1, 0], vec![0, 1]]);
        assert!(matches!(r, Err(Error::OutsideFan(_))));
    }

    #[test]
    fn atlases() {
        let (f, _) = setup("x1^2 + x2^3", 2);
        let (np, atlas) = chart_atlas(&f).unwrap();
        assert_eq!(atlas.charts.len(), 3);
        assert_eq!(atlas.rays, vec![vec![0, 1], vec![1, 0], vec![3, 2]]);
        let edge = atlas.charts.iter().find(|c| c.face_dim == 1).unwrap();
        assert_eq!(edge.unit, parse_polynomial("1 + x2^2", 2).unwrap());
        let rep = AtlasReport::build(&f, &np, &atlas, &CertificateConfig::default()).unwrap();
        assert!(rep.passed, "{rep:?}");

        let (f, _) = setup("x1^2*x2 + x1*x2^3", 2);
        let (_, atlas) = chart_atlas(&f).unwrap();
        assert_eq!(atlas.rays, vec![vec![0, 1], vec![1, 0], vec![2, 1]]);
    }

    #[test]
    fn region_tests() {
        let (f, _) = setup("x1^2 + x2^3", 2);
        let (_, atlas) = chart_atlas(&f).unwrap();
        let cfg = SubdivisionConfig::new(vec![q(10), q(100)]).unwrap();
        let edge = atlas.charts.iter().find(|c| c.face_dim == 1).unwrap();
        assert!(region_membership(edge, &cfg, &[1e-3, 1e-2]).unwrap());
        assert!(!region_membership(edge, &cfg, &[0.1, 1e-5]).unwrap());
        assert!(matches!(region_membership(edge, &cfg, &[0.0, 0.1]), Err(Error::ZeroCoordinate(0))));
        assert!(SubdivisionConfig::new(vec![q(1), q(2)]).is_err());
    }
}
