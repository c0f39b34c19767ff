//! Construction of the chart tree.

use super::steps::{coefficient_split, implicit_residual_vanishes, implicit_series, min_order_direction};
use super::{compose_truncated, ChartNode, LeafData, Move, ResolutionConfig, StepTag};
use crate::error::{Error, Result};
use crate::fan::chart_atlas;
use crate::linalg;
use crate::poly::univariate;
use crate::poly::{Polynomial, TruncatedSeries};
use crate::rational::{to_f64, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolveOutcome {
    pub polynomial: String,
    pub nvars: usize,
    pub config: ResolutionConfig,
    pub tree: ChartNode,
    pub partial: bool,
}

/// Which order drives a node: minimal total degree (with a rotation when
/// needed) or the order along `x_n` with no rotation, used after
/// localizations so monomial prefactors in `x'` stay monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    MinDegree,
    Axis,
}

/// A (sub-)problem: the exact function and auxiliary factors at its root, the
/// moves taken since, and the monomial parts of the prefactor and Jacobian
/// accumulated so far. `local` is `base(alpha(y)) / y^mono`, exact in total
/// degrees below the truncation; `factors` are the pulled-back auxiliary
/// factors, whose monomial contents are wanted at leaves.
#[derive(Debug, Clone)]
struct State {
    base: Polynomial,
    base_factors: Vec<Polynomial>,
    path: Vec<Move>,
    local: Polynomial,
    factors: Vec<Polynomial>,
    mono: Vec<u32>,
    jmono: Vec<u32>,
}

impl State {
    fn new(base: Polynomial, base_factors: Vec<Polynomial>) -> State {
        let n = base.nvars();
        State {
            local: base.clone(),
            factors: base_factors.clone(),
            base,
            base_factors,
            path: vec![],
            mono: vec![0; n],
            jmono: vec![0; n],
        }
    }

    fn n(&self) -> usize {
        self.local.nvars()
    }

    /// Recompute `local` and `factors` from the root along `path`.
    fn refresh(&mut self, trunc: u64) -> Result<()> {
        let order = trunc + self.mono.iter().map(|&m| m as u64).sum::<u64>();
        let full = compose_truncated(&self.base, &self.path, order)?;
        self.local = full
            .div_monomial(&self.mono)
            .ok_or_else(|| Error::Precondition("pullback is not divisible by the tracked monomial".into()))?;
        self.factors = self
            .base_factors
            .iter()
            .map(|f| compose_truncated(f, &self.path, order))
            .collect::<Result<_>>()?;
        Ok(())
    }

    fn apply(&mut self, mv: &Move, trunc: u64) -> Result<()> {
        self.step(mv)?;
        self.refresh(trunc)
    }

    /// Record a move and its effect on the monomial bookkeeping.
    fn step(&mut self, mv: &Move) -> Result<()> {
        self.path.push(mv.clone());
        let n = self.n();
        match mv {
            Move::Monomial { map } => {
                let cols = linalg::transpose(map);
                let pull = |v: &[u32]| -> Vec<u32> {
                    cols.iter().map(|c| c.iter().zip(v).map(|(&a, &b)| a as u32 * b).sum()).collect()
                };
                self.mono = pull(&self.mono);
                let mut j = pull(&self.jmono);
                for (k, c) in cols.iter().enumerate() {
                    j[k] += (c.iter().sum::<i64>() - 1) as u32;
                }
                self.jmono = j;
            }
            Move::AffineLinear { matrix, shift } => {
                let ident = *matrix == linalg::identity(n);
                for i in 0..n {
                    if !shift[i].is_zero() {
                        self.mono[i] = 0;
                        self.jmono[i] = 0;
                    }
                }
                if !ident && (self.mono.iter().any(|&x| x > 0) || self.jmono.iter().any(|&x| x > 0)) {
                    return Err(Error::Precondition("rotation with a nontrivial monomial prefactor".into()));
                }
            }
            Move::Quasitranslation { axis, .. } => {
                if self.mono[*axis] > 0 || self.jmono[*axis] > 0 {
                    return Err(Error::Precondition("quasitranslation along a monomial coordinate".into()));
                }
            }
            Move::Dilation { .. } => {}
        }
        Ok(())
    }
}

fn content_and_unit(p: &Polynomial) -> Option<(Vec<u32>, Polynomial)> {
    if p.is_zero() {
        return None;
    }
    let c = p.monomial_content();
    let u = p.div_monomial(&c)?;
    if u.constant_term().is_zero() {
        None
    } else {
        Some((c, u))
    }
}

fn axis_order(p: &Polynomial) -> Option<u32> {
    let n = p.nvars();
    p.terms()
        .filter(|(e, _)| e.0[..n - 1].iter().all(|&x| x == 0))
        .map(|(e, _)| e.0[n - 1])
        .min()
}

fn partial_node(step: StepTag, n: usize, why: impl Into<String>) -> ChartNode {
    let mut node = ChartNode::new(step, n, vec![]);
    node.partial = Some(why.into());
    node
}

const TAIL_POINTS: [(i64, i64); 7] = [(1, 1), (2, 1), (1, 2), (3, 1), (3, 2), (4, 1), (1, 4)];

struct Engine<'a> {
    cfg: &'a ResolutionConfig,
}

impl Engine<'_> {
    fn t(&self) -> u64 {
        self.cfg.truncation
    }

    /// Leaf if `local` is already a monomial times a unit at `center`.
    fn try_leaf(&self, st: &State, center: &[f64]) -> Option<ChartNode> {
        let (c, u) = content_and_unit(&st.local)?;
        let n = st.n();
        let zero_off = |mut v: Vec<u32>| {
            for i in 0..n {
                if center[i] != 0.0 {
                    v[i] = 0;
                }
            }
            v
        };
        let mut node = ChartNode::new(StepTag::Leaf, n, vec![]);
        let mut contents = Vec::new();
        for f in &st.factors {
            match content_and_unit(f) {
                Some((fc, _)) => contents.push(zero_off(fc)),
                None => {
                    node.partial = Some("auxiliary factor is not a monomial times a unit".into());
                    contents.push(zero_off(f.monomial_content()));
                }
            }
        }
        let m_leaf: Vec<u32> = st.mono.iter().zip(&c).map(|(a, b)| a + b).collect();
        node.leaf = Some(LeafData {
            m_leaf: zero_off(m_leaf),
            jacobian_monomial: zero_off(st.jmono.clone()),
            center: center.to_vec(),
            local_unit: u.to_string(),
            factor_contents: contents,
            certificate: None,
        });
        Some(node)
    }

    fn solve(&self, mut st: State, mode: Mode, depth: usize) -> ChartNode {
        let n = st.n();
        if depth > self.cfg.max_depth {
            return partial_node(StepTag::Leaf, n, Error::DepthExhausted(self.cfg.max_depth).to_string());
        }
        if let Some(leaf) = self.try_leaf(&st, &vec![0.0; n]) {
            return leaf;
        }
        if st.local.is_zero() || n == 1 {
            return partial_node(StepTag::Leaf, n, Error::VanishesToTruncation(self.t() as u32).to_string());
        }
        let series = TruncatedSeries::new(&st.local, self.t());
        match mode {
            Mode::MinDegree => match min_order_direction(&series, self.cfg.rotation_bound) {
                Err(e) => partial_node(StepTag::Rotation, n, e.to_string()),
                Ok((m, a)) if a == linalg::identity(n) => self.quasitranslate(st, m, depth),
                Ok((m, a)) => {
                    let mv = Move::AffineLinear { matrix: a, shift: vec![Q::zero(); n] };
                    let mut node = ChartNode::new(StepTag::Rotation, n, vec![mv.clone()]);
                    node.order = Some(m);
                    match st.apply(&mv, self.t()) {
                        Ok(()) => node.children.push(self.quasitranslate(st, m, depth)),
                        Err(e) => node.partial = Some(e.to_string()),
                    }
                    node
                }
            },
            Mode::Axis => match axis_order(series.poly()) {
                Some(m) if m > 0 => self.quasitranslate(st, m, depth),
                _ => partial_node(StepTag::Quasitranslation, n, Error::VanishesToTruncation(self.t() as u32).to_string()),
            },
        }
    }

    fn quasitranslate(&self, mut st: State, m: u32, depth: usize) -> ChartNode {
        let n = st.n();
        let series = TruncatedSeries::new(&st.local, self.t());
        let g = match implicit_series(&series, m) {
            Ok(g) => g,
            Err(e) => return partial_node(StepTag::Quasitranslation, n, e.to_string()),
        };
        let check = implicit_residual_vanishes(&series, m, &g);
        let mv = Move::Quasitranslation { axis: n - 1, g };
        let mut node = ChartNode::new(StepTag::Quasitranslation, n, vec![mv.clone()]);
        node.order = Some(m);
        node.implicit_check = Some(check);
        if let Err(e) = st.apply(&mv, self.t()) {
            node.partial = Some(e.to_string());
            return node;
        }
        let split = match coefficient_split(&TruncatedSeries::new(&st.local, self.t()), m) {
            Ok(s) => s,
            Err(e) => {
                node.partial = Some(e.to_string());
                return node;
            }
        };
        let coords: Vec<usize> = (0..n - 1).filter(|&s| st.mono[s] > 0 || st.jmono[s] > 0).collect();
        let mut factors: Vec<Polynomial> = coords.iter().map(|&s| Polynomial::var(n - 1, s)).collect();
        factors.extend(split.lower.iter().filter(|(_, h)| !h.is_zero()).map(|(_, h)| h.clone()));
        if factors.is_empty() {
            node.children.push(self.at_subleaf(st, m, depth));
            return node;
        }
        let product = factors.iter().skip(1).fold(factors[0].clone(), |acc, h| acc.mul(h));
        let sub = State::new(product, factors);
        let subtree = self.solve(sub, Mode::MinDegree, depth + 1);
        node.children.push(self.lift_walk(&subtree, st, &coords, m, depth));
        node
    }

    /// Mirror a sub-resolution tree in `n` variables, continuing at its leaves.
    fn lift_walk(&self, sub: &ChartNode, mut st: State, coords: &[usize], m: u32, depth: usize) -> ChartNode {
        let n = st.n();
        let moves: Vec<Move> = sub.moves.iter().map(|mv| mv.lift()).collect();
        let mut node = ChartNode::new(StepTag::SubResolution, n, moves.clone());
        node.order = sub.order;
        node.implicit_check = sub.implicit_check;
        st.path.extend(moves.iter().cloned());
        if let Some(why) = &sub.partial {
            node.partial = Some(format!("sub-resolution: {why}"));
            return node;
        }
        if let Some(leaf) = &sub.leaf {
            // monomial bookkeeping through the whole sub-chart at once
            let mut mono = vec![0u32; n];
            let mut jmono = vec![0u32; n];
            for (j, &s) in coords.iter().enumerate() {
                for (k, &c) in leaf.factor_contents[j].iter().enumerate() {
                    mono[k] += st.mono[s] * c;
                    jmono[k] += st.jmono[s] * c;
                }
            }
            for (k, &c) in leaf.jacobian_monomial.iter().enumerate() {
                jmono[k] += c;
            }
            mono[n - 1] = st.mono[n - 1];
            jmono[n - 1] = st.jmono[n - 1];
            st.mono = mono;
            st.jmono = jmono;
            if let Err(e) = st.refresh(self.t()) {
                node.partial = Some(e.to_string());
                return node;
            }
            // a sub-leaf centred off the origin: move the centre there
            let mut shift = vec![Q::zero(); n];
            for (i, &c) in leaf.center.iter().enumerate() {
                if c != 0.0 {
                    shift[i] = Q::from_float(c).unwrap_or_else(Q::one);
                }
            }
            if shift.iter().any(|s| !s.is_zero()) {
                let mv = Move::AffineLinear { matrix: linalg::identity(n), shift };
                if let Err(e) = st.apply(&mv, self.t()) {
                    node.partial = Some(e.to_string());
                    return node;
                }
                node.moves.push(mv);
            }
            node.children.push(self.at_subleaf(st, m, depth));
            return node;
        }
        for c in &sub.children {
            node.children.push(self.lift_walk(c, st.clone(), coords, m, depth));
        }
        node
    }

    fn at_subleaf(&self, st: State, m: u32, depth: usize) -> ChartNode {
        let n = st.n();
        if let Some(leaf) = self.try_leaf(&st, &vec![0.0; n]) {
            return leaf;
        }
        match axis_order(&st.local) {
            Some(k) if k < m => {
                let mut node = ChartNode::new(StepTag::OrderDrop, n, vec![]);
                node.order = Some(k);
                node.children.push(self.solve(st, Mode::Axis, depth + 1));
                node
            }
            _ => self.fan_step(st, m, depth),
        }
    }

    fn fan_step(&self, st: State, m: u32, depth: usize) -> ChartNode {
        let n = st.n();
        let mut node = ChartNode::new(StepTag::Reflection, n, vec![]);
        node.order = Some(m);
        let patterns: Vec<Vec<Q>> = if self.cfg.reflections {
            (0..1usize << n)
                .map(|bits| (0..n).map(|i| if bits >> i & 1 == 1 { -Q::one() } else { Q::one() }).collect())
                .collect()
        } else {
            vec![vec![Q::one(); n]]
        };
        let mut children = Vec::new();
        for scale in patterns {
            let mv = Move::Dilation { scale };
            let mut s = st.clone();
            let mut child = ChartNode::new(StepTag::Reflection, n, vec![mv.clone()]);
            child.order = Some(m);
            match s.apply(&mv, self.t()) {
                Ok(()) => self.charts_for(&mut child, s, m, depth),
                Err(e) => child.partial = Some(e.to_string()),
            }
            children.push(child);
        }
        if children.len() == 1 {
            return children.pop().unwrap();
        }
        node.children = children;
        node
    }

    fn charts_for(&self, parent: &mut ChartNode, st: State, m: u32, depth: usize) {
        let n = st.n();
        let atlas = match chart_atlas(&st.local) {
            Ok((_, a)) => a,
            Err(e) => {
                parent.partial = Some(e.to_string());
                return;
            }
        };
        for chart in &atlas.charts {
            let mv = Move::Monomial { map: chart.map.clone() };
            let mut node = ChartNode::new(StepTag::FanChart, n, vec![mv.clone()]);
            node.order = Some(m);
            let mut s = st.clone();
            let stepped = s.step(&mv).and_then(|()| {
                for (mo, &ai) in s.mono.iter_mut().zip(&chart.a) {
                    *mo += ai as u32;
                }
                s.refresh(self.t())
            });
            if let Err(e) = stepped {
                node.partial = Some(e.to_string());
                parent.children.push(node);
                continue;
            }
            if chart.face_dim == 0 {
                match self.try_leaf(&s, &vec![0.0; n]) {
                    Some(leaf) => node.children.push(leaf),
                    None => node.partial = Some("vertex chart factor vanishes at the origin".into()),
                }
            } else if chart.face_dim == 1 {
                self.localize(&mut node, s, depth);
            } else {
                node.partial = Some(format!("localization on a {}-dimensional face is not supported", chart.face_dim));
            }
            parent.children.push(node);
        }
    }

    /// Edge chart: recurse at every admissible root of `U(0, t)` and add one
    /// regular leaf away from the roots.
    fn localize(&self, node: &mut ChartNode, st: State, depth: usize) {
        let n = st.n();
        let restricted = st.local.restrict(|e| e.0[..n - 1].iter().all(|&x| x == 0));
        let mut p: univariate::UPoly = vec![Q::zero(); restricted.degree_in(n - 1) as usize + 1];
        for (e, c) in restricted.terms() {
            p[e.0[n - 1] as usize] = c.clone();
        }
        let positive_only = self.cfg.reflections;
        let roots: Vec<Q> = univariate::rational_roots(&p)
            .into_iter()
            .filter(|r| if positive_only { r.is_positive() } else { !r.is_zero() })
            .collect();
        let bound = univariate::root_bound(&p);
        let (lo, hi) = if positive_only { (Q::zero(), bound.clone()) } else { (-bound.clone(), bound.clone()) };
        let sq = univariate::gcd(&p, &univariate::derivative(&p));
        let squarefree = univariate::div_rem(&p, &sq).0;
        let mut real = univariate::count_real_roots(&squarefree, &lo, &hi);
        if !positive_only && univariate::eval(&squarefree, &Q::zero()).is_zero() {
            real -= 1;
        }
        if real > roots.len() {
            node.partial = Some("edge polynomial has irrational real roots".into());
        }
        for r in &roots {
            let mv = Move::shift(n, n - 1, r.clone());
            let mut s = st.clone();
            let mut loc = ChartNode::new(StepTag::Localization, n, vec![mv.clone()]);
            match s.apply(&mv, self.t()) {
                Ok(()) => {
                    loc.order = axis_order(&s.local);
                    loc.children.push(self.solve(s, Mode::Axis, depth + 1));
                }
                Err(e) => loc.partial = Some(e.to_string()),
            }
            node.children.push(loc);
        }
        let rootf: Vec<f64> = univariate::real_roots_in(
            &p.iter().map(to_f64).collect::<Vec<_>>(),
            -to_f64(&bound),
            to_f64(&bound),
        );
        let t = TAIL_POINTS
            .iter()
            .map(|&(a, b)| a as f64 / b as f64)
            .find(|t| rootf.iter().all(|r| (r - t).abs() > 0.25) && univariate::eval_f64(&p.iter().map(to_f64).collect::<Vec<_>>(), *t) != 0.0)
            .unwrap_or(10.0);
        let mut center = vec![0.0; n];
        center[n - 1] = t;
        match self.regular_leaf(&st, &center) {
            Some(leaf) => node.children.push(leaf),
            None => node.partial = Some("no regular leaf".into()),
        }
    }

    /// Leaf at an off-origin centre where the head monomial is the whole
    /// singular part: `local` has no head content but `U(0, t) != 0`.
    fn regular_leaf(&self, st: &State, center: &[f64]) -> Option<ChartNode> {
        let n = st.n();
        let c = st.local.monomial_content();
        let u = st.local.div_monomial(&c)?;
        let mut node = ChartNode::new(StepTag::Leaf, n, vec![]);
        let mut m_leaf: Vec<u32> = st.mono.iter().zip(&c).map(|(a, b)| a + b).collect();
        let mut jm = st.jmono.clone();
        for i in 0..n {
            if center[i] != 0.0 {
                m_leaf[i] = 0;
                jm[i] = 0;
            }
        }
        node.leaf = Some(LeafData {
            m_leaf,
            jacobian_monomial: jm,
            center: center.to_vec(),
            local_unit: u.to_string(),
            factor_contents: st.factors.iter().map(|f| f.monomial_content()).collect(),
            certificate: None,
        });
        Some(node)
    }
}

/// Build the chart tree of `f` (no certificates; see `certify_tree`).
pub fn resolve(f: &Polynomial, cfg: &ResolutionConfig) -> Result<ResolveOutcome> {
    cfg.validate()?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.constant_term().is_zero() {
        return Err(Error::Precondition("f(0) must vanish".into()));
    }
    let n = f.nvars();
    let engine = Engine { cfg };
    let st = State::new(f.clone(), vec![]);
    let mut root = ChartNode::new(StepTag::Root, n, vec![]);
    root.children.push(engine.solve(st, Mode::MinDegree, 0));
    Ok(ResolveOutcome {
        polynomial: f.to_string(),
        nvars: n,
        config: cfg.clone(),
        partial: root.is_partial(),
        tree: root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::resolution::certify_tree;

    fn run(text: &str, n: usize) -> (ResolveOutcome, crate::resolution::TreeReport) {
        let f = parse_polynomial(text, n).unwrap();
        let cfg = ResolutionConfig::for_polynomial(&f);
        let mut out = resolve(&f, &cfg).unwrap();
        let rep = certify_tree(&f, &mut out.tree, &cfg);
        (out, rep)
    }

    #[test]
    fn battery_trees_certify() {
        for (t, n) in [("x1^2 - x2^2", 2), ("x1^2 - x2^3", 2), ("x1^2 + x2^3", 2), ("x1^2*x2 + x1*x2^2", 2), ("x1*x2", 2)] {
            let (out, rep) = run(t, n);
            assert!(!out.partial, "{t}: partial");
            assert!(rep.passed, "{t}: {rep:?}");
        }
    }

    #[test]
    fn corrupted_leaf_fails() {
        let f = parse_polynomial("x1^2 - x2^2", 2).unwrap();
        let cfg = ResolutionConfig::for_polynomial(&f);
        let out = resolve(&f, &cfg).unwrap();
        let leaves = out.tree.leaves_with_moves();
        assert!(!leaves.is_empty());
        for (moves, leaf) in leaves {
            let mut bad = leaf.clone();
            bad.m_leaf[0] += 1;
            assert!(crate::resolution::verify_leaf(&f, &moves, leaf, &cfg, 1).passed);
            assert!(!crate::resolution::verify_leaf(&f, &moves, &bad, &cfg, 1).passed);
        }
    }
}
