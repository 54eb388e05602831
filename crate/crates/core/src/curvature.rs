//! Probability measures, exact Wasserstein distance and edge curvatures.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::solve_assignment;
use crate::error::{Error, Result};
use crate::flow::MinCostFlow;
use crate::graph::Graph;
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Finitely supported probability measure on the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbMeasure<S> {
    masses: BTreeMap<usize, S>,
}

impl<S: Scalar> ProbMeasure<S> {
    /// Validates positivity on the support and unit total mass. Zero
    /// masses are dropped from the support.
    pub fn new(masses: BTreeMap<usize, S>) -> Result<Self> {
        let mut total = S::zero();
        let mut kept = BTreeMap::new();
        for (v, m) in masses {
            if m < S::zero() {
                return Err(Error::InvalidMeasure(format!("negative mass {m} at {v}")));
            }
            if m.is_zero() {
                continue;
            }
            total = total.try_add(m).ok_or(Error::Overflow)?;
            kept.insert(v, m);
        }
        if !total.approx_eq(S::one()) {
            return Err(Error::InvalidMeasure(format!("total mass {total} is not 1")));
        }
        Ok(ProbMeasure { masses: kept })
    }

    pub fn dirac(v: usize) -> Self {
        ProbMeasure {
            masses: BTreeMap::from([(v, S::one())]),
        }
    }

    pub fn mass(&self, v: usize) -> S {
        self.masses.get(&v).copied().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.masses.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, S)> + '_ {
        self.masses.iter().map(|(&v, &m)| (v, m))
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }
}

/// Sparse coupling `(source, target) → mass`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TransportPlan<S> {
    entries: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> TransportPlan<S> {
    pub fn new() -> Self {
        TransportPlan {
            entries: BTreeMap::new(),
        }
    }

    /// Adds `mass` to the entry `(from, to)`.
    pub fn add(&mut self, from: usize, to: usize, mass: S) -> Result<()> {
        if mass < S::zero() {
            return Err(Error::InvalidPlan(format!("negative mass {mass}")));
        }
        if mass.is_zero() {
            return Ok(());
        }
        let e = self.entries.entry((from, to)).or_insert_with(S::zero);
        *e = e.try_add(mass).ok_or(Error::Overflow)?;
        Ok(())
    }

    pub fn get(&self, from: usize, to: usize) -> S {
        self.entries.get(&(from, to)).copied().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), S)> + '_ {
        self.entries.iter().map(|(&k, &m)| (k, m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks that the row sums are `source` and the column sums `target`.
    pub fn validate(&self, source: &ProbMeasure<S>, target: &ProbMeasure<S>) -> Result<()> {
        let mut rows: BTreeMap<usize, S> = BTreeMap::new();
        let mut cols: BTreeMap<usize, S> = BTreeMap::new();
        for ((v, w), m) in self.iter() {
            if m < S::zero() {
                return Err(Error::InvalidPlan(format!("negative entry at ({v}, {w})")));
            }
            for (acc, key) in [(&mut rows, v), (&mut cols, w)] {
                let e = acc.entry(key).or_insert_with(S::zero);
                *e = e.try_add(m).ok_or(Error::Overflow)?;
            }
        }
        let check = |sums: &BTreeMap<usize, S>, mu: &ProbMeasure<S>, side: &str| -> Result<()> {
            for v in sums.keys().chain(mu.masses.keys()) {
                let got = sums.get(v).copied().unwrap_or_else(S::zero);
                if !got.approx_eq(mu.mass(*v)) {
                    return Err(Error::InvalidPlan(format!(
                        "{side} marginal at {v} is {got}, expected {}",
                        mu.mass(*v)
                    )));
                }
            }
            Ok(())
        };
        check(&rows, source, "source")?;
        check(&cols, target, "target")
    }
}

/// The lazy random walk measure `μ_x^p`: mass `p` at `x`, `(1−p)/deg(x)` on each neighbour.
pub fn mu_p<S: Scalar>(g: &Graph, x: usize, p: S) -> Result<ProbMeasure<S>> {
    g.check_vertex(x)?;
    if p < S::zero() || p > S::one() {
        return Err(Error::IdlenessOutOfRange(p.to_string()));
    }
    let deg = g.degree(x);
    let mut masses = BTreeMap::new();
    if !p.is_zero() {
        masses.insert(x, p);
    }
    if deg == 0 {
        return ProbMeasure::new(masses);
    }
    let rest = S::one().try_sub(p).ok_or(Error::Overflow)?;
    let share = rest
        .try_div(S::from_usize(deg).ok_or(Error::Overflow)?)
        .ok_or(Error::Overflow)?;
    if !share.is_zero() {
        for &v in g.neighbors(x) {
            masses.insert(v, share);
        }
    }
    ProbMeasure::new(masses)
}

/// `Σ d(v, w) · π(v, w)`.
pub fn plan_cost<S: Scalar>(g: &Graph, plan: &TransportPlan<S>) -> Result<S> {
    let mut total = S::zero();
    for ((v, w), m) in plan.iter() {
        g.check_vertex(v)?;
        g.check_vertex(w)?;
        let d = g.dist(v, w).ok_or(Error::Unreachable)?;
        let term = S::from_usize(d)
            .and_then(|d| d.try_mul(m))
            .ok_or(Error::Overflow)?;
        total = total.try_add(term).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

fn lcm(a: i64, b: i64) -> Result<i64> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow)
}

/// Exact `W₁(μ₁, μ₂)` with an optimal plan.
///
/// Masses are scaled by their least common denominator to integer
/// supplies; the transportation problem is solved as a min-cost flow with
/// BFS distances as arc costs and the result is scaled back.
pub fn wasserstein(
    g: &Graph,
    mu1: &ProbMeasure<Rational>,
    mu2: &ProbMeasure<Rational>,
) -> Result<(Rational, TransportPlan<Rational>)> {
    for v in mu1.support().chain(mu2.support()) {
        g.check_vertex(v)?;
    }
    let scale = mu1
        .iter()
        .chain(mu2.iter())
        .try_fold(1i64, |acc, (_, m)| lcm(acc, m.denom()))?;
    let to_units = |m: Rational| -> Result<i64> {
        m.numer()
            .checked_mul(scale / m.denom())
            .ok_or(Error::Overflow)
    };
    let sources: Vec<(usize, i64)> = mu1
        .iter()
        .map(|(v, m)| Ok((v, to_units(m)?)))
        .collect::<Result<_>>()?;
    let sinks: Vec<(usize, i64)> = mu2
        .iter()
        .map(|(v, m)| Ok((v, to_units(m)?)))
        .collect::<Result<_>>()?;

    // node layout: 0 = s, 1 = t, sources, then sinks
    let (s, t) = (0, 1);
    let mut net = MinCostFlow::new(2 + sources.len() + sinks.len());
    let mut arcs = Vec::new();
    for (i, &(v, supply)) in sources.iter().enumerate() {
        net.add_arc(s, 2 + i, supply, 0);
        for (j, &(w, _)) in sinks.iter().enumerate() {
            if let Some(d) = g.dist(v, w) {
                let id = net.add_arc(2 + i, 2 + sources.len() + j, scale, d as i64);
                arcs.push((v, w, id));
            }
        }
    }
    for (j, &(_, demand)) in sinks.iter().enumerate() {
        net.add_arc(2 + sources.len() + j, t, demand, 0);
    }
    let (flow, cost) = net.solve(s, t, scale)?;
    if flow != scale {
        return Err(Error::Unreachable);
    }
    let mut plan = TransportPlan::new();
    for (v, w, id) in arcs {
        let f = net.flow(id);
        if f > 0 {
            plan.add(v, w, Rational::new(f, scale)?)?;
        }
    }
    let value = Rational::new(cost, scale)?;
    debug_assert_eq!(plan_cost(g, &plan).ok(), Some(value));
    Ok((value, plan))
}

/// Closed neighbourhood `{x} ∪ Γ(x)`, sorted.
fn closed_ball(g: &Graph, x: usize) -> Vec<usize> {
    let mut ball: Vec<usize> = std::iter::once(x).chain(g.neighbors(x).iter().copied()).collect();
    ball.sort_unstable();
    ball
}

fn require_regular(g: &Graph) -> Result<usize> {
    g.regular_degree().filter(|&d| d > 0).ok_or(Error::NotRegular)
}

/// `W(μ_x^{1/(d+1)}, μ_y^{1/(d+1)})` on a `d`-regular graph via an integer
/// assignment between the closed neighbourhoods: `W = C / (d+1)`.
pub fn assignment_wasserstein(
    g: &Graph,
    x: usize,
    y: usize,
) -> Result<(Rational, TransportPlan<Rational>)> {
    let (c, plan) = assignment_cost(g, x, y)?;
    let d = require_regular(g)?;
    Ok((Rational::new(c, d as i64 + 1)?, plan))
}

/// The minimum total distance `C` over bijections `B(x) → B(y)`.
fn assignment_cost(g: &Graph, x: usize, y: usize) -> Result<(i64, TransportPlan<Rational>)> {
    let d = require_regular(g)?;
    g.check_edge(x, y)?;
    let bx = closed_ball(g, x);
    let by = closed_ball(g, y);
    let costs: Vec<Vec<i64>> = bx
        .iter()
        .map(|&v| {
            by.iter()
                .map(|&w| g.dist(v, w).map(|d| d as i64).ok_or(Error::Unreachable))
                .collect()
        })
        .collect::<Result<_>>()?;
    let (c, assignment) = solve_assignment(&costs)?;
    let unit = Rational::new(1, d as i64 + 1)?;
    let mut plan = TransportPlan::new();
    for (i, j) in assignment.into_iter().enumerate() {
        plan.add(bx[i], by[j], unit)?;
    }
    Ok((c, plan))
}

/// `κ_p(x, y) = 1 − W(μ_x^p, μ_y^p) / d(x, y)`.
pub fn ollivier_kappa_p(g: &Graph, x: usize, y: usize, p: Rational) -> Result<Rational> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::InvalidArgument("κ_p needs two distinct vertices".into()));
    }
    let dxy = g.dist(x, y).ok_or(Error::Unreachable)?;
    let (w, _) = wasserstein(g, &mu_p(g, x, p)?, &mu_p(g, y, p)?)?;
    Rational::ONE.checked_sub(w.checked_div(Rational::from(dxy))?)
}

/// Lin–Lu–Yau curvature of an edge of a `d`-regular graph,
/// `κ = (d+1)/d · κ_{1/(d+1)}`.
///
/// Computed along two independent routes (min-cost flow and integer
/// assignment); disagreement is an error.
pub fn lly_curvature(g: &Graph, x: usize, y: usize) -> Result<Rational> {
    let d = require_regular(g)?;
    g.check_edge(x, y)?;
    let d1 = Rational::from(d + 1);
    let kp = ollivier_kappa_p(g, x, y, d1.recip()?)?;
    let via_flow = d1.checked_div(Rational::from(d))?.checked_mul(kp)?;
    let (c, _) = assignment_cost(g, x, y)?;
    let via_assignment = Rational::new(d as i64 + 1 - c, d as i64)?;
    if via_flow != via_assignment {
        return Err(Error::OracleMismatch(format!(
            "edge {x}-{y}: flow gives {via_flow}, assignment gives {via_assignment}"
        )));
    }
    Ok(via_flow)
}

/// One row of [`curvature_all_edges`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCurvature {
    pub u: usize,
    pub v: usize,
    pub kappa: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureTable {
    pub rows: Vec<EdgeCurvature>,
    pub min: Option<Rational>,
    pub max: Option<Rational>,
}

/// Curvature of every edge, in sorted edge order. Edges are processed in
/// parallel on the current rayon pool.
pub fn curvature_all_edges(g: &Graph) -> Result<CurvatureTable> {
    require_regular(g)?;
    g.require_connected()?;
    g.warm_distances();
    let rows = g
        .edges()
        .into_par_iter()
        .map(|(u, v)| lly_curvature(g, u, v).map(|kappa| EdgeCurvature { u, v, kappa }))
        .collect::<Result<Vec<_>>>()?;
    let min = rows.iter().map(|r| r.kappa).min();
    let max = rows.iter().map(|r| r.kappa).max();
    Ok(CurvatureTable { rows, min, max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn mu_p_examples() {
        let q3 = gen_hypercube(3).unwrap();
        let mu = mu_p(&q3, 0, Rational::ONE).unwrap();
        assert_eq!(mu, ProbMeasure::dirac(0));
        let mu = mu_p(&q3, 0, r(1, 4)).unwrap();
        assert_eq!(mu.len(), 4);
        assert!(mu.iter().all(|(_, m)| m == r(1, 4)));
        let k3 = gen_complete(3).unwrap();
        let mu = mu_p(&k3, 0, Rational::ZERO).unwrap();
        assert_eq!(mu.support().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(mu.mass(1), r(1, 2));
        assert!(matches!(mu_p(&k3, 0, r(3, 2)), Err(Error::IdlenessOutOfRange(_))));
        assert!(matches!(mu_p(&k3, 0, r(-1, 2)), Err(Error::IdlenessOutOfRange(_))));
    }

    #[test]
    fn mu_p_generic_over_floats() {
        let q3 = gen_hypercube(3).unwrap();
        let mu = mu_p(&q3, 0, 0.25f64).unwrap();
        assert_eq!(mu.mass(1), 0.25);
        let mu32 = mu_p(&q3, 0, 0.1f32).unwrap();
        assert!((mu32.mass(1) - 0.3).abs() < 1e-6);
    }

    #[test]
    fn measure_rejects_bad_totals() {
        let bad = BTreeMap::from([(0, r(1, 2)), (1, r(1, 3))]);
        assert!(matches!(ProbMeasure::new(bad), Err(Error::InvalidMeasure(_))));
        let neg = BTreeMap::from([(0, r(3, 2)), (1, r(-1, 2))]);
        assert!(matches!(ProbMeasure::new(neg), Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn plan_cost_examples() {
        let g = gen_hypercube(3).unwrap();
        let mu = mu_p(&g, 0, r(1, 4)).unwrap();
        let mut identity = TransportPlan::new();
        for (v, m) in mu.iter() {
            identity.add(v, v, m).unwrap();
        }
        identity.validate(&mu, &mu).unwrap();
        assert_eq!(plan_cost(&g, &identity).unwrap(), Rational::ZERO);
        let mut dirac = TransportPlan::new();
        dirac.add(0, 1, Rational::ONE).unwrap();
        dirac.validate(&ProbMeasure::dirac(0), &ProbMeasure::dirac(1)).unwrap();
        assert_eq!(plan_cost(&g, &dirac).unwrap(), Rational::ONE);
        assert!(dirac.validate(&ProbMeasure::dirac(0), &ProbMeasure::dirac(2)).is_err());
    }

    #[test]
    fn plan_cost_generic_over_floats() {
        let g = gen_cycle(6).unwrap();
        let mut plan = TransportPlan::<f64>::new();
        plan.add(0, 3, 0.5).unwrap();
        plan.add(0, 1, 0.5).unwrap();
        assert!((plan_cost(&g, &plan).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wasserstein_examples() {
        let q3 = gen_hypercube(3).unwrap();
        let mu = mu_p(&q3, 0, r(1, 4)).unwrap();
        let (w, plan) = wasserstein(&q3, &mu, &mu).unwrap();
        assert_eq!(w, Rational::ZERO);
        assert!(plan.iter().all(|((a, b), _)| a == b));
        let (w, _) = wasserstein(&q3, &ProbMeasure::dirac(0), &ProbMeasure::dirac(7)).unwrap();
        assert_eq!(w, Rational::integer(3));
        // frozen from an LP oracle: W = 1/2 on a Q3 edge at p = 1/4
        let (w, plan) = wasserstein(&q3, &mu, &mu_p(&q3, 1, r(1, 4)).unwrap()).unwrap();
        assert_eq!(w, r(1, 2));
        plan.validate(&mu, &mu_p(&q3, 1, r(1, 4)).unwrap()).unwrap();
        assert_eq!(plan_cost(&q3, &plan).unwrap(), w);
    }

    #[test]
    fn wasserstein_rejects_split_supports() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            wasserstein(&g, &ProbMeasure::dirac(0), &ProbMeasure::dirac(3)),
            Err(Error::Unreachable)
        );
    }

    #[test]
    fn assignment_examples() {
        let k4 = gen_complete(4).unwrap();
        assert_eq!(assignment_wasserstein(&k4, 0, 1).unwrap().0, Rational::ZERO);
        // LP oracle: Shrikhande W = 5/7, H(2,4) W = 3/7
        let s = gen_shrikhande();
        let (u, v) = s.edges()[0];
        assert_eq!(assignment_wasserstein(&s, u, v).unwrap().0, r(5, 7));
        let h = gen_hamming(2, 4).unwrap();
        let (u, v) = h.edges()[0];
        assert_eq!(assignment_wasserstein(&h, u, v).unwrap().0, r(3, 7));
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(assignment_wasserstein(&path, 0, 1).unwrap_err(), Error::NotRegular);
        assert_eq!(assignment_wasserstein(&k4, 0, 0).unwrap_err(), Error::NotAnEdge(0, 0));
    }

    #[test]
    fn kappa_p_examples() {
        let q3 = gen_hypercube(3).unwrap();
        assert_eq!(ollivier_kappa_p(&q3, 0, 1, Rational::ONE).unwrap(), Rational::ZERO);
        assert_eq!(ollivier_kappa_p(&q3, 0, 1, r(1, 4)).unwrap(), r(1, 2));
        let c6 = gen_cycle(6).unwrap();
        assert_eq!(ollivier_kappa_p(&c6, 0, 1, r(1, 3)).unwrap(), Rational::ZERO);
        // non-adjacent pairs are allowed for κ_p
        assert_eq!(ollivier_kappa_p(&c6, 0, 3, Rational::ONE).unwrap(), Rational::ZERO);
        assert!(ollivier_kappa_p(&c6, 2, 2, Rational::ONE).is_err());
    }

    #[test]
    fn lly_examples() {
        let s = gen_shrikhande();
        for (u, v) in s.edges() {
            assert_eq!(lly_curvature(&s, u, v).unwrap(), r(1, 3));
        }
        let h24 = gen_hamming(2, 4).unwrap();
        for (u, v) in h24.edges() {
            assert_eq!(lly_curvature(&h24, u, v).unwrap(), r(2, 3));
        }
        for n in 3..8 {
            let k = gen_complete(n).unwrap();
            assert_eq!(lly_curvature(&k, 0, 1).unwrap(), r(n as i64, n as i64 - 1));
        }
        let h23 = gen_hamming(2, 3).unwrap();
        for (u, v) in h23.edges() {
            assert_eq!(lly_curvature(&h23, u, v).unwrap(), r(3, 4));
        }
        for k in 2..=5 {
            let q = gen_hypercube(k).unwrap();
            assert_eq!(lly_curvature(&q, 0, 1).unwrap(), r(2, k as i64));
        }
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(lly_curvature(&path, 0, 1), Err(Error::NotRegular));
        assert_eq!(lly_curvature(&s, 0, 10), Err(Error::NotAnEdge(0, 10)));
    }

    #[test]
    fn all_edge_tables() {
        let t = curvature_all_edges(&gen_shrikhande()).unwrap();
        assert_eq!(t.rows.len(), 48);
        assert!(t.rows.iter().all(|row| row.kappa == r(1, 3)));
        let t = curvature_all_edges(&gen_cocktail(3).unwrap()).unwrap();
        assert!(t.rows.iter().all(|row| row.kappa == Rational::ONE));
        let t = curvature_all_edges(&gen_cycle(6).unwrap()).unwrap();
        assert_eq!((t.min, t.max), (Some(Rational::ZERO), Some(Rational::ZERO)));
        let mut sorted = t.rows.clone();
        sorted.sort_by_key(|row| (row.u, row.v));
        assert_eq!(sorted, t.rows);
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(curvature_all_edges(&two), Err(Error::Disconnected));
    }
}
