//! Transport-bipartite graphs of an edge and the curvature witnesses built on them.
//!
//! For an edge `xy` of an amply regular graph with `β > α ≥ 1` the
//! transport-bipartite graph `H` has left side `N_x ∪ Δ ∪ {x₁…x_{β−α−1}}`
//! and right side `N_y ∪ Δ′ ∪ {x′₁…x′_{β−α−1}}`, where `Δ′` and the `xᵢ`
//! are synthetic copies. `H` is `(β−1)`-regular, so every perfect matching
//! of it induces a bijection `N_x → N_y` along matched "reachable chains";
//! routing the neighbourhood mass along those chains gives an explicit
//! transport plan whose cost bounds the curvature from below.
//!
//! Vertex layout on each side: exclusive neighbours first (sorted host
//! order), then `Δ` in sorted host order (so `z₁` is the smallest common
//! neighbour), then the synthetic copies.

use serde::{Deserialize, Serialize};

use crate::curvature::{lly_curvature, mu_p, plan_cost, wasserstein, TransportPlan};
use crate::error::{Error, Result};
use crate::graph::{AmplyParams, Graph};
use crate::matching::{dense_perfect_matching, konig_decomposition, matching_through_edge, Bipartite, Matching};
use crate::rational::Rational;

/// Role of an `H` vertex. On the left `Exclusive` means `N_x` and `Common`
/// means `z_i`; on the right they mean `N_y` and `z_i′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Exclusive { host: usize },
    Common { index: usize, host: usize },
    XCopy { index: usize },
}

impl Role {
    pub fn host(&self) -> Option<usize> {
        match *self {
            Role::Exclusive { host } | Role::Common { host, .. } => Some(host),
            Role::XCopy { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    /// `N_x – N_y` host edges
    E1,
    /// `N_x – z_i′` when `v z_i` is a host edge
    E2,
    /// `z_i – N_y` host edges
    E3,
    /// diagonal `z_i – z_i′`
    E4,
    /// `z_i – z_j′` when `z_i z_j` is a host edge
    E5,
    /// `x_i – z_j′`, complete
    E6,
    /// `z_j – x_i′`, complete
    E7,
    /// `x_i – x_j′`, complete
    E8,
}

impl EdgeClass {
    pub const ALL: [EdgeClass; 8] = [
        EdgeClass::E1,
        EdgeClass::E2,
        EdgeClass::E3,
        EdgeClass::E4,
        EdgeClass::E5,
        EdgeClass::E6,
        EdgeClass::E7,
        EdgeClass::E8,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HEdge {
    pub left: usize,
    pub right: usize,
    pub class: EdgeClass,
}

/// The transport-bipartite graph of a host edge `xy`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportBipartite {
    pub x: usize,
    pub y: usize,
    pub d: usize,
    pub alpha: usize,
    pub beta: usize,
    pub left: Vec<Role>,
    pub right: Vec<Role>,
    pub edges: Vec<HEdge>,
}

impl TransportBipartite {
    pub fn exclusive_len(&self) -> usize {
        self.d - self.alpha - 1
    }

    /// Number of synthetic copies per side, `β − α − 1`.
    pub fn copies_len(&self) -> usize {
        self.beta - self.alpha - 1
    }

    pub fn side_len(&self) -> usize {
        self.left.len()
    }

    fn common_index(&self, i: usize) -> usize {
        self.exclusive_len() + i
    }

    fn copy_index(&self, i: usize) -> usize {
        self.exclusive_len() + self.alpha + i
    }

    /// `(left, right)` indices of the diagonal edge `z₁z₁′`.
    pub fn z1_edge(&self) -> (usize, usize) {
        let i = self.common_index(0);
        (i, i)
    }

    pub fn class_edges(&self, class: EdgeClass) -> impl Iterator<Item = &HEdge> + '_ {
        self.edges.iter().filter(move |e| e.class == class)
    }

    pub fn bipartite(&self) -> Result<Bipartite> {
        Bipartite::new(
            self.left.len(),
            self.right.len(),
            self.edges.iter().map(|e| (e.left, e.right)),
        )
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.left.len()];
        for e in &self.edges {
            deg[e.left] += 1;
        }
        deg
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.right.len()];
        for e in &self.edges {
            deg[e.right] += 1;
        }
        deg
    }
}

fn require_construction_hypothesis(params: &AmplyParams) -> Result<usize> {
    match params.beta {
        None => Err(Error::Hypothesis("β is undefined (no pair at distance 2)".into())),
        Some(_) if params.alpha == 0 => Err(Error::Hypothesis("β > α ≥ 1 fails: α = 0".into())),
        Some(b) if b <= params.alpha => Err(Error::Hypothesis(format!(
            "β > α ≥ 1 fails: β = {b} ≤ α = {}",
            params.alpha
        ))),
        Some(b) => Ok(b),
    }
}

/// Builds `H` for the edge `xy` with all eight edge classes.
pub fn build_transport_bipartite(
    g: &Graph,
    x: usize,
    y: usize,
    params: &AmplyParams,
) -> Result<TransportBipartite> {
    let beta = require_construction_hypothesis(params)?;
    let alpha = params.alpha;
    let part = g.edge_partition(x, y)?;
    if part.delta.len() != alpha || part.nx.len() != part.ny.len() {
        return Err(Error::Hypothesis(format!(
            "edge {x}-{y} does not match parameters {params}"
        )));
    }
    let copies = beta - alpha - 1;
    let side = |exclusive: &[usize]| -> Vec<Role> {
        exclusive
            .iter()
            .map(|&host| Role::Exclusive { host })
            .chain(part.delta.iter().enumerate().map(|(index, &host)| Role::Common { index, host }))
            .chain((0..copies).map(|index| Role::XCopy { index }))
            .collect()
    };
    let mut h = TransportBipartite {
        x,
        y,
        d: params.d,
        alpha,
        beta,
        left: side(&part.nx),
        right: side(&part.ny),
        edges: Vec::new(),
    };
    let nx_len = part.nx.len();
    let (ci, xi) = (|i: usize| nx_len + i, |i: usize| nx_len + alpha + i);
    let mut push = |left, right, class| h.edges.push(HEdge { left, right, class });

    for (i, &v) in part.nx.iter().enumerate() {
        for (j, &w) in part.ny.iter().enumerate() {
            if g.has_edge(v, w) {
                push(i, j, EdgeClass::E1);
            }
        }
    }
    for (i, &v) in part.nx.iter().enumerate() {
        for (j, &z) in part.delta.iter().enumerate() {
            if g.has_edge(v, z) {
                push(i, ci(j), EdgeClass::E2);
            }
        }
    }
    for (i, &z) in part.delta.iter().enumerate() {
        for (j, &w) in part.ny.iter().enumerate() {
            if g.has_edge(z, w) {
                push(ci(i), j, EdgeClass::E3);
            }
        }
    }
    for i in 0..alpha {
        push(ci(i), ci(i), EdgeClass::E4);
    }
    for (i, &zi) in part.delta.iter().enumerate() {
        for (j, &zj) in part.delta.iter().enumerate() {
            if i != j && g.has_edge(zi, zj) {
                push(ci(i), ci(j), EdgeClass::E5);
            }
        }
    }
    for i in 0..copies {
        for j in 0..alpha {
            push(xi(i), ci(j), EdgeClass::E6);
        }
    }
    for i in 0..copies {
        for j in 0..alpha {
            push(ci(j), xi(i), EdgeClass::E7);
        }
    }
    for i in 0..copies {
        for j in 0..copies {
            push(xi(i), xi(j), EdgeClass::E8);
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Outcome of the `(β−1)`-regularity check on `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityCheck {
    pub expected: usize,
    pub left_degrees: Vec<usize>,
    pub right_degrees: Vec<usize>,
    /// First vertex (left side scanned first) whose degree is wrong.
    pub offender: Option<(Side, usize, Role, usize)>,
}

impl RegularityCheck {
    pub fn pass(&self) -> bool {
        self.offender.is_none()
    }
}

pub fn check_h_regular(h: &TransportBipartite, params: &AmplyParams) -> RegularityCheck {
    let expected = params.beta.unwrap_or(0).saturating_sub(1);
    let left_degrees = h.left_degrees();
    let right_degrees = h.right_degrees();
    let offender = left_degrees
        .iter()
        .enumerate()
        .map(|(i, &deg)| (Side::Left, i, h.left[i], deg))
        .chain(
            right_degrees
                .iter()
                .enumerate()
                .map(|(i, &deg)| (Side::Right, i, h.right[i], deg)),
        )
        .find(|&(_, _, _, deg)| deg != expected);
    RegularityCheck {
        expected,
        left_degrees,
        right_degrees,
        offender,
    }
}

/// Matched path `(v₀, t₁, …, t_j, w₀)` from `v₀ ∈ N_x` to `w₀ ∈ N_y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachableChain {
    pub v0: usize,
    /// `t₁ … t_j`, each `Role::Common` or `Role::XCopy` (left-side roles).
    pub interior: Vec<Role>,
    pub w0: usize,
    /// Reachable distance `1 + j`.
    pub rho: usize,
    /// Number of synthetic copies among the interior.
    pub k: usize,
}

impl ReachableChain {
    /// `|C ∩ (N_x ∪ Δ ∪ {x_i})|`, counted from the roles.
    pub fn left_members(&self) -> usize {
        1 + self
            .interior
            .iter()
            .filter(|r| matches!(r, Role::Common { .. } | Role::XCopy { .. }))
            .count()
    }
}

fn require_perfect(h: &TransportBipartite, m: &Matching) -> Result<Bipartite> {
    let b = h.bipartite()?;
    m.validate(&b)?;
    if !m.is_perfect() {
        return Err(Error::NotPerfect);
    }
    Ok(b)
}

/// Follows `M` from every `v ∈ N_x` to its partner `φ(v) ∈ N_y` and
/// checks that `φ` is a bijection.
pub fn reachable_map(h: &TransportBipartite, m: &Matching) -> Result<Vec<ReachableChain>> {
    require_perfect(h, m)?;
    let nx_len = h.exclusive_len();
    let mut chains = Vec::with_capacity(nx_len);
    for i in 0..nx_len {
        let v0 = h.left[i].host().expect("exclusive vertex has a host");
        let mut interior = Vec::new();
        let mut right = m.right_of(i).ok_or(Error::NotPerfect)?;
        let w0 = loop {
            // t′ on the right leads to t on the left with the same role
            let left = match h.right[right] {
                Role::Exclusive { host } => break host,
                Role::Common { index, .. } => h.common_index(index),
                Role::XCopy { index } => h.copy_index(index),
            };
            interior.push(h.left[left]);
            if interior.len() > h.side_len() {
                return Err(Error::Certificate(format!("chain from {v0} does not terminate")));
            }
            right = m.right_of(left).ok_or(Error::NotPerfect)?;
        };
        let k = interior.iter().filter(|r| matches!(r, Role::XCopy { .. })).count();
        chains.push(ReachableChain {
            v0,
            rho: 1 + interior.len(),
            k,
            interior,
            w0,
        });
    }
    let mut targets: Vec<usize> = chains.iter().map(|c| c.w0).collect();
    targets.sort_unstable();
    let mut ny: Vec<usize> = h.right[..nx_len].iter().filter_map(Role::host).collect();
    ny.sort_unstable();
    if targets != ny {
        return Err(Error::Certificate("φ: N_x → N_y is not a bijection".into()));
    }
    Ok(chains)
}

/// `d(v₀, w₀) ≤ ρ_M − k` for one chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub v0: usize,
    pub w0: usize,
    pub distance: usize,
    pub rho: usize,
    pub k: usize,
    pub pass: bool,
}

/// Measures host distances along every reachable chain of `m`.
pub fn verify_lemma_3_3(g: &Graph, h: &TransportBipartite, m: &Matching) -> Result<Vec<ChainRecord>> {
    reachable_map(h, m)?
        .into_iter()
        .map(|c| {
            let distance = g.distance(c.v0, c.w0)?.ok_or(Error::Unreachable)?;
            Ok(ChainRecord {
                v0: c.v0,
                w0: c.w0,
                distance,
                rho: c.rho,
                k: c.k,
                pass: distance + c.k <= c.rho,
            })
        })
        .collect()
}

/// Plan `π₀`: `1/(d+1)` on `(v, v)` for `v ∈ Δ ∪ {x, y}` and on `(v, φ(v))`
/// for `v ∈ N_x`, where `M` must contain `z₁z₁′`.
pub fn build_pi0(
    g: &Graph,
    x: usize,
    y: usize,
    h: &TransportBipartite,
    m: &Matching,
) -> Result<TransportPlan<Rational>> {
    if (h.x, h.y) != (x, y) {
        return Err(Error::Precondition(format!(
            "H was built for {}-{}, not {x}-{y}",
            h.x, h.y
        )));
    }
    let (zl, zr) = h.z1_edge();
    if !m.contains(zl, zr) {
        return Err(Error::Precondition("matching does not contain z₁z₁′".into()));
    }
    let chains = reachable_map(h, m)?;
    let unit = Rational::new(1, h.d as i64 + 1)?;
    let mut plan = TransportPlan::new();
    let fixed = h.left.iter().filter_map(|r| match r {
        Role::Common { host, .. } => Some(*host),
        _ => None,
    });
    for v in fixed.chain([x, y]) {
        plan.add(v, v, unit)?;
    }
    for c in &chains {
        plan.add(c.v0, c.w0, unit)?;
    }
    plan.validate(&mu_p(g, x, unit)?, &mu_p(g, y, unit)?)
        .map_err(|e| Error::Certificate(format!("π₀ marginals: {e}")))?;
    Ok(plan)
}

/// Everything computed along the lower-bound proof for one edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub x: usize,
    pub y: usize,
    pub matching: Matching,
    pub chains: Vec<ReachableChain>,
    pub records: Vec<ChainRecord>,
    /// `Σ ρ_M(vᵢ, wᵢ)`
    pub rho_sum: usize,
    /// `Σ kᵢ`
    pub k_sum: usize,
    pub pi0_cost: Rational,
    /// `(d−2)/(d+1)`
    pub cost_bound: Rational,
    pub wasserstein: Rational,
    /// `(d+1)/d · (1 − cost(π₀))`
    pub kappa_lb: Rational,
    pub kappa: Rational,
}

/// Runs the π₀ construction for `xy` and checks each inequality along the
/// way: chain bounds, `Σρ ≤ d + k − 2`, `cost(π₀) ≤ (d−2)/(d+1)`,
/// `κ_lb ≥ 3/d` and `W ≤ cost(π₀)`, `κ_lb ≤ κ`.
pub fn witness_curvature_bound(g: &Graph, x: usize, y: usize) -> Result<WitnessCertificate> {
    let params = g.amply_params()?;
    witness_with_params(g, x, y, &params)
}

pub fn witness_with_params(
    g: &Graph,
    x: usize,
    y: usize,
    params: &AmplyParams,
) -> Result<WitnessCertificate> {
    let h = build_transport_bipartite(g, x, y, params)?;
    let regular = check_h_regular(&h, params);
    if let Some((side, i, role, deg)) = regular.offender {
        return Err(Error::Certificate(format!(
            "H not {}-regular: {side:?} vertex {i} ({role:?}) has degree {deg}",
            regular.expected
        )));
    }
    let m = matching_through_edge(&h.bipartite()?, h.z1_edge())?;
    let chains = reachable_map(&h, &m)?;
    let records = verify_lemma_3_3(g, &h, &m)?;
    if let Some(r) = records.iter().find(|r| !r.pass) {
        return Err(Error::Certificate(format!(
            "chain {}→{}: d = {} > ρ − k = {} − {}",
            r.v0, r.w0, r.distance, r.rho, r.k
        )));
    }
    let d = params.d;
    let rho_sum: usize = chains.iter().map(|c| c.rho).sum();
    let k_sum: usize = chains.iter().map(|c| c.k).sum();
    if rho_sum + 2 > d + k_sum {
        return Err(Error::Certificate(format!(
            "Σρ = {rho_sum} exceeds d + k − 2 = {d} + {k_sum} − 2"
        )));
    }
    let plan = build_pi0(g, x, y, &h, &m)?;
    let pi0_cost = plan_cost(g, &plan)?;
    let d1 = Rational::from(d + 1);
    let dr = Rational::from(d);
    let cost_bound = Rational::from(d).checked_sub(Rational::integer(2))?.checked_div(d1)?;
    if pi0_cost > cost_bound {
        return Err(Error::Certificate(format!(
            "cost(π₀) = {pi0_cost} exceeds (d−2)/(d+1) = {cost_bound}"
        )));
    }
    let kappa_lb = d1.checked_div(dr)?.checked_mul(Rational::ONE.checked_sub(pi0_cost)?)?;
    let three_over_d = Rational::integer(3).checked_div(dr)?;
    if kappa_lb < three_over_d {
        return Err(Error::Certificate(format!("κ_lb = {kappa_lb} < 3/d = {three_over_d}")));
    }
    let unit = d1.recip()?;
    let (w, _) = wasserstein(g, &mu_p(g, x, unit)?, &mu_p(g, y, unit)?)?;
    if w > pi0_cost {
        return Err(Error::Certificate(format!("W = {w} exceeds cost(π₀) = {pi0_cost}")));
    }
    let kappa = lly_curvature(g, x, y)?;
    if kappa_lb > kappa {
        return Err(Error::Certificate(format!("κ_lb = {kappa_lb} exceeds κ = {kappa}")));
    }
    Ok(WitnessCertificate {
        x,
        y,
        matching: m,
        chains,
        records,
        rho_sum,
        k_sum,
        pi0_cost,
        cost_bound,
        wasserstein: w,
        kappa_lb,
        kappa,
    })
}

/// Full per-edge pipeline: regularity of `H`, the König decomposition,
/// bijectivity and chain bounds for every class, and the π₀ certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWitnessReport {
    pub x: usize,
    pub y: usize,
    pub h_regular: bool,
    pub classes: usize,
    pub classes_expected: usize,
    pub bijective_classes: usize,
    pub chains_checked: usize,
    pub chains_passed: usize,
    pub certificate: Option<WitnessCertificate>,
    pub failure: Option<String>,
}

impl EdgeWitnessReport {
    pub fn pass(&self) -> bool {
        self.h_regular
            && self.classes == self.classes_expected
            && self.bijective_classes == self.classes
            && self.chains_passed == self.chains_checked
            && self.certificate.is_some()
            && self.failure.is_none()
    }
}

pub fn verify_edge_witness(
    g: &Graph,
    x: usize,
    y: usize,
    params: &AmplyParams,
) -> Result<EdgeWitnessReport> {
    let h = build_transport_bipartite(g, x, y, params)?;
    let regular = check_h_regular(&h, params);
    let mut report = EdgeWitnessReport {
        x,
        y,
        h_regular: regular.pass(),
        classes: 0,
        classes_expected: regular.expected,
        bijective_classes: 0,
        chains_checked: 0,
        chains_passed: 0,
        certificate: None,
        failure: None,
    };
    if !report.h_regular {
        report.failure = Some("H is not (β−1)-regular".into());
        return Ok(report);
    }
    let classes = match konig_decomposition(&h.bipartite()?) {
        Ok(c) => c,
        Err(e) => {
            report.failure = Some(format!("decomposition: {e}"));
            return Ok(report);
        }
    };
    report.classes = classes.len();
    for m in &classes {
        match verify_lemma_3_3(g, &h, m) {
            Ok(records) => {
                report.bijective_classes += 1;
                report.chains_checked += records.len();
                report.chains_passed += records.iter().filter(|r| r.pass).count();
            }
            Err(e) => report.failure = Some(e.to_string()),
        }
    }
    match witness_with_params(g, x, y, params) {
        Ok(c) => report.certificate = Some(c),
        Err(e) => report.failure = Some(e.to_string()),
    }
    Ok(report)
}

/// Certificate that `κ = (2+α)/d` when `2β − α ≥ d + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop31Certificate {
    pub x: usize,
    pub y: usize,
    /// Perfect matching of the `N_x – N_y` host edges, as host pairs.
    pub matching: Vec<(usize, usize)>,
    pub min_degree: usize,
    pub plan_cost: Rational,
    pub kappa: Rational,
}

/// Perfect-matches `N_x` to `N_y` along host edges and checks that the
/// resulting plan realizes the upper bound `(2+α)/d`.
pub fn prop_3_1_certificate(
    g: &Graph,
    x: usize,
    y: usize,
    params: &AmplyParams,
) -> Result<Prop31Certificate> {
    let beta = params
        .beta
        .ok_or_else(|| Error::Hypothesis("β is undefined (no pair at distance 2)".into()))?;
    let (d, alpha) = (params.d, params.alpha);
    if 2 * beta < alpha + d + 1 {
        return Err(Error::Hypothesis(format!(
            "2β − α ≥ d + 1 fails: 2·{beta} − {alpha} < {d} + 1"
        )));
    }
    let part = g.edge_partition(x, y)?;
    if part.delta.len() != alpha {
        return Err(Error::Hypothesis(format!("edge {x}-{y} does not match parameters {params}")));
    }
    let e1 = Bipartite::new(
        part.nx.len(),
        part.ny.len(),
        part.nx.iter().enumerate().flat_map(|(i, &v)| {
            part.ny
                .iter()
                .enumerate()
                .filter(move |&(_, &w)| g.has_edge(v, w))
                .map(move |(j, _)| (i, j))
        }),
    )?;
    let min_degree = e1.min_degree();
    let exclusive = part.nx.len();
    if exclusive > 0 && (min_degree + alpha + 1 < beta || 2 * min_degree < exclusive) {
        return Err(Error::Certificate(format!(
            "E₁ graph minimum degree {min_degree} below β − α − 1 or |N_x|/2"
        )));
    }
    let m = dense_perfect_matching(&e1)
        .map_err(|e| Error::Certificate(format!("E₁ graph has no perfect matching: {e}")))?;
    let matching: Vec<(usize, usize)> = m.pairs().map(|(i, j)| (part.nx[i], part.ny[j])).collect();

    let unit = Rational::new(1, d as i64 + 1)?;
    let mut plan = TransportPlan::new();
    for &v in part.delta.iter().chain(&[x, y]) {
        plan.add(v, v, unit)?;
    }
    for &(v, w) in &matching {
        plan.add(v, w, unit)?;
    }
    plan.validate(&mu_p(g, x, unit)?, &mu_p(g, y, unit)?)
        .map_err(|e| Error::Certificate(format!("matching plan marginals: {e}")))?;
    let cost = plan_cost(g, &plan)?;
    let dr = Rational::from(d);
    let from_plan = Rational::from(d + 1)
        .checked_div(dr)?
        .checked_mul(Rational::ONE.checked_sub(cost)?)?;
    let kappa = Rational::from(alpha + 2).checked_div(dr)?;
    if from_plan != kappa {
        return Err(Error::Certificate(format!(
            "matching plan gives {from_plan}, expected (2+α)/d = {kappa}"
        )));
    }
    let exact = lly_curvature(g, x, y)?;
    if exact != kappa {
        return Err(Error::Certificate(format!("κ = {exact} but (2+α)/d = {kappa}")));
    }
    Ok(Prop31Certificate {
        x,
        y,
        matching,
        min_degree,
        plan_cost: cost,
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn setup(g: &Graph) -> (AmplyParams, (usize, usize)) {
        (g.amply_params().unwrap(), g.edges()[0])
    }

    #[test]
    fn h23_construction() {
        let g = gen_hamming(2, 3).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        assert_eq!(h.side_len(), 3);
        assert_eq!((h.exclusive_len(), h.alpha, h.copies_len()), (2, 1, 0));
        let reg = check_h_regular(&h, &p);
        assert!(reg.pass());
        assert!(reg.left_degrees.iter().all(|&d| d == 1));
        for c in [EdgeClass::E6, EdgeClass::E7, EdgeClass::E8] {
            assert_eq!(h.class_edges(c).count(), 0);
        }
        let e4: Vec<_> = h.class_edges(EdgeClass::E4).map(|e| (e.left, e.right)).collect();
        assert_eq!(e4, vec![h.z1_edge()]);
    }

    #[test]
    fn octahedron_construction() {
        let g = gen_cocktail(3).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        assert_eq!(h.side_len(), 4);
        assert_eq!((h.exclusive_len(), h.alpha, h.copies_len()), (1, 2, 1));
        let reg = check_h_regular(&h, &p);
        assert!(reg.pass());
        assert_eq!(reg.expected, 3);
        assert!(h.class_edges(EdgeClass::E8).count() == 1);
    }

    #[test]
    fn paley13_construction() {
        let g = gen_paley(13).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        assert_eq!(h.side_len(), 5);
        assert_eq!((h.exclusive_len(), h.alpha, h.copies_len()), (3, 2, 0));
        assert!(check_h_regular(&h, &p).pass());
    }

    #[test]
    fn z1_is_smallest_common_neighbor() {
        let g = gen_paley(13).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        let (zl, _) = h.z1_edge();
        assert_eq!(h.left[zl].host(), g.common_neighbors(x, y).first().copied());
    }

    #[test]
    fn every_edge_lands_in_one_class() {
        let g = gen_cocktail(4).unwrap();
        let p = g.amply_params().unwrap();
        for (x, y) in g.edges() {
            let h = build_transport_bipartite(&g, x, y, &p).unwrap();
            let mut pairs: Vec<_> = h.edges.iter().map(|e| (e.left, e.right)).collect();
            let n = pairs.len();
            pairs.sort();
            pairs.dedup();
            assert_eq!(pairs.len(), n);
        }
    }

    #[test]
    fn corrupted_h_fails_at_z1() {
        let g = gen_hamming(2, 3).unwrap();
        let (p, (x, y)) = setup(&g);
        let mut h = build_transport_bipartite(&g, x, y, &p).unwrap();
        h.edges.retain(|e| e.class != EdgeClass::E4);
        let reg = check_h_regular(&h, &p);
        let (side, i, role, deg) = reg.offender.unwrap();
        assert_eq!((side, i, deg), (Side::Left, h.z1_edge().0, 0));
        assert!(matches!(role, Role::Common { index: 0, .. }));
    }

    #[test]
    fn construction_hypotheses() {
        let q3 = gen_hypercube(3).unwrap();
        let (p, (x, y)) = setup(&q3);
        assert!(matches!(build_transport_bipartite(&q3, x, y, &p), Err(Error::Hypothesis(_))));
        let s = gen_shrikhande();
        let (p, (x, y)) = setup(&s);
        assert!(matches!(build_transport_bipartite(&s, x, y, &p), Err(Error::Hypothesis(_))));
        let k4 = gen_complete(4).unwrap();
        let (p, (x, y)) = setup(&k4);
        assert!(matches!(build_transport_bipartite(&k4, x, y, &p), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn h23_chains() {
        let g = gen_hamming(2, 3).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        let classes = konig_decomposition(&h.bipartite().unwrap()).unwrap();
        assert_eq!(classes.len(), 1);
        let chains = reachable_map(&h, &classes[0]).unwrap();
        assert_eq!(chains.len(), 2);
        for c in &chains {
            assert_eq!(c.rho, c.left_members());
            assert_eq!(c.k, 0);
        }
        let records = verify_lemma_3_3(&g, &h, &classes[0]).unwrap();
        assert!(records.iter().all(|r| r.pass && r.k == 0));
    }

    #[test]
    fn octahedron_chains_over_all_classes() {
        let g = gen_cocktail(3).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        let classes = konig_decomposition(&h.bipartite().unwrap()).unwrap();
        assert_eq!(classes.len(), 3);
        for m in &classes {
            let chains = reachable_map(&h, m).unwrap();
            assert_eq!(chains.len(), 1);
            assert_eq!(chains[0].w0, h.right[0].host().unwrap());
            assert!(chains[0].k <= h.copies_len());
            assert_eq!(chains[0].rho, chains[0].left_members());
            assert!(verify_lemma_3_3(&g, &h, m).unwrap().iter().all(|r| r.pass));
        }
    }

    #[test]
    fn reachable_map_needs_perfect_matching() {
        let g = gen_hamming(2, 3).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        let partial = Matching::empty(3, 3);
        assert_eq!(reachable_map(&h, &partial), Err(Error::NotPerfect));
    }

    #[test]
    fn pi0_examples() {
        let g = gen_hamming(2, 3).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        let m = matching_through_edge(&h.bipartite().unwrap(), h.z1_edge()).unwrap();
        let plan = build_pi0(&g, x, y, &h, &m).unwrap();
        assert_eq!(plan.len(), 5);
        assert!(plan_cost(&g, &plan).unwrap() <= r(2, 5));

        let g = gen_cocktail(3).unwrap();
        let (p, (x, y)) = setup(&g);
        let h = build_transport_bipartite(&g, x, y, &p).unwrap();
        let b = h.bipartite().unwrap();
        let m = matching_through_edge(&b, h.z1_edge()).unwrap();
        let plan = build_pi0(&g, x, y, &h, &m).unwrap();
        assert_eq!(plan.len(), 5);
        let unit = r(1, 5);
        let (w, _) = wasserstein(&g, &mu_p(&g, x, unit).unwrap(), &mu_p(&g, y, unit).unwrap()).unwrap();
        assert!(w <= plan_cost(&g, &plan).unwrap());
        // a class avoiding z1z1' is rejected
        let other = konig_decomposition(&b)
            .unwrap()
            .into_iter()
            .find(|m| !m.contains(h.z1_edge().0, h.z1_edge().1))
            .unwrap();
        assert!(matches!(build_pi0(&g, x, y, &h, &other), Err(Error::Precondition(_))));
    }

    #[test]
    fn witness_bounds() {
        let g = gen_hamming(2, 3).unwrap();
        for (x, y) in g.edges() {
            let c = witness_curvature_bound(&g, x, y).unwrap();
            assert_eq!(c.pi0_cost, r(2, 5));
            assert_eq!(c.kappa_lb, r(3, 4));
            assert_eq!(c.kappa, r(3, 4));
        }
        let g = gen_paley(13).unwrap();
        let (x, y) = g.edges()[0];
        let c = witness_curvature_bound(&g, x, y).unwrap();
        assert!(c.kappa_lb >= r(1, 2));
        assert_eq!(c.kappa, r(2, 3));
        let g = gen_cocktail(3).unwrap();
        let (x, y) = g.edges()[0];
        let c = witness_curvature_bound(&g, x, y).unwrap();
        assert!(c.kappa_lb >= r(3, 4));
        assert_eq!(c.kappa, Rational::ONE);
    }

    #[test]
    fn prop31_examples() {
        for (g, want) in [
            (gen_hypercube(3).unwrap(), r(2, 3)),
            (gen_cocktail(3).unwrap(), Rational::ONE),
            (gen_cocktail(4).unwrap(), Rational::ONE),
        ] {
            let p = g.amply_params().unwrap();
            for (x, y) in g.edges() {
                let c = prop_3_1_certificate(&g, x, y, &p).unwrap();
                assert_eq!(c.kappa, want);
                assert_eq!(c.matching.len(), p.b1());
                assert!(c.matching.iter().all(|&(v, w)| g.has_edge(v, w)));
            }
        }
        let h23 = gen_hamming(2, 3).unwrap();
        let (p, (x, y)) = setup(&h23);
        assert!(matches!(prop_3_1_certificate(&h23, x, y, &p), Err(Error::Hypothesis(_))));
    }
}
